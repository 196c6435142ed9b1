//! Gamma-family special functions and the Gaussian tail probability.

use std::f64::consts::{PI, SQRT_2};

use crate::error::{domain, Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

const MAX_ITER: usize = 100_000;
const EPS: f64 = 1e-16;
const TINY: f64 = 1e-300;

/// Natural log of the gamma function for `x > 0` (Lanczos, g = 7).
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // Reflection keeps the Lanczos sum in its accurate region.
        return (PI / (PI * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = LANCZOS_COEF[0];
    let t = x + LANCZOS_G + 0.5;
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

fn check_gamma_args(s: f64, x: f64) -> Result<()> {
    if !s.is_finite() || !x.is_finite() {
        return domain(format!("incomplete gamma needs finite arguments, got s={s}, x={x}"));
    }
    if s <= 0.0 || x < 0.0 {
        return domain(format!("incomplete gamma needs s > 0 and x >= 0, got s={s}, x={x}"));
    }
    Ok(())
}

/// `exp(-x + s ln x - ln Γ(s))`, the common prefactor of both expansions.
fn gamma_prefactor(s: f64, x: f64) -> f64 {
    (-x + s * x.ln() - ln_gamma(s)).exp()
}

/// Lower regularized series, valid for `x < s + 1`.
fn lower_series(s: f64, x: f64) -> Result<f64> {
    let mut ap = s;
    let mut term = 1.0 / s;
    let mut sum = term;
    for _ in 0..MAX_ITER {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if term.abs() < sum.abs() * EPS {
            return Ok(sum * gamma_prefactor(s, x));
        }
    }
    Err(Error::Numeric(format!("gamma series did not converge at s={s}, x={x}")))
}

/// Upper regularized continued fraction (modified Lentz), valid for `x >= s + 1`.
fn upper_continued_fraction(s: f64, x: f64) -> Result<f64> {
    let mut b = x + 1.0 - s;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_ITER {
        let an = -(i as f64) * (i as f64 - s);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < EPS {
            return Ok(h * gamma_prefactor(s, x));
        }
    }
    Err(Error::Numeric(format!("gamma continued fraction did not converge at s={s}, x={x}")))
}

/// Regularized upper incomplete gamma `Γ(s, x) / Γ(s)`.
///
/// Uses the power series below `x = s + 1` and the continued fraction above it.
pub fn reg_upper_gamma(s: f64, x: f64) -> Result<f64> {
    check_gamma_args(s, x)?;
    if x == 0.0 {
        return Ok(1.0);
    }
    let q = if x < s + 1.0 {
        1.0 - lower_series(s, x)?
    } else {
        upper_continued_fraction(s, x)?
    };
    Ok(q.clamp(0.0, 1.0))
}

/// Regularized lower incomplete gamma `γ(s, x) / Γ(s)`, the Gamma(s, 1) CDF.
pub fn reg_lower_gamma(s: f64, x: f64) -> Result<f64> {
    check_gamma_args(s, x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    let p = if x < s + 1.0 {
        lower_series(s, x)?
    } else {
        1.0 - upper_continued_fraction(s, x)?
    };
    Ok(p.clamp(0.0, 1.0))
}

/// Solves `reg_upper_gamma(s, x) = p` for `x`.
///
/// Bracketing bisection polished with Newton steps; `p` must lie in (0, 1).
pub fn reg_upper_gamma_inv(s: f64, p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return domain(format!("upper gamma inverse needs p in (0, 1), got {p}"));
    }
    check_gamma_args(s, 0.0)?;
    let mut lo = 0.0;
    let mut hi = s.max(1.0);
    while reg_upper_gamma(s, hi)? > p {
        lo = hi;
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::Numeric(format!("upper gamma inverse diverged for s={s}, p={p}")));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if reg_upper_gamma(s, mid)? > p {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-13 * hi {
            break;
        }
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..3 {
        let f = reg_upper_gamma(s, x)? - p;
        let density = gamma_prefactor(s, x) / x;
        if density <= 0.0 || !density.is_finite() {
            break;
        }
        let next = x + f / density;
        if next <= lo || next >= hi {
            break;
        }
        x = next;
    }
    Ok(x)
}

/// Standard Gaussian tail probability `Q(z) = P(Z > z)`.
///
/// NaN input propagates; infinities map to 0 and 1.
pub fn q_function(z: f64) -> f64 {
    0.5 * libm::erfc(z / SQRT_2)
}

// Rational approximation of the lower normal quantile (P. J. Acklam).
const ACKLAM_A: [f64; 6] = [
    -3.969_683_028_665_376e1,
    2.209_460_984_245_205e2,
    -2.759_285_104_469_687e2,
    1.383_577_518_672_69e2,
    -3.066_479_806_614_716e1,
    2.506_628_277_459_239,
];
const ACKLAM_B: [f64; 5] = [
    -5.447_609_879_822_406e1,
    1.615_858_368_580_409e2,
    -1.556_989_798_598_866e2,
    6.680_131_188_771_972e1,
    -1.328_068_155_288_572e1,
];
const ACKLAM_C: [f64; 6] = [
    -7.784_894_002_430_293e-3,
    -3.223_964_580_411_365e-1,
    -2.400_758_277_161_838,
    -2.549_732_539_343_734,
    4.374_664_141_464_968,
    2.938_163_982_698_783,
];
const ACKLAM_D: [f64; 4] = [
    7.784_695_709_041_462e-3,
    3.224_671_290_700_398e-1,
    2.445_134_137_142_996,
    3.754_408_661_907_416,
];

fn acklam_tail(q: f64) -> f64 {
    let c = &ACKLAM_C;
    let d = &ACKLAM_D;
    (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5])
        / ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0)
}

fn normal_quantile_guess(p: f64) -> f64 {
    const P_LOW: f64 = 0.024_25;
    if p < P_LOW {
        acklam_tail((-2.0 * p.ln()).sqrt())
    } else if p <= 1.0 - P_LOW {
        let a = &ACKLAM_A;
        let b = &ACKLAM_B;
        let q = p - 0.5;
        let r = q * q;
        (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q
            / (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0)
    } else {
        -acklam_tail((-2.0 * (1.0 - p).ln()).sqrt())
    }
}

/// Inverse of [`q_function`]: returns `z` with `Q(z) = p`.
pub fn q_inverse(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return domain(format!("q_inverse needs p in (0, 1), got {p}"));
    }
    let mut z = -normal_quantile_guess(p);
    // Halley refinement on Q(z) - p.
    for _ in 0..2 {
        let density = (-0.5 * z * z).exp() / (2.0 * PI).sqrt();
        if density == 0.0 {
            break;
        }
        let u = (q_function(z) - p) / density;
        z += u / (1.0 - 0.5 * z * u);
    }
    Ok(z)
}
