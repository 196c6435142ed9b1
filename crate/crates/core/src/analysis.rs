//! Closed-form performance and the Bayesian pieces behind the detectors.
//!
//! Thresholds follow the statistic scales of [`crate::detectors`]: the
//! optimal detector on `Σ r`, the time-domain likelihood-ratio detectors on
//! `N r̄ / θ`, and the frequency-domain ones on `L x̄ / (θ + P ȳ)`.
//!
//! Time-domain envelopes are exponential with mean `α` (noise) or
//! `α (1 + γ)` (signal plus noise), so the energy statistic is Gamma
//! distributed and its tails are regularized upper incomplete gamma
//! functions. The frequency-domain statistic is a ratio and is handled with
//! a Gaussian approximation of `Φ = L x̄ − η P ȳ`.
//!
//! ```
//! use exband::analysis::{pfa_opt, pd_opt};
//!
//! let pfa = pfa_opt(20, 1.0, 20.0).unwrap();
//! assert!((pfa - 0.4703).abs() < 1e-4);
//! assert!(pd_opt(20, 1.0, 1.0, 20.0).unwrap() > pfa);
//! ```

use num_complex::Complex64;

use crate::error::{domain, Result};
use crate::numerics::{
    channel_gain, complex_gaussian, ln_gamma, q_function, reg_lower_gamma, reg_upper_gamma, reg_upper_gamma_inv,
    Channel, RngStream,
};
use crate::signal::{draw_noise_power, Hypothesis, NoisePrior};

/// Gamma law on the noise precision `λ = 1/α` (shape, rate).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PosteriorPrecision {
    shape: f64,
    rate: f64,
}

impl PosteriorPrecision {
    pub fn new(shape: f64, rate: f64) -> Result<Self> {
        if !(shape > 0.0 && rate > 0.0 && shape.is_finite() && rate.is_finite()) {
            return domain(format!("precision law needs positive shape and rate, got {shape}, {rate}"));
        }
        Ok(Self { shape, rate })
    }

    /// The prior itself: `Gamma(k + 1, θ)`.
    pub fn from_prior(prior: &NoisePrior) -> Self {
        Self { shape: prior.precision_shape(), rate: prior.theta() }
    }

    pub fn shape(&self) -> f64 {
        self.shape
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    /// Folds in `p` noise-only bins with mean power `y_mean`.
    pub fn update(&self, y_mean: f64, p: usize) -> Result<Self> {
        if !(y_mean >= 0.0 && y_mean.is_finite()) {
            return domain(format!("bin mean must be finite and nonnegative, got {y_mean}"));
        }
        Ok(Self { shape: self.shape + p as f64, rate: self.rate + p as f64 * y_mean })
    }

    pub fn ln_density(&self, lambda: f64) -> f64 {
        if lambda <= 0.0 {
            return f64::NEG_INFINITY;
        }
        self.shape * self.rate.ln() - ln_gamma(self.shape) + (self.shape - 1.0) * lambda.ln() - self.rate * lambda
    }

    pub fn density(&self, lambda: f64) -> f64 {
        self.ln_density(lambda).exp()
    }

    pub fn cdf(&self, lambda: f64) -> f64 {
        if lambda <= 0.0 {
            return 0.0;
        }
        reg_lower_gamma(self.shape, self.rate * lambda).unwrap_or(f64::NAN)
    }

    pub fn mean_precision(&self) -> f64 {
        self.shape / self.rate
    }
}

/// Posterior of the noise precision after `p` excess-band bins with mean `y_mean`:
/// `Gamma(P + k + 1, θ + P ȳ)`.
pub fn posterior_update(prior: &NoisePrior, y_mean: f64, p: usize) -> Result<PosteriorPrecision> {
    if p == 0 {
        return domain("posterior update needs at least one excess-band bin");
    }
    PosteriorPrecision::from_prior(prior).update(y_mean, p)
}

fn snr_factor(snr: f64, hypothesis: Hypothesis) -> f64 {
    match hypothesis {
        Hypothesis::H0 => 1.0,
        Hypothesis::H1 => 1.0 + snr,
    }
}

/// MAP noise power from the envelopes: `(θ + N r̄ / c) / (N + k)` with
/// `c = 1` under H0 and `c = 1 + γ` under H1.
pub fn map_noise_time(r_mean: f64, n: usize, prior: &NoisePrior, snr: f64, hypothesis: Hypothesis) -> f64 {
    let n = n as f64;
    (prior.theta() + n * r_mean / snr_factor(snr, hypothesis)) / (n + prior.k() as f64)
}

/// MAP noise power from the bins: `(θ + P ȳ + L x̄ / c) / (L + k + P)`.
pub fn map_noise_bins(
    x_mean: f64,
    l: usize,
    y_mean: f64,
    p: usize,
    prior: &NoisePrior,
    snr: f64,
    hypothesis: Hypothesis,
) -> f64 {
    let (l, p) = (l as f64, p as f64);
    (prior.theta() + p * y_mean + l * x_mean / snr_factor(snr, hypothesis)) / (l + prior.k() as f64 + p)
}

/// Log of the time-domain MAP objective (prior times likelihood, written in
/// the precision `λ = 1/α`), up to terms free of `α`.
pub fn map_objective_time(alpha: f64, r_mean: f64, n: usize, prior: &NoisePrior, snr: f64, hypothesis: Hypothesis) -> f64 {
    let lambda = 1.0 / alpha;
    let n = n as f64;
    (n + prior.k() as f64) * lambda.ln() - lambda * (prior.theta() + n * r_mean / snr_factor(snr, hypothesis))
}

/// Log of the frequency-domain MAP objective, up to terms free of `α`.
#[allow(clippy::too_many_arguments)]
pub fn map_objective_bins(
    alpha: f64,
    x_mean: f64,
    l: usize,
    y_mean: f64,
    p: usize,
    prior: &NoisePrior,
    snr: f64,
    hypothesis: Hypothesis,
) -> f64 {
    let lambda = 1.0 / alpha;
    let (l, p) = (l as f64, p as f64);
    (l + p + prior.k() as f64) * lambda.ln()
        - lambda * (prior.theta() + p * y_mean + l * x_mean / snr_factor(snr, hypothesis))
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return domain(format!("noise power must be positive and finite, got {alpha}"));
    }
    Ok(())
}

/// Tail of `Gamma(N, scale)` at `t`; thresholds at or below zero give 1.
fn gamma_tail(n: usize, scale: f64, t: f64) -> Result<f64> {
    if t.is_nan() {
        return domain("threshold is NaN");
    }
    if t <= 0.0 {
        return Ok(1.0);
    }
    if t == f64::INFINITY {
        return Ok(0.0);
    }
    reg_upper_gamma(n as f64, t / scale)
}

/// `P(Σ r > η | H0) = Γ(N, η/α) / Γ(N)`.
pub fn pfa_opt(n: usize, alpha: f64, eta: f64) -> Result<f64> {
    check_alpha(alpha)?;
    gamma_tail(n, alpha, eta)
}

/// `P(Σ r > η | H1) = Γ(N, η/(α(1+γ))) / Γ(N)`.
pub fn pd_opt(n: usize, alpha: f64, snr: f64, eta: f64) -> Result<f64> {
    check_alpha(alpha)?;
    gamma_tail(n, alpha * (1.0 + snr), eta)
}

/// `P(N r̄ / θ > η | H0) = Γ(N, η θ / α) / Γ(N)`.
pub fn pfa_alrd1(n: usize, alpha: f64, prior: &NoisePrior, eta: f64) -> Result<f64> {
    pfa_opt(n, alpha, eta * prior.theta())
}

pub fn pd_alrd1(n: usize, alpha: f64, prior: &NoisePrior, snr: f64, eta: f64) -> Result<f64> {
    pd_opt(n, alpha, snr, eta * prior.theta())
}

/// One-sided GLR false alarm; the upper threshold is taken as `+∞`.
pub fn pfa_glrd1(n: usize, alpha: f64, prior: &NoisePrior, eta1: f64) -> Result<f64> {
    pfa_alrd1(n, alpha, prior, eta1)
}

pub fn pd_glrd1(n: usize, alpha: f64, prior: &NoisePrior, snr: f64, eta1: f64) -> Result<f64> {
    pd_alrd1(n, alpha, prior, snr, eta1)
}

/// Threshold on `Σ r` giving false-alarm rate `pfa` at noise power `α`.
pub fn threshold_opt(n: usize, alpha: f64, pfa: f64) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(alpha * reg_upper_gamma_inv(n as f64, pfa)?)
}

/// Threshold on `N r̄ / θ` giving false-alarm rate `pfa` at noise power `α`.
pub fn threshold_alrd1(n: usize, alpha: f64, prior: &NoisePrior, pfa: f64) -> Result<f64> {
    Ok(threshold_opt(n, alpha, pfa)? / prior.theta())
}

fn check_bins(l: usize, p: usize) -> Result<()> {
    if l == 0 || p == 0 {
        return domain(format!("Gaussian approximation needs L, P >= 1, got L={l}, P={p}"));
    }
    Ok(())
}

/// Gaussian approximation of `P(L x̄ / (θ + P ȳ) > η | H0)`:
/// `Q((θη − αN(L − Pη)) / (αN sqrt(L + Pη²)))`.
pub fn pfa_alrd2_clt(l: usize, p: usize, n: usize, alpha: f64, theta: f64, eta: f64) -> Result<f64> {
    pd_alrd2_clt(l, p, n, alpha, theta, eta, Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0))
}

/// Gaussian approximation of the detection probability with channel gain `h`
/// and in-band bin amplitude `s` held fixed.
///
/// Each in-band bin is `|h s + v|²` with `v ~ CN(0, Nα)`, so with
/// `e = |h s|²` the statistic `Φ = Σx − η Σy` has mean
/// `L(e + Nα) − ηPNα` and variance `N²α²(L + Pη²) + 2NLαe`.
#[allow(clippy::too_many_arguments)]
pub fn pd_alrd2_clt(
    l: usize,
    p: usize,
    n: usize,
    alpha: f64,
    theta: f64,
    eta: f64,
    h: Complex64,
    s: Complex64,
) -> Result<f64> {
    check_bins(l, p)?;
    check_alpha(alpha)?;
    if eta.is_nan() {
        return domain("threshold is NaN");
    }
    // The statistic is nonnegative, so a threshold at or below zero always fires.
    if eta <= 0.0 {
        return Ok(1.0);
    }
    let (lf, pf) = (l as f64, p as f64);
    let bin_noise = n as f64 * alpha;
    let energy = (h * s).norm_sqr();
    let mean = lf * (energy + bin_noise) - eta * pf * bin_noise;
    let var = bin_noise * bin_noise * (lf + pf * eta * eta) + 2.0 * lf * bin_noise * energy;
    Ok(q_function((theta * eta - mean) / var.sqrt()))
}

/// Values fixed for one conditional evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Conditioning {
    pub alpha: f64,
    pub h: Complex64,
    pub s: Complex64,
}

/// How a performance number was obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PerfConditioning {
    At(Conditioning),
    Averaged,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerfPoint {
    pub pfa: f64,
    pub pd: f64,
    pub threshold: f64,
    pub conditioning: PerfConditioning,
}

/// A Monte Carlo average with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Averaged {
    pub mean: f64,
    pub std_error: f64,
    pub draws: usize,
}

/// What [`average_over_prior`] integrates over.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AveragingSpec {
    pub prior: NoisePrior,
    pub channel: Channel,
    pub snr: f64,
    /// DFT size `N`; sets the bin amplitude variance `N α γ`.
    pub n_samples: usize,
}

/// Monte Carlo expectation of `point_fn` over `α` from the prior, `h` from the
/// channel and `s ~ CN(0, N α γ)`.
pub fn average_over_prior<F>(point_fn: F, spec: &AveragingSpec, draws: usize, rng: &mut RngStream) -> Result<Averaged>
where
    F: Fn(&Conditioning) -> Result<f64>,
{
    if draws == 0 {
        return domain("averaging needs at least one draw");
    }
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for i in 0..draws {
        let alpha = draw_noise_power(&spec.prior, rng);
        let h = channel_gain(&spec.channel, rng)?;
        let s = complex_gaussian(spec.n_samples as f64 * alpha * spec.snr, rng);
        let v = point_fn(&Conditioning { alpha, h, s })?;
        let delta = v - mean;
        mean += delta / (i + 1) as f64;
        m2 += delta * (v - mean);
    }
    let std_error = if draws > 1 { (m2 / (draws - 1) as f64 / draws as f64).sqrt() } else { 0.0 };
    Ok(Averaged { mean, std_error, draws })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub mean: f64,
    pub variance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentMethod {
    /// Energy statistic `Σ r`.
    Traditional,
    /// `Φ = Σ x − η Σ y`.
    Proposed,
}

/// H1 parameters for [`statistic_moments`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentParams {
    pub n: usize,
    pub l: usize,
    pub p: usize,
    pub alpha: f64,
    pub snr: f64,
    pub eta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentReport {
    /// Moments that follow from the bin model; use these for checks.
    pub derived: Moments,
    /// An alternative closed form, where it differs from `derived`.
    pub alternate: Option<Moments>,
}

/// H1 mean and variance of the traditional or proposed statistic.
///
/// The traditional statistic sums `N` exponentials of mean `α(1+γ)`. For the
/// proposed one every in-band bin is exponential with mean `Nα(1+γ)` and every
/// excess-band bin with mean `Nα`. The alternative closed form
/// `2NLα(2γ + 1 − Pη)`, `8LN²α²(2γ + 1/2 + Pη²/2)` is returned as `alternate`.
pub fn statistic_moments(method: MomentMethod, params: &MomentParams) -> MomentReport {
    let MomentParams { n, l, p, alpha, snr, eta } = *params;
    let nf = n as f64;
    match method {
        MomentMethod::Traditional => {
            let scale = alpha * (1.0 + snr);
            MomentReport { derived: Moments { mean: nf * scale, variance: nf * scale * scale }, alternate: None }
        }
        MomentMethod::Proposed => {
            let (lf, pf) = (l as f64, p as f64);
            let g = 1.0 + snr;
            let derived = Moments {
                mean: nf * alpha * (lf * g - pf * eta),
                variance: nf * nf * alpha * alpha * (lf * g * g + pf * eta * eta),
            };
            let alternate = Moments {
                mean: 2.0 * nf * lf * alpha * (2.0 * snr + 1.0 - pf * eta),
                variance: 8.0 * lf * nf * nf * alpha * alpha * (2.0 * snr + 0.5 + 0.5 * pf * eta * eta),
            };
            MomentReport { derived, alternate: Some(alternate) }
        }
    }
}
