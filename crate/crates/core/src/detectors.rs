//! Decision statistics and rules for the five detectors.
//!
//! | id       | observation | statistic                 | rule                 |
//! |----------|-------------|---------------------------|----------------------|
//! | optimal  | envelopes   | `Σ r`                     | `> η`                |
//! | alrd1    | envelopes   | `N r̄ / θ`                 | `> η`                |
//! | glrd1    | envelopes   | `N r̄ / θ`                 | `η₁ < · < η₂`        |
//! | alrd2    | bins        | `L x̄ / (θ + P ȳ)`         | `> η`                |
//! | glrd2    | bins        | `L x̄ / (θ + P ȳ)`         | `η₁ < · < η₂`        |
//!
//! The GLR likelihood ratios are unimodal in their statistic with a single
//! maximum at [`mu_glrd1`] / [`rho_glrd2`], which is why their rules are
//! intervals. Setting `η₂ = +∞` gives the one-sided simplification.

use std::fmt;
use std::str::FromStr;

use crate::error::{config, domain, Error, Result};
use crate::signal::NoisePrior;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DetectorKind {
    /// Energy detector with known noise power.
    Optimal,
    /// Average likelihood ratio on time-domain envelopes.
    Alrd1,
    /// Generalized likelihood ratio on time-domain envelopes.
    Glrd1,
    /// Average likelihood ratio using the excess-band noise posterior.
    Alrd2,
    /// Generalized likelihood ratio using the excess-band noise posterior.
    Glrd2,
}

impl DetectorKind {
    pub const ALL: [DetectorKind; 5] =
        [DetectorKind::Optimal, DetectorKind::Alrd1, DetectorKind::Glrd1, DetectorKind::Alrd2, DetectorKind::Glrd2];

    pub fn id(&self) -> &'static str {
        match self {
            DetectorKind::Optimal => "optimal",
            DetectorKind::Alrd1 => "alrd1",
            DetectorKind::Glrd1 => "glrd1",
            DetectorKind::Alrd2 => "alrd2",
            DetectorKind::Glrd2 => "glrd2",
        }
    }

    /// Whether the detector reads frequency bins rather than envelopes.
    pub fn uses_bins(&self) -> bool {
        matches!(self, DetectorKind::Alrd2 | DetectorKind::Glrd2)
    }

    pub fn is_glr(&self) -> bool {
        matches!(self, DetectorKind::Glrd1 | DetectorKind::Glrd2)
    }
}

impl fmt::Display for DetectorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for DetectorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "optimal" | "opt" => Ok(DetectorKind::Optimal),
            "alrd1" => Ok(DetectorKind::Alrd1),
            "glrd1" => Ok(DetectorKind::Glrd1),
            "alrd2" => Ok(DetectorKind::Alrd2),
            "glrd2" => Ok(DetectorKind::Glrd2),
            other => config(format!("unknown detector '{other}'")),
        }
    }
}

/// Decision thresholds. Single-threshold rules read `eta1` only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdSpec {
    pub eta1: f64,
    pub eta2: f64,
}

impl ThresholdSpec {
    pub fn one_sided(eta: f64) -> Self {
        Self { eta1: eta, eta2: f64::INFINITY }
    }

    pub fn two_sided(eta1: f64, eta2: f64) -> Result<Self> {
        if !(eta1 < eta2) {
            return domain(format!("two-sided rule needs eta1 < eta2, got {eta1} and {eta2}"));
        }
        Ok(Self { eta1, eta2 })
    }

    pub fn is_one_sided(&self) -> bool {
        self.eta2 == f64::INFINITY
    }

    /// `eta1 < t < eta2`; with `eta2 = +∞` this is `t > eta1`.
    pub fn accepts(&self, statistic: f64) -> bool {
        statistic > self.eta1 && statistic < self.eta2
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorVerdict {
    pub detector: DetectorKind,
    pub statistic: f64,
    pub decided_h1: bool,
}

fn sum(v: &[f64]) -> f64 {
    v.iter().sum()
}

/// Energy statistic `Σ r` (sum scale).
pub fn t_opt(r: &[f64]) -> f64 {
    sum(r)
}

/// `N r̄ / θ`.
pub fn t_alrd1(r: &[f64], prior: &NoisePrior) -> f64 {
    sum(r) / prior.theta()
}

/// `L x̄ / (θ + P ȳ)`.
pub fn t_alrd2(x: &[f64], y: &[f64], prior: &NoisePrior) -> f64 {
    sum(x) / (prior.theta() + sum(y))
}

/// `Φ = L x̄ - η P ȳ`; H1 iff `Φ > η θ`, which matches `t_alrd2 > η`.
pub fn phi_statistic(x: &[f64], y: &[f64], eta: f64) -> f64 {
    sum(x) - eta * sum(y)
}

/// Extremum of the time-domain GLR as a function of `N r̄ / θ`.
pub fn mu_glrd1(n: usize, k: u32, snr: f64) -> Result<f64> {
    if k == 0 {
        return domain("mu_glrd1 is undefined for k = 0");
    }
    let n = n as f64;
    let k = k as f64;
    let a = 2.0 + snr;
    Ok((n * a + (a * a * n * n + 4.0 * k * (1.0 + snr) * (2.0 * n + k)).sqrt()) / (2.0 * k))
}

/// Extremum of the frequency-domain GLR as a function of `L x̄ / (θ + P ȳ)`.
pub fn rho_glrd2(l: usize, p: usize, k: u32, snr: f64) -> Result<f64> {
    let kp = k as f64 + p as f64;
    if kp < 1.0 {
        return domain("rho_glrd2 needs k + P >= 1");
    }
    let l = l as f64;
    let a = 2.0 + snr;
    Ok((l * a + (a * a * l * l + 4.0 * kp * (1.0 + snr) * (2.0 * l + kp)).sqrt()) / (2.0 * kp))
}

/// Log of the GLR expression shared by both detectors:
/// `m ln((1+t)/(1+γ+t)) + γ c t / ((1+t)(1+γ+t))`.
fn ln_glr(t: f64, base_exp: f64, count: f64, snr: f64) -> f64 {
    let a = 1.0 + t;
    let b = 1.0 + snr + t;
    base_exp * (a / b).ln() + snr * count * t / (a * b)
}

/// Time-domain GLR evaluated at `t = N r̄ / θ` (exponent counts `N` and `N + k`).
pub fn lr_glrd1_value(t: f64, n: usize, k: u32, snr: f64) -> f64 {
    ln_glr(t, n as f64, n as f64 + k as f64, snr).exp()
}

/// Frequency-domain GLR evaluated at `t = L x̄ / (θ + P ȳ)` (exponent counts `L` and `L + k + P`).
pub fn lr_glrd2_value(t: f64, l: usize, p: usize, k: u32, snr: f64) -> f64 {
    ln_glr(t, l as f64, (l + p) as f64 + k as f64, snr).exp()
}

/// Upper GLR threshold matching a lower one: the `η₂ > extremum` with
/// `lr(η₂) = lr(η₁)`, or `+∞` when the ratio never falls back to that level.
pub fn matching_upper_threshold(eta1: f64, extremum: f64, lr: impl Fn(f64) -> f64) -> f64 {
    if eta1 >= extremum {
        return f64::INFINITY;
    }
    let level = lr(eta1);
    let mut lo = extremum;
    let mut hi = extremum.max(1.0) * 2.0;
    let mut grown = 0;
    while lr(hi) > level {
        lo = hi;
        hi *= 2.0;
        grown += 1;
        if grown > 200 || !hi.is_finite() {
            return f64::INFINITY;
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if lr(mid) > level {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-12 * hi {
            break;
        }
    }
    0.5 * (lo + hi)
}

pub fn optimal_decide(r: &[f64], eta: f64) -> DetectorVerdict {
    let statistic = t_opt(r);
    DetectorVerdict { detector: DetectorKind::Optimal, statistic, decided_h1: statistic > eta }
}

pub fn alrd1_decide(r: &[f64], prior: &NoisePrior, eta: f64) -> DetectorVerdict {
    let statistic = t_alrd1(r, prior);
    DetectorVerdict { detector: DetectorKind::Alrd1, statistic, decided_h1: statistic > eta }
}

/// H1 iff `η₁ < N r̄ / θ < η₂`.
pub fn glrd1_decide(r: &[f64], prior: &NoisePrior, thresholds: &ThresholdSpec) -> DetectorVerdict {
    let statistic = t_alrd1(r, prior);
    DetectorVerdict { detector: DetectorKind::Glrd1, statistic, decided_h1: thresholds.accepts(statistic) }
}

pub fn alrd2_decide(x: &[f64], y: &[f64], prior: &NoisePrior, eta: f64) -> DetectorVerdict {
    let statistic = t_alrd2(x, y, prior);
    DetectorVerdict { detector: DetectorKind::Alrd2, statistic, decided_h1: statistic > eta }
}

/// H1 iff `η₁ < L x̄ / (θ + P ȳ) < η₂`.
pub fn glrd2_decide(x: &[f64], y: &[f64], prior: &NoisePrior, thresholds: &ThresholdSpec) -> DetectorVerdict {
    let statistic = t_alrd2(x, y, prior);
    DetectorVerdict { detector: DetectorKind::Glrd2, statistic, decided_h1: thresholds.accepts(statistic) }
}

/// H1 iff `Φ > η θ`.
pub fn phi_decide(x: &[f64], y: &[f64], prior: &NoisePrior, eta: f64) -> bool {
    phi_statistic(x, y, eta) > eta * prior.theta()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prior(k: u32, theta: f64) -> NoisePrior {
        NoisePrior::new(k, theta).unwrap()
    }

    #[test]
    fn statistic_arithmetic() {
        assert_eq!(t_opt(&[0.0; 20]), 0.0);
        assert_eq!(t_opt(&[1.0; 20]), 20.0);
        assert_eq!(t_alrd1(&[1.0; 20], &prior(4, 2.0)), 10.0);
        assert!((t_alrd2(&[1.0; 16], &[1.0; 4], &prior(4, 1.0)) - 3.2).abs() < 1e-15);
        assert_eq!(phi_statistic(&[2.0; 16], &[1.0; 4], 0.5), 30.0);
        assert_eq!(phi_statistic(&[2.0; 16], &[1.0; 4], 0.0), 32.0);
    }

    #[test]
    fn alrd2_vanishes_with_large_excess_energy() {
        let p = prior(4, 1.0);
        let small = t_alrd2(&[1.0; 16], &[1e12; 4], &p);
        assert!(small < 1e-10);
    }

    #[test]
    fn mu_reference_value() {
        let mu = mu_glrd1(20, 4, 1.0).unwrap();
        assert!((mu - 16.345_903_006_477_066).abs() < 1e-9);
        assert!(matches!(mu_glrd1(20, 0, 1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn rho_reference_value() {
        let rho = rho_glrd2(16, 4, 4, 1.0).unwrap();
        assert!((rho - 7.358_898_943_540_674).abs() < 1e-9);
    }

    #[test]
    fn rho_without_excess_bins_is_mu_with_l() {
        for &(l, k, g) in &[(16usize, 4u32, 1.0), (30, 2, 0.3), (5, 9, 3.0)] {
            assert!((rho_glrd2(l, 0, k, g).unwrap() - mu_glrd1(l, k, g).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn extrema_grow_with_snr() {
        let mut last_mu = 0.0;
        let mut last_rho = 0.0;
        for i in 0..200 {
            let g = i as f64 * 0.05;
            let mu = mu_glrd1(20, 4, g).unwrap();
            let rho = rho_glrd2(16, 4, 4, g).unwrap();
            assert!(mu > last_mu && rho > last_rho, "g={g}");
            last_mu = mu;
            last_rho = rho;
        }
    }

    #[test]
    fn glr_values_at_origin_and_zero_snr() {
        let v = lr_glrd1_value(0.0, 20, 4, 1.0);
        assert!((v - 0.5f64.powi(20)).abs() < 1e-20);
        for &t in &[0.0, 0.3, 5.0, 100.0] {
            assert_eq!(lr_glrd1_value(t, 20, 4, 0.0), 1.0);
            assert_eq!(lr_glrd2_value(t, 16, 4, 4, 0.0), 1.0);
        }
    }

    #[test]
    fn mu_maximizes_glr_on_a_fine_grid() {
        let mu = mu_glrd1(20, 4, 1.0).unwrap();
        let step = 1e-3;
        let (mut best_t, mut best) = (0.0, f64::MIN);
        let mut t = 0.0;
        while t < 40.0 {
            let v = lr_glrd1_value(t, 20, 4, 1.0);
            if v > best {
                best = v;
                best_t = t;
            }
            t += step;
        }
        assert!((best_t - mu).abs() <= step);
    }

    #[test]
    fn rule_cases() {
        let p = prior(4, 1.0);
        let th = ThresholdSpec::two_sided(2.0, 10.0).unwrap();
        assert!(!glrd1_decide(&[0.1; 10], &p, &th).decided_h1);
        assert!(glrd1_decide(&[0.5; 10], &p, &th).decided_h1);
        assert!(!glrd2_decide(&[10.0; 16], &[0.0; 4], &p, &th).decided_h1);
        assert!(ThresholdSpec::two_sided(3.0, 3.0).is_err());
        assert!(ThresholdSpec::one_sided(1.0).is_one_sided());
    }

    #[test]
    fn matching_threshold_hits_equal_likelihood() {
        let lr = |t: f64| lr_glrd1_value(t, 20, 4, 1.0);
        let mu = mu_glrd1(20, 4, 1.0).unwrap();
        let eta1 = 8.0;
        let eta2 = matching_upper_threshold(eta1, mu, lr);
        assert!(eta2 > mu);
        assert!((lr(eta2) / lr(eta1) - 1.0).abs() < 1e-9);
        // lr -> 1 as t -> inf, so levels below 1 have no upper crossing.
        assert_eq!(matching_upper_threshold(1.0, mu, lr), f64::INFINITY);
    }

    #[test]
    fn detector_ids_round_trip() {
        for d in DetectorKind::ALL {
            assert_eq!(d.id().parse::<DetectorKind>().unwrap(), d);
        }
        assert!(matches!("cfar".parse::<DetectorKind>(), Err(Error::Config(_))));
    }
}
