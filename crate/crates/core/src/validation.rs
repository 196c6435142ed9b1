//! Self-checks that tie the closed forms, the estimators and the trial engine
//! to independent numerical oracles.
//!
//! Each check is deterministic for a given seed and reports a one-line
//! detail string. [`run_all`] runs the full suite in id order.

use std::time::{Duration, Instant};

use num_complex::Complex64;

use crate::analysis::{
    map_noise_bins, map_noise_time, map_objective_bins, map_objective_time, pd_alrd2_clt, pd_opt, pfa_alrd2_clt,
    pfa_opt, posterior_update, statistic_moments, threshold_opt, MomentMethod, MomentParams,
};
use crate::detectors::{lr_glrd1_value, lr_glrd2_value, mu_glrd1, rho_glrd2, t_alrd1, DetectorKind, ThresholdSpec};
use crate::error::Result;
use crate::montecarlo::{map_trials, roc_sweep_many, run_trials, EmpiricalCdf, Phase, RocPoint};
use crate::numerics::{reg_upper_gamma, Channel, RngStream};
use crate::signal::{Hypothesis, NoisePower, NoisePrior, PinnedSignal, ScenarioConfig, SignalSpec};

/// Result of one check.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl CheckOutcome {
    /// `PASS`/`FAIL` line without the timing, stable across runs.
    pub fn line(&self) -> String {
        format!("[{}] {:>2} {}: {}", if self.passed { "PASS" } else { "FAIL" }, self.id, self.name, self.detail)
    }
}

/// Names of the checks, indexed by `id - 1`.
pub const CHECK_NAMES: [&str; 10] = [
    "optimal closed form vs simulation",
    "posterior conjugacy",
    "MAP estimates",
    "GLR unimodality",
    "GLR upper threshold negligible",
    "Gaussian approximation of the excess-band detector",
    "statistic moments",
    "detector ordering and improvement",
    "fading ROC sweeps",
    "determinism",
];

pub const TRIALS: usize = 100_000;
pub const MOMENT_TRIALS: usize = 1_000_000;
pub const FADING_TRIALS: usize = 20_000;

fn timed(id: u8, f: impl FnOnce() -> Result<(bool, String)>) -> CheckOutcome {
    let start = Instant::now();
    let (passed, detail) = match f() {
        Ok(v) => v,
        Err(e) => (false, format!("error: {e}")),
    };
    CheckOutcome { id, name: CHECK_NAMES[id as usize - 1], passed, detail, elapsed: start.elapsed() }
}

fn fig_spec(snr: f64) -> SignalSpec {
    SignalSpec::critically_sampled(54e3, 0.25, snr).expect("fixed spec is valid")
}

fn scenario(n: usize, prior: NoisePrior, snr: f64, channel: Channel, trials: usize, seed: u64) -> ScenarioConfig {
    ScenarioConfig::new(n, prior, fig_spec(snr), channel).with_trials(trials).with_seed(seed)
}

fn db(x: f64) -> f64 {
    10f64.powf(x / 10.0)
}

fn uniform_in(rng: &mut RngStream, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.uniform()
}

fn int_in(rng: &mut RngStream, lo: u32, hi: u32) -> u32 {
    lo + (rng.uniform() * (hi - lo + 1) as f64) as u32
}

/// Empirical false alarm and detection of the energy statistic at fixed
/// `α = 1` against the incomplete-gamma closed forms.
pub fn check_optimal_closed_form(seed: u64) -> CheckOutcome {
    timed(1, || {
        let prior = NoisePrior::new(4, 4.0)?;
        let base = scenario(20, prior, 1.0, Channel::Awgn, TRIALS, seed).with_noise_power(NoisePower::Fixed(1.0));
        let h0 = map_trials(&base.clone().with_hypothesis(Hypothesis::H0), Phase::Calibration, |t| {
            t.r.iter().sum::<f64>()
        })?;
        let h1 = map_trials(&base.with_hypothesis(Hypothesis::H1), Phase::Detection, |t| t.r.iter().sum::<f64>())?;
        let mut worst: f64 = 0.0;
        for &target in &[0.05, 0.1, 0.2, 0.3, 0.5, 0.7, 0.9] {
            let eta = threshold_opt(20, 1.0, target)?;
            let pfa_emp = h0.iter().filter(|&&v| v > eta).count() as f64 / h0.len() as f64;
            let pd_emp = h1.iter().filter(|&&v| v > eta).count() as f64 / h1.len() as f64;
            worst = worst.max((pfa_emp - pfa_opt(20, 1.0, eta)?).abs());
            worst = worst.max((pd_emp - pd_opt(20, 1.0, 1.0, eta)?).abs());
        }
        Ok((worst <= 0.01, format!("max |empirical - closed form| = {worst:.4} (tolerance 0.01)")))
    })
}

/// Distances between the closed-form posterior and a grid-quadrature Bayes
/// posterior for one configuration: `(total variation, Kolmogorov)`.
///
/// `upper` computes the regularized upper incomplete gamma used for the
/// closed-form CDF, so a faulty implementation can be injected.
pub fn posterior_distances(
    prior: &NoisePrior,
    y_mean: f64,
    p: usize,
    upper: &dyn Fn(f64, f64) -> Result<f64>,
) -> Result<(f64, f64)> {
    let post = posterior_update(prior, y_mean, p)?;
    let (shape, rate) = (post.shape(), post.rate());
    let sd = shape.sqrt() / rate;
    let hi = shape / rate + 14.0 * sd;
    let steps = 40_000;
    let h = hi / steps as f64;
    let energy = p as f64 * y_mean;
    // Unnormalized log of prior × likelihood on the precision grid.
    let ln_weight = |lambda: f64| {
        (prior.k() as f64) * lambda.ln() - prior.theta() * lambda + (p as f64) * lambda.ln() - lambda * energy
    };
    let mids: Vec<f64> = (0..steps).map(|i| (i as f64 + 0.5) * h).collect();
    let logs: Vec<f64> = mids.iter().map(|&l| ln_weight(l)).collect();
    let peak = logs.iter().cloned().fold(f64::MIN, f64::max);
    let weights: Vec<f64> = logs.iter().map(|&v| (v - peak).exp()).collect();
    let total: f64 = weights.iter().sum::<f64>() * h;
    let mut tv = 0.0;
    let mut ks: f64 = 0.0;
    let mut cum = 0.0;
    for (i, (&lambda, &w)) in mids.iter().zip(&weights).enumerate() {
        let grid_density = w / total;
        tv += (grid_density - post.density(lambda)).abs() * h;
        cum += grid_density * h;
        let right = (i + 1) as f64 * h;
        let closed_cdf = 1.0 - upper(shape, rate * right)?;
        ks = ks.max((cum - closed_cdf).abs());
    }
    Ok((0.5 * tv, ks))
}

fn conjugacy_configs(seed: u64) -> Vec<(NoisePrior, f64, usize)> {
    let mut rng = RngStream::new(seed, 0xC0);
    (0..20)
        .map(|_| {
            let k = int_in(&mut rng, 1, 10);
            let theta = uniform_in(&mut rng, 0.5, 5.0);
            let p = int_in(&mut rng, 1, 16) as usize;
            let y = uniform_in(&mut rng, 0.0, 3.0);
            (NoisePrior::new(k, theta).expect("positive"), y, p)
        })
        .collect()
}

/// Conjugacy check with an injectable upper incomplete gamma.
pub fn check_conjugacy_with(seed: u64, upper: &dyn Fn(f64, f64) -> Result<f64>) -> CheckOutcome {
    timed(2, || {
        let (mut tv, mut ks): (f64, f64) = (0.0, 0.0);
        for (prior, y, p) in conjugacy_configs(seed) {
            let (a, b) = posterior_distances(&prior, y, p, upper)?;
            tv = tv.max(a);
            ks = ks.max(b);
        }
        Ok((
            tv < 1e-3 && ks < 1e-4,
            format!("20 configurations: max total variation {tv:.2e} (< 1e-3), max CDF distance {ks:.2e} (< 1e-4)"),
        ))
    })
}

pub fn check_conjugacy(seed: u64) -> CheckOutcome {
    check_conjugacy_with(seed, &reg_upper_gamma)
}

fn grid_argmax(objective: impl Fn(f64) -> f64) -> f64 {
    let step = 1e-4;
    let (mut best_a, mut best) = (step, f64::MIN);
    for i in 1..=100_000 {
        let a = i as f64 * step;
        let v = objective(a);
        if v > best {
            best = v;
            best_a = a;
        }
    }
    best_a
}

/// MAP estimates against grid-search maxima of their objectives.
pub fn check_map(seed: u64) -> CheckOutcome {
    timed(3, || {
        let mut rng = RngStream::new(seed, 0x3A);
        let mut worst: f64 = 0.0;
        for _ in 0..20 {
            let prior = NoisePrior::new(int_in(&mut rng, 1, 8), uniform_in(&mut rng, 1.0, 5.0))?;
            let snr = uniform_in(&mut rng, 0.0, 1.0);
            let n = int_in(&mut rng, 10, 40) as usize;
            let r = uniform_in(&mut rng, 0.8, 3.0);
            let (l, p) = (int_in(&mut rng, 8, 32) as usize, int_in(&mut rng, 2, 8) as usize);
            let (x, y) = (uniform_in(&mut rng, 0.8, 3.0), uniform_in(&mut rng, 0.8, 3.0));
            for hyp in [Hypothesis::H0, Hypothesis::H1] {
                let closed = map_noise_time(r, n, &prior, snr, hyp);
                let grid = grid_argmax(|a| map_objective_time(a, r, n, &prior, snr, hyp));
                worst = worst.max((grid - closed).abs() / closed);
                let closed = map_noise_bins(x, l, y, p, &prior, snr, hyp);
                let grid = grid_argmax(|a| map_objective_bins(a, x, l, y, p, &prior, snr, hyp));
                worst = worst.max((grid - closed).abs() / closed);
            }
        }
        Ok((worst <= 1e-3, format!("20 configurations: max relative gap {worst:.2e} (tolerance 1e-3)")))
    })
}

/// Sign changes of the discrete derivative of `f` on `[0, 4 x]`, step `1e-3 x`.
/// Returns the change count and the grid point where the last change happened.
pub fn derivative_sign_changes(f: impl Fn(f64) -> f64, extremum: f64) -> (usize, f64) {
    let step = 1e-3 * extremum;
    let mut changes = 0;
    let mut at = f64::NAN;
    let mut last_sign = 0i8;
    let mut prev = f(0.0);
    for i in 1..=4000 {
        let t = i as f64 * step;
        let v = f(t);
        let sign = if v > prev { 1 } else if v < prev { -1 } else { 0 };
        if sign != 0 {
            if last_sign != 0 && sign != last_sign {
                changes += 1;
                at = (i - 1) as f64 * step;
            }
            last_sign = sign;
        }
        prev = v;
    }
    (changes, at)
}

/// One maximum on the GLR grids, located within one step of `μ` / `ρ`.
pub fn check_glr_unimodal(seed: u64) -> CheckOutcome {
    timed(4, || {
        let mut rng = RngStream::new(seed, 0x4B);
        let mut failures = Vec::new();
        for case in 0..10 {
            let k = int_in(&mut rng, 1, 10);
            let snr = uniform_in(&mut rng, 0.1, 3.0);
            let n = int_in(&mut rng, 5, 40) as usize;
            let (l, p) = (int_in(&mut rng, 4, 32) as usize, int_in(&mut rng, 1, 8) as usize);
            let mu = mu_glrd1(n, k, snr)?;
            let (c1, at1) = derivative_sign_changes(|t| lr_glrd1_value(t, n, k, snr), mu);
            let rho = rho_glrd2(l, p, k, snr)?;
            let (c2, at2) = derivative_sign_changes(|t| lr_glrd2_value(t, l, p, k, snr), rho);
            let ok1 = c1 == 1 && (at1 - mu).abs() <= 1e-3 * mu * (1.0 + 1e-9);
            let ok2 = c2 == 1 && (at2 - rho).abs() <= 1e-3 * rho * (1.0 + 1e-9);
            if !(ok1 && ok2) {
                failures.push(case);
            }
        }
        Ok((failures.is_empty(), format!("10 configurations, failing cases: {failures:?}")))
    })
}

/// `P(N r̄ / θ > μ)` under both hypotheses at N = 20, γ = 1.
///
/// The verdict conditions on `α = θ / k`, the setting of the one-sided closed
/// forms; rates with `α` drawn from the prior are reported alongside.
pub fn check_markov(seed: u64) -> CheckOutcome {
    timed(5, || {
        let prior = NoisePrior::new(4, 4.0)?;
        let mu = mu_glrd1(20, prior.k(), 1.0)?;
        let rate = |noise: NoisePower, hyp: Hypothesis| -> Result<f64> {
            let cfg = scenario(20, prior, 1.0, Channel::Awgn, TRIALS, seed).with_hypothesis(hyp).with_noise_power(noise);
            let stats = map_trials(&cfg, Phase::for_hypothesis(hyp), |t| t_alrd1(&t.r, &prior))?;
            Ok(stats.iter().filter(|&&v| v > mu).count() as f64 / stats.len() as f64)
        };
        let fixed = NoisePower::Fixed(prior.mean_noise_power());
        let (f0, f1) = (rate(fixed, Hypothesis::H0)?, rate(fixed, Hypothesis::H1)?);
        let (p0, p1) = (rate(NoisePower::Prior, Hypothesis::H0)?, rate(NoisePower::Prior, Hypothesis::H1)?);
        Ok((
            f0.max(f1) < 1e-3,
            format!(
                "k=4 theta=4, mu={mu:.3}: P(stat > mu) at alpha=1 H0 {f0:.2e}, H1 {f1:.2e} (bound 1e-3); alpha from prior H0 {p0:.2e}, H1 {p1:.2e}"
            ),
        ))
    })
}

/// Gaussian-approximation false alarm and pinned-amplitude detection against
/// the bin-path simulation at L = 16, P = 4, N = 20, α = 1, θ = 1.
pub fn check_clt(seed: u64) -> CheckOutcome {
    timed(6, || {
        let prior = NoisePrior::new(1, 1.0)?;
        let base = scenario(20, prior, 1.0, Channel::Awgn, TRIALS, seed).with_noise_power(NoisePower::Fixed(1.0));
        let h0 = base.clone().with_hypothesis(Hypothesis::H0);
        let stats = map_trials(&h0, Phase::Calibration, |t| crate::detectors::t_alrd2(&t.x, &t.y, &prior))?;
        let cdf = EmpiricalCdf::from_samples(stats)?;
        let mut worst_pfa: f64 = 0.0;
        for i in 1..=10 {
            let target = 0.05 * i as f64;
            let eta = cdf.quantile(1.0 - target);
            let emp = 1.0 - cdf.eval(eta);
            worst_pfa = worst_pfa.max((pfa_alrd2_clt(16, 4, 20, 1.0, 1.0, eta)? - emp).abs());
        }
        let one = Complex64::new(1.0, 0.0);
        let h1 = base.with_hypothesis(Hypothesis::H1).with_pinned(PinnedSignal { h: one, s: one });
        let eta = 1.2;
        let pd = run_trials(&h1, DetectorKind::Alrd2, &ThresholdSpec::one_sided(eta))?;
        let pd_gap = (pd_alrd2_clt(16, 4, 20, 1.0, 1.0, eta, one, one)? - pd.rate).abs();
        Ok((
            worst_pfa <= 0.03 && pd_gap <= 0.03,
            format!("max false-alarm gap {worst_pfa:.4}, pinned detection gap {pd_gap:.4} at eta=1.2 (tolerance 0.03)"),
        ))
    })
}

/// Mean and variance with standard errors of both.
fn sample_moments(v: &[f64]) -> (f64, f64, f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let m2 = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    let m4 = v.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / n;
    let var = m2 * n / (n - 1.0);
    (mean, (m2 / n).sqrt(), var, ((m4 - m2 * m2) / n).sqrt())
}

/// H1 moments of the energy statistic and of `Φ` against the closed forms.
pub fn check_moments(seed: u64) -> CheckOutcome {
    timed(7, || {
        let prior = NoisePrior::new(4, 4.0)?;
        let eta = 0.5;
        let cfg = scenario(20, prior, 1.0, Channel::Awgn, MOMENT_TRIALS, seed)
            .with_noise_power(NoisePower::Fixed(1.0))
            .with_hypothesis(Hypothesis::H1);
        let pairs = map_trials(&cfg, Phase::Detection, |t| {
            (t.r.iter().sum::<f64>(), t.x.iter().sum::<f64>() - eta * t.y.iter().sum::<f64>())
        })?;
        let energy: Vec<f64> = pairs.iter().map(|p| p.0).collect();
        let phi: Vec<f64> = pairs.iter().map(|p| p.1).collect();
        let params = MomentParams { n: 20, l: 16, p: 4, alpha: 1.0, snr: 1.0, eta };
        let trad = statistic_moments(MomentMethod::Traditional, &params);
        let prop = statistic_moments(MomentMethod::Proposed, &params);

        let z = |m: (f64, f64, f64, f64), mean: f64, var: f64| ((m.0 - mean) / m.1, (m.2 - var) / m.3);
        let mt = sample_moments(&energy);
        let mp = sample_moments(&phi);
        let (zt1, zt2) = z(mt, trad.derived.mean, trad.derived.variance);
        let (zp1, zp2) = z(mp, prop.derived.mean, prop.derived.variance);
        let passed = [zt1, zt2, zp1, zp2].iter().all(|v| v.abs() <= 3.0);
        let alternate = prop.alternate.expect("proposed moments carry the alternate form");
        Ok((
            passed,
            format!(
                "energy z=({zt1:.2}, {zt2:.2}); phi z=({zp1:.2}, {zp2:.2}); phi empirical ({:.1}, {:.0}) vs alternative form ({:.1}, {:.0})",
                mp.0, mp.2, alternate.mean, alternate.variance
            ),
        ))
    })
}

fn pd_at(curves: &[(DetectorKind, Vec<RocPoint>)], d: DetectorKind, idx: usize) -> RocPoint {
    curves.iter().find(|(k, _)| *k == d).expect("detector swept").1[idx]
}

/// Prior used for the figure reproductions.
pub fn figure_prior() -> NoisePrior {
    NoisePrior::new(2, 2.0).expect("positive")
}

/// Ordering optimal ≥ excess-band ALR ≥ time-domain ALR at 0 dB, N = 20,
/// plus improvement with SNR and with N.
pub fn check_ordering(seed: u64) -> CheckOutcome {
    timed(8, || {
        let prior = figure_prior();
        let detectors = [DetectorKind::Optimal, DetectorKind::Alrd2, DetectorKind::Alrd1];
        let grid = [0.01, 0.05, 0.1];
        let base = roc_sweep_many(&scenario(20, prior, db(0.0), Channel::Awgn, TRIALS, seed), &detectors, &grid)?;
        let hi_snr = roc_sweep_many(&scenario(20, prior, db(5.0), Channel::Awgn, TRIALS, seed), &detectors, &grid)?;
        let long = roc_sweep_many(&scenario(40, prior, db(0.0), Channel::Awgn, TRIALS, seed), &detectors, &grid)?;

        let at = 2;
        let opt = pd_at(&base, DetectorKind::Optimal, at).pd_empirical;
        let prop = pd_at(&base, DetectorKind::Alrd2, at).pd_empirical;
        let trad = pd_at(&base, DetectorKind::Alrd1, at).pd_empirical;
        let ordered = opt >= prop && prop >= trad;
        let separated = (0..grid.len())
            .all(|i| pd_at(&base, DetectorKind::Alrd2, i).pd_ci_low > pd_at(&base, DetectorKind::Alrd1, i).pd_ci_high);
        let spec_prior = NoisePrior::new(4, 4.0)?;
        let alt = roc_sweep_many(&scenario(20, spec_prior, db(0.0), Channel::Awgn, TRIALS, seed), &detectors, &grid)?;
        let alt_prop = pd_at(&alt, DetectorKind::Alrd2, at).pd_empirical;
        let alt_trad = pd_at(&alt, DetectorKind::Alrd1, at).pd_empirical;
        // Improvement is judged at the stated operating point; lower targets are reported only.
        let mut not_improved = Vec::new();
        let mut weak = Vec::new();
        for &d in &detectors {
            for i in 0..grid.len() {
                let p0 = pd_at(&base, d, i).pd_empirical;
                for (label, other) in [("snr", &hi_snr), ("N", &long)] {
                    if pd_at(other, d, i).pd_empirical <= p0 {
                        let tag = format!("{d}@{label},{}", grid[i]);
                        if i == at {
                            not_improved.push(tag);
                        } else {
                            weak.push(tag);
                        }
                    }
                }
            }
        }
        Ok((
            ordered && separated && not_improved.is_empty(),
            format!(
                "k=2 theta=2, Pfa 0.1: optimal {opt:.4}, alrd2 {prop:.4}, alrd1 {trad:.4}; CI separated: {separated}; not improved: {not_improved:?}; no gain at lower targets: {weak:?}; info k=4 theta=4: alrd2 {alt_prop:.4}, alrd1 {alt_trad:.4}"
            ),
        ))
    })
}

fn nondecreasing(points: &[RocPoint]) -> bool {
    points.windows(2).all(|w| w[1].pd_empirical >= w[0].pd_empirical)
}

/// Rayleigh and Nakagami sweeps: replayable, monotone, and Nakagami m = 1
/// consistent with Rayleigh.
pub fn check_fading(seed: u64) -> CheckOutcome {
    timed(9, || {
        let prior = figure_prior();
        let detectors = [DetectorKind::Optimal, DetectorKind::Alrd1, DetectorKind::Alrd2];
        let grid = [0.01, 0.05, 0.1, 0.2, 0.4, 0.7, 0.9];
        let run = |channel| roc_sweep_many(&scenario(20, prior, 1.0, channel, FADING_TRIALS, seed), &detectors, &grid);
        let rayleigh = run(Channel::Rayleigh)?;
        let nakagami2 = run(Channel::Nakagami { m: 2.0 })?;
        let replay = run(Channel::Nakagami { m: 2.0 })? == nakagami2 && run(Channel::Rayleigh)? == rayleigh;
        let nakagami1 = run(Channel::Nakagami { m: 1.0 })?;
        let monotone = rayleigh.iter().chain(&nakagami2).all(|(_, pts)| nondecreasing(pts));
        let mut disjoint = Vec::new();
        for ((d, a), (_, b)) in rayleigh.iter().zip(&nakagami1) {
            for (pa, pb) in a.iter().zip(b) {
                if pa.pd_ci_high < pb.pd_ci_low || pb.pd_ci_high < pa.pd_ci_low {
                    disjoint.push(format!("{d}@{}", pa.pfa_target));
                }
            }
        }
        Ok((
            replay && monotone && disjoint.is_empty(),
            format!("replayable: {replay}; monotone: {monotone}; m=1 vs Rayleigh CI-disjoint points: {disjoint:?}"),
        ))
    })
}

/// Checks 1 to 9 for one seed.
pub fn run_core(seed: u64) -> Vec<CheckOutcome> {
    vec![
        check_optimal_closed_form(seed),
        check_conjugacy(seed),
        check_map(seed),
        check_glr_unimodal(seed),
        check_markov(seed),
        check_clt(seed),
        check_moments(seed),
        check_ordering(seed),
        check_fading(seed),
    ]
}

/// Seeds the determinism check compares against `seed`.
pub fn alternate_seeds(seed: u64) -> [u64; 5] {
    let s = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    [s ^ 1, s ^ 2, s ^ 3, s ^ 4, s ^ 5]
}

/// Determinism: a replay of `reference` is identical, and five other seeds
/// give the same verdicts.
pub fn check_determinism(seed: u64, reference: &[CheckOutcome]) -> CheckOutcome {
    timed(10, || {
        let strip = |v: &[CheckOutcome]| v.iter().map(CheckOutcome::line).collect::<Vec<_>>();
        let replay = strip(&run_core(seed)) == strip(reference);
        let verdicts: Vec<bool> = reference.iter().map(|c| c.passed).collect();
        let mut flipped = Vec::new();
        for s in alternate_seeds(seed) {
            let other: Vec<bool> = run_core(s).iter().map(|c| c.passed).collect();
            for (i, (a, b)) in verdicts.iter().zip(&other).enumerate() {
                if a != b {
                    flipped.push(format!("check {} at seed {s}", i + 1));
                }
            }
        }
        Ok((replay && flipped.is_empty(), format!("replay identical: {replay}; verdict flips: {flipped:?}")))
    })
}

/// Full suite in id order.
pub fn run_all(seed: u64) -> Vec<CheckOutcome> {
    let mut out = run_core(seed);
    let det = check_determinism(seed, &out);
    out.push(det);
    out
}
