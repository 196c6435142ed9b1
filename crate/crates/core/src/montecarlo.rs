//! Trial engine: statistics over many independent trials, empirical CDFs,
//! threshold calibration and ROC sweeps.
//!
//! Every random draw of trial `i` comes from a stream addressed by
//! `(phase, component, i)`, so results do not depend on scheduling and
//! calibration never shares randomness with evaluation. Components split
//! one trial into noise power, channel gain, signal and noise streams, which
//! keeps scenarios that differ only in SNR or channel on common random
//! numbers.
//!
//! The optimal detector knows the noise power of each trial and scores
//! `Σ r / α`. At `α = 1` this is exactly `Σ r`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::detectors::{
    lr_glrd1_value, lr_glrd2_value, matching_upper_threshold, mu_glrd1, rho_glrd2, t_alrd1, t_alrd2, t_opt,
    DetectorKind, ThresholdSpec,
};
use crate::error::{config, domain, Error, Result};
use crate::numerics::{channel_gain, RngStream};
use crate::observation::{BandGeometry, Dft};
use crate::signal::{
    add_noise, bin_signal, draw_noise_power, noisy_bins, time_signal, Hypothesis, NoisePower, ObservationModel,
    ScenarioConfig,
};

/// Purpose of a batch of trials. Each phase owns a disjoint block of streams.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phase {
    /// H0 trials used to set thresholds.
    Calibration,
    /// H1 trials used to measure detection.
    Detection,
    /// Fresh H0 trials used to measure false alarm after calibration.
    Holdout,
}

impl Phase {
    fn tag(self) -> u64 {
        match self {
            Phase::Calibration => 0,
            Phase::Detection => 1,
            Phase::Holdout => 2,
        }
    }

    /// The phase [`run_trials`] uses for a fixed hypothesis.
    pub fn for_hypothesis(h: Hypothesis) -> Self {
        match h {
            Hypothesis::H0 => Phase::Calibration,
            Hypothesis::H1 => Phase::Detection,
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Component {
    NoisePower = 0,
    Channel = 1,
    Signal = 2,
    Noise = 3,
}

const TRIAL_BITS: u32 = 48;

/// Stream index of one component of one trial.
fn stream_index(phase: Phase, component: Component, trial: usize) -> u64 {
    debug_assert!((trial as u64) < (1 << TRIAL_BITS));
    (phase.tag() << 56) | ((component as u64) << TRIAL_BITS) | trial as u64
}

/// One trial's observations in both forms.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialData {
    pub alpha: f64,
    pub r: Vec<f64>,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

/// Per-run state shared by every trial.
struct Engine<'a> {
    cfg: &'a ScenarioConfig,
    hypothesis: Hypothesis,
    geometry: BandGeometry,
    waveform: Option<(Vec<f64>, Dft)>,
    two_sided: Option<GlrUpper>,
}

/// Extremum data for the two-sided GLR rules.
#[derive(Debug, Clone, Copy)]
struct GlrUpper {
    mu: f64,
    rho: f64,
}

impl<'a> Engine<'a> {
    fn new(cfg: &'a ScenarioConfig, hypothesis: Hypothesis) -> Result<Self> {
        cfg.validate()?;
        let geometry = cfg.geometry()?;
        let waveform = match cfg.observation {
            ObservationModel::Ideal => None,
            ObservationModel::Waveform => Some((cfg.signal.bin_weights(cfg.n_samples), Dft::new(cfg.n_samples))),
        };
        let two_sided = if cfg.glr_two_sided {
            let k = cfg.prior.k();
            Some(GlrUpper {
                mu: mu_glrd1(cfg.n_samples, k, cfg.snr())?,
                rho: rho_glrd2(geometry.l_inband(), geometry.p_excess(), k, cfg.snr())?,
            })
        } else {
            None
        };
        Ok(Self { cfg, hypothesis, geometry, waveform, two_sided })
    }

    fn trial(&self, phase: Phase, i: usize) -> Result<TrialData> {
        let cfg = self.cfg;
        let seed = cfg.master_seed;
        let mut alpha_rng = RngStream::new(seed, stream_index(phase, Component::NoisePower, i));
        let mut chan_rng = RngStream::new(seed, stream_index(phase, Component::Channel, i));
        let mut sig_rng = RngStream::new(seed, stream_index(phase, Component::Signal, i));
        let mut noise_rng = RngStream::new(seed, stream_index(phase, Component::Noise, i));

        let alpha = match cfg.noise_power {
            NoisePower::Prior => draw_noise_power(&cfg.prior, &mut alpha_rng),
            NoisePower::Fixed(a) => a,
        };
        let h = match cfg.pinned {
            Some(p) => p.h,
            None => channel_gain(&cfg.channel, &mut chan_rng)?,
        };
        let n = cfg.n_samples;
        let snr = cfg.snr();

        match &self.waveform {
            None => {
                let mut z = time_signal(n, self.hypothesis, snr, None, alpha, h, &mut sig_rng);
                add_noise(&mut z, alpha, &mut noise_rng);
                let r = z.iter().map(Complex64::norm_sqr).collect();
                let bin_noise = n as f64 * alpha;
                let s_amp = cfg.pinned.map(|p| p.s);
                let signal =
                    bin_signal(self.geometry.l_inband(), bin_noise, self.hypothesis, snr, h, s_amp, &mut sig_rng);
                let (x, y) = noisy_bins(&self.geometry, bin_noise, &signal, &mut noise_rng);
                Ok(TrialData { alpha, r, x, y })
            }
            Some((weights, dft)) => {
                let mut z = time_signal(n, self.hypothesis, snr, Some((weights, dft)), alpha, h, &mut sig_rng);
                add_noise(&mut z, alpha, &mut noise_rng);
                let r = z.iter().map(Complex64::norm_sqr).collect();
                let (x, y) = self.geometry.split(&dft.power(&z));
                Ok(TrialData { alpha, r, x, y })
            }
        }
    }

    fn statistic(&self, detector: DetectorKind, t: &TrialData) -> Result<f64> {
        let prior = &self.cfg.prior;
        let v = match detector {
            DetectorKind::Optimal => t_opt(&t.r) / t.alpha,
            DetectorKind::Alrd1 | DetectorKind::Glrd1 => t_alrd1(&t.r, prior),
            DetectorKind::Alrd2 | DetectorKind::Glrd2 => t_alrd2(&t.x, &t.y, prior),
        };
        if !v.is_finite() {
            return Err(Error::Numeric(format!("non-finite {detector} statistic")));
        }
        Ok(v)
    }

    /// Upper threshold paired with `eta1`, or `+∞` for one-sided rules.
    fn upper_threshold(&self, detector: DetectorKind, eta1: f64) -> f64 {
        let Some(glr) = self.two_sided else {
            return f64::INFINITY;
        };
        let cfg = self.cfg;
        let (k, snr) = (cfg.prior.k(), cfg.snr());
        match detector {
            DetectorKind::Glrd1 => {
                matching_upper_threshold(eta1, glr.mu, |t| lr_glrd1_value(t, cfg.n_samples, k, snr))
            }
            DetectorKind::Glrd2 => {
                let (l, p) = (self.geometry.l_inband(), self.geometry.p_excess());
                matching_upper_threshold(eta1, glr.rho, |t| lr_glrd2_value(t, l, p, k, snr))
            }
            _ => f64::INFINITY,
        }
    }

    /// Statistics of every trial of a phase, one column per detector.
    fn statistics(&self, detectors: &[DetectorKind], phase: Phase) -> Result<Vec<Vec<f64>>> {
        let rows: Vec<Vec<f64>> = (0..self.cfg.trials)
            .into_par_iter()
            .map(|i| {
                let t = self.trial(phase, i)?;
                detectors.iter().map(|&d| self.statistic(d, &t)).collect::<Result<Vec<f64>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((0..detectors.len()).map(|j| rows.iter().map(|row| row[j]).collect()).collect())
    }
}

/// Generates trial `i` of a phase under the configured hypothesis.
pub fn generate_trial(cfg: &ScenarioConfig, phase: Phase, i: usize) -> Result<TrialData> {
    Engine::new(cfg, cfg.hypothesis)?.trial(phase, i)
}

/// Decision statistics of `detectors` over all trials of `phase`, using
/// `cfg.hypothesis`. Column `j` belongs to `detectors[j]`.
pub fn trial_statistics(cfg: &ScenarioConfig, detectors: &[DetectorKind], phase: Phase) -> Result<Vec<Vec<f64>>> {
    Engine::new(cfg, cfg.hypothesis)?.statistics(detectors, phase)
}

/// Applies `f` to every trial of `phase` under `cfg.hypothesis`, in trial order.
pub fn map_trials<T, F>(cfg: &ScenarioConfig, phase: Phase, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&TrialData) -> T + Sync,
{
    let engine = Engine::new(cfg, cfg.hypothesis)?;
    (0..cfg.trials).into_par_iter().map(|i| engine.trial(phase, i).map(|t| f(&t))).collect()
}

const WILSON_Z: f64 = 1.959_963_984_540_054;

/// 95% Wilson score interval for `successes` out of `trials`.
pub fn wilson_interval(successes: usize, trials: usize) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = WILSON_Z * WILSON_Z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = WILSON_Z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0).min(p), (center + half).min(1.0).max(p))
}

/// A decision rate with its 95% Wilson interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateEstimate {
    pub rate: f64,
    pub successes: usize,
    pub trials: usize,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl RateEstimate {
    pub fn from_counts(successes: usize, trials: usize) -> Self {
        let (ci_low, ci_high) = wilson_interval(successes, trials);
        Self { rate: successes as f64 / trials as f64, successes, trials, ci_low, ci_high }
    }

    /// Binomial standard error of the rate.
    pub fn std_error(&self) -> f64 {
        (self.rate * (1.0 - self.rate) / self.trials as f64).sqrt()
    }
}

fn rate_of(samples: &[f64], thresholds: &ThresholdSpec) -> RateEstimate {
    let hits = samples.iter().filter(|&&t| thresholds.accepts(t)).count();
    RateEstimate::from_counts(hits, samples.len())
}

/// Fraction of H1 verdicts over `cfg.trials` trials of `cfg.hypothesis`.
pub fn run_trials(cfg: &ScenarioConfig, detector: DetectorKind, thresholds: &ThresholdSpec) -> Result<RateEstimate> {
    let engine = Engine::new(cfg, cfg.hypothesis)?;
    let stats = engine.statistics(&[detector], Phase::for_hypothesis(cfg.hypothesis))?;
    Ok(rate_of(&stats[0], thresholds))
}

/// Same as [`run_trials`] with the detector given by its id.
pub fn run_trials_by_id(cfg: &ScenarioConfig, detector: &str, thresholds: &ThresholdSpec) -> Result<RateEstimate> {
    run_trials(cfg, detector.parse()?, thresholds)
}

/// Sorted sample of a statistic.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCdf {
    sorted: Vec<f64>,
}

impl EmpiricalCdf {
    pub fn from_samples(mut samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return domain("empirical CDF needs at least one sample");
        }
        if samples.iter().any(|v| v.is_nan()) {
            return Err(Error::Numeric("NaN in statistic sample".into()));
        }
        samples.sort_by(f64::total_cmp);
        Ok(Self { sorted: samples })
    }

    /// Fraction of samples `<= t`.
    pub fn eval(&self, t: f64) -> f64 {
        self.sorted.partition_point(|&v| v <= t) as f64 / self.sorted.len() as f64
    }

    /// Smallest sample `v` with `eval(v) >= q`, for `q` in `(0, 1]`.
    pub fn quantile(&self, q: f64) -> f64 {
        let n = self.sorted.len();
        let idx = ((q * n as f64).ceil() as usize).clamp(1, n) - 1;
        self.sorted[idx]
    }

    pub fn samples(&self) -> &[f64] {
        &self.sorted
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.sorted[0]
    }

    pub fn max(&self) -> f64 {
        self.sorted[self.sorted.len() - 1]
    }
}

/// CDF of the detector statistic over the calibration-phase H0 trials.
pub fn empirical_cdf(cfg: &ScenarioConfig, detector: DetectorKind) -> Result<EmpiricalCdf> {
    let engine = Engine::new(cfg, Hypothesis::H0)?;
    let mut stats = engine.statistics(&[detector], Phase::Calibration)?;
    EmpiricalCdf::from_samples(stats.remove(0))
}

fn check_target(target: f64, trials: usize) -> Result<()> {
    if !(target > 0.0 && target < 1.0) {
        return config(format!("target false-alarm rate must lie in (0, 1), got {target}"));
    }
    if target * (trials as f64) < 100.0 {
        return config(format!(
            "{trials} trials give fewer than 100 expected false alarms at target {target}"
        ));
    }
    Ok(())
}

/// Thresholds reaching `target` on an H0 sample.
fn thresholds_for(engine: &Engine, detector: DetectorKind, cdf: &EmpiricalCdf, target: f64) -> ThresholdSpec {
    let eta = cdf.quantile(1.0 - target);
    if !(detector.is_glr() && engine.two_sided.is_some()) {
        return ThresholdSpec::one_sided(eta);
    }
    // The accepted interval shrinks as eta1 grows, so bisect on eta1.
    let accepted = |eta1: f64| {
        let eta2 = engine.upper_threshold(detector, eta1);
        (cdf.eval(eta2) - cdf.eval(eta1)).max(0.0)
    };
    let (mut lo, mut hi) = (0.0, eta.max(cdf.max()));
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if accepted(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    ThresholdSpec { eta1: hi, eta2: engine.upper_threshold(detector, hi) }
}

/// Empirical `(1 − target)` quantile of the H0 statistic.
pub fn calibrate_threshold(cfg: &ScenarioConfig, detector: DetectorKind, target_pfa: f64) -> Result<f64> {
    Ok(calibrate_thresholds(cfg, detector, target_pfa)?.eta1)
}

/// Like [`calibrate_threshold`], but also returns the upper GLR threshold
/// when the two-sided rule is enabled.
pub fn calibrate_thresholds(cfg: &ScenarioConfig, detector: DetectorKind, target_pfa: f64) -> Result<ThresholdSpec> {
    check_target(target_pfa, cfg.trials)?;
    let engine = Engine::new(cfg, Hypothesis::H0)?;
    let mut stats = engine.statistics(&[detector], Phase::Calibration)?;
    let cdf = EmpiricalCdf::from_samples(stats.remove(0))?;
    Ok(thresholds_for(&engine, detector, &cdf, target_pfa))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RocPoint {
    pub pfa_target: f64,
    pub pfa_empirical: f64,
    pub pd_empirical: f64,
    pub pd_ci_low: f64,
    pub pd_ci_high: f64,
    pub threshold: f64,
    /// `+∞` unless the two-sided GLR rule is active.
    pub threshold_upper: f64,
}

fn check_grid(grid: &[f64], trials: usize) -> Result<()> {
    if grid.is_empty() {
        return config("false-alarm grid is empty");
    }
    for w in grid.windows(2) {
        if !(w[0] < w[1]) {
            return config("false-alarm grid must be strictly ascending");
        }
    }
    grid.iter().try_for_each(|&p| check_target(p, trials))
}

/// ROC curves of several detectors from one shared set of trials.
///
/// Thresholds come from calibration-phase H0 trials; false alarm is then
/// measured on holdout H0 trials and detection on H1 trials.
pub fn roc_sweep_many(
    cfg: &ScenarioConfig,
    detectors: &[DetectorKind],
    pfa_grid: &[f64],
) -> Result<Vec<(DetectorKind, Vec<RocPoint>)>> {
    if detectors.is_empty() {
        return config("no detectors requested");
    }
    check_grid(pfa_grid, cfg.trials)?;
    let h0 = Engine::new(cfg, Hypothesis::H0)?;
    let h1 = Engine::new(cfg, Hypothesis::H1)?;
    let calibration = h0.statistics(detectors, Phase::Calibration)?;
    let holdout = h0.statistics(detectors, Phase::Holdout)?;
    let detection = h1.statistics(detectors, Phase::Detection)?;

    let mut out = Vec::with_capacity(detectors.len());
    for (j, &d) in detectors.iter().enumerate() {
        let cdf = EmpiricalCdf::from_samples(calibration[j].clone())?;
        let points = pfa_grid
            .iter()
            .map(|&target| {
                let th = thresholds_for(&h0, d, &cdf, target);
                let pfa = rate_of(&holdout[j], &th);
                let pd = rate_of(&detection[j], &th);
                RocPoint {
                    pfa_target: target,
                    pfa_empirical: pfa.rate,
                    pd_empirical: pd.rate,
                    pd_ci_low: pd.ci_low,
                    pd_ci_high: pd.ci_high,
                    threshold: th.eta1,
                    threshold_upper: th.eta2,
                }
            })
            .collect();
        out.push((d, points));
    }
    Ok(out)
}

pub fn roc_sweep(cfg: &ScenarioConfig, detector: DetectorKind, pfa_grid: &[f64]) -> Result<Vec<RocPoint>> {
    Ok(roc_sweep_many(cfg, &[detector], pfa_grid)?.remove(0).1)
}
