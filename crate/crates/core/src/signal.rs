//! Trial generation: noise power from the Gamma prior, channel gain,
//! primary-user signal and receiver noise.
//!
//! The prior is placed on the noise *precision* `λ = 1/α`:
//! `λ ~ Gamma(k + 1, θ)` (shape, rate), so the prior mean noise power is
//! `θ / k`. Frequency bins use the unnormalized DFT, so a noise-only bin has
//! mean `N α`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{config, domain, Result};
use crate::numerics::{complex_gaussian, gamma_sample, RngStream};
use crate::observation::{BandGeometry, Dft};

pub use crate::numerics::Channel;

/// Gamma prior on the noise precision: `λ ~ Gamma(k + 1, θ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoisePrior {
    k: u32,
    theta: f64,
}

impl NoisePrior {
    pub fn new(k: u32, theta: f64) -> Result<Self> {
        if k < 1 {
            return domain("prior shape offset k must be at least 1");
        }
        if !(theta > 0.0 && theta.is_finite()) {
            return domain(format!("prior rate theta must be positive, got {theta}"));
        }
        Ok(Self { k, theta })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Shape of the precision law, `k + 1`.
    pub fn precision_shape(&self) -> f64 {
        self.k as f64 + 1.0
    }

    /// `E[α] = θ / k`.
    pub fn mean_noise_power(&self) -> f64 {
        self.theta / self.k as f64
    }
}

/// Draws a noise power `α = 1/λ` with `λ ~ Gamma(k + 1, θ)`.
pub fn draw_noise_power(prior: &NoisePrior, rng: &mut RngStream) -> f64 {
    let precision = gamma_sample(prior.precision_shape(), prior.theta(), rng)
        .expect("NoisePrior guarantees a valid Gamma law");
    1.0 / precision
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Hypothesis {
    H0,
    H1,
}

/// Spectral shape of the primary-user signal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PulseShape {
    /// Raised-cosine power spectrum over `|f| <= (1 + β) B / 2`.
    #[default]
    RaisedCosine,
    /// White signal across the whole sampled band.
    Flat,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignalSpec {
    bandwidth_hz: f64,
    rolloff: f64,
    sample_rate_hz: f64,
    snr_linear: f64,
    shape: PulseShape,
}

impl SignalSpec {
    pub fn new(bandwidth_hz: f64, rolloff: f64, sample_rate_hz: f64, snr_linear: f64) -> Result<Self> {
        if !(bandwidth_hz > 0.0 && bandwidth_hz.is_finite()) {
            return config(format!("bandwidth must be positive, got {bandwidth_hz}"));
        }
        if !(rolloff > 0.0 && rolloff <= 1.0) {
            return config(format!("roll-off must lie in (0, 1], got {rolloff}"));
        }
        // A hair of slack so that fs = (1 + β) B computed in floating point passes.
        if !(sample_rate_hz.is_finite() && sample_rate_hz >= (1.0 + rolloff) * bandwidth_hz * (1.0 - 1e-12)) {
            return config(format!(
                "sample rate {sample_rate_hz} Hz does not cover the occupied band {} Hz",
                (1.0 + rolloff) * bandwidth_hz
            ));
        }
        if !(snr_linear >= 0.0 && snr_linear.is_finite()) {
            return config(format!("SNR must be a finite non-negative ratio, got {snr_linear}"));
        }
        Ok(Self { bandwidth_hz, rolloff, sample_rate_hz, snr_linear, shape: PulseShape::default() })
    }

    /// Sampled at exactly the occupied bandwidth `(1 + β) B`.
    pub fn critically_sampled(bandwidth_hz: f64, rolloff: f64, snr_linear: f64) -> Result<Self> {
        Self::new(bandwidth_hz, rolloff, (1.0 + rolloff) * bandwidth_hz, snr_linear)
    }

    pub fn with_shape(mut self, shape: PulseShape) -> Self {
        self.shape = shape;
        self
    }

    pub fn with_snr(mut self, snr_linear: f64) -> Result<Self> {
        if !(snr_linear >= 0.0 && snr_linear.is_finite()) {
            return config(format!("SNR must be a finite non-negative ratio, got {snr_linear}"));
        }
        self.snr_linear = snr_linear;
        Ok(self)
    }

    pub fn bandwidth_hz(&self) -> f64 {
        self.bandwidth_hz
    }

    pub fn rolloff(&self) -> f64 {
        self.rolloff
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.sample_rate_hz
    }

    pub fn snr_linear(&self) -> f64 {
        self.snr_linear
    }

    pub fn shape(&self) -> PulseShape {
        self.shape
    }

    /// Inner and outer edges of the excess band, `B/2` and `(1 + β) B / 2`.
    pub fn excess_band_edges(&self) -> (f64, f64) {
        (0.5 * self.bandwidth_hz, 0.5 * (1.0 + self.rolloff) * self.bandwidth_hz)
    }

    /// Raised-cosine power profile, 1 on the flat top.
    pub fn raised_cosine_psd(&self, f_hz: f64) -> f64 {
        let f = f_hz.abs();
        let b = self.bandwidth_hz;
        let beta = self.rolloff;
        let flat_edge = 0.5 * (1.0 - beta) * b;
        let stop_edge = 0.5 * (1.0 + beta) * b;
        if f <= flat_edge {
            1.0
        } else if f <= stop_edge {
            0.5 * (1.0 + (PI / (beta * b) * (f - flat_edge)).cos())
        } else {
            0.0
        }
    }

    /// Per-bin signal power weights in natural DFT order, normalized to mean 1
    /// so the time-domain signal power is exactly `α γ`.
    pub fn bin_weights(&self, n: usize) -> Vec<f64> {
        match self.shape {
            PulseShape::Flat => vec![1.0; n],
            PulseShape::RaisedCosine => {
                let raw: Vec<f64> = crate::observation::bin_frequencies(n, self.sample_rate_hz)
                    .into_iter()
                    .map(|f| self.raised_cosine_psd(f))
                    .collect();
                let mean = raw.iter().sum::<f64>() / n as f64;
                raw.into_iter().map(|w| w / mean).collect()
            }
        }
    }
}

/// How a trial is turned into observations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ObservationModel {
    /// Independent white-signal envelopes for the time-domain detectors and
    /// independent exponential bins (noise-only excess band) for the
    /// frequency-domain detectors.
    #[default]
    Ideal,
    /// One spectrally shaped block per trial; envelopes and periodogram bins
    /// are both computed from it.
    Waveform,
}

/// Where the noise power of each trial comes from.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum NoisePower {
    /// Fresh draw from the prior every trial.
    #[default]
    Prior,
    /// Pinned value (a degenerate prior).
    Fixed(f64),
}

/// Channel gain and per-bin signal amplitude held fixed across trials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PinnedSignal {
    pub h: Complex64,
    pub s: Complex64,
}

/// Everything needed to generate and score a batch of trials.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub n_samples: usize,
    pub prior: NoisePrior,
    pub signal: SignalSpec,
    pub channel: Channel,
    pub hypothesis: Hypothesis,
    pub trials: usize,
    pub master_seed: u64,
    pub noise_power: NoisePower,
    /// Pins `h` and the in-band bin amplitude `s` (frequency-bin path only).
    pub pinned: Option<PinnedSignal>,
    pub observation: ObservationModel,
    /// Use the full two-sided GLR rule instead of its one-sided simplification.
    pub glr_two_sided: bool,
}

impl ScenarioConfig {
    pub fn new(n_samples: usize, prior: NoisePrior, signal: SignalSpec, channel: Channel) -> Self {
        Self {
            n_samples,
            prior,
            signal,
            channel,
            hypothesis: Hypothesis::H0,
            trials: 10_000,
            master_seed: 1,
            noise_power: NoisePower::Prior,
            pinned: None,
            observation: ObservationModel::Ideal,
            glr_two_sided: false,
        }
    }

    pub fn with_hypothesis(mut self, hypothesis: Hypothesis) -> Self {
        self.hypothesis = hypothesis;
        self
    }

    pub fn with_trials(mut self, trials: usize) -> Self {
        self.trials = trials;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.master_seed = seed;
        self
    }

    pub fn with_noise_power(mut self, noise_power: NoisePower) -> Self {
        self.noise_power = noise_power;
        self
    }

    pub fn with_observation(mut self, observation: ObservationModel) -> Self {
        self.observation = observation;
        self
    }

    pub fn with_pinned(mut self, pinned: PinnedSignal) -> Self {
        self.pinned = Some(pinned);
        self
    }

    pub fn snr(&self) -> f64 {
        self.signal.snr_linear()
    }

    pub fn geometry(&self) -> Result<BandGeometry> {
        BandGeometry::new(self.n_samples, &self.signal)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_samples == 0 {
            return config("n_samples must be positive");
        }
        if self.trials == 0 {
            return config("trials must be positive");
        }
        self.channel.validate()?;
        if let NoisePower::Fixed(alpha) = self.noise_power {
            if !(alpha > 0.0 && alpha.is_finite()) {
                return config(format!("fixed noise power must be positive, got {alpha}"));
            }
        }
        let geometry = self.geometry()?;
        if geometry.discarded() != 0 {
            return config(format!(
                "sample rate leaves {} of {} bins outside the occupied band",
                geometry.discarded(),
                self.n_samples
            ));
        }
        Ok(())
    }
}

/// Signal part of a time block: `h s(n)`, or zeros under H0.
pub(crate) fn time_signal(
    n: usize,
    hypothesis: Hypothesis,
    snr: f64,
    weights: Option<(&[f64], &Dft)>,
    alpha: f64,
    h: Complex64,
    rng: &mut RngStream,
) -> Vec<Complex64> {
    match hypothesis {
        Hypothesis::H0 => vec![Complex64::new(0.0, 0.0); n],
        Hypothesis::H1 => match weights {
            None => (0..n).map(|_| h * complex_gaussian(alpha * snr, rng)).collect(),
            Some((w, dft)) => {
                let mut spectrum: Vec<Complex64> =
                    w.iter().map(|&wk| complex_gaussian(n as f64 * alpha * snr * wk, rng)).collect();
                dft.inverse_in_place(&mut spectrum);
                spectrum.into_iter().map(|s| h * s).collect()
            }
        },
    }
}

pub(crate) fn add_noise(z: &mut [Complex64], alpha: f64, rng: &mut RngStream) {
    for sample in z.iter_mut() {
        *sample += complex_gaussian(alpha, rng);
    }
}

/// One block of `N` received samples, `z = h s + η` under H1 and `z = η` under H0.
///
/// The signal is circular complex Gaussian with per-sample power `α γ`; its
/// spectrum follows the configured pulse shape.
pub fn generate_time_block(cfg: &ScenarioConfig, alpha: f64, h: Complex64, rng: &mut RngStream) -> Vec<Complex64> {
    let n = cfg.n_samples;
    let mut z = match cfg.signal.shape() {
        PulseShape::Flat => time_signal(n, cfg.hypothesis, cfg.snr(), None, alpha, h, rng),
        PulseShape::RaisedCosine => {
            let weights = cfg.signal.bin_weights(n);
            let dft = Dft::new(n);
            time_signal(n, cfg.hypothesis, cfg.snr(), Some((&weights, &dft)), alpha, h, rng)
        }
    };
    add_noise(&mut z, alpha, rng);
    z
}

/// Signal contribution `h s` to each in-band bin (empty under H0).
pub(crate) fn bin_signal(
    l: usize,
    bin_noise: f64,
    hypothesis: Hypothesis,
    snr: f64,
    h: Complex64,
    s_amp: Option<Complex64>,
    rng: &mut RngStream,
) -> Vec<Complex64> {
    match hypothesis {
        Hypothesis::H0 => Vec::new(),
        Hypothesis::H1 => (0..l)
            .map(|_| h * s_amp.unwrap_or_else(|| complex_gaussian(bin_noise * snr, rng)))
            .collect(),
    }
}

/// Adds bin noise and squares: returns `(x, y)`.
pub(crate) fn noisy_bins(
    geometry: &BandGeometry,
    bin_noise: f64,
    signal: &[Complex64],
    rng: &mut RngStream,
) -> (Vec<f64>, Vec<f64>) {
    let x = (0..geometry.l_inband())
        .map(|m| {
            let v = complex_gaussian(bin_noise, rng);
            match signal.get(m) {
                Some(e) => (e + v).norm_sqr(),
                None => v.norm_sqr(),
            }
        })
        .collect();
    let y = (0..geometry.p_excess()).map(|_| complex_gaussian(bin_noise, rng).norm_sqr()).collect();
    (x, y)
}

/// Direct draw of the in-band bins `x` and excess-band bins `y`.
///
/// Noise bins are circular Gaussian with variance `N α`. Under H1 each in-band
/// bin adds `h s`: with `s_amp = None` every bin gets its own
/// `s ~ CN(0, N α γ)`, otherwise the given amplitude is used for all bins.
/// Excess-band bins never carry signal.
pub fn generate_bins(
    cfg: &ScenarioConfig,
    alpha: f64,
    h: Complex64,
    s_amp: Option<Complex64>,
    rng: &mut RngStream,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let geometry = cfg.geometry()?;
    let bin_noise = geometry.n_total() as f64 * alpha;
    let signal = bin_signal(geometry.l_inband(), bin_noise, cfg.hypothesis, cfg.snr(), h, s_amp, rng);
    Ok(noisy_bins(&geometry, bin_noise, &signal, rng))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prior_validation() {
        assert!(NoisePrior::new(0, 1.0).is_err());
        assert!(NoisePrior::new(1, 0.0).is_err());
        assert_eq!(NoisePrior::new(4, 4.0).unwrap().mean_noise_power(), 1.0);
    }

    #[test]
    fn spec_validation() {
        assert!(SignalSpec::new(54e3, 0.25, 60e3, 1.0).is_err());
        assert!(SignalSpec::new(54e3, 0.0, 80e3, 1.0).is_err());
        assert!(SignalSpec::new(54e3, 0.25, 80e3, -1.0).is_err());
        assert!(SignalSpec::critically_sampled(54e3, 0.25, 1.0).is_ok());
    }

    #[test]
    fn fig1_excess_band_edges() {
        let s = SignalSpec::critically_sampled(54e3, 0.25, 1.0).unwrap();
        let (inner, outer) = s.excess_band_edges();
        assert!((inner - 27e3).abs() < 1e-9);
        assert!((outer - 33.75e3).abs() < 1e-9);
        assert_eq!(s.raised_cosine_psd(0.0), 1.0);
        assert!((s.raised_cosine_psd(27e3) - 0.5).abs() < 1e-12);
        assert_eq!(s.raised_cosine_psd(40e3), 0.0);
    }

    #[test]
    fn weights_have_unit_mean() {
        let s = SignalSpec::critically_sampled(54e3, 0.25, 1.0).unwrap();
        let w = s.bin_weights(20);
        assert!((w.iter().sum::<f64>() / 20.0 - 1.0).abs() < 1e-12);
        assert_eq!(s.with_shape(PulseShape::Flat).bin_weights(5), vec![1.0; 5]);
    }

    #[test]
    fn scenario_rejects_oversampling() {
        let prior = NoisePrior::new(4, 4.0).unwrap();
        let s = SignalSpec::new(54e3, 0.25, 2.0 * 67.5e3, 1.0).unwrap();
        let cfg = ScenarioConfig::new(40, prior, s, Channel::Awgn);
        assert!(cfg.validate().is_err());
    }
}
