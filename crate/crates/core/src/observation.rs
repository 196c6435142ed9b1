//! Observation forms: squared envelopes in time, and in-band / excess-band
//! periodogram bins in frequency.
//!
//! Bin frequencies use a symmetric grid. In fftshift order, bin `p` of an
//! `N`-point transform sits at `(p - (N - 1) / 2) * fs / N`, so for even `N`
//! every bin is offset by half a bin from the usual DFT grid. The symmetric
//! grid puts the same number of bins on each side of DC, and with
//! `fs = (1 + β) B` it gives exactly `L = N / (1 + β)` in-band bins when that
//! ratio is an integer. A bin whose center lies exactly on `|f| = B / 2` is
//! counted as in-band.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{config, Result};
use crate::signal::SignalSpec;

/// Cached forward/inverse transforms of one size.
#[derive(Clone)]
pub struct Dft {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    len: usize,
}

impl fmt::Debug for Dft {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Dft").field("len", &self.len).finish()
    }
}

impl Dft {
    pub fn new(len: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self { forward: planner.plan_fft_forward(len), inverse: planner.plan_fft_inverse(len), len }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// `|DFT(z)(k)|^2` with the unnormalized forward transform.
    pub fn power(&self, z: &[Complex64]) -> Vec<f64> {
        assert_eq!(z.len(), self.len, "block length does not match the planned DFT size");
        let mut buf = z.to_vec();
        self.forward.process(&mut buf);
        buf.iter().map(|c| c.norm_sqr()).collect()
    }

    /// In-place inverse transform including the `1/N` factor.
    pub fn inverse_in_place(&self, spectrum: &mut [Complex64]) {
        assert_eq!(spectrum.len(), self.len, "spectrum length does not match the planned DFT size");
        self.inverse.process(spectrum);
        let scale = 1.0 / self.len as f64;
        for c in spectrum.iter_mut() {
            *c *= scale;
        }
    }
}

/// `r(n) = |z(n)|^2`.
pub fn squared_envelope(z: &[Complex64]) -> Vec<f64> {
    z.iter().map(|c| c.norm_sqr()).collect()
}

/// Magnitude-squared unnormalized DFT of a sample block.
pub fn spectrum_bins(z: &[Complex64]) -> Vec<f64> {
    if z.is_empty() {
        return Vec::new();
    }
    Dft::new(z.len()).power(z)
}

/// Center frequency (Hz) of each bin, in natural DFT order.
pub fn bin_frequencies(n: usize, sample_rate_hz: f64) -> Vec<f64> {
    let spacing = sample_rate_hz / n as f64;
    let center = (n as f64 - 1.0) / 2.0;
    (0..n)
        .map(|j| {
            let shifted = (j + n / 2) % n;
            (shifted as f64 - center) * spacing
        })
        .collect()
}

/// Which DFT bins feed the in-band vector `x` and the excess-band vector `y`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandGeometry {
    n_total: usize,
    inband: Vec<usize>,
    excess: Vec<usize>,
}

impl BandGeometry {
    pub fn new(n: usize, spec: &SignalSpec) -> Result<Self> {
        if n == 0 {
            return config("band split needs at least one sample");
        }
        let half_band = 0.5 * spec.bandwidth_hz();
        let edge = 0.5 * (1.0 + spec.rolloff()) * spec.bandwidth_hz();
        let slack = 1e-12 * edge;
        let mut inband = Vec::new();
        let mut excess = Vec::new();
        for (j, f) in bin_frequencies(n, spec.sample_rate_hz()).into_iter().enumerate() {
            let f = f.abs();
            if f <= half_band + slack {
                inband.push(j);
            } else if f <= edge + slack {
                excess.push(j);
            }
        }
        if excess.is_empty() {
            return config(format!(
                "no excess-band bins at N={n}; the excess-band detectors are undefined"
            ));
        }
        if inband.is_empty() {
            return config(format!("no in-band bins at N={n}"));
        }
        Ok(Self { n_total: n, inband, excess })
    }

    /// DFT size `N`.
    pub fn n_total(&self) -> usize {
        self.n_total
    }

    /// Number of in-band bins `L`.
    pub fn l_inband(&self) -> usize {
        self.inband.len()
    }

    /// Number of excess-band bins `P`.
    pub fn p_excess(&self) -> usize {
        self.excess.len()
    }

    /// Bins beyond the occupied band, dropped from both vectors.
    pub fn discarded(&self) -> usize {
        self.n_total - self.inband.len() - self.excess.len()
    }

    pub fn inband_indices(&self) -> &[usize] {
        &self.inband
    }

    pub fn excess_indices(&self) -> &[usize] {
        &self.excess
    }

    /// Splits a full periodogram into `(x, y)`.
    pub fn split(&self, w: &[f64]) -> (Vec<f64>, Vec<f64>) {
        assert_eq!(w.len(), self.n_total, "periodogram length does not match the geometry");
        let x = self.inband.iter().map(|&j| w[j]).collect();
        let y = self.excess.iter().map(|&j| w[j]).collect();
        (x, y)
    }
}

/// Splits periodogram bins into in-band `x` and excess-band `y`.
pub fn split_bands(w: &[f64], spec: &SignalSpec) -> Result<(Vec<f64>, Vec<f64>, BandGeometry)> {
    let geometry = BandGeometry::new(w.len(), spec)?;
    let (x, y) = geometry.split(w);
    Ok((x, y, geometry))
}

fn mean(v: &[f64]) -> f64 {
    if v.is_empty() {
        0.0
    } else {
        v.iter().sum::<f64>() / v.len() as f64
    }
}

/// Squared envelopes with their cached mean.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeObservation {
    r: Vec<f64>,
    r_mean: f64,
}

impl EnvelopeObservation {
    pub fn new(r: Vec<f64>) -> Self {
        let r_mean = mean(&r);
        Self { r, r_mean }
    }

    pub fn from_block(z: &[Complex64]) -> Self {
        Self::new(squared_envelope(z))
    }

    pub fn r(&self) -> &[f64] {
        &self.r
    }

    pub fn r_mean(&self) -> f64 {
        self.r_mean
    }

    pub fn n(&self) -> usize {
        self.r.len()
    }
}

/// In-band and excess-band bins with their cached means.
#[derive(Debug, Clone, PartialEq)]
pub struct BinObservation {
    x: Vec<f64>,
    y: Vec<f64>,
    x_mean: f64,
    y_mean: f64,
}

impl BinObservation {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Self {
        let x_mean = mean(&x);
        let y_mean = mean(&y);
        Self { x, y, x_mean, y_mean }
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn x_mean(&self) -> f64 {
        self.x_mean
    }

    pub fn y_mean(&self) -> f64 {
        self.y_mean
    }

    pub fn l(&self) -> usize {
        self.x.len()
    }

    pub fn p(&self) -> usize {
        self.y.len()
    }
}

/// One trial's data, in either observation form.
#[derive(Debug, Clone, PartialEq)]
pub enum Observation {
    Envelope(EnvelopeObservation),
    Bins(BinObservation),
}
