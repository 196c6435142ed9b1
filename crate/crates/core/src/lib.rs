//! Spectrum-sensing detectors for a primary user whose noise power is only
//! known through a Gamma prior.
//!
//! Five detectors are provided: the energy detector with known noise power,
//! average- and generalized-likelihood-ratio detectors on time-domain squared
//! envelopes, and their counterparts on frequency bins that also use the
//! noise-only excess band of a raised-cosine signal to sharpen the noise
//! estimate. Closed-form false-alarm and detection probabilities live in
//! [`analysis`]; [`montecarlo`] calibrates thresholds and traces ROC curves by
//! simulation.
//!
//! ```
//! use exband::detectors::{t_alrd2, DetectorKind};
//! use exband::signal::NoisePrior;
//!
//! let prior = NoisePrior::new(2, 1.0).unwrap();
//! let x = [1.0; 16];
//! let y = [1.0; 4];
//! assert!((t_alrd2(&x, &y, &prior) - 3.2).abs() < 1e-12);
//! assert_eq!("alrd2".parse::<DetectorKind>().unwrap(), DetectorKind::Alrd2);
//! ```

pub mod analysis;
pub mod detectors;
mod error;
pub mod montecarlo;
pub mod numerics;
pub mod observation;
pub mod signal;
pub mod validation;

pub use error::{Error, Result};

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
mod readme {}

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/signal-model.md")]
    mod signal_model {}
    #[doc = include_str!("../../../book/src/detectors.md")]
    mod detectors {}
    #[doc = include_str!("../../../book/src/performance.md")]
    mod performance {}
    #[doc = include_str!("../../../book/src/monte-carlo.md")]
    mod monte_carlo {}
}
