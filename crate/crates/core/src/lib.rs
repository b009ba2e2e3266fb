//! Calibration toolkit for piezoelectric acoustic-emission sensors from
//! ball-drop experiments: forward modeling of multi-bounce impact waveforms,
//! trace preprocessing, and per-sensor Bayesian inversion of the transfer
//! function with an adaptive Metropolis sampler.

pub mod config;
pub mod error;
pub(crate) mod fft;
pub mod inference;
pub mod physics;
pub mod radiation;
pub mod signal;
pub mod synthetic;
pub mod tracefile;

pub use error::{Error, Result};
