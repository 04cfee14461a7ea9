//! MMSE receiver outage and diversity analysis for MIMO channels.
//!
//! * [`randmat`]: CN(0,1) matrices and Haar unitaries (recursive angular
//!   construction plus a QR-based cross-check).
//! * [`mmse`]: per-stream SINRs for flat and cyclic-prefix frequency-selective
//!   channels, with a block-circulant time-domain reference.
//! * [`diversity`]: rate-regime diversity prediction, Monte Carlo outage
//!   curves and log-log slope fits.
//! * [`wishart`]: ordered Wishart spectra and their small-ball probabilities.
//! * [`config`], [`curve_csv`]: text formats used by the command-line tool.

// `!(x > 0.0)` is used deliberately so NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod curve_csv;
pub mod diversity;
pub mod error;
pub mod mmse;
pub mod montecarlo;
pub mod randmat;
pub mod rng;
pub mod stats;
pub mod wishart;

pub use error::{Error, Result};
