//! Mixed fractional Poisson processes.
//!
//! The crate evaluates Mittag-Leffler type special functions, the exact
//! moments of the inverse mixed stable subordinator and of the Poisson
//! processes time-changed by it, simulates sample paths, and estimates
//! correlation decay exponents from simulated ensembles.

// NaN-rejecting `!(x > 0.0)` checks are deliberate; reference constants keep all published digits.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod cli;
pub mod error;
pub mod estimation;
pub mod moments;
pub mod output;
pub mod quadrature;
pub mod simulation;
pub mod special;

pub use error::{Error, Result};
pub use moments::{MfppConfig, MixedStableParams};
