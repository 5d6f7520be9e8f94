//! Special functions: Gamma, Mittag-Leffler family, incomplete Beta.

pub mod beta;
pub mod gamma;
pub mod mittag_leffler;

pub use beta::{incomplete_beta, incomplete_beta_small_x};
pub use gamma::{gamma, ln_gamma, rgamma};
pub use mittag_leffler::{ml2, ml2_derivative, ml3, ml3_asymptotic, EvalResult, Regime};
