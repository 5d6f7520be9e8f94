//! Empirical moments, correlation curves and decay-exponent fits.

pub mod conditional;
pub mod fit;
pub mod report;
pub mod stats;

pub use conditional::{conditional_noise_curve, JumpTable, RenewalTable};
pub use fit::{corr_curve, fit_decay_exponent, CorrCurve, Dependence, SlopeFit, Verdict};
pub use report::{log_window, lrd_report, srd_report, DecayOptions, DecayProcess, DecayReport, EstimatorKind};
pub use stats::{correlation, correlation_from_moments, empirical_cov, sample_cov, CorrEstimate, PairMoments};
