//! Exact and asymptotic moments of the inverse mixed stable subordinator,
//! the mixed fractional Poisson process and its increments.

pub mod covariance;
pub mod mfpp;
pub mod params;
pub mod renewal;
pub mod report;

pub use covariance::{
    convolution, convolution_quadrature, convolution_series, cov_y_asymptotic, cov_y_corrected, cov_y_detailed,
    cov_y_series, increment_cov, increment_second_moment, k0_const, k_const, var_y, var_y_asymptotic, var_y_detailed,
    CovRoute, Variance,
};
pub use mfpp::{
    l_const, mfpn_cov, mfpn_cov_asymptotic, mfpn_var, mfpn_var_asymptotic, mfpp_cov, mfpp_cov_asymptotic, mfpp_mean,
    mfpp_var, theoretical_exponents,
};
pub use params::{Composition, MfppConfig, MixedStableParams};
pub use renewal::{
    half_second_moment, renewal_density, renewal_first_moment, renewal_u, renewal_u_asymptotic, renewal_u_integral,
    TimeRegime,
};
pub use report::{moment_report, MomentReport};
