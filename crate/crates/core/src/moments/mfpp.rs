//! Moments of the mixed fractional Poisson process `N(t) = N_0(Y(t))` with a
//! rate-`lambda` Poisson process `N_0`, and of its increments
//! `Z(t) = N(t + delta) - N(t)`.

use super::covariance::{cov_y_series, increment_cov, increment_second_moment, k_const, var_y};
use super::params::{MfppConfig, MixedStableParams};
use super::renewal::{half_second_moment, renewal_u};
use crate::error::{invalid, Error, Result};
use crate::special::gamma;

fn require_c2(config: &MfppConfig, what: &str) -> Result<()> {
    if config.params.c2() == 0.0 {
        return Err(Error::DegenerateRegime(format!("{what} needs c2 > 0")));
    }
    Ok(())
}

/// `E N(t) = lambda U(t)`.
pub fn mfpp_mean(config: &MfppConfig, t: f64) -> Result<f64> {
    Ok(config.lambda * renewal_u(&config.params, t)?)
}

/// `Var N(t) = lambda U(t) + lambda^2 Var Y(t)`.
pub fn mfpp_var(config: &MfppConfig, t: f64) -> Result<f64> {
    let l = config.lambda;
    Ok(l * renewal_u(&config.params, t)? + l * l * var_y(&config.params, t)?)
}

/// `Cov(N(s), N(t)) = lambda U(min(s, t)) + lambda^2 Cov(Y(s), Y(t))`.
pub fn mfpp_cov(config: &MfppConfig, s: f64, t: f64) -> Result<f64> {
    let l = config.lambda;
    Ok(l * renewal_u(&config.params, s.min(t))? + l * l * cov_y_series(&config.params, s, t)?)
}

/// `L(s) = U(s) + lambda A(s)`.
pub fn l_const(config: &MfppConfig, s: f64) -> Result<f64> {
    Ok(renewal_u(&config.params, s)? + config.lambda * half_second_moment(&config.params, s)?)
}

/// Two-term large-`t` form `lambda L(s) - lambda^2 t^(alpha2 - 1) K(s)`.
pub fn mfpp_cov_asymptotic(config: &MfppConfig, s: f64, t: f64) -> Result<f64> {
    require_c2(config, "covariance asymptote")?;
    let l = config.lambda;
    let a2 = config.params.alpha2();
    Ok(l * l_const(config, s)? - l * l * t.powf(a2 - 1.0) * k_const(&config.params, s)?)
}

/// Stated large-`t` variance of the increments:
/// `lambda alpha2 delta t^(alpha2 - 1) / (c2 Gamma(1 + alpha2))`.
///
/// This is `lambda delta U'(t)` to leading order and omits the
/// `2 lambda^2 int_0^delta U` contribution; [`mfpn_var`] gives the exact value.
pub fn mfpn_var_asymptotic(config: &MfppConfig, t: f64) -> Result<f64> {
    require_c2(config, "increment variance asymptote")?;
    let a2 = config.params.alpha2();
    Ok(config.lambda * a2 * config.delta * t.powf(a2 - 1.0) / (config.params.c2() * gamma(1.0 + a2)))
}

/// `(1 - alpha2) delta lambda^2 (K(s + delta) - K(s)) t^(alpha2 - 2)`.
pub fn mfpn_cov_asymptotic(config: &MfppConfig, s: f64, t: f64) -> Result<f64> {
    require_c2(config, "increment covariance asymptote")?;
    let d = config.delta;
    if !(s >= 0.0 && s + d <= t) {
        return Err(invalid(format!("need 0 <= s and s + delta <= t (got s={s}, t={t}, delta={d})")));
    }
    let p = &config.params;
    let l = config.lambda;
    let dk = k_const(p, s + d)? - k_const(p, s)?;
    Ok((1.0 - p.alpha2()) * d * l * l * dk * t.powf(p.alpha2() - 2.0))
}

/// Exact `Var Z(t) = lambda dU + lambda^2 (E[dY^2] - dU^2)` with
/// `dU = U(t + delta) - U(t)`.
pub fn mfpn_var(config: &MfppConfig, t: f64) -> Result<f64> {
    let p = &config.params;
    let d = config.delta;
    let l = config.lambda;
    let du = renewal_u(p, t + d)? - renewal_u(p, t)?;
    let second = increment_second_moment(p, t, d)?;
    Ok(l * du + l * l * (second - du * du))
}

/// Exact `Cov(Z(s), Z(t))` for non-overlapping windows (`s + delta <= t`).
pub fn mfpn_cov(config: &MfppConfig, s: f64, t: f64) -> Result<f64> {
    let l = config.lambda;
    Ok(l * l * increment_cov(&config.params, s, t, config.delta)?)
}

/// Correlation decay exponents `(h_lrd, h_srd) = (a, (3 - a) / 2)` where `a`
/// is the tail index (alpha2, or alpha1 when `c2 = 0`).
pub fn theoretical_exponents(params: &MixedStableParams) -> (f64, f64) {
    let a = params.tail_index();
    (a, (3.0 - a) / 2.0)
}
