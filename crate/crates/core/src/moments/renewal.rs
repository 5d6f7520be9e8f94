//! Renewal function `U(t) = E[Y(t)]` of the inverse mixed stable subordinator
//! and related one-dimensional integrals.

use serde::{Deserialize, Serialize};

use super::params::{Composition, MixedStableParams};
use crate::error::{invalid, Error, Result};
use crate::special::{gamma, ml2, ml3};

/// Which end of the time axis an asymptotic form describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TimeRegime {
    SmallT,
    LargeT,
}

fn check_time(t: f64) -> Result<()> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(invalid(format!("time must be finite and non-negative (got {t})")));
    }
    Ok(())
}

/// `t^(n alpha1 + offset) / c1^n * E^g_{gap, n alpha1 + offset + 1}(-(c2/c1) t^gap)`,
/// or for a single component `t^(n alpha + offset) / (c^n Gamma(n alpha + offset + 1))`.
fn ml_term(params: &MixedStableParams, t: f64, n: i32, offset: f64, gamma_pow: f64) -> Result<f64> {
    if t == 0.0 {
        return Ok(0.0);
    }
    match params.pure_component() {
        Some((alpha, c)) => {
            let b = n as f64 * alpha + offset + 1.0;
            Ok(t.powf(n as f64 * alpha + offset) / (c.powi(n) * gamma(b)))
        }
        None => {
            let a1 = params.alpha1();
            let b = n as f64 * a1 + offset + 1.0;
            let e = if gamma_pow == 1.0 {
                ml2(params.index_gap(), b, params.ml_argument(t))?
            } else {
                ml3(params.index_gap(), b, gamma_pow, params.ml_argument(t))?
            };
            Ok(t.powf(n as f64 * a1 + offset) / params.c1().powi(n) * e.value)
        }
    }
}

/// `U(t) = (t^alpha1 / c1) E_{alpha1-alpha2, alpha1+1}(-(c2/c1) t^(alpha1-alpha2))`.
pub fn renewal_u(params: &MixedStableParams, t: f64) -> Result<f64> {
    check_time(t)?;
    ml_term(params, t, 1, 0.0, 1.0)
}

/// `dU/dt = (t^(alpha1-1) / c1) E_{alpha1-alpha2, alpha1}(...)`.
pub fn renewal_density(params: &MixedStableParams, t: f64) -> Result<f64> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(invalid(format!("density needs t > 0 (got {t})")));
    }
    ml_term(params, t, 1, -1.0, 1.0)
}

/// `int_0^t U(v) dv = (t^(alpha1+1) / c1) E_{alpha1-alpha2, alpha1+2}(...)`.
pub fn renewal_u_integral(params: &MixedStableParams, t: f64) -> Result<f64> {
    check_time(t)?;
    ml_term(params, t, 1, 1.0, 1.0)
}

/// `M1(s) = int_0^s tau dU(tau) = s U(s) - int_0^s U`, written as
/// `(s^(alpha1+1)/c1) [E_{gap, alpha1+1} - E_{gap, alpha1+2}]`.
pub fn renewal_first_moment(params: &MixedStableParams, s: f64) -> Result<f64> {
    check_time(s)?;
    if s == 0.0 {
        return Ok(0.0);
    }
    match params.pure_component() {
        Some((alpha, c)) => Ok(s.powf(alpha + 1.0) * alpha / (c * gamma(alpha + 2.0))),
        None => {
            let gap = params.index_gap();
            let a1 = params.alpha1();
            let x = params.ml_argument(s);
            let e1 = ml2(gap, a1 + 1.0, x)?.value;
            let e2 = ml2(gap, a1 + 2.0, x)?.value;
            Ok(s.powf(a1 + 1.0) / params.c1() * (e1 - e2))
        }
    }
}

/// `A(t) = (t^(2 alpha1) / c1^2) E^2_{gap, 2 alpha1 + 1}(...)`, half the second
/// moment of `Y(t)`; also the large-`t` limit of `Cov(Y(s), Y(t))` at `s = t`.
pub fn half_second_moment(params: &MixedStableParams, t: f64) -> Result<f64> {
    check_time(t)?;
    ml_term(params, t, 2, 0.0, 2.0)
}

/// Small-`t` and large-`t` power laws of `U`.
pub fn renewal_u_asymptotic(params: &MixedStableParams, t: f64, regime: TimeRegime) -> Result<f64> {
    check_time(t)?;
    let (alpha, c) = match regime {
        TimeRegime::SmallT => (params.alpha1(), params.c1()),
        TimeRegime::LargeT => (params.alpha2(), params.c2()),
    };
    if c == 0.0 {
        return Err(Error::DegenerateRegime(format!(
            "{regime:?} asymptote needs a positive weight on the index {alpha} component"
        )));
    }
    Ok(t.powf(alpha) / (c * gamma(1.0 + alpha)))
}

/// True when the parameters describe a single stable component.
pub fn is_pure(params: &MixedStableParams) -> bool {
    params.composition() != Composition::Mixed
}
