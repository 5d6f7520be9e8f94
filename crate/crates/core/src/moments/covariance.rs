//! Variance and covariance of the inverse mixed stable subordinator `Y`.
//!
//! `Cov(Y(s), Y(t)) = I(s, t) + A(s) - U(s) U(t)` for `s <= t`, where
//! `I(s, t) = int_0^s U(t - tau) dU(tau)` and `A` is [`half_second_moment`].

use std::cell::Cell;

use serde::Serialize;

use super::params::{Composition, MixedStableParams};
use super::renewal::{half_second_moment, renewal_density, renewal_first_moment, renewal_u};
use crate::error::{invalid, Error, Result};
use crate::quadrature::tanh_sinh;
use crate::special::{gamma, incomplete_beta, ln_gamma};

const SHELL_TOL: f64 = 1e-14;
const MAX_SHELLS: usize = 500;
// Above this value of (c2/c1)^(1/gap) t the alternating double series is not tried.
const SERIES_MAX_SCALE: f64 = 12.0;
const SERIES_ACCEPT: f64 = 1e-12;
const QUAD_TOL: f64 = 1e-13;
const QUAD_LEVELS: u32 = 12;
const NEGATIVE_VARIANCE_TOL: f64 = 1e-9;

/// Variance value with a flag recording roundoff clamping to zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Variance {
    pub value: f64,
    pub clamped: bool,
}

/// How `I(s, t)` was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CovRoute {
    ClosedForm,
    DoubleSeries,
    Quadrature,
}

/// Output of the double series for `I(s, t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSum {
    pub value: f64,
    /// Sum of absolute values of all terms; `1e-15 * abs_sum` estimates rounding.
    pub abs_sum: f64,
    pub shells: usize,
}

fn check_pair(s: f64, t: f64) -> Result<(f64, f64)> {
    if !(s >= 0.0 && t >= 0.0 && s.is_finite() && t.is_finite()) {
        return Err(invalid(format!("times must be finite and non-negative (got s={s}, t={t})")));
    }
    Ok(if s <= t { (s, t) } else { (t, s) })
}

/// Runs a tanh-sinh integral whose integrand may fail, propagating the first error.
pub(crate) fn integrate<F>(f: F, a: f64, b: f64, what: &str) -> Result<f64>
where
    F: FnMut(f64, f64, f64) -> Result<f64>,
{
    integrate_with_floor(f, a, b, what, 0.0)
}

/// As [`integrate`], but also accepts a result whose error estimate is below
/// `abs_floor`, the rounding noise level of an integrand built from
/// cancelling differences.
pub(crate) fn integrate_with_floor<F>(mut f: F, a: f64, b: f64, what: &str, abs_floor: f64) -> Result<f64>
where
    F: FnMut(f64, f64, f64) -> Result<f64>,
{
    let failure: Cell<Option<Error>> = Cell::new(None);
    let r = tanh_sinh(
        |x, l, r| match f(x, l, r) {
            Ok(v) => v,
            Err(e) => {
                failure.set(Some(e));
                0.0
            }
        },
        a,
        b,
        QUAD_TOL,
        QUAD_LEVELS,
    );
    if let Some(e) = failure.take() {
        return Err(e);
    }
    if !(r.converged || r.abs_error <= abs_floor) {
        return Err(Error::NoConvergence(format!("{what}: quadrature error {:e} on value {:e}", r.abs_error, r.value)));
    }
    Ok(r.value)
}

/// Double series for `I(s, t)`, `0 <= s <= t`, mixed parameters.
///
/// Terms are visited in shells of constant `m + k`; the sum stops after three
/// consecutive shells contribute less than 1e-14 of the partial sum.
pub fn convolution_series(params: &MixedStableParams, s: f64, t: f64) -> Result<SeriesSum> {
    let (s, t) = check_pair(s, t)?;
    if params.composition() != Composition::Mixed {
        return Err(invalid("double series applies to mixed parameters only"));
    }
    if s == 0.0 {
        return Ok(SeriesSum { value: 0.0, abs_sum: 0.0, shells: 0 });
    }
    let a1 = params.alpha1();
    let gap = params.index_gap();
    let ln_scale = (params.c2() / params.c1()).ln() + gap * t.ln();
    let prefactor = t.powf(2.0 * a1) / (params.c1() * params.c1());
    let ratio = s / t;
    let mut total = 0.0;
    let mut comp = 0.0;
    let mut abs_sum = 0.0;
    let mut quiet = 0;
    for n in 0..MAX_SHELLS {
        let mut shell_abs = 0.0;
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        for m in 0..=n {
            let k = n - m;
            let a = k as f64 * gap + a1;
            let b = m as f64 * gap + a1 + 1.0;
            let ib = incomplete_beta(a, b, ratio)?;
            if ib == 0.0 {
                continue;
            }
            let ln_mag = n as f64 * ln_scale - ln_gamma(b) - ln_gamma(a) + ib.ln();
            let term = sign * prefactor * ln_mag.exp();
            // Neumaier summation
            let next = total + term;
            if total.abs() >= term.abs() {
                comp += (total - next) + term;
            } else {
                comp += (term - next) + total;
            }
            total = next;
            shell_abs += term.abs();
        }
        if !shell_abs.is_finite() {
            return Err(Error::NoConvergence(format!("double series overflow at s={s}, t={t}")));
        }
        abs_sum += shell_abs;
        if shell_abs < SHELL_TOL * (total + comp).abs() {
            quiet += 1;
            if quiet == 3 {
                return Ok(SeriesSum { value: total + comp, abs_sum, shells: n + 1 });
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::NoConvergence(format!("double series for I({s}, {t}) exceeded {MAX_SHELLS} shells")))
}

/// `I(s, t) = int_0^s U(t - tau) u(tau) dtau` by tanh-sinh quadrature.
pub fn convolution_quadrature(params: &MixedStableParams, s: f64, t: f64) -> Result<f64> {
    let (s, t) = check_pair(s, t)?;
    if s == 0.0 {
        return Ok(0.0);
    }
    let gap_to_t = t - s;
    integrate(
        |_, left, right| Ok(renewal_u(params, gap_to_t + right)? * renewal_density(params, left)?),
        0.0,
        s,
        "convolution integral",
    )
}

/// `I(s, t)` through the best available route.
pub fn convolution(params: &MixedStableParams, s: f64, t: f64) -> Result<(f64, CovRoute)> {
    let (s, t) = check_pair(s, t)?;
    if s == 0.0 {
        return Ok((0.0, CovRoute::ClosedForm));
    }
    if let Some((alpha, c)) = params.pure_component() {
        let b = incomplete_beta(alpha, alpha + 1.0, s / t)?;
        let v = t.powf(2.0 * alpha) * b / (c * c * gamma(alpha) * gamma(1.0 + alpha));
        return Ok((v, CovRoute::ClosedForm));
    }
    let scale = (params.c2() / params.c1()).powf(1.0 / params.index_gap()) * t;
    if scale <= SERIES_MAX_SCALE {
        if let Ok(sum) = convolution_series(params, s, t) {
            if 1e-15 * sum.abs_sum <= SERIES_ACCEPT * sum.value.abs() {
                return Ok((sum.value, CovRoute::DoubleSeries));
            }
        }
    }
    Ok((convolution_quadrature(params, s, t)?, CovRoute::Quadrature))
}

/// Covariance with the route used for `I(s, t)`.
pub fn cov_y_detailed(params: &MixedStableParams, s: f64, t: f64) -> Result<(f64, CovRoute)> {
    let (s, t) = check_pair(s, t)?;
    if s == 0.0 {
        return Ok((0.0, CovRoute::ClosedForm));
    }
    let (i, route) = convolution(params, s, t)?;
    let cov = i + half_second_moment(params, s)? - renewal_u(params, s)? * renewal_u(params, t)?;
    Ok((cov, route))
}

/// Exact `Cov(Y(s), Y(t))`; arguments may come in either order.
pub fn cov_y_series(params: &MixedStableParams, s: f64, t: f64) -> Result<f64> {
    Ok(cov_y_detailed(params, s, t)?.0)
}

/// Exact variance `2 A(t) - U(t)^2` with the roundoff clamp.
pub fn var_y_detailed(params: &MixedStableParams, t: f64) -> Result<Variance> {
    let v = 2.0 * half_second_moment(params, t)? - renewal_u(params, t)?.powi(2);
    if v >= 0.0 {
        Ok(Variance { value: v, clamped: false })
    } else if v > -NEGATIVE_VARIANCE_TOL {
        Ok(Variance { value: 0.0, clamped: true })
    } else {
        Err(Error::NegativeVariance { t, value: v })
    }
}

/// Exact `Var Y(t)`.
pub fn var_y(params: &MixedStableParams, t: f64) -> Result<f64> {
    Ok(var_y_detailed(params, t)?.value)
}

/// Large-`t` limit of `Cov(Y(s), Y(t))`, equal to `A(s)`.
pub fn cov_y_asymptotic(params: &MixedStableParams, s: f64) -> Result<f64> {
    half_second_moment(params, s)
}

/// `K0(s) = M1(s) / c1` with `M1(s) = int_0^s tau dU(tau)`.
pub fn k0_const(params: &MixedStableParams, s: f64) -> Result<f64> {
    if params.c1() == 0.0 {
        return Err(Error::DegenerateRegime("K0 is defined through c1 and needs c1 > 0".into()));
    }
    Ok(renewal_first_moment(params, s)? / params.c1())
}

/// `K(s) = c1 K0(s) / (c2 Gamma(alpha2)) = M1(s) / (c2 Gamma(alpha2))`.
pub fn k_const(params: &MixedStableParams, s: f64) -> Result<f64> {
    if params.c2() == 0.0 {
        return Err(Error::DegenerateRegime("K needs c2 > 0".into()));
    }
    Ok(renewal_first_moment(params, s)? / (params.c2() * gamma(params.alpha2())))
}

/// Two-term large-`t` approximation `A(s) - t^(alpha2 - 1) K(s)`.
///
/// With `c2 = 0` the pure alpha1-stable analogue `A(s) - t^(alpha1-1) M1(s) / (c1 Gamma(alpha1))` is used.
pub fn cov_y_corrected(params: &MixedStableParams, s: f64, t: f64) -> Result<f64> {
    let (s, t) = check_pair(s, t)?;
    let a = half_second_moment(params, s)?;
    if params.c2() == 0.0 {
        let a1 = params.alpha1();
        let m1 = renewal_first_moment(params, s)?;
        return Ok(a - t.powf(a1 - 1.0) * m1 / (params.c1() * gamma(a1)));
    }
    Ok(a - t.powf(params.alpha2() - 1.0) * k_const(params, s)?)
}

/// Large-`t` law `(t^(2 alpha2) / c2^2) (2/Gamma(2 alpha2 + 1) - 1/Gamma(alpha2 + 1)^2)`.
pub fn var_y_asymptotic(params: &MixedStableParams, t: f64) -> Result<f64> {
    if params.c2() == 0.0 {
        return Err(Error::DegenerateRegime("variance asymptote needs c2 > 0".into()));
    }
    let a2 = params.alpha2();
    let g = gamma(a2 + 1.0);
    Ok(t.powf(2.0 * a2) / params.c2().powi(2) * (2.0 / gamma(2.0 * a2 + 1.0) - 1.0 / (g * g)))
}

/// `E[(Y(t + delta) - Y(t))^2] = 2 int_t^{t+delta} U(t + delta - tau) dU(tau)`.
pub fn increment_second_moment(params: &MixedStableParams, t: f64, delta: f64) -> Result<f64> {
    if !(t >= 0.0 && delta > 0.0) {
        return Err(invalid(format!("need t >= 0 and delta > 0 (got t={t}, delta={delta})")));
    }
    let v = integrate(
        |_, left, right| Ok(renewal_u(params, right)? * renewal_density(params, t + left)?),
        t,
        t + delta,
        "increment second moment",
    )?;
    Ok(2.0 * v)
}

/// `Cov(Y(s+delta) - Y(s), Y(t+delta) - Y(t))` for `s + delta <= t`, computed as
/// `int_s^{s+delta} [dU(t - tau) - dU(t)] dU(tau)` with `dU(v) = U(v + delta) - U(v)`.
pub fn increment_cov(params: &MixedStableParams, s: f64, t: f64, delta: f64) -> Result<f64> {
    if !(s >= 0.0 && delta > 0.0 && s + delta <= t) {
        return Err(invalid(format!(
            "increment covariance needs disjoint windows, s + delta <= t (got s={s}, t={t}, delta={delta})"
        )));
    }
    let lag_u = |v: f64| -> Result<f64> { Ok(renewal_u(params, v + delta)? - renewal_u(params, v)?) };
    let at_t = lag_u(t)?;
    // Each lag difference carries rounding of order eps * U(t + delta).
    let floor =
        64.0 * f64::EPSILON * renewal_u(params, t + delta)? * (renewal_u(params, s + delta)? - renewal_u(params, s)?);
    integrate_with_floor(
        |tau, left, _| Ok((lag_u(t - tau)? - at_t) * renewal_density(params, s + left)?),
        s,
        s + delta,
        "increment covariance",
        floor,
    )
}
