//! Two- and three-parameter (Prabhakar) Mittag-Leffler functions for real
//! arguments.
//!
//! Three evaluation routes are used:
//! - the power series with compensated summation, for positive arguments and
//!   for negative arguments where the alternating terms do not cancel badly;
//! - a Hankel contour integral of the Laplace transform
//!   `s^(alpha*gamma - beta) / (s^alpha + |x|)^gamma` for negative arguments
//!   where the series loses precision (`alpha < 1` only);
//! - the algebraic expansion in powers of `1/|x|` for `x <= -50`.

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

use super::gamma::{gamma_sign, ln_gamma, rgamma};
use crate::error::{invalid, Error, Result};
use crate::quadrature::{gauss_kronrod, gauss_kronrod_semi_infinite};

/// Arguments at or below this value use the large-argument expansion.
pub const ASYMPTOTIC_THRESHOLD: f64 = 50.0;

const MAX_TERMS: usize = 20_000;
const TERM_TOL: f64 = 1e-16;
// Per-term relative accuracy of the series terms (dominated by 1/Gamma).
const TERM_ACCURACY: f64 = 1e-15;
// Series results with a larger relative rounding estimate are rejected in
// favour of the contour integral.
const SERIES_ACCEPT: f64 = 1e-12;
// Beyond |x|^(1/alpha) = this, the series is not even attempted for x < 0.
const SERIES_MAX_SCALE: f64 = 40.0;

/// Which evaluation route produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Series,
    Integral,
    Asymptotic,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::Series => "series",
            Regime::Integral => "integral",
            Regime::Asymptotic => "asymptotic",
        }
    }
}

/// Value with an error estimate (an estimate, not a rigorous bound).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvalResult {
    pub value: f64,
    pub est_abs_error: f64,
    pub regime: Regime,
}

/// Neumaier compensated sum.
#[derive(Debug, Default, Clone, Copy)]
struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

struct SeriesOutcome {
    value: f64,
    abs_sum: f64,
    first_neglected: f64,
}

/// `c * x^k / Gamma(a)` computed directly when safe, otherwise in log space.
fn scaled_term(c: f64, x: f64, k: usize, a: f64) -> f64 {
    if c == 0.0 || (x == 0.0 && k > 0) {
        return 0.0;
    }
    if k == 0 {
        return c * rgamma(a);
    }
    let ln_x = x.abs().ln();
    let log_pow = k as f64 * ln_x;
    if a < 170.0 && log_pow.abs() < 600.0 {
        return c * x.powi(k as i32) * rgamma(a);
    }
    let sg = gamma_sign(a);
    if sg == 0.0 {
        return 0.0;
    }
    let sign = c.signum() * sg * if x < 0.0 && k % 2 == 1 { -1.0 } else { 1.0 };
    sign * (c.abs().ln() + log_pow - ln_gamma(a)).exp()
}

fn series(alpha: f64, beta: f64, gamma: f64, x: f64) -> Result<SeriesOutcome> {
    let mut sum = CompensatedSum::default();
    let mut abs_sum = 0.0;
    let mut coef = 1.0; // (gamma)_k / k!
    let mut small_run = 0;
    for k in 0..MAX_TERMS {
        let a = k as f64 * alpha + beta;
        let term = if x == 0.0 && k > 0 { 0.0 } else { scaled_term(coef, x, k, a) };
        if !term.is_finite() {
            return Err(Error::NoConvergence(format!(
                "Mittag-Leffler series overflow (alpha={alpha}, beta={beta}, gamma={gamma}, x={x})"
            )));
        }
        sum.add(term);
        abs_sum += term.abs();
        if term.abs() <= TERM_TOL * sum.value().abs() && a > 0.0 {
            small_run += 1;
            if small_run == 3 {
                let next_coef = coef * (gamma + k as f64) / (k as f64 + 1.0);
                let next = scaled_term(next_coef, x, k + 1, a + alpha);
                return Ok(SeriesOutcome { value: sum.value(), abs_sum, first_neglected: next.abs() });
            }
        } else {
            small_run = 0;
        }
        coef *= (gamma + k as f64) / (k as f64 + 1.0);
    }
    Err(Error::NoConvergence(format!(
        "Mittag-Leffler series hit the {MAX_TERMS}-term cap (alpha={alpha}, beta={beta}, gamma={gamma}, x={x})"
    )))
}

fn series_result(alpha: f64, beta: f64, gamma: f64, x: f64) -> Result<EvalResult> {
    let s = series(alpha, beta, gamma, x)?;
    Ok(EvalResult {
        value: s.value,
        est_abs_error: s.first_neglected + TERM_ACCURACY * s.abs_sum,
        regime: Regime::Series,
    })
}

/// Expansion `sum_k (-1)^k (gamma)_k/k! |x|^(-gamma-k) / Gamma(beta - alpha(gamma+k))`
/// for large negative `x`. Returns `None` when the terms start growing before
/// the tolerance is reached.
fn asymptotic_expansion(alpha: f64, beta: f64, gamma: f64, x: f64) -> Option<EvalResult> {
    let y = -x;
    let mut sum = CompensatedSum::default();
    let mut coef = 1.0;
    let mut ypow = y.powf(-gamma);
    let mut small_run = 0;
    let mut prev = f64::INFINITY;
    let mut abs_sum = 0.0;
    for k in 0..500usize {
        let kf = k as f64;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let term = sign * coef * ypow * rgamma(beta - alpha * (gamma + kf));
        let mag = term.abs();
        if mag != 0.0 {
            if mag > prev && small_run == 0 && k > 2 {
                return None;
            }
            prev = mag;
        }
        sum.add(term);
        abs_sum += mag;
        if mag <= TERM_TOL * sum.value().abs() {
            small_run += 1;
            if small_run == 3 {
                let next_coef = coef * (gamma + kf) / (kf + 1.0);
                let next = next_coef * ypow / y * rgamma(beta - alpha * (gamma + kf + 1.0));
                return Some(EvalResult {
                    value: sum.value(),
                    est_abs_error: next.abs() + TERM_ACCURACY * abs_sum,
                    regime: Regime::Asymptotic,
                });
            }
        } else {
            small_run = 0;
        }
        coef *= (gamma + kf) / (kf + 1.0);
        ypow /= y;
    }
    None
}

/// Hankel-contour evaluation for `x < 0`, `0 < alpha < 1`, any real `beta`.
fn contour_integral(alpha: f64, beta: f64, gamma: f64, x: f64) -> Result<EvalResult> {
    let y = -x;
    let p = alpha * gamma - beta;
    let r_star = y.powf(1.0 / alpha);
    let rho = if r_star.is_finite() { (0.5 * r_star).min(1.0) } else { 1.0 };
    let transform = |ln_s: Complex64| -> Complex64 {
        let w = (ln_s * alpha).exp() + y;
        (ln_s * p - w.ln() * gamma).exp()
    };

    let ln_rho = rho.ln();
    let circle = gauss_kronrod(
        |theta| {
            let ln_s = Complex64::new(ln_rho, theta);
            let s = ln_s.exp();
            (s * s.exp() * transform(ln_s)).re
        },
        0.0,
        PI,
        &[],
        0.0,
        1e-14,
        200,
    );
    let ray_integrand = |r: f64| -> f64 {
        let e = (-r).exp();
        if e == 0.0 {
            return 0.0;
        }
        e * transform(Complex64::new(r.ln(), PI)).im
    };
    let scale = circle.value.abs().max(f64::MIN_POSITIVE);
    let r_end = if r_star < 700.0 { 2.0 * r_star.max(rho) + 40.0 } else { rho + 40.0 };
    let breaks: Vec<f64> = if r_star > rho && r_star < r_end { vec![r_star] } else { vec![] };
    let finite = gauss_kronrod(ray_integrand, rho, r_end, &breaks, 1e-16 * scale, 1e-14, 400);
    let tail = gauss_kronrod_semi_infinite(ray_integrand, r_end, 1e-16 * scale, 1e-12, 100);
    if !(circle.converged && finite.converged) {
        return Err(Error::NoConvergence(format!(
            "Mittag-Leffler contour quadrature (alpha={alpha}, beta={beta}, gamma={gamma}, x={x})"
        )));
    }
    let ray = finite.value + tail.value;
    let value = (circle.value - ray) / PI;
    let magnitude = (circle.value.abs() + ray.abs()) / PI;
    let est = (circle.abs_error + finite.abs_error + tail.abs_error) / PI + 1e-15 * magnitude;
    Ok(EvalResult { value, est_abs_error: est, regime: Regime::Integral })
}

/// Core evaluator: `alpha > 0`, `gamma > 0`, `beta` any real, `x` finite.
pub(crate) fn ml3_unchecked(alpha: f64, beta: f64, gamma: f64, x: f64) -> Result<EvalResult> {
    if x >= 0.0 || alpha >= 1.0 {
        let r = series_result(alpha, beta, gamma, x)?;
        if x < 0.0 && r.est_abs_error > 1e-8 * r.value.abs() {
            return Err(Error::NoConvergence(format!(
                "series cancellation for alpha >= 1 at x={x} (alpha={alpha}, beta={beta})"
            )));
        }
        return Ok(r);
    }
    if x <= -ASYMPTOTIC_THRESHOLD {
        if let Some(r) = asymptotic_expansion(alpha, beta, gamma, x) {
            return Ok(r);
        }
        return contour_integral(alpha, beta, gamma, x);
    }
    if (-x).powf(1.0 / alpha) <= SERIES_MAX_SCALE {
        if let Ok(r) = series_result(alpha, beta, gamma, x) {
            if r.est_abs_error <= SERIES_ACCEPT * r.value.abs() {
                return Ok(r);
            }
        }
    }
    contour_integral(alpha, beta, gamma, x)
}

fn check_args(alpha: f64, beta: f64, gamma: f64, x: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(invalid(format!("alpha must be positive (got {alpha})")));
    }
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(invalid(format!("beta must be positive (got {beta})")));
    }
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(invalid(format!("gamma must be positive (got {gamma})")));
    }
    if !x.is_finite() {
        return Err(invalid(format!("argument must be finite (got {x})")));
    }
    Ok(())
}

/// Two-parameter Mittag-Leffler function `E_{alpha,beta}(x) = sum x^k / Gamma(k alpha + beta)`.
pub fn ml2(alpha: f64, beta: f64, x: f64) -> Result<EvalResult> {
    check_args(alpha, beta, 1.0, x)?;
    ml3_unchecked(alpha, beta, 1.0, x)
}

/// Three-parameter Mittag-Leffler function
/// `E^gamma_{alpha,beta}(x) = sum (gamma)_k x^k / (k! Gamma(k alpha + beta))`.
pub fn ml3(alpha: f64, beta: f64, gamma: f64, x: f64) -> Result<EvalResult> {
    check_args(alpha, beta, gamma, x)?;
    ml3_unchecked(alpha, beta, gamma, x)
}

/// Leading large-`t` term of `E^gamma_{alpha,beta}(-lam t^alpha)`:
/// `lam^(-gamma) t^(-alpha gamma) / Gamma(beta - alpha gamma)`.
pub fn ml3_asymptotic(alpha: f64, beta: f64, gamma: f64, lam: f64, t: f64) -> Result<f64> {
    check_args(alpha, beta, gamma, 0.0)?;
    if !(lam > 0.0) || !(t > 0.0) {
        return Err(invalid(format!("lam and t must be positive (got lam={lam}, t={t})")));
    }
    let shift = beta - alpha * gamma;
    if shift.abs() <= 1e-12 * beta.max(1.0) {
        return Err(Error::DegenerateRegime(format!(
            "beta = alpha*gamma ({beta} = {alpha}*{gamma}): leading term vanishes"
        )));
    }
    Ok(lam.powf(-gamma) * t.powf(-alpha * gamma) * rgamma(shift))
}

/// n-th derivative of `E_{alpha,beta}` via `n! E^{n+1}_{alpha, n alpha + beta}`.
pub fn ml2_derivative(n: u32, alpha: f64, beta: f64, x: f64) -> Result<f64> {
    check_args(alpha, beta, 1.0, x)?;
    let mut factorial = 1.0;
    for k in 2..=n {
        factorial *= k as f64;
    }
    Ok(factorial * ml3_unchecked(alpha, n as f64 * alpha + beta, n as f64 + 1.0, x)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::gamma::gamma as gamma_fn;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn exponential_and_constant_cases() {
        let r = ml2(1.0, 1.0, 1.5).unwrap();
        assert!(rel(r.value, 1.5f64.exp()) < 1e-15);
        assert_eq!(r.regime, Regime::Series);
        assert!(rel(ml2(0.7, 2.3, 0.0).unwrap().value, 1.0 / gamma_fn(2.3)) < 1e-15);
        assert!(rel(ml3(0.3, 2.1, 2.0, 0.0).unwrap().value, 1.0 / gamma_fn(2.1)) < 1e-15);
    }

    #[test]
    fn cosh_identity() {
        // E_{2,1}(x^2) = cosh(x)
        assert!(rel(ml2(2.0, 1.0, 4.0).unwrap().value, 2f64.cosh()) < 1e-15);
    }

    #[test]
    fn regimes_agree_near_switch_points() {
        // Series against contour integral at moderate arguments.
        for &(a, b, g, x) in &[(0.6, 1.2, 1.0, -3.0), (0.8, 2.0, 2.0, -6.0), (0.3, 1.5, 1.0, -1.5)] {
            let s = series_result(a, b, g, x).unwrap();
            let i = contour_integral(a, b, g, x).unwrap();
            assert!((s.value - i.value).abs() <= 10.0 * (s.est_abs_error + i.est_abs_error) + 1e-14);
        }
        // Contour integral against the expansion just past the threshold.
        for &(a, b, g) in &[(0.5, 1.0, 1.0), (0.9, 1.5, 2.0), (0.2, 2.5, 1.0)] {
            let x = -ASYMPTOTIC_THRESHOLD - 1.0;
            let e = asymptotic_expansion(a, b, g, x).unwrap();
            let i = contour_integral(a, b, g, x).unwrap();
            assert!(rel(e.value, i.value) < 1e-11, "{a} {b} {g}: {} vs {}", e.value, i.value);
        }
    }

    #[test]
    fn negative_beta_through_contour() {
        // E_{1/2,-1/2}(-1) against the series, which is well conditioned here.
        let s = series_result(0.5, -0.5, 1.0, -1.0).unwrap();
        let i = contour_integral(0.5, -0.5, 1.0, -1.0).unwrap();
        assert!((s.value - i.value).abs() < 1e-13);
    }

    #[test]
    fn asymptotic_formula() {
        let t: f64 = 7.0;
        let v = ml3_asymptotic(0.4, 2.1, 2.0, 1.0, t).unwrap();
        assert!(rel(v, t.powf(-0.8) / gamma_fn(1.3)) < 1e-15);
        assert!(matches!(ml3_asymptotic(0.5, 1.0, 2.0, 1.0, 3.0), Err(Error::DegenerateRegime(_))));
    }

    #[test]
    fn rejects_invalid() {
        assert!(ml2(0.0, 1.0, 1.0).is_err());
        assert!(ml2(0.5, -1.0, 1.0).is_err());
        assert!(ml3(0.5, 1.0, 0.0, 1.0).is_err());
        assert!(ml2(0.5, 1.0, f64::NAN).is_err());
    }

    #[test]
    fn derivative_of_exponential() {
        for &x in &[-2.0, 0.0, 1.3] {
            assert!(rel(ml2_derivative(1, 1.0, 1.0, x).unwrap(), f64::exp(x)) < 1e-14);
        }
        assert_eq!(ml2_derivative(0, 0.4, 1.3, -0.7).unwrap(), ml2(0.4, 1.3, -0.7).unwrap().value);
    }
}
