//! Unregularized incomplete Beta function.

use super::gamma::beta;
use crate::error::{Error, Result};

const SMALL_X: f64 = 1e-8;
const FPMIN: f64 = 1e-300;

/// Continued fraction for B(a, b; x) * a / (x^a (1 - x)^b), modified Lentz.
fn beta_continued_fraction(a: f64, b: f64, x: f64) -> Result<f64> {
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < FPMIN {
        d = FPMIN;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..10_000 {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = 1.0 + aa / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = 1.0 + aa / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            return Ok(h);
        }
    }
    Err(Error::NoConvergence(format!("incomplete beta continued fraction a={a} b={b} x={x}")))
}

/// Leading two terms of the expansion at small x: x^a/a - (b-1) x^(a+1)/(a+1).
pub fn incomplete_beta_small_x(a: f64, b: f64, x: f64) -> f64 {
    x.powf(a) * (1.0 / a - (b - 1.0) * x / (a + 1.0))
}

/// `B(a, b; x) = int_0^x z^(a-1) (1-z)^(b-1) dz` for `a, b > 0`, `x` in `[0, 1]`.
pub fn incomplete_beta(a: f64, b: f64, x: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
        return Err(Error::Domain(format!("incomplete beta needs a, b > 0 (got a={a}, b={b})")));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("incomplete beta needs x in [0, 1] (got {x})")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == 1.0 {
        return Ok(beta(a, b));
    }
    if x < SMALL_X {
        return Ok(incomplete_beta_small_x(a, b, x));
    }
    if x > (a + 1.0) / (a + b + 2.0) {
        let y = 1.0 - x;
        let tail = if y < SMALL_X {
            incomplete_beta_small_x(b, a, y)
        } else {
            y.powf(b) * x.powf(a) * beta_continued_fraction(b, a, y)? / b
        };
        return Ok(beta(a, b) - tail);
    }
    Ok(x.powf(a) * (1.0 - x).powf(b) * beta_continued_fraction(a, b, x)? / a)
}
