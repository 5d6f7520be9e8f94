//! Sample covariance and correlation with delta-method standard errors.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::simulation::PathEnsemble;

fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

fn require_len(n: usize, what: &str) -> Result<()> {
    if n < 2 {
        return Err(Error::InsufficientData(format!("{what} needs at least 2 replicates (got {n})")));
    }
    Ok(())
}

/// Unbiased sample covariance of paired samples with its standard error
/// `sqrt((m22 - c^2) / R)`, `m22` the mean of squared centered products.
pub fn sample_cov(x: &[f64], y: &[f64]) -> Result<(f64, f64)> {
    if x.len() != y.len() {
        return Err(Error::InsufficientData(format!("paired samples differ in length ({} vs {})", x.len(), y.len())));
    }
    require_len(x.len(), "covariance")?;
    let n = x.len() as f64;
    let (mx, my) = (mean(x), mean(y));
    let mut c = 0.0;
    let mut m22 = 0.0;
    for (a, b) in x.iter().zip(y) {
        let p = (a - mx) * (b - my);
        c += p;
        m22 += p * p;
    }
    let biased = c / n;
    let var_of_product = (m22 / n - biased * biased).max(0.0);
    Ok((c / (n - 1.0), (var_of_product / n).sqrt()))
}

/// `(cov, stderr)` between the ensemble columns `s_index` and `t_index`.
pub fn empirical_cov(ensemble: &PathEnsemble, s_index: usize, t_index: usize) -> Result<(f64, f64)> {
    let w = ensemble.width();
    if s_index >= w || t_index >= w {
        return Err(Error::InsufficientData(format!("time index out of range ({s_index}, {t_index}) for width {w}")));
    }
    sample_cov(&ensemble.column(s_index), &ensemble.column(t_index))
}

/// One correlation estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrEstimate {
    pub corr: f64,
    pub stderr: f64,
    pub cov: f64,
    pub var_s: f64,
    pub var_t: f64,
    /// False when either variance is not positive; `corr` is then 0.
    pub valid: bool,
}

/// Per-replicate moment observations of a pair `(X, Y)`.
///
/// Each slot holds an unbiased per-replicate estimate of the named moment:
/// the values themselves for plain samples, or conditional moments
/// `E[X | F]`, `E[X^2 | F]`, ... for some information `F` per replicate.
/// The covariance may be taken against a shifted copy `Y - c` (any constant
/// `c`), observed through `y_shifted` and `x_y_shifted`; for plain samples
/// pass `y` and `xy`.
#[derive(Debug, Clone, Copy)]
pub struct PairMoments<'a> {
    pub x: &'a [f64],
    pub x2: &'a [f64],
    pub y: &'a [f64],
    pub y2: &'a [f64],
    pub y_shifted: &'a [f64],
    pub x_y_shifted: &'a [f64],
}

/// `Corr(X, Y) = (E[X(Y - c)] - EX E[Y - c]) / sqrt(Var X Var Y)` from
/// per-replicate moment observations, with `1/R` normalization.
///
/// The standard error comes from the influence function of the ratio.
pub fn correlation_from_moments(m: &PairMoments<'_>) -> Result<CorrEstimate> {
    let len = m.x.len();
    if [m.x2.len(), m.y.len(), m.y2.len(), m.y_shifted.len(), m.x_y_shifted.len()].iter().any(|&l| l != len) {
        return Err(Error::InsufficientData("paired samples differ in length".into()));
    }
    require_len(len, "correlation")?;
    let n = len as f64;
    let (mx, mx2, my, my2) = (mean(m.x), mean(m.x2), mean(m.y), mean(m.y2));
    let (md, mxd) = (mean(m.y_shifted), mean(m.x_y_shifted));
    let cov = mxd - mx * md;
    let var_s = mx2 - mx * mx;
    let var_t = my2 - my * my;
    if !(var_s > 0.0 && var_t > 0.0) {
        return Ok(CorrEstimate { corr: 0.0, stderr: 0.0, cov, var_s, var_t, valid: false });
    }
    let scale = (var_s * var_t).sqrt();
    let r = cov / scale;
    let mut sum_sq = 0.0;
    for i in 0..len {
        let a = m.x[i] - mx;
        let b = m.y[i] - my;
        let inf_cov = (m.x_y_shifted[i] - mxd) - md * a - mx * (m.y_shifted[i] - md);
        let inf_vs = (m.x2[i] - mx2) - 2.0 * mx * a;
        let inf_vt = (m.y2[i] - my2) - 2.0 * my * b;
        let inf_r = inf_cov / scale - 0.5 * r * (inf_vs / var_s + inf_vt / var_t);
        sum_sq += inf_r * inf_r;
    }
    Ok(CorrEstimate { corr: r.clamp(-1.0, 1.0), stderr: sum_sq.sqrt() / n, cov, var_s, var_t, valid: true })
}

/// Sample correlation of paired draws.
pub fn correlation(x: &[f64], y: &[f64]) -> Result<CorrEstimate> {
    if x.len() != y.len() {
        return Err(Error::InsufficientData("paired samples differ in length".into()));
    }
    let x2: Vec<f64> = x.iter().map(|v| v * v).collect();
    let y2: Vec<f64> = y.iter().map(|v| v * v).collect();
    let xy: Vec<f64> = x.iter().zip(y).map(|(a, b)| a * b).collect();
    correlation_from_moments(&PairMoments { x, x2: &x2, y, y2: &y2, y_shifted: y, x_y_shifted: &xy })
}
