//! Correlation curves and log-log decay fits.

use serde::{Deserialize, Serialize};

use super::stats::{correlation, CorrEstimate};
use crate::error::{Error, Result};
use crate::output::CsvTable;
use crate::simulation::PathEnsemble;

/// `Corr(X(s), X(t))` over a set of later times.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrCurve {
    pub s: f64,
    pub t_points: Vec<f64>,
    pub corr: Vec<f64>,
    pub stderr: Vec<f64>,
    /// False where a variance estimate was not positive.
    pub valid: Vec<bool>,
    /// Covariance and the two variances behind each correlation.
    pub cov: Vec<f64>,
    pub var_s: Vec<f64>,
    pub var_t: Vec<f64>,
    pub n_paths: usize,
}

impl CorrCurve {
    /// Assembles a curve from per-point estimates.
    pub fn from_estimates(s: f64, t_points: Vec<f64>, estimates: &[CorrEstimate], n_paths: usize) -> Self {
        CorrCurve {
            s,
            t_points,
            corr: estimates.iter().map(|e| e.corr).collect(),
            stderr: estimates.iter().map(|e| e.stderr).collect(),
            valid: estimates.iter().map(|e| e.valid).collect(),
            cov: estimates.iter().map(|e| e.cov).collect(),
            var_s: estimates.iter().map(|e| e.var_s).collect(),
            var_t: estimates.iter().map(|e| e.var_t).collect(),
            n_paths,
        }
    }

    /// Table `t,corr,stderr,valid,cov,var_s,var_t`, plus `exact_corr` when a
    /// reference curve is given.
    pub fn to_table(&self, exact: Option<&[f64]>) -> CsvTable {
        let mut header: Vec<String> =
            ["t", "corr", "stderr", "valid", "cov", "var_s", "var_t"].iter().map(|s| s.to_string()).collect();
        if exact.is_some() {
            header.push("exact_corr".into());
        }
        let mut table = CsvTable::new(header);
        for i in 0..self.t_points.len() {
            let mut row = vec![
                self.t_points[i].to_string(),
                self.corr[i].to_string(),
                self.stderr[i].to_string(),
                self.valid[i].to_string(),
                self.cov[i].to_string(),
                self.var_s[i].to_string(),
                self.var_t[i].to_string(),
            ];
            if let Some(e) = exact {
                row.push(e[i].to_string());
            }
            table.rows.push(row);
        }
        table
    }
}

/// Correlation of the ensemble column at `s` with the columns at `t_points`.
pub fn corr_curve(ensemble: &PathEnsemble, s: f64, t_points: &[f64]) -> Result<CorrCurve> {
    let index = |t: f64| {
        ensemble.time_index(t).ok_or_else(|| Error::InsufficientData(format!("time {t} is not in the ensemble")))
    };
    if t_points.windows(2).any(|w| w[1] <= w[0]) || t_points.iter().any(|&t| t < s) {
        return Err(Error::InsufficientData("correlation times must increase and not precede s".into()));
    }
    let xs = ensemble.column(index(s)?);
    let mut estimates = Vec::with_capacity(t_points.len());
    for &t in t_points {
        let ys = ensemble.column(index(t)?);
        estimates.push(correlation(&xs, &ys)?);
    }
    Ok(CorrCurve::from_estimates(s, t_points.to_vec(), &estimates, ensemble.n_paths))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Consistent,
    Inconsistent,
}

/// Which side of the dependence dichotomy the fitted exponent falls on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dependence {
    /// Exponent in (0, 1).
    LongRange,
    /// Exponent in (1, 2).
    ShortRange,
    Neither,
}

impl Dependence {
    pub fn classify(exponent: f64) -> Self {
        if exponent > 0.0 && exponent < 1.0 {
            Dependence::LongRange
        } else if exponent > 1.0 && exponent < 2.0 {
            Dependence::ShortRange
        } else {
            Dependence::Neither
        }
    }
}

/// Least-squares fit of `log corr = intercept + slope log t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_stderr: f64,
    pub n_used: usize,
    /// Points dropped for non-positive (or invalid) correlation.
    pub dropped: usize,
    /// Expected decay exponent; the fitted exponent is `-slope`.
    pub target: f64,
    pub tolerance: f64,
    pub exponent: f64,
    pub verdict: Verdict,
    pub dependence: Dependence,
}

/// Fits the decay exponent of a correlation curve.
///
/// The verdict is consistent iff `|-slope - target| <= max(3 slope_stderr, tolerance)`.
pub fn fit_decay_exponent(curve: &CorrCurve, target: f64, tolerance: f64) -> Result<SlopeFit> {
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for i in 0..curve.t_points.len() {
        if curve.valid[i] && curve.corr[i] > 0.0 && curve.t_points[i] > 0.0 {
            xs.push(curve.t_points[i].ln());
            ys.push(curve.corr[i].ln());
        }
    }
    let n_used = xs.len();
    let dropped = curve.t_points.len() - n_used;
    if n_used < 3 {
        return Err(Error::InsufficientData(format!(
            "need at least 3 positive correlations for a fit ({n_used} usable, {dropped} dropped)"
        )));
    }
    let n = n_used as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx <= 0.0 {
        return Err(Error::InsufficientData("fit times are not distinct".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    let slope_stderr = (ssr / (n - 2.0) / sxx).sqrt();
    let exponent = -slope;
    let verdict = if (exponent - target).abs() <= (3.0 * slope_stderr).max(tolerance) {
        Verdict::Consistent
    } else {
        Verdict::Inconsistent
    };
    Ok(SlopeFit {
        slope,
        intercept,
        slope_stderr,
        n_used,
        dropped,
        target,
        tolerance,
        exponent,
        verdict,
        dependence: Dependence::classify(exponent),
    })
}
