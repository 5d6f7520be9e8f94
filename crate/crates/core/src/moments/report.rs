use serde::Serialize;

use super::covariance::{cov_y_asymptotic, cov_y_series, var_y_asymptotic, var_y_detailed};
use super::mfpp::{mfpp_cov, mfpp_mean, mfpp_var};
use super::params::MfppConfig;
use super::renewal::{renewal_u, renewal_u_asymptotic, TimeRegime};
use crate::error::{invalid, Result};
use crate::output::CsvTable;
use crate::special::gamma;

/// Covariance columns against a fixed earlier time `s`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CovColumns {
    pub s: f64,
    pub cov_y: Vec<f64>,
    pub cov_y_asym: Vec<f64>,
    pub mfpp_cov: Vec<f64>,
}

/// Analytic moments on a time grid.
///
/// The asymptotic columns use the large-time laws when `c2 > 0`; for `c2 = 0`
/// they hold the pure alpha1-stable formulas, which are exact.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentReport {
    pub t_grid: Vec<f64>,
    pub u: Vec<f64>,
    pub var_y: Vec<f64>,
    pub u_asym: Vec<f64>,
    pub var_y_asym: Vec<f64>,
    pub mfpp_mean: Vec<f64>,
    pub mfpp_var: Vec<f64>,
    /// Grid points whose variance was clamped from a tiny negative value to 0.
    pub clamped: Vec<bool>,
    pub cov: Option<CovColumns>,
}

/// Evaluates all moment columns on `t_grid` (strictly increasing, positive).
pub fn moment_report(config: &MfppConfig, t_grid: &[f64], cov_s: Option<f64>) -> Result<MomentReport> {
    if t_grid.is_empty() {
        return Err(invalid("empty time grid"));
    }
    if t_grid[0] <= 0.0 || t_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid("time grid must be positive and strictly increasing"));
    }
    let p = &config.params;
    let mut r = MomentReport {
        t_grid: t_grid.to_vec(),
        u: vec![],
        var_y: vec![],
        u_asym: vec![],
        var_y_asym: vec![],
        mfpp_mean: vec![],
        mfpp_var: vec![],
        clamped: vec![],
        cov: cov_s.map(|s| CovColumns { s, cov_y: vec![], cov_y_asym: vec![], mfpp_cov: vec![] }),
    };
    for &t in t_grid {
        r.u.push(renewal_u(p, t)?);
        let v = var_y_detailed(p, t)?;
        r.var_y.push(v.value);
        r.clamped.push(v.clamped);
        if p.c2() > 0.0 {
            r.u_asym.push(renewal_u_asymptotic(p, t, TimeRegime::LargeT)?);
            r.var_y_asym.push(var_y_asymptotic(p, t)?);
        } else {
            let a = p.alpha1();
            let g = gamma(a + 1.0);
            r.u_asym.push(renewal_u_asymptotic(p, t, TimeRegime::SmallT)?);
            r.var_y_asym.push(t.powf(2.0 * a) * (2.0 / gamma(2.0 * a + 1.0) - 1.0 / (g * g)));
        }
        r.mfpp_mean.push(mfpp_mean(config, t)?);
        r.mfpp_var.push(mfpp_var(config, t)?);
        if let Some(c) = r.cov.as_mut() {
            c.cov_y.push(cov_y_series(p, c.s, t)?);
            c.cov_y_asym.push(cov_y_asymptotic(p, c.s)?);
            c.mfpp_cov.push(mfpp_cov(config, c.s, t)?);
        }
    }
    Ok(r)
}

impl MomentReport {
    /// One row per grid point, one column per quantity.
    pub fn to_table(&self) -> CsvTable {
        let mut header: Vec<String> =
            ["t", "U", "varY", "U_asym", "varY_asym", "mfpp_mean", "mfpp_var"].iter().map(|s| s.to_string()).collect();
        if self.cov.is_some() {
            header.extend(["covY", "covY_asym", "mfpp_cov"].iter().map(|s| s.to_string()));
        }
        let mut table = CsvTable::new(header);
        for i in 0..self.t_grid.len() {
            let mut row = vec![
                self.t_grid[i],
                self.u[i],
                self.var_y[i],
                self.u_asym[i],
                self.var_y_asym[i],
                self.mfpp_mean[i],
                self.mfpp_var[i],
            ];
            if let Some(c) = &self.cov {
                row.extend([c.cov_y[i], c.cov_y_asym[i], c.mfpp_cov[i]]);
            }
            table.push_numeric(&row);
        }
        table
    }
}
