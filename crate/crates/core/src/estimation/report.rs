//! End-to-end dependence checks: simulate, estimate the correlation curve,
//! fit its decay exponent against the theoretical one.

use serde::{Deserialize, Serialize};

use super::conditional::conditional_noise_curve;
use super::fit::{corr_curve, fit_decay_exponent, CorrCurve, SlopeFit};
use crate::error::{invalid, Result};
use crate::moments::{mfpn_cov, mfpn_var, mfpp_cov, mfpp_var, theoretical_exponents, MfppConfig};
use crate::output::CsvTable;
use crate::simulation::{default_ds, lagged_times, simulate_ensemble, EnsembleKind, SimOptions};

/// Correlation estimator for the noise process.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimatorKind {
    /// Sample correlation of simulated `Z(s)` and `Z(t)`.
    Plain,
    /// Renewal-conditioned estimator, see [`conditional_noise_curve`].
    Conditional,
}

impl EstimatorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EstimatorKind::Plain => "plain",
            EstimatorKind::Conditional => "conditional",
        }
    }
}

/// Which process the report is about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecayProcess {
    /// Counts `N(t)`; long-range dependent.
    Counts,
    /// Increments `Z(t) = N(t + delta) - N(t)`; short-range dependent.
    Noise,
}

/// Fit window and estimator settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayOptions {
    /// Earlier time of the correlation.
    pub s: f64,
    /// `(t_min, t_max)`; default `[50 sb, 500 sb]` with `sb = s` for counts and
    /// `sb = s + delta` for noise.
    pub window: Option<(f64, f64)>,
    pub points: usize,
    /// Verdict tolerance; default 0.1 for counts and 0.15 for noise.
    pub tolerance: Option<f64>,
    pub estimator: EstimatorKind,
    /// Also evaluate the exact correlation on the window.
    pub exact: bool,
}

impl Default for DecayOptions {
    fn default() -> Self {
        DecayOptions {
            s: 1.0,
            window: None,
            points: 8,
            tolerance: None,
            estimator: EstimatorKind::Conditional,
            exact: true,
        }
    }
}

/// `points` log-spaced times from `t_min` to `t_max` inclusive.
pub fn log_window(t_min: f64, t_max: f64, points: usize) -> Result<Vec<f64>> {
    if !(t_min > 0.0 && t_max > t_min && points >= 2) {
        return Err(invalid(format!("bad window [{t_min}, {t_max}] with {points} points")));
    }
    let r = (t_max / t_min).ln();
    Ok((0..points)
        .map(|i| if i == points - 1 { t_max } else { t_min * (r * i as f64 / (points - 1) as f64).exp() })
        .collect())
}

/// Everything a dependence check produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayReport {
    pub process: DecayProcess,
    pub estimator: EstimatorKind,
    pub s: f64,
    pub window_min: f64,
    pub window_max: f64,
    pub ds: f64,
    pub fit: SlopeFit,
    pub curve: CorrCurve,
    /// Exact correlation at the curve times, when requested.
    pub exact_corr: Option<Vec<f64>>,
    /// Fit of the exact curve over the same window: the slope the
    /// simulation converges to as the number of paths grows.
    pub exact_fit: Option<SlopeFit>,
}

impl DecayReport {
    pub fn to_table(&self) -> CsvTable {
        self.curve.to_table(self.exact_corr.as_deref())
    }
}

fn window(config: &MfppConfig, process: DecayProcess, opts: &DecayOptions) -> Result<Vec<f64>> {
    let sb = match process {
        DecayProcess::Counts => opts.s,
        DecayProcess::Noise => opts.s + config.delta,
    };
    let (lo, hi) = opts.window.unwrap_or((50.0 * sb, 500.0 * sb));
    if lo <= sb {
        return Err(invalid(format!("window start {lo} must exceed {sb}")));
    }
    log_window(lo, hi, opts.points)
}

fn finish(
    config: &MfppConfig,
    process: DecayProcess,
    estimator: EstimatorKind,
    opts: &DecayOptions,
    curve: CorrCurve,
    ds: f64,
) -> Result<DecayReport> {
    let (lrd, srd) = theoretical_exponents(&config.params);
    let (target, default_tol) = match process {
        DecayProcess::Counts => (lrd, 0.1),
        DecayProcess::Noise => (srd, 0.15),
    };
    let tolerance = opts.tolerance.unwrap_or(default_tol);
    let fit = fit_decay_exponent(&curve, target, tolerance)?;
    let (exact_corr, exact_fit) = if opts.exact {
        let s = opts.s;
        let exact: Vec<f64> = match process {
            DecayProcess::Counts => {
                let vs = mfpp_var(config, s)?;
                curve
                    .t_points
                    .iter()
                    .map(|&t| Ok(mfpp_cov(config, s, t)? / (vs * mfpp_var(config, t)?).sqrt()))
                    .collect::<Result<_>>()?
            }
            DecayProcess::Noise => {
                let vs = mfpn_var(config, s)?;
                curve
                    .t_points
                    .iter()
                    .map(|&t| Ok(mfpn_cov(config, s, t)? / (vs * mfpn_var(config, t)?).sqrt()))
                    .collect::<Result<_>>()?
            }
        };
        let exact_curve = CorrCurve {
            corr: exact.clone(),
            stderr: vec![0.0; exact.len()],
            valid: vec![true; exact.len()],
            ..curve.clone()
        };
        (Some(exact), fit_decay_exponent(&exact_curve, target, tolerance).ok())
    } else {
        (None, None)
    };
    Ok(DecayReport {
        process,
        estimator,
        s: opts.s,
        window_min: curve.t_points[0],
        window_max: *curve.t_points.last().unwrap(),
        ds,
        fit,
        curve,
        exact_corr,
        exact_fit,
    })
}

/// Long-range dependence check on `Corr(N(s), N(t))`.
pub fn lrd_report(config: &MfppConfig, sim: &SimOptions, opts: &DecayOptions) -> Result<DecayReport> {
    let points = window(config, DecayProcess::Counts, opts)?;
    let mut times = vec![opts.s];
    times.extend_from_slice(&points);
    let ensemble = simulate_ensemble(config, &times, EnsembleKind::Mfpp, sim)?;
    let curve = corr_curve(&ensemble, opts.s, &points)?;
    finish(config, DecayProcess::Counts, EstimatorKind::Plain, opts, curve, ensemble.grid.ds())
}

/// Short-range dependence check on `Corr(Z(s), Z(t))`.
pub fn srd_report(config: &MfppConfig, sim: &SimOptions, opts: &DecayOptions) -> Result<DecayReport> {
    let points = window(config, DecayProcess::Noise, opts)?;
    match opts.estimator {
        EstimatorKind::Plain => {
            let mut times = vec![opts.s];
            times.extend_from_slice(&points);
            let ensemble = simulate_ensemble(config, &times, EnsembleKind::Mfpn, sim)?;
            let curve = corr_curve(&ensemble, opts.s, &points)?;
            finish(config, DecayProcess::Noise, EstimatorKind::Plain, opts, curve, ensemble.grid.ds())
        }
        EstimatorKind::Conditional => {
            let curve = conditional_noise_curve(config, opts.s, &points, sim)?;
            let ds = sim.ds.unwrap_or_else(|| default_ds(&lagged_times(&[opts.s], config.delta)));
            finish(config, DecayProcess::Noise, EstimatorKind::Conditional, opts, curve, ds)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moments::MixedStableParams;

    #[test]
    fn window_is_log_spaced() {
        let w = log_window(50.0, 500.0, 8).unwrap();
        assert_eq!(w.len(), 8);
        assert_eq!((w[0], w[7]), (50.0, 500.0));
        let r: Vec<f64> = w.windows(2).map(|p| p[1] / p[0]).collect();
        assert!(r.iter().all(|x| (x - r[0]).abs() < 1e-12));
        assert!(log_window(5.0, 5.0, 8).is_err());
    }

    #[test]
    fn default_windows() {
        let c = MfppConfig::new(MixedStableParams::new(0.9, 0.5, 0.5, 0.5).unwrap(), 1.0, 1.0).unwrap();
        let o = DecayOptions::default();
        let lrd = window(&c, DecayProcess::Counts, &o).unwrap();
        assert_eq!((lrd[0], lrd[7]), (50.0, 500.0));
        let srd = window(&c, DecayProcess::Noise, &o).unwrap();
        assert_eq!((srd[0], srd[7]), (100.0, 1000.0));
    }

    #[test]
    fn small_run_is_deterministic() {
        let c = MfppConfig::new(MixedStableParams::new(0.9, 0.5, 0.5, 0.5).unwrap(), 1.0, 1.0).unwrap();
        let o = DecayOptions { window: Some((5.0, 20.0)), points: 4, exact: false, ..Default::default() };
        let mut sim = SimOptions::new(400, 3);
        sim.ds = Some(0.01);
        let a = srd_report(&c, &sim, &o).unwrap();
        sim.threads = 2;
        let b = srd_report(&c, &sim, &o).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.curve.n_paths, 400);
    }
}
