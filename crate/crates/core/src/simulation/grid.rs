use serde::Serialize;

use crate::error::{invalid, Result};
use crate::moments::{renewal_u_asymptotic, MixedStableParams, TimeRegime};

/// Observation times plus the operational-time discretization of the walk.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimGrid {
    t_grid: Vec<f64>,
    ds: f64,
    s_cap: f64,
}

/// Default step: 1e-3 times the smallest spacing between observation times
/// (times the single time when there is only one point).
pub fn default_ds(t_grid: &[f64]) -> f64 {
    let spacing = t_grid.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    let spacing = if spacing.is_finite() { spacing } else { t_grid.last().copied().unwrap_or(1.0) };
    1e-3 * if spacing > 0.0 { spacing } else { 1.0 }
}

/// Default operational-time cap: ten times the power-law renewal scale at the
/// last observation time (both the large- and small-time laws are considered),
/// plus a hundred steps.
pub fn default_s_cap(params: &MixedStableParams, t_max: f64, ds: f64) -> f64 {
    let t = t_max.max(1e-12);
    let mut scale: f64 = 0.0;
    for regime in [TimeRegime::SmallT, TimeRegime::LargeT] {
        if let Ok(v) = renewal_u_asymptotic(params, t, regime) {
            scale = scale.max(v);
        }
    }
    10.0 * scale + 100.0 * ds
}

impl SimGrid {
    /// `t_grid` strictly increasing and non-negative; `ds > 0`; `s_cap / ds < 2^63`.
    pub fn new(t_grid: Vec<f64>, ds: f64, s_cap: f64) -> Result<Self> {
        if t_grid.is_empty() {
            return Err(invalid("time grid is empty"));
        }
        if t_grid[0] < 0.0 || t_grid.windows(2).any(|w| w[1] <= w[0]) || t_grid.iter().any(|t| !t.is_finite()) {
            return Err(invalid("time grid must be finite, non-negative and strictly increasing"));
        }
        if !(ds > 0.0 && ds.is_finite()) {
            return Err(invalid(format!("ds must be positive (got {ds})")));
        }
        if !(s_cap > 0.0) || s_cap / ds >= 9.2e18 {
            return Err(invalid(format!("s_cap must be positive with s_cap/ds < 2^63 (got {s_cap}, ds {ds})")));
        }
        Ok(SimGrid { t_grid, ds, s_cap })
    }

    /// Grid with the default `ds` and `s_cap` unless overridden.
    pub fn with_defaults(
        params: &MixedStableParams,
        t_grid: Vec<f64>,
        ds: Option<f64>,
        s_cap: Option<f64>,
    ) -> Result<Self> {
        let ds = ds.unwrap_or_else(|| default_ds(&t_grid));
        let t_max = t_grid.last().copied().unwrap_or(0.0);
        let s_cap = s_cap.unwrap_or_else(|| default_s_cap(params, t_max, ds));
        Self::new(t_grid, ds, s_cap)
    }

    pub fn t_grid(&self) -> &[f64] {
        &self.t_grid
    }

    pub fn ds(&self) -> f64 {
        self.ds
    }

    pub fn s_cap(&self) -> f64 {
        self.s_cap
    }

    pub fn len(&self) -> usize {
        self.t_grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t_grid.is_empty()
    }

    /// Index of the grid point equal to `t` (relative tolerance 1e-12).
    pub fn index_of(&self, t: f64) -> Option<usize> {
        self.t_grid.iter().position(|&g| (g - t).abs() <= 1e-12 * t.abs().max(1.0))
    }
}

/// Sorted union of `points` and `points + delta`, merging values closer than 1e-12 relative.
pub fn lagged_times(points: &[f64], delta: f64) -> Vec<f64> {
    let mut all: Vec<f64> = points.iter().flat_map(|&t| [t, t + delta]).collect();
    all.sort_by(|a, b| a.total_cmp(b));
    all.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs().max(1.0));
    all
}
