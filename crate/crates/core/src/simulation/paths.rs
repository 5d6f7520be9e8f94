//! Single sample paths of `Y`, `N`, `Z` and the non-homogeneous variant.

use rand::Rng;
use rand_distr::{Distribution, Poisson};

use super::grid::SimGrid;
use super::rng::ReplicateRngs;
use super::stable::MixedIncrementSampler;
use crate::error::{invalid, Error, Result};
use crate::moments::{MfppConfig, MixedStableParams};

/// Result of walking the subordinator past the last grid time.
#[derive(Debug, Clone, PartialEq)]
pub struct Walk {
    /// `Y(t_j)` for each grid time.
    pub y: Vec<f64>,
    /// `L` at the first step exceeding the last grid time.
    pub overshoot_level: f64,
    /// Number of steps taken.
    pub steps: u64,
}

/// Walks `L(k ds)` and records `Y(t_j) = (k - 1) ds` for the first `k` with
/// `L(k ds) > t_j`. Stops as soon as the last grid time is exceeded.
pub fn walk_inverse<R1: Rng + ?Sized, R2: Rng + ?Sized>(
    sampler: &MixedIncrementSampler,
    grid: &SimGrid,
    first_rng: &mut R1,
    second_rng: &mut R2,
) -> Result<Walk> {
    let ds = grid.ds();
    let max_steps = (grid.s_cap() / ds).floor() as u64;
    let mut y = Vec::with_capacity(grid.len());
    let mut level = 0.0;
    let mut k: u64 = 0;
    for &t in grid.t_grid() {
        while level <= t {
            if k >= max_steps {
                return Err(Error::SCapExceeded { cap: grid.s_cap(), t });
            }
            k += 1;
            level += sampler.sample(first_rng, second_rng);
        }
        y.push((k - 1) as f64 * ds);
    }
    Ok(Walk { y, overshoot_level: level, steps: k })
}

/// One path of the inverse subordinator on the grid.
pub fn simulate_inverse_path(params: &MixedStableParams, grid: &SimGrid, rngs: &mut ReplicateRngs) -> Result<Vec<f64>> {
    let sampler = MixedIncrementSampler::new(params, grid.ds());
    Ok(walk_inverse(&sampler, grid, &mut rngs.first, &mut rngs.second)?.y)
}

fn poisson_count<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> Result<u64> {
    if mean <= 0.0 {
        return Ok(0);
    }
    let d = Poisson::new(mean).map_err(|e| invalid(format!("Poisson mean {mean}: {e}")))?;
    Ok(d.sample(rng) as u64)
}

/// Counts `N(t_j)` from a `Y` row by independent Poisson increments with means
/// `lambda (Y(t_j) - Y(t_{j-1}))`, starting from `N(0) = 0`.
pub fn poisson_layer<R: Rng + ?Sized>(y: &[f64], lambda: f64, rng: &mut R) -> Result<Vec<u64>> {
    let mut prev = 0.0;
    let mut count = 0u64;
    let mut out = Vec::with_capacity(y.len());
    for &v in y {
        count += poisson_count(lambda * (v - prev), rng)?;
        prev = v;
        out.push(count);
    }
    Ok(out)
}

/// One path of the MFPP on the grid.
pub fn simulate_mfpp_path(config: &MfppConfig, grid: &SimGrid, rngs: &mut ReplicateRngs) -> Result<Vec<u64>> {
    let y = simulate_inverse_path(&config.params, grid, rngs)?;
    poisson_layer(&y, config.lambda, &mut rngs.poisson)
}

/// `Z(t) = N(t + delta) - N(t)` for each `t` in `points`; both times must be on the grid.
pub fn mfpn_from_mfpp(row: &[u64], grid: &SimGrid, delta: f64, points: &[f64]) -> Result<Vec<u64>> {
    if row.len() != grid.len() {
        return Err(Error::GridMismatch(format!("row has {} values for {} grid times", row.len(), grid.len())));
    }
    points
        .iter()
        .map(|&t| {
            let i = grid.index_of(t).ok_or_else(|| Error::GridMismatch(format!("time {t} not on the grid")))?;
            let j = grid
                .index_of(t + delta)
                .ok_or_else(|| Error::GridMismatch(format!("time {t} + delta = {} not on the grid", t + delta)))?;
            Ok(row[j] - row[i])
        })
        .collect()
}

/// One path of `N(Lambda(Y(t)), 1)` for a nondecreasing `Lambda` with `Lambda(0) = 0`.
pub fn simulate_mfnpp_path<F: Fn(f64) -> f64>(
    params: &MixedStableParams,
    intensity: F,
    grid: &SimGrid,
    rngs: &mut ReplicateRngs,
) -> Result<Vec<u64>> {
    if intensity(0.0) != 0.0 {
        return Err(invalid("cumulative intensity must vanish at 0"));
    }
    let y = simulate_inverse_path(params, grid, rngs)?;
    let mut prev = 0.0;
    let mut count = 0u64;
    let mut out = Vec::with_capacity(y.len());
    for &v in &y {
        let level = intensity(v);
        if !(level >= prev) {
            return Err(Error::NonMonotoneLambda(v));
        }
        count += poisson_count(level - prev, &mut rngs.poisson)?;
        prev = level;
        out.push(count);
    }
    Ok(out)
}
