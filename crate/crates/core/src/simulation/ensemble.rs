//! Ensembles of independent paths, generated in parallel with per-replicate
//! random streams, plus their CSV and binary serializations.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::grid::{lagged_times, SimGrid};
use super::paths::{mfpn_from_mfpp, poisson_layer, walk_inverse};
use super::rng::ReplicateRngs;
use super::stable::MixedIncrementSampler;
use crate::error::{invalid, Error, Result};
use crate::moments::MfppConfig;
use crate::output::CsvTable;

/// What the ensemble values represent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnsembleKind {
    InverseSubordinator,
    Mfpp,
    Mfpn,
}

impl EnsembleKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EnsembleKind::InverseSubordinator => "inverse_subordinator",
            EnsembleKind::Mfpp => "mfpp",
            EnsembleKind::Mfpn => "mfpn",
        }
    }

    fn code(self) -> u8 {
        match self {
            EnsembleKind::InverseSubordinator => 0,
            EnsembleKind::Mfpp => 1,
            EnsembleKind::Mfpn => 2,
        }
    }
}

/// `paths x times` matrix of sampled values, stored row-major.
///
/// For `Mfpn` ensembles `times` are the base times `t` of `Z(t) = N(t+delta) - N(t)`;
/// the walk itself ran on `grid`, which also contains the lagged times.
#[derive(Debug, Clone, PartialEq)]
pub struct PathEnsemble {
    pub kind: EnsembleKind,
    pub times: Vec<f64>,
    pub grid: SimGrid,
    pub config: MfppConfig,
    pub seed: u64,
    pub n_paths: usize,
    pub values: Vec<f64>,
}

/// Builds a thread pool with `threads` workers (0 = rayon's default).
pub fn thread_pool(threads: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidParams(format!("cannot build thread pool: {e}")))
}

/// Runs `f(replicate, row)` for every replicate in parallel; each row has
/// `width` slots. The output does not depend on the number of workers.
pub fn fill_rows<F>(n_paths: usize, width: usize, threads: usize, f: F) -> Result<Vec<f64>>
where
    F: Fn(u64, &mut [f64]) -> Result<()> + Sync,
{
    let mut values = vec![0.0; n_paths * width];
    if width == 0 {
        return Ok(values);
    }
    let pool = thread_pool(threads)?;
    pool.install(|| values.par_chunks_mut(width).enumerate().try_for_each(|(i, row)| f(i as u64, row)))?;
    Ok(values)
}

/// Monte Carlo settings shared by all ensemble runs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimOptions {
    pub paths: usize,
    pub seed: u64,
    /// Worker threads; 0 lets the pool choose.
    pub threads: usize,
    /// Operational-time step; default 1e-3 times the smallest grid spacing.
    pub ds: Option<f64>,
    /// Operational-time cap; default from the renewal power laws.
    pub s_cap: Option<f64>,
}

impl SimOptions {
    pub fn new(paths: usize, seed: u64) -> Self {
        SimOptions { paths, seed, threads: 0, ds: None, s_cap: None }
    }
}

/// Simulates `opts.paths` replicates.
///
/// `times` are the observation times reported in the ensemble. For `Mfpn`
/// the walk grid is extended with `times + delta`; otherwise it equals `times`.
pub fn simulate_ensemble(
    config: &MfppConfig,
    times: &[f64],
    kind: EnsembleKind,
    opts: &SimOptions,
) -> Result<PathEnsemble> {
    let (n_paths, seed) = (opts.paths, opts.seed);
    if n_paths == 0 {
        return Err(invalid("need at least one path"));
    }
    let grid_times = match kind {
        EnsembleKind::Mfpn => lagged_times(times, config.delta),
        _ => times.to_vec(),
    };
    let grid = SimGrid::with_defaults(&config.params, grid_times, opts.ds, opts.s_cap)?;
    if kind == EnsembleKind::Mfpn && times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid("noise base times must be strictly increasing"));
    }
    let sampler = MixedIncrementSampler::new(&config.params, grid.ds());
    let width = times.len();
    let values = fill_rows(n_paths, width, opts.threads, |i, row| {
        let mut rngs = ReplicateRngs::new(seed, i);
        let walk = walk_inverse(&sampler, &grid, &mut rngs.first, &mut rngs.second)?;
        match kind {
            EnsembleKind::InverseSubordinator => row.copy_from_slice(&walk.y),
            EnsembleKind::Mfpp => {
                let n = poisson_layer(&walk.y, config.lambda, &mut rngs.poisson)?;
                for (dst, v) in row.iter_mut().zip(n) {
                    *dst = v as f64;
                }
            }
            EnsembleKind::Mfpn => {
                let n = poisson_layer(&walk.y, config.lambda, &mut rngs.poisson)?;
                let z = mfpn_from_mfpp(&n, &grid, config.delta, times)?;
                for (dst, v) in row.iter_mut().zip(z) {
                    *dst = v as f64;
                }
            }
        }
        Ok(())
    })?;
    Ok(PathEnsemble { kind, times: times.to_vec(), grid, config: *config, seed, n_paths, values })
}

impl PathEnsemble {
    pub fn width(&self) -> usize {
        self.times.len()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let w = self.width();
        &self.values[i * w..(i + 1) * w]
    }

    /// All replicate values at time index `j`, in replicate order.
    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.n_paths).map(|i| self.values[i * self.width() + j]).collect()
    }

    /// Index of `t` among the reported times.
    pub fn time_index(&self, t: f64) -> Option<usize> {
        self.times.iter().position(|&g| (g - t).abs() <= 1e-12 * t.abs().max(1.0))
    }

    /// Metadata echoed at the top of every output file.
    pub fn metadata(&self) -> Vec<(String, String)> {
        let p = &self.config.params;
        vec![
            ("kind".into(), self.kind.as_str().into()),
            ("alpha1".into(), p.alpha1().to_string()),
            ("alpha2".into(), p.alpha2().to_string()),
            ("c1".into(), p.c1().to_string()),
            ("c2".into(), p.c2().to_string()),
            ("lambda".into(), self.config.lambda.to_string()),
            ("delta".into(), self.config.delta.to_string()),
            ("ds".into(), self.grid.ds().to_string()),
            ("s_cap".into(), self.grid.s_cap().to_string()),
            ("paths".into(), self.n_paths.to_string()),
            ("seed".into(), self.seed.to_string()),
        ]
    }

    /// Long-format table `replicate,t,value`.
    pub fn to_table(&self) -> CsvTable {
        let mut t = CsvTable::new(vec!["replicate".into(), "t".into(), "value".into()]);
        for i in 0..self.n_paths {
            for (j, &time) in self.times.iter().enumerate() {
                t.rows.push(vec![i.to_string(), time.to_string(), self.values[i * self.width() + j].to_string()]);
            }
        }
        t
    }

    /// Compact binary summary, little endian:
    /// magic `MFPPSUM1`, kind (u8), paths (u64), times (u32), then per time
    /// `t`, mean, unbiased variance (f64 each) and a histogram: bin count (u32)
    /// followed by that many u64 counts of paths with value 0, 1, 2, ...
    /// Real-valued ensembles have an empty histogram.
    pub fn to_binary_summary(&self) -> Result<Vec<u8>> {
        let mut out = Vec::new();
        out.write_all(b"MFPPSUM1")?;
        out.write_all(&[self.kind.code()])?;
        out.write_all(&(self.n_paths as u64).to_le_bytes())?;
        out.write_all(&(self.width() as u32).to_le_bytes())?;
        for (j, &t) in self.times.iter().enumerate() {
            let col = self.column(j);
            let n = col.len() as f64;
            let mean = col.iter().sum::<f64>() / n;
            let var = if col.len() > 1 { col.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0) } else { 0.0 };
            out.write_all(&t.to_le_bytes())?;
            out.write_all(&mean.to_le_bytes())?;
            out.write_all(&var.to_le_bytes())?;
            if self.kind == EnsembleKind::InverseSubordinator {
                out.write_all(&0u32.to_le_bytes())?;
                continue;
            }
            let max = col.iter().fold(0.0f64, |m, &v| m.max(v)) as usize;
            let mut hist = vec![0u64; max + 1];
            for v in col {
                hist[v as usize] += 1;
            }
            out.write_all(&(hist.len() as u32).to_le_bytes())?;
            for h in hist {
                out.write_all(&h.to_le_bytes())?;
            }
        }
        Ok(out)
    }
}
