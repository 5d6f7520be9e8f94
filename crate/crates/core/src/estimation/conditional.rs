//! Renewal-conditioned estimator of the noise correlation `Corr(Z(s), Z(t))`.
//!
//! Each replicate walks the subordinator only until it first exceeds the
//! level `b = s + delta`, landing at `x`. From that step on the walk restarts
//! afresh, so given the walk `F`,
//!
//! ```text
//! E[Z(t) | F]   = lambda g(t - x),              g(u) = U(u + delta)^+ - U(u)^+
//! E[Z(t)^2 | F] = lambda g(t - x) + lambda^2 h(t - x),
//! h(u) = E[(Y(u + delta)^+ - Y(u)^+)^2]
//! ```
//!
//! with `U(v)^+ = U(max(v, 0))` and likewise for `Y`. On the same walk
//! `E[Z(s) | F] = lambda dY` and `E[Z(s)^2 | F] = lambda dY + (lambda dY)^2`
//! with `dY = Y(b) - Y(s)`; `Z(s)` and `Z(t)` are conditionally independent
//! given `F`, so no Poisson counts are drawn at all.
//!
//! The remaining noise at large `t` comes from the heavy-tailed jump that
//! crosses `b`. Crossings by a jump larger than `delta` are therefore not
//! sampled but summed in expectation over every step taken before the actual
//! crossing: from a pre-step level `l` the step crosses by a large jump with
//! weight `ds nu(j) dj` on `j > max(delta, b - l)`, where `nu` is the Lévy
//! density of the subordinator. Crossings by a jump of at most `delta` use
//! the sampled landing point. The split is exact for the discretized walk up
//! to the `O(ds nu(delta, inf))` error of replacing the step law by
//! `ds nu` above `delta`, and up to the `ds` bias of using the continuous `U`
//! for the restarted future.
//!
//! For the covariance the summed quantity is `g(t - x) - g(t - b)` rather
//! than `g(t - x)`: the shift does not change the covariance but makes the
//! per-step terms vanish unless the jump reaches close to `t`, so the
//! difference between the hypothetical `dY` of each step and the realized
//! one no longer adds noise of order `g(t)`.

use super::fit::CorrCurve;
use super::stats::{correlation_from_moments, CorrEstimate, PairMoments};
use crate::error::{invalid, Error, Result};
use crate::moments::{half_second_moment, increment_second_moment, renewal_u, MfppConfig, MixedStableParams};
use crate::quadrature::tanh_sinh;
use crate::simulation::{fill_rows, MixedIncrementSampler, ReplicateRngs, SimGrid, SimOptions};
use crate::special::gamma;

/// Values on a uniform grid in `ln x`, interpolated with four-point
/// Lagrange polynomials in `(ln x, ln f)`.
#[derive(Debug, Clone)]
struct LogTable {
    ln_start: f64,
    step: f64,
    ln_values: Vec<[f64; 2]>,
}

/// Four-point Lagrange interpolation at fractional index `pos` of `values`.
fn lagrange4(values: &[[f64; 2]], pos: f64) -> [f64; 2] {
    let n = values.len();
    let i0 = (pos.floor() as isize - 1).clamp(0, n as isize - 4) as usize;
    let mut out = [0.0; 2];
    for j in 0..4 {
        let mut w = 1.0;
        for m in 0..4 {
            if m != j {
                w *= (pos - (i0 + m) as f64) / (j as f64 - m as f64);
            }
        }
        out[0] += w * values[i0 + j][0];
        out[1] += w * values[i0 + j][1];
    }
    out
}

impl LogTable {
    fn build<F: Fn(f64) -> Result<[f64; 2]>>(start: f64, end: f64, per_decade: usize, f: F) -> Result<Self> {
        let ln_start = start.ln();
        let n = (((end / start).log10() * per_decade as f64).ceil() as usize).max(4);
        let step = (end.ln() - ln_start) / (n - 1) as f64;
        let mut ln_values = Vec::with_capacity(n);
        for i in 0..n {
            let x = if i == n - 1 { end } else { (ln_start + i as f64 * step).exp() };
            let v = f(x)?;
            ln_values.push([v[0].ln(), v[1].ln()]);
        }
        Ok(LogTable { ln_start, step, ln_values })
    }

    fn position(&self, x: f64) -> f64 {
        (x.ln() - self.ln_start) / self.step
    }

    fn contains(&self, x: f64) -> bool {
        let pos = self.position(x);
        pos >= 0.0 && pos <= (self.ln_values.len() - 1) as f64
    }

    fn eval(&self, x: f64) -> [f64; 2] {
        let pos = self.position(x).clamp(0.0, (self.ln_values.len() - 1) as f64);
        let v = lagrange4(&self.ln_values, pos);
        [v[0].exp(), v[1].exp()]
    }
}

/// Lookup for `(g(u), h(u))` on `u in (-delta, u_max]`; arguments outside
/// the tabulated range are evaluated directly.
#[derive(Debug, Clone)]
pub struct RenewalTable {
    params: MixedStableParams,
    delta: f64,
    /// `u in (-delta, 0]`, indexed by `v = u + delta`.
    head: LogTable,
    /// `u in (0, u_max]`.
    tail: Option<LogTable>,
}

const TABLE_FLOOR: f64 = 1e-8;
const PER_DECADE: usize = 100;

impl RenewalTable {
    pub fn new(params: &MixedStableParams, delta: f64, u_max: f64) -> Result<Self> {
        if !(delta > 0.0 && u_max.is_finite()) {
            return Err(invalid(format!("renewal table needs delta > 0 and finite range (got {delta}, {u_max})")));
        }
        let p = *params;
        let floor = TABLE_FLOOR * delta;
        let head = LogTable::build(floor, delta, PER_DECADE, |v| head_values(&p, v))?;
        let tail = if u_max > floor {
            Some(LogTable::build(floor, u_max, PER_DECADE, |u| tail_values(&p, delta, u))?)
        } else {
            None
        };
        Ok(RenewalTable { params: p, delta, head, tail })
    }

    /// `(g(u), h(u))`.
    pub fn eval(&self, u: f64) -> Result<[f64; 2]> {
        if u <= -self.delta {
            return Ok([0.0, 0.0]);
        }
        if u <= 0.0 {
            let v = u + self.delta;
            return if self.head.contains(v) { Ok(self.head.eval(v)) } else { head_values(&self.params, v) };
        }
        match &self.tail {
            Some(t) if t.contains(u) => Ok(t.eval(u)),
            _ => tail_values(&self.params, self.delta, u),
        }
    }

    /// As [`eval`](Self::eval) but never leaves the tables: arguments are
    /// clamped to the tabulated range. For use inside quadratures, where
    /// points extremely close to the kinks carry negligible weight.
    fn eval_clamped(&self, u: f64) -> [f64; 2] {
        if u <= -self.delta {
            return [0.0, 0.0];
        }
        match (&self.tail, u > 0.0) {
            (Some(t), true) => t.eval(u),
            _ => self.head.eval((u + self.delta).min(self.delta)),
        }
    }
}

fn head_values(params: &MixedStableParams, v: f64) -> Result<[f64; 2]> {
    Ok([renewal_u(params, v)?, 2.0 * half_second_moment(params, v)?])
}

fn tail_values(params: &MixedStableParams, delta: f64, u: f64) -> Result<[f64; 2]> {
    let g = renewal_u(params, u + delta)? - renewal_u(params, u)?;
    Ok([g, increment_second_moment(params, u, delta)?])
}

/// Lévy tail `nu(y, inf) = sum_i c_i y^(-alpha_i) / Gamma(1 - alpha_i)`.
pub fn levy_tail(params: &MixedStableParams, y: f64) -> f64 {
    [(params.alpha1(), params.c1()), (params.alpha2(), params.c2())]
        .iter()
        .filter(|(_, c)| *c > 0.0)
        .map(|&(a, c)| c / gamma(1.0 - a) * y.powf(-a))
        .sum()
}

/// Lévy density of the mixed stable subordinator,
/// `sum_i c_i alpha_i / Gamma(1 - alpha_i) j^(-1 - alpha_i)`.
pub fn levy_density(params: &MixedStableParams, j: f64) -> f64 {
    [(params.alpha1(), params.c1()), (params.alpha2(), params.c2())]
        .iter()
        .filter(|(_, c)| *c > 0.0)
        .map(|&(a, c)| c * a / gamma(1.0 - a) * j.powf(-1.0 - a))
        .sum()
}

/// Expected `(g, h)` contribution of a large crossing jump, per step, as a
/// function of the pre-step level `l in [0, b]` for one correlation time `t`:
/// `ds int_{max(delta, b - l)}^inf (g, h)(t - l - j) nu(j) dj`.
///
/// Tabulated on uniform grids over `[0, s]` and `[s, b]`, where the lower
/// limit changes form.
#[derive(Debug, Clone)]
pub struct JumpTable {
    s: f64,
    low: Option<(f64, Vec<[f64; 2]>)>,
    high: (f64, Vec<[f64; 2]>),
}

const JUMP_NODES: usize = 129;

impl JumpTable {
    pub fn new(
        params: &MixedStableParams,
        renewal: &RenewalTable,
        s: f64,
        delta: f64,
        ds: f64,
        t: f64,
    ) -> Result<Self> {
        let b = s + delta;
        let node = |l: f64| jump_expectation(params, renewal, b, delta, ds, t, l);
        let grid = |lo: f64, hi: f64| -> Result<(f64, Vec<[f64; 2]>)> {
            let step = (hi - lo) / (JUMP_NODES - 1) as f64;
            let values = (0..JUMP_NODES).map(|i| node(lo + i as f64 * step)).collect::<Result<_>>()?;
            Ok((step, values))
        };
        let low = if s > 0.0 { Some(grid(0.0, s)?) } else { None };
        let high = grid(s, b)?;
        Ok(JumpTable { s, low, high })
    }

    pub fn eval(&self, level: f64) -> [f64; 2] {
        match &self.low {
            Some((step, values)) if level < self.s => lagrange4(values, (level / step).max(0.0)),
            _ => {
                let (step, values) = &self.high;
                lagrange4(values, ((level - self.s) / step).clamp(0.0, (JUMP_NODES - 1) as f64))
            }
        }
    }
}

fn jump_expectation(
    params: &MixedStableParams,
    renewal: &RenewalTable,
    b: f64,
    delta: f64,
    ds: f64,
    t: f64,
    level: f64,
) -> Result<[f64; 2]> {
    let lower = delta.max(b - level);
    let kink = t - level;
    let upper = kink + delta;
    if upper <= lower {
        return Ok([0.0, 0.0]);
    }
    let mut out = [0.0; 2];
    let mut cuts = vec![lower];
    if kink > lower {
        cuts.push(kink);
    }
    cuts.push(upper);
    for w in cuts.windows(2) {
        for (k, slot) in out.iter_mut().enumerate() {
            let r = tanh_sinh(
                |j, _, _| renewal.eval_clamped(t - level - j)[k] * levy_density(params, j),
                w[0],
                w[1],
                1e-10,
                10,
            );
            if !r.value.is_finite() {
                return Err(Error::NoConvergence(format!("jump expectation at level {level}, t {t}")));
            }
            *slot += r.value;
        }
    }
    Ok([ds * out[0], ds * out[1]])
}

/// Correlation curve of `Z(s)` against `Z(t)` for each `t >= s + delta`,
/// using the renewal-conditioned estimator.
pub fn conditional_noise_curve(config: &MfppConfig, s: f64, t_points: &[f64], opts: &SimOptions) -> Result<CorrCurve> {
    let delta = config.delta;
    let b = s + delta;
    if !(s >= 0.0) || t_points.is_empty() {
        return Err(invalid("need s >= 0 and at least one correlation time"));
    }
    if t_points.windows(2).any(|w| w[1] <= w[0]) || t_points[0] < b {
        return Err(invalid(format!("correlation times must increase and start at or after s + delta = {b}")));
    }
    if opts.paths < 2 {
        return Err(invalid("need at least two paths"));
    }
    let p = &config.params;
    let grid = SimGrid::with_defaults(p, vec![s, b], opts.ds, opts.s_cap)?;
    let ds = grid.ds();
    let t_max = *t_points.last().unwrap();
    let renewal = RenewalTable::new(p, delta, t_max - b)?;
    let jumps: Vec<JumpTable> =
        t_points.iter().map(|&t| JumpTable::new(p, &renewal, s, delta, ds, t)).collect::<Result<_>>()?;
    let sampler = MixedIncrementSampler::new(p, ds);
    let max_steps = (grid.s_cap() / ds).floor() as u64;
    let m = t_points.len();
    let width = 2 + 4 * m;
    let lambda = config.lambda;
    let g_at_level: Vec<f64> = t_points.iter().map(|&t| Ok(renewal.eval(t - b)?[0])).collect::<Result<_>>()?;
    let rows = fill_rows(opts.paths, width, opts.threads, |i, row| {
        let mut rngs = ReplicateRngs::new(opts.seed, i);
        let (head, sums) = row.split_at_mut(2);
        let (g_sum, rest) = sums.split_at_mut(m);
        let (w_sum, rest) = rest.split_at_mut(m);
        let (d_sum, p_sum) = rest.split_at_mut(m);
        let mut level = 0.0;
        let mut k: u64 = 0;
        // Y(s) once the walk has passed s.
        let mut y_s: Option<f64> = if s == 0.0 { Some(0.0) } else { None };
        loop {
            let here = k as f64 * ds;
            // Z(s) mean if this step were the crossing one.
            let early = y_s.map_or(0.0, |y| lambda * (here - y));
            let mass = ds * levy_tail(p, delta.max(b - level));
            for j in 0..m {
                let [eg, eh] = jumps[j].eval(level);
                let shifted = lambda * (eg - g_at_level[j] * mass);
                g_sum[j] += lambda * eg;
                w_sum[j] += lambda * eg + lambda * lambda * eh;
                d_sum[j] += shifted;
                p_sum[j] += early * shifted;
            }
            if k >= max_steps {
                return Err(Error::SCapExceeded { cap: grid.s_cap(), t: b });
            }
            let jump = sampler.sample(&mut rngs.first, &mut rngs.second);
            let before = level;
            level += jump;
            k += 1;
            if y_s.is_none() && level > s {
                y_s = Some(here);
            }
            if level > b {
                let early = lambda * (here - y_s.unwrap_or(here));
                head[0] = early;
                head[1] = early + early * early;
                if jump <= delta.max(b - before) {
                    for j in 0..m {
                        let [g, h] = renewal.eval(t_points[j] - level)?;
                        let shifted = lambda * (g - g_at_level[j]);
                        g_sum[j] += lambda * g;
                        w_sum[j] += lambda * g + lambda * lambda * h;
                        d_sum[j] += shifted;
                        p_sum[j] += early * shifted;
                    }
                }
                return Ok(());
            }
        }
    })?;
    let column = |k: usize| -> Vec<f64> { rows.chunks(width).map(|r| r[k]).collect() };
    let (zs, zs2) = (column(0), column(1));
    let estimates: Vec<CorrEstimate> = (0..m)
        .map(|j| {
            let (g, w) = (column(2 + j), column(2 + m + j));
            let (d, prod) = (column(2 + 2 * m + j), column(2 + 3 * m + j));
            correlation_from_moments(&PairMoments {
                x: &zs,
                x2: &zs2,
                y: &g,
                y2: &w,
                y_shifted: &d,
                x_y_shifted: &prod,
            })
        })
        .collect::<Result<_>>()?;
    Ok(CorrCurve::from_estimates(s, t_points.to_vec(), &estimates, opts.paths))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::gauss_kronrod;

    fn params() -> MixedStableParams {
        MixedStableParams::new(0.9, 0.5, 0.5, 0.5).unwrap()
    }

    #[test]
    fn table_matches_direct_evaluation() {
        let p = params();
        let table = RenewalTable::new(&p, 1.0, 1000.0).unwrap();
        for &u in &[-0.999, -0.7, -0.3, -1e-3, 0.0, 1e-6, 0.02, 0.5, 3.3, 47.0, 333.0, 999.0] {
            let got = table.eval(u).unwrap();
            let want = if u <= 0.0 { head_values(&p, u + 1.0).unwrap() } else { tail_values(&p, 1.0, u).unwrap() };
            for k in 0..2 {
                assert!(((got[k] - want[k]) / want[k]).abs() < 1e-7, "u={u} k={k}: {} vs {}", got[k], want[k]);
            }
        }
        assert_eq!(table.eval(-1.0).unwrap(), [0.0, 0.0]);
        assert_eq!(table.eval(-5.0).unwrap(), [0.0, 0.0]);
    }

    #[test]
    fn head_and_tail_meet_at_zero() {
        let p = params();
        let a = head_values(&p, 1.0).unwrap();
        let b = tail_values(&p, 1.0, 1e-12).unwrap();
        assert!(((a[0] - b[0]) / a[0]).abs() < 1e-5);
        assert!(((a[1] - b[1]) / a[1]).abs() < 1e-5);
    }

    #[test]
    fn levy_density_integrates_to_the_tail() {
        let p = params();
        let r = gauss_kronrod(|v| levy_density(&p, 2.0 / v) * 2.0 / (v * v), 0.0, 1.0, &[], 0.0, 1e-12, 200);
        let want = levy_tail(&p, 2.0);
        assert!((want - (0.5 * 2f64.powf(-0.9) / gamma(0.1) + 0.5 * 2f64.powf(-0.5) / gamma(0.5))).abs() < 1e-15);
        assert!((r.value / want - 1.0).abs() < 1e-9, "{} vs {}", r.value, want);
    }

    #[test]
    fn jump_table_interpolates_the_integral() {
        let p = params();
        let renewal = RenewalTable::new(&p, 1.0, 200.0).unwrap();
        let t = 150.0;
        let table = JumpTable::new(&p, &renewal, 1.0, 1.0, 0.01, t).unwrap();
        for &l in &[0.0, 0.37, 0.99, 1.0, 1.5, 1.999] {
            let got = table.eval(l);
            let want = jump_expectation(&p, &renewal, 2.0, 1.0, 0.01, t, l).unwrap();
            for k in 0..2 {
                assert!(((got[k] - want[k]) / want[k]).abs() < 1e-6, "l={l} k={k}: {} vs {}", got[k], want[k]);
            }
        }
    }

    #[test]
    fn rejects_overlapping_windows() {
        let c = MfppConfig::new(params(), 1.0, 1.0).unwrap();
        let o = SimOptions::new(10, 1);
        assert!(conditional_noise_curve(&c, 1.0, &[1.5, 10.0], &o).is_err());
    }
}
