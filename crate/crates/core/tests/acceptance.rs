//! Acceptance checks, one test per criterion.
//!
//! Each test writes a `PASS` or `FAIL` line to stderr (bypassing the test
//! harness capture) before asserting.

use std::io::Write;
use std::process::Command;
use std::time::{Duration, Instant};

use mfpp::estimation::{sample_cov, srd_report, DecayOptions, EstimatorKind};
use mfpp::moments::{
    cov_y_asymptotic, cov_y_series, renewal_u, renewal_u_asymptotic, var_y, var_y_asymptotic, MfppConfig,
    MixedStableParams, TimeRegime,
};
use mfpp::quadrature::tanh_sinh;
use mfpp::simulation::{
    fill_rows, simulate_ensemble, simulate_mfnpp_path, EnsembleKind, ReplicateRngs, SimGrid, SimOptions,
};
use mfpp::special::{gamma, ml2, ml2_derivative, ml3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

fn verdict(id: u32, title: &str, pass: bool, detail: &str) {
    let line = format!("{} criterion {id} ({title}): {detail}\n", if pass { "PASS" } else { "FAIL" });
    let mut err = std::io::stderr().lock();
    let _ = err.write_all(line.as_bytes());
    let _ = err.flush();
    assert!(pass, "criterion {id} failed: {detail}");
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn canonical() -> MixedStableParams {
    MixedStableParams::new(0.9, 0.5, 0.5, 0.5).unwrap()
}

#[test]
fn criterion_1_special_function_accuracy() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut failures = 0;
    let mut n = 0;
    for line in include_str!("data/ml_sweep.csv").lines().skip(1) {
        let f: Vec<f64> = line.split(',').take(5).map(|v| v.parse().unwrap()).collect();
        let (alpha, beta, g, x, oracle) = (f[0], f[1], f[2], f[3], f[4]);
        let got = if g == 1.0 { ml2(alpha, beta, x) } else { ml3(alpha, beta, g, x) };
        let err = got.map(|r| rel(r.value, oracle)).unwrap_or(f64::INFINITY);
        worst = worst.max(err);
        failures += usize::from(err.is_nan() || err > 1e-10);
        n += 1;
    }
    let elapsed = start.elapsed();
    let pass = n == 200 && failures == 0 && elapsed < Duration::from_secs(10);
    verdict(
        1,
        "Mittag-Leffler accuracy",
        pass,
        &format!("{n} points, worst relative error {worst:.2e}, {failures} above 1e-10, {elapsed:.2?}"),
    );
}

#[test]
fn criterion_2_identity_suite() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst_derivative = 0.0f64;
    for _ in 0..100 {
        let alpha = rng.random_range(0.05..1.0);
        let beta = rng.random_range(1.0..3.0);
        // E_{alpha,beta}(x) grows like exp(x^(1/alpha)), so positive x stays at most 1.
        let x: f64 = rng.random_range(-20.0..1.0);
        let h = 1e-5 * x.abs().max(1.0);
        let fd = (ml2(alpha, beta, x + h).unwrap().value - ml2(alpha, beta, x - h).unwrap().value) / (2.0 * h);
        worst_derivative = worst_derivative.max(rel(ml2_derivative(1, alpha, beta, x).unwrap(), fd));
    }
    let mut worst_convolution = 0.0f64;
    for _ in 0..20 {
        let rho: f64 = 1.0 - rng.random_range(0.0..0.95);
        let mu: f64 = rng.random_range(1.0..3.0);
        let nu: f64 = rng.random_range(1.0..3.0);
        let w: f64 = -rng.random_range(0.05..3.0);
        let x: f64 = 5.0 - rng.random_range(0.0..4.9);
        let q = tanh_sinh(
            |t, left, right| {
                right.powf(mu - 1.0)
                    * ml2(rho, mu, w * right.powf(rho)).unwrap().value
                    * left.powf(nu - 1.0)
                    * ml2(rho, nu, w * t.powf(rho)).unwrap().value
            },
            0.0,
            x,
            1e-12,
            10,
        );
        let exact = x.powf(mu + nu - 1.0) * ml3(rho, mu + nu, 2.0, w * x.powf(rho)).unwrap().value;
        worst_convolution = worst_convolution.max(rel(q.value, exact));
    }
    let mut reduction_ok = true;
    for _ in 0..200 {
        let alpha = rng.random_range(0.05..1.0);
        let beta = rng.random_range(1.0..3.0);
        // Keep exp(x^(1/alpha)) representable.
        let x = rng.random_range(-40.0..5.0f64).min(600f64.powf(alpha));
        let (a, b) = (ml3(alpha, beta, 1.0, x).unwrap(), ml2(alpha, beta, x).unwrap());
        reduction_ok &= (a.value - b.value).abs() <= a.est_abs_error + b.est_abs_error;
    }
    let elapsed = start.elapsed();
    let pass =
        worst_derivative <= 1e-6 && worst_convolution <= 1e-6 && reduction_ok && elapsed < Duration::from_secs(30);
    verdict(
        2,
        "identity suite",
        pass,
        &format!(
            "derivative worst {worst_derivative:.2e}, convolution worst {worst_convolution:.2e}, gamma=1 reduction {}, {elapsed:.2?}",
            if reduction_ok { "within error estimates" } else { "outside error estimates" }
        ),
    );
}

#[test]
fn criterion_3_moment_cross_validation() {
    let start = Instant::now();
    let p = canonical();
    let config = MfppConfig::new(p, 1.0, 1.0).unwrap();
    let times = [1.0, 2.0, 5.0];
    let ds = 1e-3;
    let mut opts = SimOptions::new(100_000, 3);
    opts.ds = Some(ds);
    let e = simulate_ensemble(&config, &times, EnsembleKind::InverseSubordinator, &opts).unwrap();
    let cols: Vec<Vec<f64>> = (0..3).map(|j| e.column(j)).collect();
    let n = cols[0].len() as f64;
    let mut lines = Vec::new();
    let mut pass = true;
    let sd: Vec<f64> = times.iter().map(|&t| var_y(&p, t).unwrap().sqrt()).collect();
    for (j, &t) in times.iter().enumerate() {
        let m = cols[j].iter().sum::<f64>() / n;
        let (v, v_se) = sample_cov(&cols[j], &cols[j]).unwrap();
        let m_se = (v / n).sqrt();
        let (u, var) = (renewal_u(&p, t).unwrap(), var_y(&p, t).unwrap());
        // Recording Y at the last step before crossing shifts it down by less than ds.
        let mean_ok = (m - u).abs() <= 3.0 * m_se + ds;
        let var_ok = (v - var).abs() <= 3.0 * v_se + 2.0 * ds * sd[j] + ds * ds;
        pass &= mean_ok && var_ok;
        lines.push(format!("t={t}: mean {m:.5} vs {u:.5}, var {v:.5} vs {var:.5}"));
    }
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let (c, c_se) = sample_cov(&cols[i], &cols[j]).unwrap();
        let exact = cov_y_series(&p, times[i], times[j]).unwrap();
        let ok = (c - exact).abs() <= 3.0 * c_se + ds * (sd[i] + sd[j]) + ds * ds;
        pass &= ok;
        lines.push(format!("cov({},{}) {c:.5} vs {exact:.5}", times[i], times[j]));
    }
    let elapsed = start.elapsed();
    pass &= elapsed < Duration::from_secs(300);
    verdict(3, "moment cross-validation", pass, &format!("{}; {elapsed:.2?}", lines.join("; ")));
}

#[test]
fn criterion_4_asymptote_convergence() {
    let start = Instant::now();
    let t = 1e4;
    // (0.6, 0.55) is the near-degenerate set.
    let sets = [(0.7, 0.3, 0.2, 0.8), (0.9, 0.5, 0.1, 0.9), (0.6, 0.55, 0.01, 0.99)];
    let mut pass = true;
    let mut lines = Vec::new();
    for (a1, a2, c1, c2) in sets {
        let p = MixedStableParams::new(a1, a2, c1, c2).unwrap();
        let ratios = [
            renewal_u(&p, t).unwrap() / renewal_u_asymptotic(&p, t, TimeRegime::LargeT).unwrap(),
            var_y(&p, t).unwrap() / var_y_asymptotic(&p, t).unwrap(),
            cov_y_series(&p, 1.0, t).unwrap() / cov_y_asymptotic(&p, 1.0).unwrap(),
        ];
        pass &= ratios.iter().all(|r| (0.95..=1.05).contains(r));
        lines.push(format!("({a1},{a2},{c1},{c2}) U {:.4} VarY {:.4} CovY {:.4}", ratios[0], ratios[1], ratios[2]));
    }
    let elapsed = start.elapsed();
    pass &= elapsed < Duration::from_secs(10);
    verdict(4, "asymptote convergence", pass, &format!("{}; {elapsed:.2?}", lines.join("; ")));
}

fn lrd_json(dir: &std::path::Path, threads: &str) -> (Vec<u8>, Duration) {
    let out = dir.join(format!("lrd_{threads}.json"));
    let start = Instant::now();
    let status = Command::new(env!("CARGO_BIN_EXE_mfpp"))
        .args([
            "lrd",
            "--alpha1",
            "0.9",
            "--alpha2",
            "0.5",
            "--c1",
            "0.5",
            "--paths",
            "200000",
            "--seed",
            "42",
            "--threads",
            threads,
            "--out",
        ])
        .arg(&out)
        .status()
        .expect("binary runs");
    let elapsed = start.elapsed();
    assert!(status.success(), "lrd run exited with {status}");
    (std::fs::read(&out).unwrap(), elapsed)
}

#[test]
fn criteria_5_and_9_lrd_exponent_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let (first, elapsed) = lrd_json(dir.path(), "1");
    let v: serde_json::Value = serde_json::from_slice(&first).unwrap();
    let h = v["exponent"].as_f64().unwrap();
    let se = v["slope_stderr"].as_f64().unwrap();
    let pass5 = (h - 0.5).abs() <= 0.1 && h > 0.0 && h < 1.0 && elapsed < Duration::from_secs(900);
    let detail = format!(
        "exponent {h:.4} +- {se:.4} on [{}, {}], exact-curve exponent {:.4}, {elapsed:.2?}",
        v["window_min"],
        v["window_max"],
        v["exact_fit"]["exponent"].as_f64().unwrap_or(f64::NAN)
    );
    let (second, _) = lrd_json(dir.path(), "2");
    let same = first == second;
    let outcome5 = std::panic::catch_unwind(|| verdict(5, "long-range dependence", pass5, &detail));
    verdict(
        9,
        "determinism",
        same,
        &format!("threads 1 vs 2: {} bytes, {}", first.len(), if same { "identical" } else { "different" }),
    );
    if let Err(e) = outcome5 {
        std::panic::resume_unwind(e);
    }
}

#[test]
fn criterion_6_srd_exponent() {
    let start = Instant::now();
    let config = MfppConfig::new(canonical(), 1.0, 1.0).unwrap();
    let opts = DecayOptions { estimator: EstimatorKind::Conditional, ..Default::default() };
    let r = srd_report(&config, &SimOptions::new(200_000, 42), &opts).unwrap();
    let h = r.fit.exponent;
    let elapsed = start.elapsed();
    let pass = (h - 1.25).abs() <= 0.15 && h > 1.0 && h < 2.0 && elapsed < Duration::from_secs(1200);
    verdict(
        6,
        "short-range dependence",
        pass,
        &format!(
            "exponent {h:.4} +- {:.4} on [{}, {}], exact-curve exponent {:.4}, ds {}, {elapsed:.2?}",
            r.fit.slope_stderr,
            r.window_min,
            r.window_max,
            r.exact_fit.as_ref().map_or(f64::NAN, |f| f.exponent),
            r.ds
        ),
    );
}

/// Two-sample chi-square statistic and degrees of freedom over count bins
/// `0..=last` (the last bin collects everything above). Adjacent tail bins are
/// merged until each bin holds at least 5 draws from the two samples together.
fn two_sample_chi_square(a: &[u64], b: &[u64], last: usize) -> (f64, usize) {
    let hist = |x: &[u64]| {
        let mut h = vec![0.0f64; last + 1];
        for &v in x {
            h[(v as usize).min(last)] += 1.0;
        }
        h
    };
    let (mut ha, mut hb) = (hist(a), hist(b));
    while ha.len() > 2 && ha[ha.len() - 1] + hb[hb.len() - 1] < 5.0 {
        let (ta, tb) = (ha.pop().unwrap(), hb.pop().unwrap());
        *ha.last_mut().unwrap() += ta;
        *hb.last_mut().unwrap() += tb;
    }
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (ka, kb) = ((nb / na).sqrt(), (na / nb).sqrt());
    let mut stat = 0.0;
    let mut bins = 0;
    for (x, y) in ha.iter().zip(&hb) {
        if x + y > 0.0 {
            stat += (ka * x - kb * y).powi(2) / (x + y);
            bins += 1;
        }
    }
    (stat, bins - 1)
}

#[test]
fn criterion_7_non_homogeneous_equivalence() {
    let start = Instant::now();
    let p = canonical();
    let lambda = 2.0;
    let n = 100_000;
    let config = MfppConfig::new(p, lambda, 1.0).unwrap();
    let mfpp = simulate_ensemble(&config, &[1.0], EnsembleKind::Mfpp, &SimOptions::new(n, 42)).unwrap();
    let direct: Vec<u64> = mfpp.values.iter().map(|&v| v as u64).collect();
    let grid = SimGrid::with_defaults(&p, vec![1.0], None, None).unwrap();
    let rows = fill_rows(n, 1, 0, |i, row| {
        let mut rngs = ReplicateRngs::new(43, i);
        row[0] = simulate_mfnpp_path(&p, |y| lambda * y, &grid, &mut rngs)?[0] as f64;
        Ok(())
    })
    .unwrap();
    let changed: Vec<u64> = rows.iter().map(|&v| v as u64).collect();
    let (stat, df) = two_sample_chi_square(&changed, &direct, 15);
    let p_value = 1.0 - ChiSquared::new(df as f64).unwrap().cdf(stat);
    let elapsed = start.elapsed();
    verdict(
        7,
        "non-homogeneous equivalence",
        p_value > 0.01,
        &format!("chi-square {stat:.2} on {df} df, p = {p_value:.3}, {elapsed:.2?}"),
    );
}

#[test]
fn criterion_8_pure_stable_reductions() {
    let mut worst = 0.0f64;
    for alpha in [0.2f64, 0.5, 0.9] {
        let first_only = MixedStableParams::new(alpha, 0.1, 1.0, 0.0).unwrap();
        for t in [0.01f64, 1.0, 10.0, 1e4] {
            worst = worst.max(rel(renewal_u(&first_only, t).unwrap(), t.powf(alpha) / gamma(1.0 + alpha)));
        }
        for s in [0.5f64, 1.0, 7.0] {
            let direct = s.powf(2.0 * alpha) / gamma(2.0 * alpha + 1.0);
            worst = worst.max(rel(cov_y_asymptotic(&first_only, s).unwrap(), direct));
        }
        let second_only = MixedStableParams::new(0.95, alpha, 0.0, 1.0).unwrap();
        for t in [0.01f64, 1.0, 10.0, 1e4] {
            let direct = t.powf(2.0 * alpha) * (2.0 / gamma(2.0 * alpha + 1.0) - 1.0 / gamma(alpha + 1.0).powi(2));
            worst = worst.max(rel(var_y_asymptotic(&second_only, t).unwrap(), direct));
            worst = worst.max(rel(var_y(&second_only, t).unwrap(), direct));
        }
    }
    verdict(8, "pure-stable reductions", worst <= 1e-10, &format!("worst relative error {worst:.2e}"));
}
