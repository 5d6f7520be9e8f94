use mfpp::estimation::{
    conditional_noise_curve, corr_curve, fit_decay_exponent, lrd_report, srd_report, CorrCurve, DecayOptions,
    DecayReport, Dependence, EstimatorKind, Verdict,
};
use mfpp::moments::{mfpn_cov, mfpn_var, mfpp_cov, mfpp_var, MfppConfig, MixedStableParams};
use mfpp::simulation::{simulate_ensemble, EnsembleKind, SimOptions};
use proptest::prelude::*;

fn config() -> MfppConfig {
    MfppConfig::new(MixedStableParams::new(0.9, 0.5, 0.5, 0.5).unwrap(), 1.0, 1.0).unwrap()
}

fn sim(paths: usize, seed: u64, ds: f64) -> SimOptions {
    let mut o = SimOptions::new(paths, seed);
    o.ds = Some(ds);
    o
}

#[test]
fn counting_correlation_matches_exact_values() {
    let c = config();
    let t_points = [4.0, 8.0, 16.0];
    let mut times = vec![1.0];
    times.extend(t_points);
    let e = simulate_ensemble(&c, &times, EnsembleKind::Mfpp, &sim(8000, 21, 1e-3)).unwrap();
    let curve = corr_curve(&e, 1.0, &t_points).unwrap();
    let vs = mfpp_var(&c, 1.0).unwrap();
    for (i, &t) in t_points.iter().enumerate() {
        let exact = mfpp_cov(&c, 1.0, t).unwrap() / (vs * mfpp_var(&c, t).unwrap()).sqrt();
        assert!(
            (curve.corr[i] - exact).abs() < 4.0 * curve.stderr[i],
            "t={t}: {} +- {} vs {exact}",
            curve.corr[i],
            curve.stderr[i]
        );
    }
}

#[test]
fn conditional_noise_estimator_matches_exact_values() {
    let c = config();
    let t_points = [5.0, 10.0, 20.0];
    let curve = conditional_noise_curve(&c, 1.0, &t_points, &sim(4000, 5, 0.01)).unwrap();
    assert_eq!(curve.n_paths, 4000);
    let vs = mfpn_var(&c, 1.0).unwrap();
    for (i, &t) in t_points.iter().enumerate() {
        let vt = mfpn_var(&c, t).unwrap();
        let exact = mfpn_cov(&c, 1.0, t).unwrap() / (vs * vt).sqrt();
        // Discretization bias at ds = 0.01 is below 1% of the correlation.
        let band = 4.0 * curve.stderr[i] + 0.01 * exact.abs();
        assert!((curve.corr[i] - exact).abs() < band, "t={t}: {} +- {} vs {exact}", curve.corr[i], curve.stderr[i]);
        assert!((curve.var_t[i] / vt - 1.0).abs() < 0.03, "var at {t}: {} vs {vt}", curve.var_t[i]);
    }
}

#[test]
fn plain_and_conditional_estimators_agree_on_variances() {
    let c = config();
    let opts = DecayOptions {
        window: Some((3.0, 12.0)),
        points: 3,
        exact: false,
        estimator: EstimatorKind::Plain,
        ..Default::default()
    };
    let plain = srd_report(&c, &sim(4000, 2, 0.01), &opts).unwrap();
    let cond =
        srd_report(&c, &sim(4000, 2, 0.01), &DecayOptions { estimator: EstimatorKind::Conditional, ..opts }).unwrap();
    for i in 0..3 {
        let (a, b) = (plain.curve.var_t[i], cond.curve.var_t[i]);
        assert!((a / b - 1.0).abs() < 0.1, "{a} vs {b}");
        // Conditioning can only remove noise.
        assert!(cond.curve.stderr[i] <= plain.curve.stderr[i]);
    }
}

#[test]
fn lrd_report_on_a_short_window() {
    let c = config();
    let opts = DecayOptions { window: Some((10.0, 80.0)), points: 4, ..Default::default() };
    let r = lrd_report(&c, &sim(3000, 8, 0.01), &opts).unwrap();
    assert_eq!((r.window_min, r.window_max), (10.0, 80.0));
    assert_eq!(r.estimator, EstimatorKind::Plain);
    assert_eq!(r.fit.target, 0.5);
    assert_eq!(r.fit.tolerance, 0.1);
    let exact = r.exact_fit.as_ref().unwrap();
    assert_eq!(exact.dependence, Dependence::LongRange);
    assert_eq!(r.exact_corr.as_ref().unwrap().len(), 4);
    let json = serde_json::to_string(&r).unwrap();
    let back: DecayReport = serde_json::from_str(&json).unwrap();
    assert_eq!((back.fit.verdict, back.fit.n_used), (r.fit.verdict, r.fit.n_used));
    assert!((back.fit.exponent - r.fit.exponent).abs() < 1e-12);
    let table = r.to_table();
    assert_eq!(table.header.last().map(String::as_str), Some("exact_corr"));
}

#[test]
fn rejects_windows_before_the_reference_time() {
    let c = config();
    let opts = DecayOptions { window: Some((1.5, 10.0)), ..Default::default() };
    assert!(srd_report(&c, &sim(10, 1, 0.01), &opts).is_err());
    assert!(
        lrd_report(&c, &sim(10, 1, 0.01), &DecayOptions { window: Some((0.5, 10.0)), ..Default::default() }).is_err()
    );
}

fn power_curve(t: &[f64], scale: f64, h: f64) -> CorrCurve {
    let n = t.len();
    CorrCurve {
        s: 1.0,
        t_points: t.to_vec(),
        corr: t.iter().map(|x| scale * x.powf(-h)).collect(),
        stderr: vec![0.0; n],
        valid: vec![true; n],
        cov: vec![0.0; n],
        var_s: vec![1.0; n],
        var_t: vec![1.0; n],
        n_paths: 0,
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn fit_recovers_power_laws(h in 0.05f64..1.95, scale in 1e-4f64..1.0, t0 in 2.0f64..100.0) {
        let t: Vec<f64> = (0..6).map(|i| t0 * 1.5f64.powi(i)).collect();
        let f = fit_decay_exponent(&power_curve(&t, scale, h), h, 0.1).unwrap();
        prop_assert!((f.exponent - h).abs() < 1e-9);
        prop_assert_eq!(f.verdict, Verdict::Consistent);
        prop_assert_eq!(f.dependence, Dependence::classify(h));
    }

    #[test]
    fn verdict_follows_the_tolerance(h in 0.2f64..1.8, offset in -0.5f64..0.5) {
        let t = [10.0, 20.0, 40.0, 80.0];
        let f = fit_decay_exponent(&power_curve(&t, 0.5, h), h + offset, 0.15).unwrap();
        let expected = if offset.abs() <= 0.15 { Verdict::Consistent } else { Verdict::Inconsistent };
        prop_assume!((offset.abs() - 0.15).abs() > 1e-9);
        prop_assert_eq!(f.verdict, expected);
    }
}
