use qgsw::harness::{
    emit_report, fit_rate, fit_rate_constant, predicted_bound, run_sweep, theta_rule, write_csv,
    Format, NormKind, RateConstant, SweepConfig, SweepReport, CSV_COLUMNS,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn small_sweep(lambdas: Vec<f64>) -> SweepConfig {
    SweepConfig {
        lambdas,
        t_final: 0.3,
        samples: 3,
        ..SweepConfig::smooth_default(32)
    }
}

#[test]
fn predicted_bound_example() {
    // (1e-4)^{e^{-1}/2} evaluated through logarithms
    let exponent = 0.5 * (-1.0f64).exp();
    let oracle = (exponent * (1e-4f64).ln()).exp();
    let v = predicted_bound(0.0, 1e-4, 1.0, 1.0);
    assert!((v - oracle).abs() < 1e-14, "{v} vs {oracle}");
    assert!((v - 0.183756).abs() < 1e-6);
    assert_eq!(predicted_bound(0.0, 0.0, 1.0, 1.0), 0.0);
    assert!((predicted_bound(0.3, 0.1, 1e-12, 2.0) - 0.3).abs() < 1e-9);
}

#[test]
fn theta_example_and_monotonicity() {
    let theta = theta_rule(1e-4, 1.0, 1.0, 0.5).unwrap();
    let oracle = predicted_bound(0.0, 1e-4, 1.0, 1.0).powf(-0.5);
    assert!((theta - oracle).abs() < 1e-12);
    assert!((theta - 2.332).abs() < 1e-3);

    let lambdas = [0.1, 0.05, 0.025, 0.0125, 1e-6];
    let thetas: Vec<f64> = lambdas.iter().map(|&l| theta_rule(l, 1.0, 1.0, 0.5).unwrap()).collect();
    assert!(thetas.windows(2).all(|w| w[1] > w[0]));
    let products: Vec<f64> = lambdas
        .iter()
        .zip(&thetas)
        .map(|(&l, t)| t * predicted_bound(0.0, l, 1.0, 1.0))
        .collect();
    assert!(products.windows(2).all(|w| w[1] < w[0]));
    for (&l, p) in lambdas.iter().zip(&products) {
        assert!((p - predicted_bound(0.0, l, 1.0, 1.0).sqrt()).abs() < 1e-12);
    }
    assert!(theta_rule(0.1, 1.0, 1.0, 1.0).is_err());
    assert!(theta_rule(0.1, 1.0, 1.0, 0.0).is_err());
}

#[test]
fn fit_exact_noisy_and_constant() {
    let lambdas: [f64; 5] = [0.1, 0.05, 0.025, 0.0125, 0.00625];
    let exact: Vec<(f64, f64)> = lambdas.iter().map(|&l| (l, l.powf(0.42))).collect();
    assert!((fit_rate(&exact).unwrap().exponent - 0.42).abs() < 1e-10);

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..50 {
        let noisy: Vec<(f64, f64)> = lambdas
            .iter()
            .map(|&l| (l, 2.5 * l.powf(0.3) * (1.0 + 0.01 * rng.gen_range(-1.0..1.0))))
            .collect();
        let e = fit_rate(&noisy).unwrap().exponent;
        assert!((0.28..=0.32).contains(&e), "{e}");
    }

    let flat: Vec<(f64, f64)> = lambdas.iter().map(|&l| (l, 0.7)).collect();
    let fit = fit_rate(&flat).unwrap();
    assert!(fit.exponent.abs() < 1e-12);
    assert!(fit.residual < 1e-12);
    assert_eq!(fit.lambda_min, 0.00625);
    assert_eq!(fit.lambda_max, 0.1);

    assert!(fit_rate(&[(0.1, 1.0), (0.05, -1.0), (0.01, 0.5)]).is_err());
}

#[test]
fn fitted_constant_is_smallest_covering_constant() {
    let (lambda, t) = (0.1, 1.0);
    for err in [0.05, 0.2, 0.6] {
        let c = fit_rate_constant(err, 0.0, lambda, t).unwrap();
        assert!((predicted_bound(0.0, lambda, t, c) - err).abs() < 1e-9);
        assert!(predicted_bound(0.0, lambda, t, 0.999 * c) < err);
    }
    assert!(fit_rate_constant(1.5, 0.0, lambda, t).is_none());
}

#[test]
fn empty_sweep_gives_header_only_csv() {
    let report = run_sweep(&small_sweep(vec![]), 1).unwrap();
    assert!(report.cases.is_empty());
    let mut out = Vec::new();
    write_csv(&report, &mut out).unwrap();
    let text = String::from_utf8(out).unwrap();
    assert_eq!(text, format!("{}\n", CSV_COLUMNS.join(",")));
    let json: serde_json::Value = serde_json::to_value(&report).unwrap();
    assert_eq!(json["cases"].as_array().unwrap().len(), 0);
}

#[test]
fn csv_row_count_and_json_roundtrip() {
    let report = run_sweep(&small_sweep(vec![0.2, 0.1, 0.05]), 2).unwrap();
    let mut out = Vec::new();
    write_csv(&report, &mut out).unwrap();
    let text = String::from_utf8(out).unwrap();
    assert_eq!(text.lines().count(), 1 + 3 * 4);

    let json = serde_json::to_string(&report).unwrap();
    let back: SweepReport = serde_json::from_str(&json).unwrap();
    assert_eq!(back, report);

    let dir = tempfile::tempdir().unwrap();
    let written = emit_report(&report, dir.path(), &[Format::Csv, Format::Json, Format::Svg]).unwrap();
    assert!(written.iter().any(|p| p.ends_with("sweep.csv")));
    assert!(written.iter().any(|p| p.ends_with("fit_xnorm.svg")));
    let svg = std::fs::read_to_string(dir.path().join("fit_xnorm.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
}

#[test]
fn tiny_lambda_matches_euler() {
    let mut cfg = small_sweep(vec![1e-8]);
    cfg.n = 64;
    cfg.t_final = 0.5;
    cfg.theta_rule.c = RateConstant::Fixed(1.0);
    let report = run_sweep(&cfg, 1).unwrap();
    for norm in [NormKind::L1, NormKind::L2, NormKind::L4, NormKind::Linf, NormKind::UL2, NormKind::ULinf, NormKind::Xnorm] {
        let sup = report.cases[0].sup(norm).unwrap();
        assert!(sup <= 1e-6, "{norm}: {sup}");
    }
}

#[test]
fn sweep_norms_decrease_along_lambdas() {
    let cfg = SweepConfig {
        lambdas: vec![0.1, 0.05, 0.025],
        ..SweepConfig::smooth_default(64)
    };
    let report = run_sweep(&cfg, 4).unwrap();
    for norm in [NormKind::L1, NormKind::L2, NormKind::L4, NormKind::Linf, NormKind::UL2, NormKind::ULinf, NormKind::Xnorm] {
        let sups = report.sups(norm).unwrap();
        assert!(sups.windows(2).all(|w| w[1] < w[0]), "{norm}: {sups:?}");
    }
    assert_eq!(report.scaling_consistent(), Some(true));
    let c = report.rate_constant.unwrap();
    for case in &report.cases {
        let bound = predicted_bound(0.0, case.lambda, cfg.t_final, c);
        assert!(case.sup(NormKind::Xnorm).unwrap() <= bound * (1.0 + 1e-9));
        assert!(case.theta.unwrap() > 0.0);
    }
}
