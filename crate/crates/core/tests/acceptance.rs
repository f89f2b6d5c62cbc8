//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
//!
//! Run alone with `cargo test --release --test acceptance`.

use std::f64::consts::PI;
use std::time::Instant;

use qgsw::harness::{
    endpoint_patch_study, run_sweep, write_csv, NormKind, PatchStudyConfig, SweepConfig,
    SweepReport,
};
use qgsw::littlewood_paley::DyadicFamily;
use qgsw::patches::{bessel_k01, derivative_lower_bound_check, logspace, monotonicity_check};
use qgsw::spectral::continuum::{error_symbol_l1, gradient_kernel_l2};
use qgsw::spectral::{
    error_velocity, velocity_from_vorticity, Exponent, Grid, ScalarField, VectorField,
};
use qgsw::transport::{simulate, SolverConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn strictly_decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}

/// Sum of random Fourier modes with `0 < |k| ≤ kmax`; mean-free.
fn random_band_limited(grid: &Grid, kmax: i64, rng: &mut ChaCha8Rng) -> ScalarField {
    let mut modes = Vec::new();
    for k1 in -kmax..=kmax {
        for k2 in 0..=kmax {
            if (k2 == 0 && k1 <= 0) || k1 * k1 + k2 * k2 > kmax * kmax {
                continue;
            }
            modes.push((k1 as f64, k2 as f64, rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        }
    }
    let scale = 2.0 * PI / grid.length();
    ScalarField::from_fn(grid, |x, y| {
        modes
            .iter()
            .map(|&(k1, k2, a, b)| {
                let phase = scale * (k1 * x + k2 * y);
                a * phase.cos() + b * phase.sin()
            })
            .sum()
    })
}

fn criterion_1() -> Outcome {
    let mut worst: f64 = 0.0;
    for lambda in [0.25, 1.0, 4.0] {
        worst = worst.max(rel(error_symbol_l1(lambda), PI * PI * lambda.sqrt()));
        worst = worst.max(rel(gradient_kernel_l2(lambda), PI.sqrt() * lambda.sqrt()));
    }
    outcome(worst <= 1e-3, format!("max relative error {worst:.2e} (tol 1e-3)"))
}

fn criterion_2() -> Outcome {
    let grid = Grid::new(32, 2.0 * PI).unwrap();
    let sin_x = ScalarField::from_fn(&grid, |x, _| x.sin());
    let cos_x = ScalarField::from_fn(&grid, |x, _| x.cos());
    let cos_y = ScalarField::from_fn(&grid, |_, y| y.cos());
    let sin_y = ScalarField::from_fn(&grid, |_, y| y.sin());
    let zero = ScalarField::zeros(&grid);
    let vel_err = |u: &VectorField, a: &ScalarField, b: &ScalarField| {
        let scale = a.max_abs().max(b.max_abs());
        u.u1.sub(a).unwrap().max_abs().max(u.u2.sub(b).unwrap().max_abs()) / scale
    };
    let mut worst: f64 = 0.0;
    let cases = [
        (&sin_x, 0.0, zero.clone(), cos_x.clone()),
        (&sin_x, 1.0, zero.clone(), cos_x.scale(0.5)),
        (&cos_y, 3.0, sin_y.scale(0.25), zero.clone()),
    ];
    for (omega, lambda, a, b) in cases.iter() {
        let u = velocity_from_vorticity(omega, *lambda).unwrap();
        worst = worst.max(vel_err(&u, a, b));
    }
    let e = error_velocity(&sin_x, 1.0).unwrap();
    worst = worst.max(vel_err(&e, &zero, &cos_x.scale(0.5)));

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let omega = random_band_limited(&grid, 8, &mut rng);
    let mut coef_worst: f64 = 0.0;
    for lambda in [0.01, 1.0, 25.0] {
        let e = error_velocity(&omega, lambda).unwrap();
        let d = velocity_from_vorticity(&omega, 0.0)
            .unwrap()
            .sub(&velocity_from_vorticity(&omega, lambda).unwrap())
            .unwrap();
        for (x, y) in [(&e.u1, &d.u1), (&e.u2, &d.u2)] {
            let scale = y.spectral().iter().map(|c| c.norm()).fold(0.0, f64::max);
            for (p, q) in x.spectral().iter().zip(y.spectral()) {
                coef_worst = coef_worst.max((p - q).norm() / scale);
            }
        }
    }
    outcome(
        worst <= 1e-12 && coef_worst <= 1e-12,
        format!("single-mode error {worst:.2e}, coefficientwise defect {coef_worst:.2e} (tol 1e-12)"),
    )
}

fn criterion_3() -> Outcome {
    let cfg = SweepConfig::smooth_default(256);
    let grid = cfg.grid().unwrap();
    let (omega0, _) = cfg.initial.sample(&grid).unwrap();
    let solver = SolverConfig::smooth();
    let mut pass = true;
    let mut detail = Vec::new();
    for lambda in [0.0, 0.1] {
        let traj = simulate(&omega0, lambda, 1.0, &solver, &[0.0, 1.0]).unwrap();
        let first = traj.diagnostics.first().unwrap();
        let last = traj.diagnostics.last().unwrap();
        let mean = (last.mean - first.mean).abs();
        let l2 = rel(last.l2, first.l2);
        let h = rel(last.hamiltonian, first.hamiltonian);
        pass &= mean <= 1e-12 && l2 <= 1e-3 && h <= 1e-3;
        detail.push(format!("λ={lambda}: mean {mean:.1e}, L2 {l2:.1e}, H {h:.1e}"));
    }
    outcome(pass, detail.join("; "))
}

fn criterion_4(report: &SweepReport) -> Outcome {
    let mut pass = true;
    let mut detail = Vec::new();
    for norm in [NormKind::L2, NormKind::Xnorm, NormKind::UL2] {
        let sups = report.sups(norm).unwrap();
        let ok = strictly_decreasing(&sups);
        pass &= ok;
        detail.push(format!("{norm} decreasing {ok}"));
    }
    match report.fit(NormKind::Xnorm) {
        Some(fit) => {
            let ok = (0.25..=0.55).contains(&fit.exponent);
            pass &= ok;
            detail.push(format!(
                "xnorm slope {:.4} in [0.25, 0.55] {ok} (envelope {:?})",
                fit.exponent, fit.envelope
            ));
        }
        None => {
            pass = false;
            detail.push("no xnorm fit".into());
        }
    }
    let consistent = report.scaling_consistent() == Some(true);
    pass &= consistent;
    detail.push(format!(
        "scaling consistent {consistent} with C_fit {:?}",
        report.rate_constant
    ));
    outcome(pass, detail.join("; "))
}

fn criterion_5(report: &SweepReport) -> Outcome {
    let Some(sups) = report.sups(NormKind::Hipass) else {
        return outcome(false, "truncated mass missing (no rate constant)");
    };
    let decreasing = strictly_decreasing(&sups);
    let ratio = sups.last().unwrap() / sups[0];
    outcome(
        decreasing && ratio <= 1.0 / 3.0,
        format!(
            "sup_t ‖1_{{|D|≥Θ}}ω‖₂ = {:?}, decreasing {decreasing}, last/first {ratio:.3} (≤ 1/3)",
            sups.iter().map(|v| format!("{v:.4}")).collect::<Vec<_>>()
        ),
    )
}

fn criterion_6() -> Outcome {
    let ellipse = endpoint_patch_study(&PatchStudyConfig::endpoint_ellipse(512, 0.5)).unwrap();
    let disc = endpoint_patch_study(&PatchStudyConfig::endpoint_disc(512, 0.5)).unwrap();
    let window_ok = ellipse.exceeds && ellipse.window_length() >= 0.2;
    let control_ok = disc.max_sup_difference() <= 0.05;
    outcome(
        window_ok && control_ok,
        format!(
            "ellipse window {:?} (length {:.2}), disc max supDifference {:.4}",
            ellipse.window,
            ellipse.window_length(),
            disc.max_sup_difference()
        ),
    )
}

/// `K_ν(x) = ∫₀^∞ exp(−x cosh t) cosh(νt) dt` by the trapezoid rule, which converges
/// geometrically for this doubly-exponentially decaying analytic integrand.
fn bessel_integral(nu: f64, x: f64) -> f64 {
    let h: f64 = 1.0 / 256.0;
    let mut sum = 0.5 * (-x).exp();
    let mut t = h;
    loop {
        let term = (-x * t.cosh()).exp() * (nu * t).cosh();
        sum += term;
        if term < 1e-300 || (x * t.cosh() > 800.0) {
            break;
        }
        t += h;
    }
    sum * h
}

fn criterion_7() -> Outcome {
    let r = logspace(1e-3, 20.0, 500);
    let increasing = monotonicity_check(1.0, &r).unwrap();
    let bound = derivative_lower_bound_check(&r).unwrap();
    let mut worst: f64 = 0.0;
    for &x in &r {
        let (k0, k1) = bessel_k01(x).unwrap();
        worst = worst.max(rel(k0, bessel_integral(0.0, x)));
        worst = worst.max(rel(k1, bessel_integral(1.0, x)));
    }
    outcome(
        increasing && bound && worst <= 1e-10,
        format!("K0'+1/r > 0 {increasing}, K0' ≥ −e^−r(1+1/r) {bound}, oracle error {worst:.2e}"),
    )
}

fn criterion_8() -> Outcome {
    let family = DyadicFamily::default();
    let mut detail = Vec::new();

    let mut pou: f64 = 0.0;
    for i in 0..=20_000 {
        let r = 0.01 * i as f64;
        for k_top in 0..12 {
            let mut lhs = family.psi(r);
            for k in 0..=k_top {
                lhs += family.phi(r / 2f64.powi(k));
            }
            pou = pou.max((lhs - family.psi(r / 2f64.powi(k_top + 1))).abs());
        }
    }
    detail.push(format!("partition {pou:.1e}"));

    let grid = Grid::new(256, 2.0 * PI).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let values: Vec<f64> = (0..grid.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let f = ScalarField::from_values(&grid, values).unwrap();
    let mut sum = ScalarField::zeros(&grid);
    for band in family.bands(&f) {
        sum = sum.add(&band).unwrap();
    }
    let recon = sum.sub(&f).unwrap().l2_norm() / f.l2_norm();
    detail.push(format!("reconstruction {recon:.1e}"));

    let small = Grid::new(64, 2.0 * PI).unwrap();
    let mut interp_ok = true;
    for _ in 0..100 {
        let kmax = rng.gen_range(2..=20);
        let g = random_band_limited(&small, kmax, &mut rng);
        for n_split in 1..=12 {
            interp_ok &= family
                .log_interpolation_check(&g, -1.0, Exponent::Finite(2.0), 1.0, n_split)
                .unwrap();
        }
    }
    detail.push(format!("interpolation {interp_ok}"));

    let commutator_sup = |n: usize| -> f64 {
        let grid = Grid::new(n, 2.0 * PI).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let stream = random_band_limited(&grid, 6, &mut rng);
        let f = random_band_limited(&grid, 12, &mut rng);
        let v = velocity_from_vorticity(&stream, 1.0).unwrap();
        (-1..=family.max_band(&grid))
            .map(|j| 2f64.powi(-j) * family.commutator(&v, &f, j).unwrap().l2_norm())
            .fold(0.0, f64::max)
    };
    let (c128, c256) = (commutator_sup(128), commutator_sup(256));
    let drift = rel(c256, c128);
    detail.push(format!("commutator {c128:.4} → {c256:.4} ({drift:.1e})"));

    outcome(
        pou <= 1e-12 && recon <= 1e-12 && interp_ok && drift <= 0.1,
        detail.join(", "),
    )
}

fn csv_bytes(report: &SweepReport) -> Vec<u8> {
    let mut out = Vec::new();
    write_csv(report, &mut out).unwrap();
    out
}

fn criterion_9(report: &SweepReport, threads: usize) -> Outcome {
    let other = if threads == 1 { 4 } else { 1 };
    let rerun = run_sweep(&SweepConfig::smooth_default(256), other).unwrap();
    let (a, b) = (csv_bytes(report), csv_bytes(&rerun));
    outcome(
        a == b,
        format!("{threads} vs {other} threads: {} bytes, identical {}", a.len(), a == b),
    )
}

fn main() {
    let threads = std::thread::available_parallelism().map_or(1, |p| p.get()).min(8);
    let mut results: Vec<(u32, &str, Outcome, f64)> = Vec::new();
    let mut run = |id: u32, name: &'static str, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let o = f();
        let secs = start.elapsed().as_secs_f64();
        println!(
            "criterion {id}: {} {name} [{secs:.1}s] {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        results.push((id, name, o, secs));
    };

    run(1, "kernel closed forms", &mut criterion_1);
    run(2, "single-mode operator exactness", &mut criterion_2);
    run(3, "conservation", &mut criterion_3);
    let report = run_sweep(&SweepConfig::smooth_default(256), threads).expect("sweep runs");
    run(4, "convergence sweep", &mut || criterion_4(&report));
    run(5, "high-frequency evanescence", &mut || criterion_5(&report));
    run(6, "endpoint sharpness", &mut criterion_6);
    run(7, "Bessel and monotonicity", &mut criterion_7);
    run(8, "harmonic analysis", &mut criterion_8);
    run(9, "determinism", &mut || criterion_9(&report, threads));

    let failed: Vec<u32> = results.iter().filter(|r| !r.2.pass).map(|r| r.0).collect();
    println!(
        "acceptance: {} of {} criteria pass{}",
        results.len() - failed.len(),
        results.len(),
        if failed.is_empty() {
            String::new()
        } else {
            format!("; failing: {failed:?}")
        }
    );
    if !failed.is_empty() {
        std::process::exit(1);
    }
}
