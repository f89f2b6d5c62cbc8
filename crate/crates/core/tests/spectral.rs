use std::f64::consts::PI;

use proptest::prelude::*;
use qgsw::littlewood_paley::{
    annulus_project, sharp_highpass, BesovSpec, DyadicFamily, Transition,
};
use qgsw::spectral::continuum::{error_symbol_l1, gradient_kernel_l2};
use qgsw::spectral::{
    dealias, error_velocity, hamiltonian, invert_helmholtz, velocity_from_vorticity, Exponent,
    Grid, ScalarField, VectorField,
};

fn grid(n: usize) -> Grid {
    Grid::new(n, 2.0 * PI).unwrap()
}

fn sup_diff(a: &ScalarField, b: &ScalarField) -> f64 {
    a.sub(b).unwrap().max_abs()
}

fn modes_field(g: &Grid, coeffs: &[(i32, i32, f64, f64)]) -> ScalarField {
    ScalarField::from_fn(g, |x, y| {
        coeffs
            .iter()
            .map(|&(k1, k2, a, b)| {
                let p = k1 as f64 * x + k2 as f64 * y;
                a * p.cos() + b * p.sin()
            })
            .sum()
    })
}

fn band_limited() -> impl Strategy<Value = Vec<(i32, i32, f64, f64)>> {
    prop::collection::vec((-20i32..=20, 0i32..=20, -1.0f64..1.0, -1.0f64..1.0), 1..12)
        .prop_map(|v| v.into_iter().filter(|&(k1, k2, _, _)| k1 != 0 || k2 != 0).collect())
}

#[test]
fn helmholtz_examples() {
    let g = grid(16);
    let sin_x = ScalarField::from_fn(&g, |x, _| x.sin());
    let cos_y = ScalarField::from_fn(&g, |_, y| y.cos());
    assert!(sup_diff(&invert_helmholtz(&sin_x, 0.0).unwrap(), &sin_x) < 1e-14);
    assert!(sup_diff(&invert_helmholtz(&sin_x, 1.0).unwrap(), &sin_x.scale(0.5)) < 1e-14);
    assert!(sup_diff(&invert_helmholtz(&cos_y, 3.0).unwrap(), &cos_y.scale(0.25)) < 1e-14);
}

#[test]
fn velocity_examples() {
    let g = grid(16);
    let sin_x = ScalarField::from_fn(&g, |x, _| x.sin());
    let cos_x = ScalarField::from_fn(&g, |x, _| x.cos());
    let cos_y = ScalarField::from_fn(&g, |_, y| y.cos());
    let sin_y = ScalarField::from_fn(&g, |_, y| y.sin());
    let u = velocity_from_vorticity(&sin_x, 0.0).unwrap();
    assert!(u.u1.max_abs() < 1e-14 && sup_diff(&u.u2, &cos_x) < 1e-14);
    let u = velocity_from_vorticity(&sin_x, 1.0).unwrap();
    assert!(u.u1.max_abs() < 1e-14 && sup_diff(&u.u2, &cos_x.scale(0.5)) < 1e-14);
    let u = velocity_from_vorticity(&cos_y, 3.0).unwrap();
    assert!(sup_diff(&u.u1, &sin_y.scale(0.25)) < 1e-14 && u.u2.max_abs() < 1e-14);
    let e = error_velocity(&sin_x, 1.0).unwrap();
    assert!(e.u1.max_abs() < 1e-14 && sup_diff(&e.u2, &cos_x.scale(0.5)) < 1e-14);
}

#[test]
fn euler_rejects_mean() {
    let g = grid(16);
    let f = ScalarField::from_fn(&g, |x, _| 1.0 + x.sin());
    assert!(velocity_from_vorticity(&f, 0.0).is_err());
    assert!(velocity_from_vorticity(&f, 0.5).is_ok());
    assert!(error_velocity(&f, 0.5).is_err());
}

#[test]
fn continuum_norms() {
    for lambda in [0.25, 1.0, 4.0] {
        assert!((error_symbol_l1(lambda) / (PI * PI * lambda.sqrt()) - 1.0).abs() < 1e-3);
        assert!((gradient_kernel_l2(lambda) / (PI * lambda).sqrt() - 1.0).abs() < 1e-3);
    }
}

#[test]
fn dealias_examples() {
    let g = grid(64);
    let low = ScalarField::from_fn(&g, |x, _| x.cos());
    assert!(sup_diff(&dealias(&low), &low) < 1e-14);
    let high = ScalarField::from_fn(&g, |x, _| (30.0 * x).cos());
    let residue = dealias(&high).max_abs();
    assert!(residue < 1e-13, "{residue}");
}

#[test]
fn hamiltonian_of_single_mode() {
    // H = ½∫ψω = ½·(1/(λ+1))·∫sin²x = π²/(λ+1) on the 2π box
    let g = grid(16);
    let sin_x = ScalarField::from_fn(&g, |x, _| x.sin());
    for lambda in [0.0, 1.0, 3.0] {
        let h = hamiltonian(&sin_x, lambda).unwrap();
        assert!((h - PI * PI / (lambda + 1.0)).abs() < 1e-12, "{h}");
    }
}

#[test]
fn cutoff_values() {
    let f = DyadicFamily::default();
    assert_eq!(f.psi(0.5), 1.0);
    assert_eq!(f.psi(1.5), 0.0);
    assert_eq!(f.phi(1.0), 0.0);
    assert_eq!(f.phi(2.0), 1.0);
    for t in [Transition::ExpSmoothstep, Transition::RaisedCosine] {
        let f = DyadicFamily::new(t);
        let mut prev = 1.0;
        for i in 0..=400 {
            let v = f.psi(i as f64 / 200.0);
            assert!(v <= prev && (0.0..=1.0).contains(&v));
            prev = v;
        }
    }
}

#[test]
fn band_examples() {
    let g = grid(64);
    let fam = DyadicFamily::default();
    let cos2 = ScalarField::from_fn(&g, |x, _| (2.0 * x).cos());
    assert!(sup_diff(&fam.band_project(&cos2, 0).unwrap(), &cos2) < 1e-14);
    for j in [-1, 1, 2, 3] {
        assert!(fam.band_project(&cos2, j).unwrap().max_abs() < 1e-14);
    }
    let cos1 = ScalarField::from_fn(&g, |x, _| x.cos());
    assert!(sup_diff(&fam.band_project(&cos1, -1).unwrap(), &cos1) < 1e-14);
}

#[test]
fn besov_examples() {
    let g = grid(64);
    let fam = DyadicFamily::default();
    let spec = BesovSpec::new(-1.0, Exponent::Finite(2.0), Exponent::Infinity);
    let cos2 = ScalarField::from_fn(&g, |x, _| (2.0 * x).cos());
    let target = PI * 2f64.sqrt();
    assert!((fam.besov_norm(&cos2, &spec) - target).abs() < 1e-12);
    assert_eq!(fam.besov_norm(&ScalarField::zeros(&g), &spec), 0.0);

    // |ξ| = 8 lies only in band 2 (φ(2) = 1, φ(1) = 0, φ(4) = 0)
    let both = ScalarField::from_fn(&g, |x, _| (2.0 * x).cos() + (8.0 * x).cos());
    let direct = target.max(0.25 * target);
    assert!((fam.besov_norm(&both, &spec) - direct).abs() < 1e-12);
    let l1 = BesovSpec::new(-1.0, Exponent::Finite(2.0), Exponent::Finite(1.0));
    assert!((fam.besov_norm(&both, &l1) - 1.25 * target).abs() < 1e-12);
}

#[test]
fn x_norm_examples() {
    let g = grid(64);
    let fam = DyadicFamily::default();
    let (two, inf) = (Exponent::Finite(2.0), Exponent::Infinity);
    let target = PI * 2f64.sqrt();
    let cos2 = ScalarField::from_fn(&g, |x, _| (2.0 * x).cos());
    assert!((fam.x_norm(&cos2, -1.0, two, inf).unwrap() - target).abs() < 1e-12);
    let cos1 = ScalarField::from_fn(&g, |x, _| x.cos());
    assert!((fam.x_norm(&cos1, -1.0, two, inf).unwrap() - target).abs() < 1e-12);
    assert_eq!(fam.x_norm(&ScalarField::zeros(&g), -1.0, two, inf).unwrap(), 0.0);
}

#[test]
fn highpass_and_rescaled_examples() {
    let g = grid(64);
    let fam = DyadicFamily::default();
    let cos2 = ScalarField::from_fn(&g, |x, _| (2.0 * x).cos());
    assert!(sharp_highpass(&cos2, 3.0).unwrap().max_abs() < 1e-14);
    assert!(sup_diff(&sharp_highpass(&cos2, 2.0).unwrap(), &cos2) < 1e-14);
    assert!(sup_diff(&annulus_project(&cos2, 1.5, 2.0).unwrap(), &cos2) < 1e-14);
    let r = fam.rescaled_cutoffs(&cos2, 4.0).unwrap();
    assert!(sup_diff(&r.low, &cos2) < 1e-14 && r.sqrt_high.max_abs() < 1e-14);
    let r = fam.rescaled_cutoffs(&cos2, 1.0).unwrap();
    assert!(r.low.max_abs() < 1e-14 && sup_diff(&r.sqrt_high, &cos2) < 1e-14);
}

#[test]
fn commutator_examples() {
    let g = grid(64);
    let fam = DyadicFamily::default();
    let f = modes_field(&g, &[(3, 1, 1.0, 0.5), (7, -2, 0.3, 0.0), (1, 9, 0.0, 0.7)]);
    let v = VectorField::constant(&g, 0.7, -1.3);
    for j in -1..=4 {
        assert!(fam.commutator(&v, &f, j).unwrap().max_abs() < 1e-11);
    }
    // v = (0, cos x), f = sin(2y): v·∇f = 2cos x cos 2y sits at |k| = √5, so the
    // band-0 commutator is (φ(√5) − φ(2))·2cos x cos 2y
    let v = VectorField::new(ScalarField::zeros(&g), ScalarField::from_fn(&g, |x, _| x.cos())).unwrap();
    let f = ScalarField::from_fn(&g, |_, y| (2.0 * y).sin());
    let c = fam.commutator(&v, &f, 0).unwrap();
    let band = |r: f64| fam.band_multiplier(0, r);
    let expected = 2.0 * (band(5f64.sqrt()) - band(2.0));
    assert!((c.max_abs() - expected.abs()).abs() < 1e-11);
    let nonsolenoidal = VectorField::new(ScalarField::from_fn(&g, |x, _| x.sin()), ScalarField::zeros(&g)).unwrap();
    assert!(fam.commutator(&nonsolenoidal, &f, 0).is_err());
}

#[test]
fn log_interpolation_single_band() {
    let g = grid(64);
    let fam = DyadicFamily::default();
    let cos2 = ScalarField::from_fn(&g, |x, _| (2.0 * x).cos());
    for n in 1..=12 {
        assert!(fam.log_interpolation_check(&cos2, -1.0, Exponent::Finite(2.0), 1.0, n).unwrap());
        assert!(fam
            .log_interpolation_check(&ScalarField::zeros(&g), -1.0, Exponent::Finite(2.0), 1.0, n)
            .unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bands_reconstruct(coeffs in band_limited()) {
        let g = grid(64);
        let fam = DyadicFamily::default();
        let f = modes_field(&g, &coeffs);
        let mut sum = ScalarField::zeros(&g);
        for b in fam.bands(&f) {
            sum = sum.add(&b).unwrap();
        }
        prop_assert!(sup_diff(&sum, &f) <= 1e-12 * f.max_abs().max(1.0));
    }

    #[test]
    fn highpass_pythagoras(coeffs in band_limited(), theta in 0.5f64..25.0) {
        let g = grid(64);
        let f = modes_field(&g, &coeffs);
        let h = sharp_highpass(&f, theta).unwrap();
        let l = f.sub(&h).unwrap();
        let total = f.l2_norm().powi(2);
        let split = h.l2_norm().powi(2) + l.l2_norm().powi(2);
        prop_assert!((total - split).abs() <= 1e-12 * total.max(1e-300));
    }

    #[test]
    fn rescaled_energy_split(coeffs in band_limited(), theta in 0.5f64..25.0) {
        let g = grid(64);
        let fam = DyadicFamily::default();
        let f = modes_field(&g, &coeffs);
        let r = fam.rescaled_cutoffs(&f, theta).unwrap();
        let total = f.l2_norm().powi(2);
        let split = r.sqrt_low.l2_norm().powi(2) + r.sqrt_high.l2_norm().powi(2);
        prop_assert!((total - split).abs() <= 1e-12 * total.max(1e-300));
    }

    #[test]
    fn interpolation_holds(coeffs in band_limited(), eps in 0.1f64..3.0, n in 1u32..=12) {
        let g = grid(64);
        let fam = DyadicFamily::default();
        let f = modes_field(&g, &coeffs);
        prop_assert!(fam.log_interpolation_check(&f, -1.0, Exponent::Finite(2.0), eps, n).unwrap());
    }

    #[test]
    fn dealias_never_adds_energy(values in prop::collection::vec(-1.0f64..1.0, 32 * 32)) {
        let g = grid(32);
        let f = ScalarField::from_values(&g, values).unwrap();
        prop_assert!(dealias(&f).l2_norm() <= f.l2_norm() * (1.0 + 1e-14));
    }

    #[test]
    fn error_velocity_is_the_velocity_gap(coeffs in band_limited(), lambda in 1e-3f64..50.0) {
        let g = grid(64);
        let f = modes_field(&g, &coeffs);
        let e = error_velocity(&f, lambda).unwrap();
        let d = velocity_from_vorticity(&f, 0.0).unwrap()
            .sub(&velocity_from_vorticity(&f, lambda).unwrap()).unwrap();
        let scale = d.max_magnitude().max(1e-300);
        prop_assert!(e.sub(&d).unwrap().max_magnitude() <= 1e-12 * scale.max(1.0));
        prop_assert!(e.spectral_divergence_max() <= 1e-9 * (1.0 + scale));
    }
}
