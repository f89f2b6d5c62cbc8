//! Dyadic decomposition of a random field: band energies, Besov and X norms, and the
//! logarithmic interpolation inequality.
//!
//! `cargo run --example littlewood_paley`

use std::f64::consts::PI;

use qgsw::littlewood_paley::{sharp_highpass, BesovSpec, DyadicFamily};
use qgsw::spectral::{project_mean_zero, Exponent, Grid, ScalarField};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = Grid::new(128, 2.0 * PI)?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let noise: Vec<f64> = (0..grid.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    // smooth the noise so the bands decay
    let smooth = ScalarField::from_values(&grid, noise)?.apply_radial(|k| (-k * k / 200.0).exp());
    let (f, _) = project_mean_zero(&smooth);

    let family = DyadicFamily::default();
    let two = Exponent::Finite(2.0);
    for (j, norm) in family.band_norms(&f, two) {
        println!("band {j:>2}: ‖Δ_j f‖₂ = {norm:.5e}");
    }
    let mut sum = ScalarField::zeros(&grid);
    for band in family.bands(&f) {
        sum = sum.add(&band)?;
    }
    println!("reconstruction error {:.2e}", sum.sub(&f)?.l2_norm() / f.l2_norm());

    let spec = BesovSpec::new(-1.0, two, Exponent::Infinity);
    println!("B^-1_(2,∞) = {:.5}", family.besov_norm(&f, &spec));
    println!("X^-1_(2,∞) = {:.5}", family.x_norm(&f, -1.0, two, Exponent::Infinity)?);
    println!("‖1_(|D|≥16) f‖₂ = {:.5}", sharp_highpass(&f, 16.0)?.l2_norm());

    for n in [1, 4, 8, 12] {
        let sides = family.log_interpolation_sides(&f, -1.0, two, 1.0, n)?;
        println!("N = {n:>2}: lhs {:.4} ≤ rhs {:.4}: {}", sides.lhs, sides.rhs, sides.holds());
    }
    Ok(())
}
