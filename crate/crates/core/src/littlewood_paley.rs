//! Dyadic Littlewood–Paley decomposition on the periodic lattice.
//!
//! The family is built from a radial profile `ψ` with `ψ ≡ 1` on `[0, 1]`,
//! `ψ ≡ 0` on `[4/3, ∞)`, and `φ(r) = ψ(r/2) − ψ(r)`, so that
//! `ψ(ξ) + Σ_{k=0}^{K} φ(2^{-k}ξ) = ψ(2^{-K-1}ξ)` holds by construction.
//! Band `j = -1` is `ψ(D)`; band `j ≥ 0` is `φ(2^{-j}D)`.

use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{
    check_mean_zero, dealias_in_place, gradient_spectrum, Exponent, Grid, ScalarField,
    VectorField,
};

/// Shape of the monotone transition of `ψ` on `[1, 4/3]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Transition {
    /// `C^∞` smoothstep `e(t) / (e(t) + e(1 − t))` with `e(t) = exp(−1/t)`.
    #[default]
    ExpSmoothstep,
    /// `C¹` raised cosine; handy for comparing cutoff sensitivity.
    RaisedCosine,
}

impl Transition {
    /// Rises from 0 at `t = 0` to 1 at `t = 1`.
    fn step(self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        if t >= 1.0 {
            return 1.0;
        }
        match self {
            Transition::ExpSmoothstep => {
                let a = (-1.0 / t).exp();
                let b = (-1.0 / (1.0 - t)).exp();
                a / (a + b)
            }
            Transition::RaisedCosine => 0.5 - 0.5 * (std::f64::consts::PI * t).cos(),
        }
    }
}

/// Besov parameters `B^s_{p,q}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BesovSpec {
    pub s: f64,
    pub p: Exponent,
    pub q: Exponent,
}

impl BesovSpec {
    pub fn new(s: f64, p: Exponent, q: Exponent) -> Self {
        BesovSpec { s, p, q }
    }
}

/// Output of [`DyadicFamily::rescaled_cutoffs`].
#[derive(Debug, Clone)]
pub struct RescaledCutoffs {
    /// `ψ(Θ⁻¹D) f`
    pub low: ScalarField,
    /// `√ψ(Θ⁻¹D) f`
    pub sqrt_low: ScalarField,
    /// `√(1 − ψ(Θ⁻¹D)) f`
    pub sqrt_high: ScalarField,
}

/// Both sides of the logarithmic interpolation inequality for `g = (Id − S₀)f`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterpolationSides {
    /// `‖g‖_{B^s_{p,1}}`
    pub lhs: f64,
    /// `(N + 1)‖g‖_{B^s_{p,∞}} + 2^{-Nε}(1 − 2^{-ε})⁻¹ ‖g‖_{B^{s+ε}_{p,∞}}`
    pub rhs: f64,
    /// `N‖g‖_{B^s_{p,∞}} + 2^{-Nε}‖g‖_{B^{s+ε}_{p,∞}}`, the constant-free shorthand.
    pub shorthand_rhs: f64,
}

impl InterpolationSides {
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs * (1.0 + 1e-12) + 1e-300
    }
}

/// Radial cutoffs `ψ`, `φ` and the band projectors built from them.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DyadicFamily {
    transition: Transition,
}

impl DyadicFamily {
    pub fn new(transition: Transition) -> Self {
        DyadicFamily { transition }
    }

    pub fn transition(&self) -> Transition {
        self.transition
    }

    pub fn psi(&self, r: f64) -> f64 {
        1.0 - self.transition.step((r - 1.0) * 3.0)
    }

    pub fn phi(&self, r: f64) -> f64 {
        self.psi(0.5 * r) - self.psi(r)
    }

    /// Symbol of `Δ_j` at radius `r`.
    pub fn band_multiplier(&self, j: i32, r: f64) -> f64 {
        match j {
            -1 => self.psi(r),
            j if j >= 0 => self.phi(r / 2f64.powi(j)),
            _ => 0.0,
        }
    }

    /// Symbol of `S_j = Σ_{j' ≤ j-1} Δ_{j'}` at radius `r`.
    pub fn low_multiplier(&self, j: i32, r: f64) -> f64 {
        if j >= 0 {
            self.psi(r / 2f64.powi(j))
        } else {
            0.0
        }
    }

    /// Largest band index that can be nonzero on the grid's lattice.
    pub fn max_band(&self, grid: &Grid) -> i32 {
        let kmax = grid.max_wavenumber();
        // band j lives on 2^j ≤ |ξ| ≤ (8/3)·2^j
        let mut j = -1;
        while 2f64.powi(j + 1) < kmax {
            j += 1;
        }
        j
    }

    fn radial_apply(&self, f: &ScalarField, m: impl Fn(f64) -> f64) -> Vec<Complex64> {
        let grid = f.grid();
        f.spectral()
            .iter()
            .enumerate()
            .map(|(idx, c)| c * m(grid.k_squared(idx).sqrt()))
            .collect()
    }

    /// `Δ_j f`.
    pub fn band_project(&self, f: &ScalarField, j: i32) -> Result<ScalarField> {
        if j < -1 {
            return Err(Error::param("j", format!("band index {j} must be >= -1")));
        }
        let coeffs = self.radial_apply(f, |r| self.band_multiplier(j, r));
        Ok(ScalarField::from_spectral(f.grid(), coeffs))
    }

    /// `S_j f`.
    pub fn low_project(&self, f: &ScalarField, j: i32) -> ScalarField {
        let coeffs = self.radial_apply(f, |r| self.low_multiplier(j, r));
        ScalarField::from_spectral(f.grid(), coeffs)
    }

    /// `(Id − S₀) f`.
    pub fn remove_low(&self, f: &ScalarField) -> ScalarField {
        let coeffs = self.radial_apply(f, |r| 1.0 - self.psi(r));
        ScalarField::from_spectral(f.grid(), coeffs)
    }

    /// All bands `Δ_{-1} f, …, Δ_{max} f`.
    pub fn bands(&self, f: &ScalarField) -> Vec<ScalarField> {
        (-1..=self.max_band(f.grid()))
            .map(|j| self.band_project(f, j).expect("band index in range"))
            .collect()
    }

    /// `(j, ‖Δ_j f‖_{Lᵖ})` for every band on the lattice.
    pub fn band_norms(&self, f: &ScalarField, p: Exponent) -> Vec<(i32, f64)> {
        (-1..=self.max_band(f.grid()))
            .map(|j| {
                let band = self.band_project(f, j).expect("band index in range");
                (j, band.lp_norm(p))
            })
            .collect()
    }

    /// `‖f‖_{B^s_{p,q}} = (Σ_j 2^{jsq}‖Δ_j f‖ᵖ^q)^{1/q}` over the finite lattice.
    pub fn besov_norm(&self, f: &ScalarField, spec: &BesovSpec) -> f64 {
        let weighted = self
            .band_norms(f, spec.p)
            .into_iter()
            .map(|(j, norm)| 2f64.powf(j as f64 * spec.s) * norm);
        sequence_norm(weighted, spec.q)
    }

    /// `‖f‖_{X^s_{p,r}} = ‖S₀∇^⊥Δ⁻¹f‖_{Lᵖ} + ‖(2^{js}‖Δ_j f‖_{Lᵖ})_{j≥0}‖_{ℓ^r}`.
    pub fn x_norm(&self, f: &ScalarField, s: f64, p: Exponent, r: Exponent) -> Result<f64> {
        check_mean_zero(f)?;
        let low = self.x_norm_low_part(f).lp_norm(p);
        let tail = self
            .band_norms(f, p)
            .into_iter()
            .filter(|&(j, _)| j >= 0)
            .map(|(j, norm)| 2f64.powf(j as f64 * s) * norm);
        Ok(low + sequence_norm(tail, r))
    }

    /// `S₀∇^⊥Δ⁻¹f`, with the zero mode dropped.
    pub fn x_norm_low_part(&self, f: &ScalarField) -> VectorField {
        let grid = f.grid();
        let kd = grid.derivative_wavenumbers();
        let n = grid.n();
        let i = Complex64::new(0.0, 1.0);
        let (a, b): (Vec<Complex64>, Vec<Complex64>) = f
            .spectral()
            .iter()
            .enumerate()
            .map(|(idx, c)| {
                let k2 = grid.k_squared(idx);
                if k2 == 0.0 {
                    return (Complex64::default(), Complex64::default());
                }
                // Δ⁻¹ has symbol −1/|k|²
                let g = c * (-self.psi(k2.sqrt()) / k2);
                (-kd[idx / n] * i * g, kd[idx % n] * i * g)
            })
            .unzip();
        VectorField {
            u1: ScalarField::from_spectral(grid, a),
            u2: ScalarField::from_spectral(grid, b),
        }
    }

    /// `ψ(|k|/Θ)`, `√ψ(|k|/Θ)` and `√(1 − ψ(|k|/Θ))` applied to `f`.
    pub fn rescaled_cutoffs(&self, f: &ScalarField, theta: f64) -> Result<RescaledCutoffs> {
        check_positive("theta", theta)?;
        let grid = f.grid();
        let make = |m: &dyn Fn(f64) -> f64| {
            ScalarField::from_spectral(grid, self.radial_apply(f, |r| m(self.psi(r / theta))))
        };
        Ok(RescaledCutoffs {
            low: make(&|v| v),
            sqrt_low: make(&|v| v.sqrt()),
            sqrt_high: make(&|v| (1.0 - v).max(0.0).sqrt()),
        })
    }

    /// `[Δ_j, v·∇] f = Δ_j(v·∇f) − v·∇(Δ_j f)`, with all products dealiased.
    pub fn commutator(&self, v: &VectorField, f: &ScalarField, j: i32) -> Result<ScalarField> {
        let grid = f.grid();
        if v.grid() != grid {
            return Err(Error::GridMismatch);
        }
        let divergence = v.spectral_divergence_max();
        if divergence > 1e-8 * v.spectral_gradient_scale() {
            return Err(Error::NonSolenoidal(divergence / grid.len() as f64));
        }
        if j < -1 {
            return Err(Error::param("j", format!("band index {j} must be >= -1")));
        }
        let mut v1 = v.u1.spectral().to_vec();
        let mut v2 = v.u2.spectral().to_vec();
        dealias_in_place(grid, &mut v1);
        dealias_in_place(grid, &mut v2);
        let (v1, v2) = grid.inverse_pair(&v1, &v2);
        let transport = |g_hat: &[Complex64]| -> Vec<Complex64> {
            let mut g = g_hat.to_vec();
            dealias_in_place(grid, &mut g);
            let (gx, gy) = gradient_spectrum(grid, &g);
            let (gx, gy) = grid.inverse_pair(&gx, &gy);
            let product: Vec<f64> = (0..grid.len())
                .map(|i| v1[i] * gx[i] + v2[i] * gy[i])
                .collect();
            let mut out = grid.forward(&product);
            dealias_in_place(grid, &mut out);
            out
        };
        let multiplier: Vec<f64> = (0..grid.len())
            .map(|idx| self.band_multiplier(j, grid.k_squared(idx).sqrt()))
            .collect();
        let outer = transport(f.spectral());
        let band: Vec<Complex64> = f
            .spectral()
            .iter()
            .zip(&multiplier)
            .map(|(c, m)| c * m)
            .collect();
        let inner = transport(&band);
        let coeffs = outer
            .iter()
            .zip(&multiplier)
            .zip(&inner)
            .map(|((o, m), i)| o * m - i)
            .collect();
        Ok(ScalarField::from_spectral(grid, coeffs))
    }

    /// Evaluates both sides of the interpolation bound
    /// `‖g‖_{B^s_{p,1}} ≤ (N+1)‖g‖_{B^s_{p,∞}} + 2^{-Nε}(1−2^{-ε})⁻¹‖g‖_{B^{s+ε}_{p,∞}}`,
    /// `g = (Id − S₀)f`.
    pub fn log_interpolation_sides(
        &self,
        f: &ScalarField,
        s: f64,
        p: Exponent,
        epsilon: f64,
        n_split: u32,
    ) -> Result<InterpolationSides> {
        check_positive("epsilon", epsilon)?;
        if n_split < 1 {
            return Err(Error::param("N", "must be at least 1"));
        }
        let g = self.remove_low(f);
        let norms = self.band_norms(&g, p);
        let weighted = |shift: f64| {
            norms
                .iter()
                .map(move |&(j, norm)| 2f64.powf(j as f64 * (s + shift)) * norm)
        };
        let lhs = sequence_norm(weighted(0.0), Exponent::Finite(1.0));
        let sup_s = sequence_norm(weighted(0.0), Exponent::Infinity);
        let sup_s_eps = sequence_norm(weighted(epsilon), Exponent::Infinity);
        let n = n_split as f64;
        let decay = 2f64.powf(-n * epsilon);
        Ok(InterpolationSides {
            lhs,
            rhs: (n + 1.0) * sup_s + decay / (1.0 - 2f64.powf(-epsilon)) * sup_s_eps,
            shorthand_rhs: n * sup_s + decay * sup_s_eps,
        })
    }

    pub fn log_interpolation_check(
        &self,
        f: &ScalarField,
        s: f64,
        p: Exponent,
        epsilon: f64,
        n_split: u32,
    ) -> Result<bool> {
        Ok(self
            .log_interpolation_sides(f, s, p, epsilon, n_split)?
            .holds())
    }
}

fn check_positive(name: &str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::param(name, format!("{value} must be positive")))
    }
}

fn sequence_norm(terms: impl Iterator<Item = f64>, q: Exponent) -> f64 {
    match q {
        Exponent::Infinity => terms.fold(0.0, f64::max),
        Exponent::Finite(q) if q == 1.0 => terms.sum(),
        Exponent::Finite(q) => terms.map(|t| t.powf(q)).sum::<f64>().powf(1.0 / q),
    }
}

/// Keeps modes with `|k| ≥ Θ` (boundary included).
pub fn sharp_highpass(f: &ScalarField, theta: f64) -> Result<ScalarField> {
    check_positive("theta", theta)?;
    let cut = theta * theta * (1.0 - 1e-12);
    Ok(f.apply_multiplier(|k1, k2| if k1 * k1 + k2 * k2 >= cut { 1.0 } else { 0.0 }))
}

/// Keeps modes with `a ≤ |k| ≤ b`.
pub fn annulus_project(f: &ScalarField, a: f64, b: f64) -> Result<ScalarField> {
    if !(a > 0.0 && b > a && b.is_finite()) {
        return Err(Error::param("annulus", format!("need 0 < a < b, got a = {a}, b = {b}")));
    }
    let (lo, hi) = (a * a * (1.0 - 1e-12), b * b * (1.0 + 1e-12));
    Ok(f.apply_multiplier(|k1, k2| {
        let k2s = k1 * k1 + k2 * k2;
        if k2s >= lo && k2s <= hi {
            1.0
        } else {
            0.0
        }
    }))
}
