use std::fmt;
use std::sync::OnceLock;

use rustfft::num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::Grid;
use crate::error::{Error, Result};

/// Integrability or summation exponent in `[1, ∞]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    pub fn new(p: f64) -> Result<Self> {
        if p.is_infinite() && p > 0.0 {
            Ok(Exponent::Infinity)
        } else if p >= 1.0 {
            Ok(Exponent::Finite(p))
        } else {
            Err(Error::param("exponent", format!("{p} is not in [1, ∞]")))
        }
    }

    pub fn as_f64(self) -> f64 {
        match self {
            Exponent::Finite(p) => p,
            Exponent::Infinity => f64::INFINITY,
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinity => write!(f, "inf"),
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Exponent::Finite(p) => s.serialize_f64(*p),
            Exponent::Infinity => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Int(i64),
            Text(String),
        }
        let p = match Raw::deserialize(d)? {
            Raw::Num(p) => p,
            Raw::Int(p) => p as f64,
            Raw::Text(t) if matches!(t.as_str(), "inf" | "infinity" | "∞") => f64::INFINITY,
            Raw::Text(t) => {
                return Err(serde::de::Error::custom(format!(
                    "expected a number >= 1 or \"inf\", got {t:?}"
                )))
            }
        };
        Exponent::new(p).map_err(serde::de::Error::custom)
    }
}

/// Real scalar field on a periodic grid with lazily computed DFT coefficients.
#[derive(Clone)]
pub struct ScalarField {
    grid: Grid,
    values: Vec<f64>,
    spectral: OnceLock<Vec<Complex64>>,
}

impl ScalarField {
    pub fn from_values(grid: &Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "expected {} samples, got {}",
                grid.len(),
                values.len()
            )));
        }
        Ok(ScalarField {
            grid: grid.clone(),
            values,
            spectral: OnceLock::new(),
        })
    }

    /// Samples `f(x₁, x₂)` at every grid point.
    pub fn from_fn<F: Fn(f64, f64) -> f64>(grid: &Grid, f: F) -> Self {
        let values = (0..grid.len())
            .map(|idx| {
                let (x1, x2) = grid.point(idx);
                f(x1, x2)
            })
            .collect();
        ScalarField {
            grid: grid.clone(),
            values,
            spectral: OnceLock::new(),
        }
    }

    pub fn zeros(grid: &Grid) -> Self {
        ScalarField {
            grid: grid.clone(),
            values: vec![0.0; grid.len()],
            spectral: OnceLock::new(),
        }
    }

    /// Builds a field from (Hermitian) coefficients.
    pub fn from_spectral(grid: &Grid, coeffs: Vec<Complex64>) -> Self {
        debug_assert_eq!(coeffs.len(), grid.len());
        let values = grid.inverse_real(&coeffs);
        let spectral = OnceLock::new();
        let _ = spectral.set(coeffs);
        ScalarField {
            grid: grid.clone(),
            values,
            spectral,
        }
    }

    pub(crate) fn from_parts(grid: &Grid, values: Vec<f64>, coeffs: Vec<Complex64>) -> Self {
        let spectral = OnceLock::new();
        let _ = spectral.set(coeffs);
        ScalarField {
            grid: grid.clone(),
            values,
            spectral,
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Unnormalized DFT coefficients.
    pub fn spectral(&self) -> &[Complex64] {
        self.spectral.get_or_init(|| self.grid.forward(&self.values))
    }

    /// Applies a real Fourier multiplier `m(k₁, k₂)` (physical wavenumbers).
    pub fn apply_multiplier<F: Fn(f64, f64) -> f64>(&self, m: F) -> ScalarField {
        let coeffs = self
            .spectral()
            .iter()
            .enumerate()
            .map(|(idx, c)| {
                let (k1, k2) = self.grid.wavevector(idx);
                c * m(k1, k2)
            })
            .collect();
        ScalarField::from_spectral(&self.grid, coeffs)
    }

    /// Applies a radial multiplier `m(|k|)`.
    pub fn apply_radial<F: Fn(f64) -> f64>(&self, m: F) -> ScalarField {
        self.apply_multiplier(|k1, k2| m((k1 * k1 + k2 * k2).sqrt()))
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.cell_area()
    }

    /// Grid-quadrature `Lᵖ` norm on the box (unnormalized measure; `p = ∞` is the grid max).
    pub fn lp_norm(&self, p: Exponent) -> f64 {
        lp_norm(&self.values, self.grid.cell_area(), p)
    }

    pub fn l2_norm(&self) -> f64 {
        self.lp_norm(Exponent::Finite(2.0))
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Box integral of `f²` computed from the coefficients (Parseval).
    pub fn spectral_energy(&self) -> f64 {
        let n2 = self.grid.len() as f64;
        self.spectral().iter().map(|c| c.norm_sqr()).sum::<f64>() * self.grid.area() / (n2 * n2)
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    fn zip_with(&self, other: &ScalarField, f: impl Fn(f64, f64) -> f64) -> Result<ScalarField> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Ok(ScalarField {
            grid: self.grid.clone(),
            values,
            spectral: OnceLock::new(),
        })
    }

    pub fn sub(&self, other: &ScalarField) -> Result<ScalarField> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn add(&self, other: &ScalarField) -> Result<ScalarField> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn scale(&self, factor: f64) -> ScalarField {
        ScalarField {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| v * factor).collect(),
            spectral: OnceLock::new(),
        }
    }

    pub fn offset(&self, shift: f64) -> ScalarField {
        ScalarField {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| v + shift).collect(),
            spectral: OnceLock::new(),
        }
    }
}

impl fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarField")
            .field("grid", &self.grid)
            .field("l2", &self.l2_norm())
            .finish()
    }
}

pub(crate) fn lp_norm(values: &[f64], cell_area: f64, p: Exponent) -> f64 {
    match p {
        Exponent::Infinity => values.iter().fold(0.0_f64, |m, v| m.max(v.abs())),
        Exponent::Finite(p) if p == 1.0 => values.iter().map(|v| v.abs()).sum::<f64>() * cell_area,
        Exponent::Finite(p) if p == 2.0 => {
            (values.iter().map(|v| v * v).sum::<f64>() * cell_area).sqrt()
        }
        Exponent::Finite(p) => {
            (values.iter().map(|v| v.abs().powf(p)).sum::<f64>() * cell_area).powf(1.0 / p)
        }
    }
}

/// Two-component vector field `(u₁, u₂)`.
#[derive(Clone, Debug)]
pub struct VectorField {
    pub u1: ScalarField,
    pub u2: ScalarField,
}

impl VectorField {
    pub fn new(u1: ScalarField, u2: ScalarField) -> Result<Self> {
        if u1.grid() != u2.grid() {
            return Err(Error::GridMismatch);
        }
        Ok(VectorField { u1, u2 })
    }

    /// Constant vector field.
    pub fn constant(grid: &Grid, c1: f64, c2: f64) -> Self {
        VectorField {
            u1: ScalarField::from_fn(grid, |_, _| c1),
            u2: ScalarField::from_fn(grid, |_, _| c2),
        }
    }

    pub fn grid(&self) -> &Grid {
        self.u1.grid()
    }

    /// Pointwise Euclidean magnitude.
    pub fn magnitude(&self) -> Vec<f64> {
        self.u1
            .values()
            .iter()
            .zip(self.u2.values())
            .map(|(a, b)| a.hypot(*b))
            .collect()
    }

    /// `Lᵖ` norm of the pointwise magnitude.
    pub fn lp_norm(&self, p: Exponent) -> f64 {
        match p {
            Exponent::Finite(p) if p == 2.0 => self.u1.l2_norm().hypot(self.u2.l2_norm()),
            _ => lp_norm(&self.magnitude(), self.grid().cell_area(), p),
        }
    }

    pub fn l2_norm(&self) -> f64 {
        self.lp_norm(Exponent::Finite(2.0))
    }

    pub fn max_magnitude(&self) -> f64 {
        self.magnitude().into_iter().fold(0.0, f64::max)
    }

    pub fn sub(&self, other: &VectorField) -> Result<VectorField> {
        Ok(VectorField {
            u1: self.u1.sub(&other.u1)?,
            u2: self.u2.sub(&other.u2)?,
        })
    }

    /// `max_k |k·û(k)|` using the derivative wavenumbers.
    pub fn spectral_divergence_max(&self) -> f64 {
        let grid = self.grid();
        let kd = grid.derivative_wavenumbers();
        let n = grid.n();
        let (a, b) = (self.u1.spectral(), self.u2.spectral());
        (0..grid.len())
            .map(|idx| (kd[idx % n] * a[idx] + kd[idx / n] * b[idx]).norm())
            .fold(0.0, f64::max)
    }

    /// Scale of the divergence test: `max_k |k|·|û(k)|`.
    pub(crate) fn spectral_gradient_scale(&self) -> f64 {
        let grid = self.grid();
        let (a, b) = (self.u1.spectral(), self.u2.spectral());
        (0..grid.len())
            .map(|idx| grid.k_squared(idx).sqrt() * a[idx].norm().hypot(b[idx].norm()))
            .fold(0.0, f64::max)
    }
}
