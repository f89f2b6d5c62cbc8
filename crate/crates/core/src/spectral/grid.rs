use std::fmt;
use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Periodic square grid `[0, length)²` with `n` points per axis.
///
/// Samples are stored row-major: index `j * n + i` holds the point
/// `(x₁, x₂) = (i·dx, j·dx)`. Spectral coefficients use the same layout with
/// wavenumbers in standard DFT ordering `{0, 1, …, n/2-1, -n/2, …, -1}`.
#[derive(Clone)]
pub struct Grid {
    inner: Arc<GridInner>,
}

struct GridInner {
    n: usize,
    length: f64,
    index_axis: Vec<i64>,
    k_axis: Vec<f64>,
    // Same as k_axis with the unpaired Nyquist entry zeroed; used for odd
    // (derivative) multipliers so that real fields stay real.
    kd_axis: Vec<f64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl Grid {
    pub fn new(n: usize, length: f64) -> Result<Self> {
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "n = {n} must be a power of two and at least 8"
            )));
        }
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::InvalidGrid(format!("length = {length} must be positive")));
        }
        let scale = 2.0 * std::f64::consts::PI / length;
        let half = (n / 2) as i64;
        let index_axis: Vec<i64> = (0..n as i64)
            .map(|i| if i < half { i } else { i - n as i64 })
            .collect();
        let k_axis: Vec<f64> = index_axis.iter().map(|&k| k as f64 * scale).collect();
        let kd_axis = index_axis
            .iter()
            .map(|&k| if k == -half { 0.0 } else { k as f64 * scale })
            .collect();
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        Ok(Grid {
            inner: Arc::new(GridInner {
                n,
                length,
                index_axis,
                k_axis,
                kd_axis,
                forward,
                inverse,
            }),
        })
    }

    /// Grid on the standard `[0, 2π)²` box.
    pub fn periodic(n: usize) -> Result<Self> {
        Self::new(n, 2.0 * std::f64::consts::PI)
    }

    pub fn n(&self) -> usize {
        self.inner.n
    }

    pub fn length(&self) -> f64 {
        self.inner.length
    }

    /// Total number of grid points.
    pub fn len(&self) -> usize {
        self.inner.n * self.inner.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dx(&self) -> f64 {
        self.inner.length / self.inner.n as f64
    }

    pub fn cell_area(&self) -> f64 {
        let dx = self.dx();
        dx * dx
    }

    pub fn area(&self) -> f64 {
        self.inner.length * self.inner.length
    }

    /// Physical wavenumbers along one axis, `2π/length · {0, 1, …, -1}`.
    pub fn wavenumbers(&self) -> &[f64] {
        &self.inner.k_axis
    }

    /// Integer lattice indices along one axis.
    pub fn integer_wavenumbers(&self) -> &[i64] {
        &self.inner.index_axis
    }

    pub(crate) fn derivative_wavenumbers(&self) -> &[f64] {
        &self.inner.kd_axis
    }

    /// Physical wavevector at linear spectral index `idx`.
    pub fn wavevector(&self, idx: usize) -> (f64, f64) {
        let n = self.inner.n;
        (self.inner.k_axis[idx % n], self.inner.k_axis[idx / n])
    }

    pub fn integer_wavevector(&self, idx: usize) -> (i64, i64) {
        let n = self.inner.n;
        (self.inner.index_axis[idx % n], self.inner.index_axis[idx / n])
    }

    pub fn k_squared(&self, idx: usize) -> f64 {
        let (k1, k2) = self.wavevector(idx);
        k1 * k1 + k2 * k2
    }

    /// Largest wavevector magnitude present on the lattice.
    pub fn max_wavenumber(&self) -> f64 {
        let k = self.inner.k_axis[self.inner.n / 2].abs();
        k * std::f64::consts::SQRT_2
    }

    /// Coordinates of grid point `idx`.
    pub fn point(&self, idx: usize) -> (f64, f64) {
        let n = self.inner.n;
        let dx = self.dx();
        ((idx % n) as f64 * dx, (idx / n) as f64 * dx)
    }

    /// Unnormalized forward DFT of real samples.
    pub fn forward(&self, values: &[f64]) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.fft2(&mut buf, &self.inner.forward);
        buf
    }

    /// Inverse DFT (normalized by `1/n²`), keeping the real part.
    pub fn inverse_real(&self, coeffs: &[Complex64]) -> Vec<f64> {
        let mut buf = coeffs.to_vec();
        self.fft2(&mut buf, &self.inner.inverse);
        let norm = 1.0 / self.len() as f64;
        buf.iter().map(|c| c.re * norm).collect()
    }

    /// Inverts two Hermitian spectra with a single complex transform.
    pub fn inverse_pair(&self, a: &[Complex64], b: &[Complex64]) -> (Vec<f64>, Vec<f64>) {
        let i = Complex64::new(0.0, 1.0);
        let mut buf: Vec<Complex64> = a.iter().zip(b).map(|(x, y)| x + i * y).collect();
        self.fft2(&mut buf, &self.inner.inverse);
        let norm = 1.0 / self.len() as f64;
        buf.iter().map(|c| (c.re * norm, c.im * norm)).unzip()
    }

    fn fft2(&self, buf: &mut [Complex64], plan: &Arc<dyn Fft<f64>>) {
        let n = self.inner.n;
        let mut scratch = vec![Complex64::default(); plan.get_inplace_scratch_len()];
        plan.process_with_scratch(buf, &mut scratch);
        let mut t = vec![Complex64::default(); n * n];
        transpose(buf, &mut t, n);
        plan.process_with_scratch(&mut t, &mut scratch);
        transpose(&t, buf, n);
    }
}

fn transpose(src: &[Complex64], dst: &mut [Complex64], n: usize) {
    const BLOCK: usize = 32;
    for jb in (0..n).step_by(BLOCK) {
        for ib in (0..n).step_by(BLOCK) {
            for j in jb..(jb + BLOCK).min(n) {
                for i in ib..(ib + BLOCK).min(n) {
                    dst[i * n + j] = src[j * n + i];
                }
            }
        }
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.n == other.inner.n && self.inner.length == other.inner.length)
    }
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("n", &self.inner.n)
            .field("length", &self.inner.length)
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn standard_ordering() {
        let g = Grid::new(8, 2.0 * PI).unwrap();
        assert_eq!(g.integer_wavenumbers(), &[0, 1, 2, 3, -4, -3, -2, -1]);
        let k: Vec<f64> = g.wavenumbers().to_vec();
        assert_eq!(k, vec![0.0, 1.0, 2.0, 3.0, -4.0, -3.0, -2.0, -1.0]);
        assert_eq!(g.wavevector(0), (0.0, 0.0));
    }

    #[test]
    fn shorter_box_scales_lattice() {
        let g = Grid::new(8, PI).unwrap();
        let k: Vec<f64> = g.wavenumbers().to_vec();
        assert_eq!(k, vec![0.0, 2.0, 4.0, 6.0, -8.0, -6.0, -4.0, -2.0]);
    }

    #[test]
    fn rejects_bad_sizes() {
        assert!(matches!(Grid::new(6, 2.0 * PI), Err(Error::InvalidGrid(_))));
        assert!(matches!(Grid::new(4, 2.0 * PI), Err(Error::InvalidGrid(_))));
        assert!(Grid::new(8, 0.0).is_err());
        assert!(Grid::new(8, -1.0).is_err());
    }

    #[test]
    fn pair_inverse_matches_single() {
        let g = Grid::periodic(16).unwrap();
        let a: Vec<f64> = (0..g.len()).map(|i| ((i * 7) % 13) as f64 - 6.0).collect();
        let b: Vec<f64> = (0..g.len()).map(|i| ((i * 5) % 11) as f64).collect();
        let (ra, rb) = g.inverse_pair(&g.forward(&a), &g.forward(&b));
        for i in 0..g.len() {
            assert!((ra[i] - a[i]).abs() < 1e-12);
            assert!((rb[i] - b[i]).abs() < 1e-12);
        }
    }
}
