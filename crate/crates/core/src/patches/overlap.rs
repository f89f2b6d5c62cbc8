use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::ScalarField;

/// Geometric comparison of two patch fields.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OverlapMeasures {
    pub intersection_area: f64,
    pub symmetric_difference_area: f64,
    /// Grid max of `|A − B|`.
    pub sup_difference: f64,
}

/// Areas of `{A ≥ θ} ∩ {B ≥ θ}` and `{A ≥ θ} △ {B ≥ θ}`, plus `max |A − B|`.
pub fn overlap_measures(a: &ScalarField, b: &ScalarField, threshold: f64) -> Result<OverlapMeasures> {
    if a.grid() != b.grid() {
        return Err(Error::GridMismatch);
    }
    let cell = a.grid().cell_area();
    let mut both = 0usize;
    let mut either = 0usize;
    let mut sup: f64 = 0.0;
    for (&x, &y) in a.values().iter().zip(b.values()) {
        let (ia, ib) = (x >= threshold, y >= threshold);
        if ia && ib {
            both += 1;
        } else if ia != ib {
            either += 1;
        }
        sup = sup.max((x - y).abs());
    }
    Ok(OverlapMeasures {
        intersection_area: both as f64 * cell,
        symmetric_difference_area: either as f64 * cell,
        sup_difference: sup,
    })
}

/// Centroid and second central moments of the positive part of a field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    pub mass: f64,
    pub centroid: [f64; 2],
    pub ixx: f64,
    pub iyy: f64,
    pub ixy: f64,
}

impl Moments {
    /// Angle of the major principal axis in `(−π/2, π/2]`.
    pub fn orientation(&self) -> f64 {
        0.5 * (2.0 * self.ixy).atan2(self.ixx - self.iyy)
    }

    /// Principal second moments, largest first.
    pub fn principal(&self) -> (f64, f64) {
        let mid = 0.5 * (self.ixx + self.iyy);
        let rad = (0.25 * (self.ixx - self.iyy).powi(2) + self.ixy * self.ixy).sqrt();
        (mid + rad, mid - rad)
    }
}

/// Moments of `max(f, 0)` in the unwrapped cell; intended for patches away from the boundary.
pub fn second_moments(f: &ScalarField) -> Moments {
    let grid = f.grid();
    let cell = grid.cell_area();
    let mut m = 0.0;
    let (mut sx, mut sy) = (0.0, 0.0);
    for (idx, &v) in f.values().iter().enumerate() {
        let w = v.max(0.0);
        let (x, y) = grid.point(idx);
        m += w;
        sx += w * x;
        sy += w * y;
    }
    let (cx, cy) = if m > 0.0 { (sx / m, sy / m) } else { (0.0, 0.0) };
    let (mut ixx, mut iyy, mut ixy) = (0.0, 0.0, 0.0);
    for (idx, &v) in f.values().iter().enumerate() {
        let w = v.max(0.0);
        let (x, y) = grid.point(idx);
        let (dx, dy) = (x - cx, y - cy);
        ixx += w * dx * dx;
        iyy += w * dy * dy;
        ixy += w * dx * dy;
    }
    Moments {
        mass: m * cell,
        centroid: [cx, cy],
        ixx: ixx * cell,
        iyy: iyy * cell,
        ixy: ixy * cell,
    }
}
