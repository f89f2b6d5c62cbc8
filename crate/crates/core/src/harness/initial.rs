use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::patches::PatchSpec;
use crate::spectral::{project_mean_zero, Grid, ScalarField};

/// Periodized Gaussian `amplitude · exp(−|x − center|² / (2 width²))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Blob {
    pub center: [f64; 2],
    pub amplitude: f64,
    pub width: f64,
}

/// Recipe for the shared initial vorticity of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum InitialData {
    Blobs { blobs: Vec<Blob> },
    Patch { patch: PatchSpec },
}

impl InitialData {
    /// Two unequal co-rotating Gaussian vortices, scaled to a box of side `length`.
    pub fn two_blob(length: f64) -> Self {
        let s = length / (2.0 * PI);
        InitialData::Blobs {
            blobs: vec![
                Blob {
                    center: [PI * s - 0.8 * s, PI * s],
                    amplitude: 4.0,
                    width: 0.35 * s,
                },
                Blob {
                    center: [PI * s + 0.8 * s, PI * s + 0.2 * s],
                    amplitude: 3.0,
                    width: 0.3 * s,
                },
            ],
        }
    }

    pub fn is_patch(&self) -> bool {
        matches!(self, InitialData::Patch { .. })
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            InitialData::Blobs { blobs } => {
                if blobs.is_empty() {
                    return Err(Error::param("blobs", "at least one blob is required"));
                }
                for b in blobs {
                    if !(b.width > 0.0 && b.width.is_finite()) {
                        return Err(Error::param("width", format!("{} must be positive", b.width)));
                    }
                    if !b.amplitude.is_finite() || b.center.iter().any(|c| !c.is_finite()) {
                        return Err(Error::param("blobs", "values must be finite"));
                    }
                }
                Ok(())
            }
            InitialData::Patch { patch } => patch.validate(),
        }
    }

    /// Samples the recipe and removes the mean; returns the field and the removed mean.
    pub fn sample(&self, grid: &Grid) -> Result<(ScalarField, f64)> {
        self.validate()?;
        let raw = match self {
            InitialData::Blobs { blobs } => {
                let l = grid.length();
                ScalarField::from_fn(grid, |x, y| {
                    blobs
                        .iter()
                        .map(|b| {
                            let mut acc = 0.0;
                            for i in -1..=1 {
                                for j in -1..=1 {
                                    let dx = x - b.center[0] + i as f64 * l;
                                    let dy = y - b.center[1] + j as f64 * l;
                                    acc += (-(dx * dx + dy * dy) / (2.0 * b.width * b.width)).exp();
                                }
                            }
                            b.amplitude * acc
                        })
                        .sum()
                })
            }
            InitialData::Patch { patch } => patch.rasterize(grid)?,
        };
        Ok(project_mean_zero(&raw))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::check_mean_zero;

    #[test]
    fn samples_are_mean_free() {
        let g = Grid::periodic(64).unwrap();
        let (w, mean) = InitialData::two_blob(g.length()).sample(&g).unwrap();
        assert!(check_mean_zero(&w).is_ok());
        assert!(mean > 0.0);
        let patch = InitialData::Patch {
            patch: PatchSpec::disc([PI, PI], 1.0),
        };
        let (p, mean) = patch.sample(&g).unwrap();
        assert!(check_mean_zero(&p).is_ok());
        // the erf ramp in the radial variable has mass π(r² + σ²), σ = ε/2
        let sigma = 2.0 * g.dx();
        let expected = PI * (1.0 + sigma * sigma) / g.area();
        assert!((mean / expected - 1.0).abs() < 1e-4, "{mean} vs {expected}");
    }

    #[test]
    fn bad_width_rejected() {
        let d = InitialData::Blobs {
            blobs: vec![Blob {
                center: [0.0, 0.0],
                amplitude: 1.0,
                width: 0.0,
            }],
        };
        assert!(d.validate().is_err());
    }
}
