use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{Grid, ScalarField};

/// Geometry of a vortex patch. Polygon vertices are offsets from the patch center.
#[derive(Debug, Clone, PartialEq)]
pub enum PatchShape {
    Disc { radius: f64 },
    Ellipse { a: f64, b: f64, orientation: f64 },
    Polygon { vertices: Vec<[f64; 2]> },
}

/// Vortex-patch initial datum `amplitude · 𝟙_D`, optionally mollified across `∂D`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PatchConfig", into = "PatchConfig")]
pub struct PatchSpec {
    pub shape: PatchShape,
    pub center: [f64; 2],
    pub amplitude: f64,
    /// Ramp half-width `ε`; `None` means four grid spacings.
    pub mollify_width: Option<f64>,
}

/// Flat key layout used by configuration files.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PatchConfig {
    shape: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    b: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    orientation: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    vertices: Option<Vec<[f64; 2]>>,
    center: [f64; 2],
    #[serde(default = "one")]
    amplitude: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mollify_width: Option<f64>,
}

fn one() -> f64 {
    1.0
}

pub(crate) const PATCH_KEYS: &[&str] = &[
    "shape",
    "radius",
    "a",
    "b",
    "orientation",
    "vertices",
    "center",
    "amplitude",
    "mollify_width",
];

impl TryFrom<PatchConfig> for PatchSpec {
    type Error = Error;

    fn try_from(c: PatchConfig) -> Result<Self> {
        let need = |v: Option<f64>, key: &str| {
            v.ok_or_else(|| Error::InvalidPatch(format!("shape `{}` requires `{key}`", c.shape)))
        };
        let shape = match c.shape.as_str() {
            "disc" => PatchShape::Disc {
                radius: need(c.radius, "radius")?,
            },
            "ellipse" => PatchShape::Ellipse {
                a: need(c.a, "a")?,
                b: need(c.b, "b")?,
                orientation: c.orientation.unwrap_or(0.0),
            },
            "polygon" => PatchShape::Polygon {
                vertices: c.vertices.clone().ok_or_else(|| {
                    Error::InvalidPatch("shape `polygon` requires `vertices`".into())
                })?,
            },
            other => {
                return Err(Error::InvalidPatch(format!(
                    "unknown shape `{other}` (expected disc, ellipse or polygon)"
                )))
            }
        };
        let spec = PatchSpec {
            shape,
            center: c.center,
            amplitude: c.amplitude,
            mollify_width: c.mollify_width,
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl From<PatchSpec> for PatchConfig {
    fn from(p: PatchSpec) -> Self {
        let mut c = PatchConfig {
            shape: String::new(),
            radius: None,
            a: None,
            b: None,
            orientation: None,
            vertices: None,
            center: p.center,
            amplitude: p.amplitude,
            mollify_width: p.mollify_width,
        };
        match p.shape {
            PatchShape::Disc { radius } => {
                c.shape = "disc".into();
                c.radius = Some(radius);
            }
            PatchShape::Ellipse { a, b, orientation } => {
                c.shape = "ellipse".into();
                c.a = Some(a);
                c.b = Some(b);
                c.orientation = Some(orientation);
            }
            PatchShape::Polygon { vertices } => {
                c.shape = "polygon".into();
                c.vertices = Some(vertices);
            }
        }
        c
    }
}

impl PatchSpec {
    pub fn disc(center: [f64; 2], radius: f64) -> Self {
        PatchSpec {
            shape: PatchShape::Disc { radius },
            center,
            amplitude: 1.0,
            mollify_width: None,
        }
    }

    pub fn ellipse(center: [f64; 2], a: f64, b: f64, orientation: f64) -> Self {
        PatchSpec {
            shape: PatchShape::Ellipse { a, b, orientation },
            center,
            amplitude: 1.0,
            mollify_width: None,
        }
    }

    pub fn polygon(center: [f64; 2], vertices: Vec<[f64; 2]>) -> Self {
        PatchSpec {
            shape: PatchShape::Polygon { vertices },
            center,
            amplitude: 1.0,
            mollify_width: None,
        }
    }

    pub fn with_mollify_width(mut self, eps: f64) -> Self {
        self.mollify_width = Some(eps);
        self
    }

    pub fn with_amplitude(mut self, amplitude: f64) -> Self {
        self.amplitude = amplitude;
        self
    }

    /// Grid-independent checks: positive sizes, finite values, simple polygon.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidPatch(m));
        if !self.center.iter().all(|v| v.is_finite()) || !self.amplitude.is_finite() {
            return bad("center and amplitude must be finite".into());
        }
        if let Some(eps) = self.mollify_width {
            if !(eps >= 0.0 && eps.is_finite()) {
                return bad(format!("mollify_width = {eps} must be nonnegative"));
            }
        }
        match &self.shape {
            PatchShape::Disc { radius } if !(*radius > 0.0) => bad(format!("radius {radius} <= 0")),
            PatchShape::Ellipse { a, b, orientation } => {
                if !(*a > 0.0 && *b > 0.0) {
                    bad(format!("semi-axes ({a}, {b}) must be positive"))
                } else if !orientation.is_finite() {
                    bad("orientation must be finite".into())
                } else {
                    Ok(())
                }
            }
            PatchShape::Polygon { vertices } => check_simple_polygon(vertices),
            _ => Ok(()),
        }
    }

    /// Exact area of `D`.
    pub fn area(&self) -> f64 {
        use std::f64::consts::PI;
        match &self.shape {
            PatchShape::Disc { radius } => PI * radius * radius,
            PatchShape::Ellipse { a, b, .. } => PI * a * b,
            PatchShape::Polygon { vertices } => shoelace(vertices).abs(),
        }
    }

    /// Smallest length scale of the shape (used against the mollification width).
    fn feature_size(&self) -> f64 {
        match &self.shape {
            PatchShape::Disc { radius } => *radius,
            PatchShape::Ellipse { a, b, .. } => a.min(*b),
            PatchShape::Polygon { vertices } => {
                let n = vertices.len();
                (0..n)
                    .map(|i| {
                        let (p, q) = (vertices[i], vertices[(i + 1) % n]);
                        (q[0] - p[0]).hypot(q[1] - p[1])
                    })
                    .fold(f64::INFINITY, f64::min)
            }
        }
    }

    /// Half-extents of the axis-aligned bounding box around the center.
    fn half_extents(&self) -> (f64, f64) {
        match &self.shape {
            PatchShape::Disc { radius } => (*radius, *radius),
            PatchShape::Ellipse { a, b, orientation } => {
                let (s, c) = orientation.sin_cos();
                (
                    (a * a * c * c + b * b * s * s).sqrt(),
                    (a * a * s * s + b * b * c * c).sqrt(),
                )
            }
            PatchShape::Polygon { vertices } => vertices.iter().fold((0.0, 0.0), |(x, y), v| {
                (f64::max(x, v[0].abs()), f64::max(y, v[1].abs()))
            }),
        }
    }

    /// Signed distance to `∂D`, positive inside.
    pub fn signed_distance(&self, x: f64, y: f64) -> f64 {
        let (dx, dy) = (x - self.center[0], y - self.center[1]);
        match &self.shape {
            PatchShape::Disc { radius } => radius - dx.hypot(dy),
            PatchShape::Ellipse { a, b, orientation } => {
                let (s, c) = orientation.sin_cos();
                let (u, v) = (c * dx + s * dy, -s * dx + c * dy);
                let inside = (u / a).powi(2) + (v / b).powi(2) < 1.0;
                let d = if a >= b {
                    ellipse_distance(*a, *b, u.abs(), v.abs())
                } else {
                    ellipse_distance(*b, *a, v.abs(), u.abs())
                };
                if inside {
                    d
                } else {
                    -d
                }
            }
            PatchShape::Polygon { vertices } => {
                let n = vertices.len();
                let mut dist = f64::INFINITY;
                let mut inside = false;
                for i in 0..n {
                    let p = vertices[i];
                    let q = vertices[(i + 1) % n];
                    dist = dist.min(segment_distance(dx, dy, p, q));
                    if (p[1] > dy) != (q[1] > dy)
                        && dx < (q[0] - p[0]) * (dy - p[1]) / (q[1] - p[1]) + p[0]
                    {
                        inside = !inside;
                    }
                }
                if inside {
                    dist
                } else {
                    -dist
                }
            }
        }
    }

    /// Mollification width `ε` on `grid`.
    pub fn effective_width(&self, grid: &Grid) -> f64 {
        self.mollify_width.unwrap_or(4.0 * grid.dx())
    }

    /// Samples `amplitude · H(d(x)/ε)` on the grid, `d` the signed distance to `∂D`.
    ///
    /// `H(s) = ½ erfc(−√2 s)`, the Heaviside step smoothed by a Gaussian of standard
    /// deviation `ε/2` (about 0.023 at `d = −ε`, ½ on the boundary); `ε = 0` gives the
    /// sharp indicator. The shape must clear the box edges by `4ε`.
    pub fn rasterize(&self, grid: &Grid) -> Result<ScalarField> {
        self.validate()?;
        let eps = self.effective_width(grid);
        if eps >= self.feature_size() {
            return Err(Error::InvalidPatch(format!(
                "mollify width {eps} is not below the smallest feature size {}",
                self.feature_size()
            )));
        }
        let (hx, hy) = self.half_extents();
        let margin = 4.0 * eps;
        let l = grid.length();
        let [cx, cy] = self.center;
        let fits = cx - hx > margin
            && cx + hx < l - margin
            && cy - hy > margin
            && cy + hy < l - margin;
        if !fits {
            return Err(Error::InvalidPatch(format!(
                "patch does not fit inside the box with margin {margin}"
            )));
        }
        let amplitude = self.amplitude;
        Ok(ScalarField::from_fn(grid, |x, y| {
            let d = self.signed_distance(x, y);
            amplitude * ramp(d, eps)
        }))
    }
}

/// Indicator of `{d ≥ 0}` convolved with a Gaussian of standard deviation `eps / 2`.
pub(crate) fn ramp(d: f64, eps: f64) -> f64 {
    if eps == 0.0 {
        return if d >= 0.0 { 1.0 } else { 0.0 };
    }
    0.5 * libm::erfc(-std::f64::consts::SQRT_2 * d / eps)
}

fn shoelace(v: &[[f64; 2]]) -> f64 {
    let n = v.len();
    0.5 * (0..n)
        .map(|i| {
            let (p, q) = (v[i], v[(i + 1) % n]);
            p[0] * q[1] - q[0] * p[1]
        })
        .sum::<f64>()
}

fn segment_distance(x: f64, y: f64, p: [f64; 2], q: [f64; 2]) -> f64 {
    let (ex, ey) = (q[0] - p[0], q[1] - p[1]);
    let len2 = ex * ex + ey * ey;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((x - p[0]) * ex + (y - p[1]) * ey) / len2).clamp(0.0, 1.0)
    };
    (x - p[0] - t * ex).hypot(y - p[1] - t * ey)
}

fn orient(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

fn segments_cross(p1: [f64; 2], p2: [f64; 2], q1: [f64; 2], q2: [f64; 2]) -> bool {
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    d1 * d2 <= 0.0 && d3 * d4 <= 0.0
}

fn check_simple_polygon(v: &[[f64; 2]]) -> Result<()> {
    let n = v.len();
    if n < 3 {
        return Err(Error::InvalidPatch("polygon needs at least 3 vertices".into()));
    }
    if !v.iter().flatten().all(|c| c.is_finite()) {
        return Err(Error::InvalidPatch("polygon vertices must be finite".into()));
    }
    for i in 0..n {
        for j in i + 1..n {
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if adjacent {
                continue;
            }
            if segments_cross(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n]) {
                return Err(Error::InvalidPatch(format!(
                    "polygon edges {i} and {j} intersect"
                )));
            }
        }
    }
    if shoelace(v).abs() == 0.0 {
        return Err(Error::InvalidPatch("polygon has zero area".into()));
    }
    Ok(())
}

/// Distance from `(y0, y1)` (first quadrant) to the ellipse with semi-axes `e0 ≥ e1`.
fn ellipse_distance(e0: f64, e1: f64, y0: f64, y1: f64) -> f64 {
    if y1 > 0.0 {
        if y0 > 0.0 {
            let z0 = y0 / e0;
            let z1 = y1 / e1;
            let g = z0 * z0 + z1 * z1 - 1.0;
            if g == 0.0 {
                return 0.0;
            }
            let r0 = (e0 / e1).powi(2);
            let sbar = ellipse_root(r0, z0, z1, g);
            let x0 = r0 * y0 / (sbar + r0);
            let x1 = y1 / (sbar + 1.0);
            (x0 - y0).hypot(x1 - y1)
        } else {
            (y1 - e1).abs()
        }
    } else {
        let numer = e0 * y0;
        let denom = e0 * e0 - e1 * e1;
        if numer < denom {
            let xde0 = numer / denom;
            let x0 = e0 * xde0;
            let x1 = e1 * (1.0 - xde0 * xde0).max(0.0).sqrt();
            (x0 - y0).hypot(x1)
        } else {
            (y0 - e0).abs()
        }
    }
}

fn ellipse_root(r0: f64, z0: f64, z1: f64, mut g: f64) -> f64 {
    let n0 = r0 * z0;
    let mut s0 = z1 - 1.0;
    let mut s1 = if g < 0.0 { 0.0 } else { n0.hypot(z1) - 1.0 };
    let mut s = 0.0;
    for _ in 0..200 {
        s = 0.5 * (s0 + s1);
        if s == s0 || s == s1 {
            break;
        }
        let ratio0 = n0 / (s + r0);
        let ratio1 = z1 / (s + 1.0);
        g = ratio0 * ratio0 + ratio1 * ratio1 - 1.0;
        if g > 0.0 {
            s0 = s;
        } else if g < 0.0 {
            s1 = s;
        } else {
            break;
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ellipse_distance_axis_points() {
        let e = PatchSpec::ellipse([0.0, 0.0], 2.0, 1.0, 0.0);
        assert!((e.signed_distance(0.0, 0.0) - 1.0).abs() < 1e-12);
        assert!((e.signed_distance(3.0, 0.0) + 1.0).abs() < 1e-12);
        assert!((e.signed_distance(0.0, 1.5) + 0.5).abs() < 1e-12);
        let r = PatchSpec::ellipse([0.0, 0.0], 2.0, 1.0, std::f64::consts::FRAC_PI_2);
        assert!((r.signed_distance(0.0, 3.0) + 1.0).abs() < 1e-12);
    }

    #[test]
    fn ellipse_distance_is_a_distance() {
        // distance is 1-Lipschitz and vanishes on the boundary
        let e = PatchSpec::ellipse([0.0, 0.0], 1.5, 0.7, 0.3);
        for i in 0..64 {
            let t = i as f64 * std::f64::consts::TAU / 64.0;
            let (u, v) = (1.5 * t.cos(), 0.7 * t.sin());
            let (s, c) = 0.3f64.sin_cos();
            let (x, y) = (c * u - s * v, s * u + c * v);
            assert!(e.signed_distance(x, y).abs() < 1e-10);
        }
        for i in 0..50 {
            let x = -2.0 + 0.08 * i as f64;
            let d0 = e.signed_distance(x, 0.2);
            let d1 = e.signed_distance(x + 0.01, 0.2);
            assert!((d1 - d0).abs() <= 0.01 + 1e-12);
        }
    }

    #[test]
    fn polygon_validation_and_distance() {
        let square = vec![[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]];
        let p = PatchSpec::polygon([3.0, 3.0], square);
        p.validate().unwrap();
        assert!((p.area() - 4.0).abs() < 1e-15);
        assert!((p.signed_distance(3.0, 3.0) - 1.0).abs() < 1e-15);
        assert!((p.signed_distance(5.0, 3.0) + 1.0).abs() < 1e-15);
        let bowtie = vec![[-1.0, -1.0], [1.0, 1.0], [1.0, -1.0], [-1.0, 1.0]];
        assert!(PatchSpec::polygon([3.0, 3.0], bowtie).validate().is_err());
    }

    #[test]
    fn boundary_contact_rejected() {
        let g = Grid::periodic(64).unwrap();
        let p = PatchSpec::disc([0.5, 3.0], 1.0);
        assert!(matches!(p.rasterize(&g), Err(Error::InvalidPatch(_))));
        let p = PatchSpec::disc([3.0, 3.0], 0.05);
        assert!(p.rasterize(&g).is_err(), "mollification wider than the disc");
    }

    #[test]
    fn config_keys_round_trip() {
        let toml_text = "shape = \"ellipse\"\na = 2.0\nb = 1.0\ncenter = [3.0, 3.0]\n";
        let p: PatchSpec = toml::from_str(toml_text).unwrap();
        assert_eq!(p, PatchSpec::ellipse([3.0, 3.0], 2.0, 1.0, 0.0));
        let json = serde_json::to_string(&p).unwrap();
        let back: PatchSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
        let bad = "shape = \"disc\"\ncenter = [3.0, 3.0]\n";
        assert!(toml::from_str::<PatchSpec>(bad).is_err());
    }

    #[test]
    fn ramp_is_symmetric() {
        for i in 0..20 {
            let d = -1.0 + 0.1 * i as f64;
            assert!((ramp(d, 0.5) + ramp(-d, 0.5) - 1.0).abs() < 1e-15);
        }
        assert_eq!(ramp(0.0, 0.0), 1.0);
        assert_eq!(ramp(-1e-9, 0.0), 0.0);
    }
}
