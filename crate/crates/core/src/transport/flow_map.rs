//! Lagrangian trajectories through a velocity field.

use rayon::prelude::*;

use super::solver::Trajectory;
use crate::error::{Error, Result};
use crate::spectral::{velocity_from_vorticity, Grid};

/// Integrate `dx/dt = u` (forward) or `dx/dt = −u` (backward characteristics).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

/// A velocity field sampled at arbitrary space-time points.
pub trait VelocityProvider: Sync {
    /// Closed time interval on which the velocity is defined.
    fn time_span(&self) -> (f64, f64);
    fn velocity(&self, t: f64, x: [f64; 2]) -> [f64; 2];
}

/// Velocity given by a closure, defined for all times.
pub struct AnalyticVelocity<F>(pub F);

impl<F> VelocityProvider for AnalyticVelocity<F>
where
    F: Fn(f64, [f64; 2]) -> [f64; 2] + Sync,
{
    fn time_span(&self) -> (f64, f64) {
        (f64::NEG_INFINITY, f64::INFINITY)
    }

    fn velocity(&self, t: f64, x: [f64; 2]) -> [f64; 2] {
        (self.0)(t, x)
    }
}

/// Velocity reconstructed from stored snapshots: periodic Catmull–Rom in space, linear in time.
#[derive(Debug, Clone)]
pub struct SnapshotVelocity {
    grid: Grid,
    times: Vec<f64>,
    u1: Vec<Vec<f64>>,
    u2: Vec<Vec<f64>>,
}

impl SnapshotVelocity {
    pub fn new(grid: &Grid, times: Vec<f64>, u1: Vec<Vec<f64>>, u2: Vec<Vec<f64>>) -> Result<Self> {
        if times.is_empty() || times.len() != u1.len() || times.len() != u2.len() {
            return Err(Error::param("times", "one velocity pair per time is required"));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::param("times", "must be strictly increasing"));
        }
        if u1.iter().chain(&u2).any(|v| v.len() != grid.len()) {
            return Err(Error::GridMismatch);
        }
        Ok(SnapshotVelocity {
            grid: grid.clone(),
            times,
            u1,
            u2,
        })
    }

    /// Velocities of every snapshot in a trajectory, for the trajectory's `λ`.
    pub fn from_trajectory(traj: &Trajectory) -> Result<Self> {
        let mut u1 = Vec::with_capacity(traj.snapshots.len());
        let mut u2 = Vec::with_capacity(traj.snapshots.len());
        for w in &traj.snapshots {
            let u = velocity_from_vorticity(w, traj.lambda)?;
            u1.push(u.u1.into_values());
            u2.push(u.u2.into_values());
        }
        Self::new(traj.grid(), traj.times.clone(), u1, u2)
    }

    fn interpolate(&self, values: &[f64], x: [f64; 2]) -> f64 {
        let n = self.grid.n();
        let dx = self.grid.dx();
        let (sx, sy) = (x[0] / dx, x[1] / dx);
        let (fx, fy) = (sx.floor(), sy.floor());
        let wx = catmull_rom(sx - fx);
        let wy = catmull_rom(sy - fy);
        let ni = n as i64;
        let (ix, iy) = (fx as i64, fy as i64);
        let mut acc = 0.0;
        for (b, wyb) in wy.iter().enumerate() {
            let row = (iy + b as i64 - 1).rem_euclid(ni) as usize * n;
            let mut line = 0.0;
            for (a, wxa) in wx.iter().enumerate() {
                let col = (ix + a as i64 - 1).rem_euclid(ni) as usize;
                line += wxa * values[row + col];
            }
            acc += wyb * line;
        }
        acc
    }
}

fn catmull_rom(t: f64) -> [f64; 4] {
    let t2 = t * t;
    let t3 = t2 * t;
    [
        0.5 * (-t3 + 2.0 * t2 - t),
        0.5 * (3.0 * t3 - 5.0 * t2 + 2.0),
        0.5 * (-3.0 * t3 + 4.0 * t2 + t),
        0.5 * (t3 - t2),
    ]
}

impl VelocityProvider for SnapshotVelocity {
    fn time_span(&self) -> (f64, f64) {
        (self.times[0], *self.times.last().unwrap())
    }

    fn velocity(&self, t: f64, x: [f64; 2]) -> [f64; 2] {
        let last = self.times.len() - 1;
        let hi = self.times.partition_point(|&s| s < t).clamp(1.min(last), last);
        let lo = hi.saturating_sub(1);
        let theta = if hi == lo {
            0.0
        } else {
            ((t - self.times[lo]) / (self.times[hi] - self.times[lo])).clamp(0.0, 1.0)
        };
        let at = |k: usize| [self.interpolate(&self.u1[k], x), self.interpolate(&self.u2[k], x)];
        let a = at(lo);
        if theta == 0.0 {
            return a;
        }
        let b = at(hi);
        [a[0] + theta * (b[0] - a[0]), a[1] + theta * (b[1] - a[1])]
    }
}

/// Carries `points` from `t0` to `t1` with RK4 steps of at most `dt`.
///
/// Positions are not wrapped into the periodic cell, so displacements stay continuous.
pub fn advect_points<V: VelocityProvider + ?Sized>(
    velocity: &V,
    points: &[[f64; 2]],
    t0: f64,
    t1: f64,
    dt: f64,
    direction: Direction,
) -> Result<Vec<[f64; 2]>> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::param("dt", format!("{dt} must be positive")));
    }
    let (start, end) = velocity.time_span();
    for time in [t0, t1] {
        if !(time >= start - 1e-12 && time <= end + 1e-12) {
            return Err(Error::TimeOutOfRange { time, start, end });
        }
    }
    let steps = ((t1 - t0).abs() / dt).ceil().max(1.0) as usize;
    let h = (t1 - t0) / steps as f64;
    let sign = match direction {
        Direction::Forward => 1.0,
        Direction::Backward => -1.0,
    };
    let field = |t: f64, x: [f64; 2]| {
        let u = velocity.velocity(t, x);
        [sign * u[0], sign * u[1]]
    };
    let moved = points
        .par_iter()
        .map(|&p| {
            let mut x = p;
            for s in 0..steps {
                let t = t0 + s as f64 * h;
                let k1 = field(t, x);
                let k2 = field(t + 0.5 * h, [x[0] + 0.5 * h * k1[0], x[1] + 0.5 * h * k1[1]]);
                let k3 = field(t + 0.5 * h, [x[0] + 0.5 * h * k2[0], x[1] + 0.5 * h * k2[1]]);
                let k4 = field(t + h, [x[0] + h * k3[0], x[1] + h * k3[1]]);
                for d in 0..2 {
                    x[d] += h / 6.0 * (k1[d] + 2.0 * k2[d] + 2.0 * k3[d] + k4[d]);
                }
            }
            x
        })
        .collect::<Vec<_>>();
    if moved.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite { time: t1, steps });
    }
    Ok(moved)
}

/// Largest Euclidean distance between corresponding points.
pub fn max_displacement(a: &[[f64; 2]], b: &[[f64; 2]]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(p, q)| (p[0] - q[0]).hypot(p[1] - q[1]))
        .fold(0.0, f64::max)
}
