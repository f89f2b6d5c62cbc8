//! Pseudo-spectral laboratory for the quasi-geostrophic shallow-water (QGSW) equation
//! `∂_tω + u·∇ω = 0`, `u = ∇^⊥(λ − Δ)⁻¹ω`, and its Euler limit `λ → 0` on a periodic box.
//!
//! Modules, bottom up:
//!
//! - [`spectral`]: grid, fields, the Helmholtz/Biot–Savart symbols and whole-plane kernel norms.
//! - [`littlewood_paley`]: dyadic bands, Besov and `X^s_{p,r}` norms, commutators.
//! - [`transport`]: RK4 solver with two-thirds dealiasing, flow maps, snapshot files.
//! - [`patches`]: vortex-patch data, overlap geometry, `K₀`/`K₁` and the combined kernel.
//! - [`harness`]: λ-sweeps against Euler, rate fits, patch studies and reports.
//! - [`cli`]: the `qgsw` command line and its TOML configuration.
//!
//! Each capability has a runnable program under `examples/`:
//! `velocity_laws`, `littlewood_paley`, `conservation`, `kirchhoff_ellipse`, `flow_map`,
//! `snapshot_io`, `bessel_kernels`, `convergence_sweep`, `patch_study`, `run_config`.

pub mod error;
pub mod quadrature;
pub mod spectral;

pub use error::{Error, ErrorKind, Result};
pub mod littlewood_paley;
pub mod patches;
pub mod transport;
pub mod harness;
pub mod cli;
