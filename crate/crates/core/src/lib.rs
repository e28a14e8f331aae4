//! Numerical laboratory for interior Hölder estimates of the complex
//! Monge-Ampère Dirichlet problem on a ball.
//!
//! The crate is organised around five subsystems:
//!
//! * [`geometry`] — ball automorphisms of the unit ball in ℂⁿ, pullbacks of
//!   functions and densities, spherical-mean quadrature;
//! * [`norms`] — the full Hölder norm calculus (sup, plain, starred, primed,
//!   weighted and boundary norms) on sampled functions;
//! * [`mollify`] — mollifier kernels, dyadic mollification ladders, and the
//!   Schauder interior-estimate checks;
//! * [`solver`] — Dirichlet solvers for det(u_{ij̄}) = f in symmetry classes
//!   (disc, radial, toric), complex Hessians, barriers and comparison scans;
//! * [`experiments`] — drivers that measure second-order difference exponents
//!   and interior C^{1,α} / C^{0,α} estimate ratios on solved and analytic
//!   instances.

// validation guards use `!(x > 0.0)` style comparisons on purpose: they
// must also reject NaN, which `x <= 0.0` would silently accept
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod experiments;
pub mod geometry;
pub mod mollify;
pub mod norms;
pub mod solver;
pub mod util;

pub use error::{CoreError, Result};

use std::sync::Arc;

/// Real-valued function of a point in ℝ^m (m = 2n for ball instances).
/// Coordinates are interleaved: `[Re z1, Im z1, Re z2, Im z2, ...]`.
pub type RealFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// Gradient evaluator returning the full ℝ^m gradient.
pub type GradFn = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

/// Wraps a plain closure into a shared evaluator.
pub fn real_fn<F>(f: F) -> RealFn
where
    F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
{
    Arc::new(f)
}

/// Wraps a gradient closure into a shared evaluator.
pub fn grad_fn<F>(f: F) -> GradFn
where
    F: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
{
    Arc::new(f)
}
