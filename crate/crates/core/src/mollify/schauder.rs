//! Interior Schauder checks for the Poisson equation Δu = f: the weighted
//! seminorms [u]*₁ and [u]*_{1,α} against μ^{-1}|u|₀ + μ|f|^{(2)}₀ and
//! μ^{-1-α}|u|₀ + μ^{1-α}|f|^{(2)}₀ respectively, swept over μ ∈ (0, 1].
//!
//! The unknown constants are outputs: a family of manufactured solutions
//! must exhibit a uniform bound on the reported ratios.

use crate::error::{CoreError, Result};
use crate::norms::{starred_seminorm, sup_norm, weighted_density_norm, SampledFunction};

/// One μ sample of the sweep.
#[derive(Debug, Clone, Copy)]
pub struct SchauderRow {
    pub mu: f64,
    /// [u]*₁ / (μ^{-1}|u|₀ + μ|f|^{(2)}₀).
    pub ratio_first: f64,
    /// [u]*_{1,α} / (μ^{-1-α}|u|₀ + μ^{1-α}|f|^{(2)}₀).
    pub ratio_holder: f64,
}

/// Measured norms and the μ-sweep ratios.
#[derive(Debug, Clone)]
pub struct SchauderReport {
    pub rows: Vec<SchauderRow>,
    pub starred_1: f64,
    pub starred_1alpha: f64,
    pub sup_u: f64,
    pub weighted_f: f64,
    /// sup |Δ_h u - f| over interior sites (consistency check residual).
    pub lap_residual: f64,
}

impl SchauderReport {
    pub fn max_ratio_first(&self) -> f64 {
        self.rows.iter().fold(0.0f64, |m, r| m.max(r.ratio_first))
    }

    pub fn max_ratio_holder(&self) -> f64 {
        self.rows.iter().fold(0.0f64, |m, r| m.max(r.ratio_holder))
    }
}

/// Five-point (2m+1 in ℝ^m) finite-difference Laplacian of the evaluator.
fn fd_laplacian(u: &SampledFunction, i: usize, step: f64) -> Option<f64> {
    let f = u.evaluator()?;
    if u.boundary_distances()[i] < step {
        return None;
    }
    let p = &u.points()[i];
    let center = f(p);
    let mut acc = 0.0;
    let mut q = p.clone();
    for k in 0..u.dim() {
        q[k] = p[k] + step;
        acc += f(&q);
        q[k] = p[k] - step;
        acc += f(&q);
        q[k] = p[k];
    }
    Some((acc - 2.0 * u.dim() as f64 * center) / (step * step))
}

/// Checks Δu = f at shared sample sites, then reports the two Schauder
/// ratios across the μ-sweep.
pub fn schauder_check(
    u: &SampledFunction,
    f: &SampledFunction,
    alpha: f64,
    mus: &[f64],
) -> Result<SchauderReport> {
    if u.len() != f.len() || u.dim() != f.dim() {
        return Err(CoreError::InvalidArgument(
            "u and f must be sampled at the same sites".into(),
        ));
    }
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(CoreError::InvalidArgument(format!("alpha = {alpha}")));
    }
    if mus.is_empty() || mus.iter().any(|&m| !(m > 0.0 && m <= 1.0)) {
        return Err(CoreError::InvalidArgument(
            "mu sweep must be nonempty with every mu in (0, 1]".into(),
        ));
    }

    // consistency: centered FD Laplacian of u against f at interior sites
    let step = u.spacing();
    let scale = 1.0
        + u.values().iter().fold(0.0f64, |m, v| m.max(v.abs()))
        + f.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut lap_residual: f64 = 0.0;
    let mut checked = 0usize;
    for i in 0..u.len() {
        if let Some(lap) = fd_laplacian(u, i, step) {
            lap_residual = lap_residual.max((lap - f.values()[i]).abs());
            checked += 1;
        }
    }
    if checked == 0 {
        return Err(CoreError::InvalidArgument(
            "no interior sites admit a centered Laplacian stencil".into(),
        ));
    }
    let tol = 100.0 * step * step * scale;
    if lap_residual > tol {
        return Err(CoreError::Inconsistent(format!(
            "laplacian residual {lap_residual:.3e} exceeds discretization tolerance {tol:.3e}"
        )));
    }

    let sup_u = sup_norm(u)?.value;
    let starred_1 = starred_seminorm(u, 1, 0.0)?.value;
    let starred_1alpha = starred_seminorm(u, 1, alpha)?.value;
    let weighted_f = weighted_density_norm(f, 2, None)?;

    let rows = mus
        .iter()
        .map(|&mu| SchauderRow {
            mu,
            ratio_first: starred_1 / (sup_u / mu + mu * weighted_f),
            ratio_holder: starred_1alpha
                / (mu.powf(-1.0 - alpha) * sup_u + mu.powf(1.0 - alpha) * weighted_f),
        })
        .collect();

    Ok(SchauderReport {
        rows,
        starred_1,
        starred_1alpha,
        sup_u,
        weighted_f,
        lap_residual,
    })
}
