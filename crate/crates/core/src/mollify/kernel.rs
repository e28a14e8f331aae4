//! The standard smooth bump mollifier ρ_ε(x) = ε^{-m} ρ(x/ε) with
//! ρ(x) = c_m exp(-1/(1-|x|²)) on B_1, normalized to unit mass.
//!
//! The profile is radially symmetric with compact support, and its
//! Laplacian is available analytically, which gives the scaling bound
//! sup|Δρ_ε| = C(m) ε^{-m-2} exactly.

use crate::error::{CoreError, Result};
use crate::util::{gl_integrate_composite, unit_sphere_area};

fn psi(s: f64) -> f64 {
    if s >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - s * s)).exp()
    }
}

/// (ψ'(s), ψ''(s)) of the radial profile, for the analytic Laplacian.
fn psi_derivs(s: f64) -> (f64, f64) {
    if s >= 1.0 {
        return (0.0, 0.0);
    }
    let q = 1.0 - s * s;
    let p = psi(s);
    let f1 = -2.0 * s / (q * q);
    let f2 = -2.0 / (q * q) - 8.0 * s * s / (q * q * q);
    (f1 * p, (f2 + f1 * f1) * p)
}

/// A mollifier kernel at scale ε in ℝ^m, with cached bounds.
#[derive(Debug, Clone)]
pub struct MollifierKernel {
    eps: f64,
    dim: usize,
    norm_const: f64,
    sup_rho: f64,
    sup_lap_rho: f64,
}

impl MollifierKernel {
    pub fn new(eps: f64, dim: usize) -> Result<Self> {
        if !(eps > 0.0) {
            return Err(CoreError::InvalidArgument(format!("eps = {eps} must be > 0")));
        }
        if dim == 0 {
            return Err(CoreError::InvalidArgument("dimension must be >= 1".into()));
        }
        let radial_mass =
            gl_integrate_composite(|s| psi(s) * s.powi(dim as i32 - 1), 0.0, 1.0, 16, 8);
        let surface = if dim == 1 { 2.0 } else { unit_sphere_area(dim) };
        let norm_const = 1.0 / (surface * radial_mass);
        let sup_rho = norm_const * psi(0.0) / eps.powi(dim as i32);
        let sup_lap_rho = Self::lap_bound_const_with(norm_const, dim) / eps.powi(dim as i32 + 2);
        Ok(Self {
            eps,
            dim,
            norm_const,
            sup_rho,
            sup_lap_rho,
        })
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// sup |ρ_ε|.
    pub fn sup_density(&self) -> f64 {
        self.sup_rho
    }

    /// sup |Δρ_ε| = C(m) ε^{-m-2}.
    pub fn sup_laplacian(&self) -> f64 {
        self.sup_lap_rho
    }

    /// The recorded constant C(m) with sup|Δρ_ε| = C(m) ε^{-m-2}.
    pub fn lap_bound_const(dim: usize) -> Result<f64> {
        let k = Self::new(1.0, dim)?;
        Ok(Self::lap_bound_const_with(k.norm_const, dim))
    }

    fn lap_bound_const_with(norm_const: f64, dim: usize) -> f64 {
        // sup over the radius of |ψ'' + (m-1)/s ψ'|, scanned on a fine grid.
        let m = dim as f64;
        let mut sup: f64 = 0.0;
        for i in 0..=4000 {
            let s = i as f64 / 4000.0 * (1.0 - 1e-9);
            let (p1, p2) = psi_derivs(s);
            let lap = if s < 1e-8 {
                m * p2 // ψ'(s)/s → ψ''(0)
            } else {
                p2 + (m - 1.0) / s * p1
            };
            sup = sup.max(lap.abs() * norm_const);
        }
        sup
    }

    /// ρ_ε(x).
    pub fn density(&self, x: &[f64]) -> f64 {
        let s = x.iter().map(|v| v * v).sum::<f64>().sqrt() / self.eps;
        self.norm_const * psi(s) / self.eps.powi(self.dim as i32)
    }

    /// ρ_ε as a function of the radius |x|.
    pub fn density_radial(&self, radius: f64) -> f64 {
        self.norm_const * psi(radius / self.eps) / self.eps.powi(self.dim as i32)
    }

    /// Δρ_ε(x), analytic.
    pub fn laplacian(&self, x: &[f64]) -> f64 {
        let radius = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        self.laplacian_radial(radius)
    }

    pub fn laplacian_radial(&self, radius: f64) -> f64 {
        let s = radius / self.eps;
        let m = self.dim as f64;
        let (p1, p2) = psi_derivs(s);
        let lap = if s < 1e-8 {
            m * p2
        } else {
            p2 + (m - 1.0) / s * p1
        };
        self.norm_const * lap / self.eps.powi(self.dim as i32 + 2)
    }

    /// ∇ρ_ε(x), analytic.
    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let radius = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if radius < 1e-14 {
            return vec![0.0; self.dim];
        }
        let s = radius / self.eps;
        let (p1, _) = psi_derivs(s);
        let scale = self.norm_const * p1 / (self.eps.powi(self.dim as i32 + 1) * radius);
        x.iter().map(|v| v * scale).collect()
    }

    /// Total mass by radial quadrature (should be 1; used by invariants).
    pub fn mass(&self) -> f64 {
        let surface = if self.dim == 1 {
            2.0
        } else {
            unit_sphere_area(self.dim)
        };
        surface
            * gl_integrate_composite(
                |s| self.density_radial(s) * s.powi(self.dim as i32 - 1),
                0.0,
                self.eps,
                16,
                8,
            )
    }

    /// Second moment σ_ε = ∫ |y|² ρ_ε(y) dy, by 1-D radial quadrature.
    pub fn second_moment(&self) -> f64 {
        let surface = if self.dim == 1 {
            2.0
        } else {
            unit_sphere_area(self.dim)
        };
        surface
            * gl_integrate_composite(
                |s| self.density_radial(s) * s.powi(self.dim as i32 + 1),
                0.0,
                self.eps,
                16,
                8,
            )
    }
}
