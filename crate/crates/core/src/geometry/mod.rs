//! Complex-ball geometry: points of ℂⁿ stored as 2n reals, automorphisms of
//! the unit ball, pullbacks of functions and densities, and spherical-mean
//! quadrature.

mod moebius;
mod quadrature;

pub use moebius::{gamma_matrix, pullback, pullback_density, MoebiusMap};
pub use quadrature::{sphere_mean, SphereQuadrature};

use crate::error::{CoreError, Result};
use num_complex::Complex64;

/// A point of ℂⁿ. The real view interleaves coordinates as
/// `[Re z1, Im z1, ..., Re zn, Im zn]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexPoint {
    coords: Vec<Complex64>,
}

impl ComplexPoint {
    pub fn new(coords: Vec<Complex64>) -> Result<Self> {
        if coords.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(CoreError::InvalidArgument(
                "non-finite complex coordinate".into(),
            ));
        }
        Ok(Self { coords })
    }

    /// Origin of ℂⁿ.
    pub fn zero(n: usize) -> Self {
        Self {
            coords: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    /// Builds a point from interleaved real coordinates.
    pub fn from_reals(reals: &[f64]) -> Result<Self> {
        if !reals.len().is_multiple_of(2) {
            return Err(CoreError::InvalidArgument(
                "real coordinate vector must have even length".into(),
            ));
        }
        Self::new(
            reals
                .chunks_exact(2)
                .map(|c| Complex64::new(c[0], c[1]))
                .collect(),
        )
    }

    pub fn to_reals(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(2 * self.coords.len());
        for c in &self.coords {
            out.push(c.re);
            out.push(c.im);
        }
        out
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.coords
    }

    /// Complex dimension n.
    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Euclidean norm |z|.
    pub fn norm(&self) -> f64 {
        self.coords.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coords.iter().map(|c| c.norm_sqr()).sum::<f64>()
    }

    /// -z.
    pub fn neg(&self) -> Self {
        Self {
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}

/// A ball B_r(0) in ℂⁿ ≅ ℝ^{2n}, centered at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallDomain {
    n: usize,
    r: f64,
}

impl BallDomain {
    pub fn new(n: usize, r: f64) -> Result<Self> {
        if n == 0 {
            return Err(CoreError::InvalidArgument("n must be >= 1".into()));
        }
        if !(r > 0.0) || !r.is_finite() {
            return Err(CoreError::InvalidArgument(format!(
                "radius must be positive, got {r}"
            )));
        }
        Ok(Self { n, r })
    }

    pub fn unit(n: usize) -> Self {
        Self { n, r: 1.0 }
    }

    /// Complex dimension.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Real dimension 2n.
    pub fn real_dim(&self) -> usize {
        2 * self.n
    }

    pub fn radius(&self) -> f64 {
        self.r
    }

    /// Distance from a real-coordinate point to the boundary sphere
    /// (negative outside the closed ball).
    pub fn boundary_distance(&self, x: &[f64]) -> f64 {
        let nrm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        self.r - nrm
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        self.boundary_distance(x) >= -tol
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_view_roundtrip() {
        let p = ComplexPoint::from_reals(&[0.3, 0.4, 0.1, -0.2]).unwrap();
        assert_eq!(p.dim(), 2);
        assert_eq!(p.coords()[0], Complex64::new(0.3, 0.4));
        assert_eq!(p.to_reals(), vec![0.3, 0.4, 0.1, -0.2]);
    }

    #[test]
    fn rejects_non_finite() {
        assert!(ComplexPoint::from_reals(&[f64::NAN, 0.0]).is_err());
        assert!(ComplexPoint::from_reals(&[0.0, f64::INFINITY]).is_err());
    }

    #[test]
    fn ball_domain_invariants() {
        assert!(BallDomain::new(0, 1.0).is_err());
        assert!(BallDomain::new(1, 0.0).is_err());
        assert!(BallDomain::new(1, -2.0).is_err());
        let b = BallDomain::new(2, 0.5).unwrap();
        assert_eq!(b.real_dim(), 4);
        assert!((b.boundary_distance(&[0.5, 0.0, 0.0, 0.0])).abs() < 1e-15);
    }
}
