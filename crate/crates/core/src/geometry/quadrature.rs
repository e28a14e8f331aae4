//! Surface-average quadrature on spheres S^{m-1} ⊂ ℝ^m.
//!
//! S¹ uses the N-point trapezoid rule (spectrally accurate for periodic
//! integrands). S³ uses Hopf-coordinate product quadrature: Gauss in the
//! latitude variable, trapezoid in both angles. Higher spheres fall back to
//! seeded Monte Carlo with antithetic pairs, so linear functions integrate
//! to zero exactly and runs are reproducible.

use crate::error::{CoreError, Result};
use crate::util::gauss_legendre;
use crate::RealFn;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// Quadrature nodes (unit vectors) and positive weights summing to 1 for
/// surface averages over S^{m-1}.
#[derive(Debug, Clone)]
pub struct SphereQuadrature {
    dim: usize,
    nodes: Vec<Vec<f64>>,
    weights: Vec<f64>,
}

impl SphereQuadrature {
    /// Trapezoid rule on the unit circle (m = 2).
    pub fn circle(n: usize) -> Result<Self> {
        if n < 4 {
            return Err(CoreError::InvalidArgument("need at least 4 nodes".into()));
        }
        let mut nodes = Vec::with_capacity(n);
        for i in 0..n {
            let theta = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
            nodes.push(vec![theta.cos(), theta.sin()]);
        }
        Ok(Self {
            dim: 2,
            nodes,
            weights: vec![1.0 / n as f64; n],
        })
    }

    /// Hopf-coordinate product quadrature on S³ ⊂ ℝ⁴.
    ///
    /// Points are (√(1-s) e^{iξ1}, √s e^{iξ2}); the surface measure is
    /// uniform in (s, ξ1, ξ2), so Gauss in s and trapezoid in the angles give
    /// high-order accuracy.
    pub fn s3(n_lat: usize, n_angle: usize) -> Result<Self> {
        if n_lat < 2 || n_angle < 4 {
            return Err(CoreError::InvalidArgument(
                "need n_lat >= 2 and n_angle >= 4".into(),
            ));
        }
        let (gn, gw) = gauss_legendre(n_lat);
        let mut nodes = Vec::with_capacity(n_lat * n_angle * n_angle);
        let mut weights = Vec::with_capacity(nodes.capacity());
        let aw = 1.0 / n_angle as f64;
        for (&x, &w) in gn.iter().zip(&gw) {
            let s = 0.5 * (x + 1.0); // s ∈ (0,1)
            let c1 = (1.0 - s).sqrt();
            let c2 = s.sqrt();
            let ws = 0.5 * w; // Gauss weight mapped to [0,1]
            for i in 0..n_angle {
                let xi1 = 2.0 * std::f64::consts::PI * i as f64 / n_angle as f64;
                for j in 0..n_angle {
                    let xi2 = 2.0 * std::f64::consts::PI * j as f64 / n_angle as f64;
                    nodes.push(vec![
                        c1 * xi1.cos(),
                        c1 * xi1.sin(),
                        c2 * xi2.cos(),
                        c2 * xi2.sin(),
                    ]);
                    weights.push(ws * aw * aw);
                }
            }
        }
        Ok(Self {
            dim: 4,
            nodes,
            weights,
        })
    }

    /// Seeded Monte Carlo with antithetic pairs on S^{m-1}, m arbitrary.
    pub fn monte_carlo(m: usize, pairs: usize, seed: u64) -> Result<Self> {
        if m < 2 || pairs == 0 {
            return Err(CoreError::InvalidArgument(
                "need m >= 2 and at least one antithetic pair".into(),
            ));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut nodes = Vec::with_capacity(2 * pairs);
        let w = 0.5 / pairs as f64;
        while nodes.len() < 2 * pairs {
            let g: Vec<f64> = (0..m)
                .map(|_| StandardNormal.sample(&mut rng))
                .collect();
            let norm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm < 1e-8 {
                continue;
            }
            let p: Vec<f64> = g.iter().map(|v| v / norm).collect();
            nodes.push(p.iter().map(|v| -v).collect());
            nodes.push(p);
        }
        Ok(Self {
            dim: m,
            nodes,
            weights: vec![w; 2 * pairs],
        })
    }

    /// Default quadrature for the sphere S^{m-1}.
    pub fn for_dim(m: usize, seed: u64) -> Result<Self> {
        match m {
            2 => Self::circle(256),
            4 => Self::s3(16, 32),
            _ => Self::monte_carlo(m, 4096, seed),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nodes(&self) -> &[Vec<f64>] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Quadrature approximation of the surface average of `v` over ∂B_h(x).
///
/// `domain_radius`, when given, rejects balls not contained in B_R(0).
pub fn sphere_mean(
    v: &RealFn,
    x: &[f64],
    h: f64,
    q: &SphereQuadrature,
    domain_radius: Option<f64>,
) -> Result<f64> {
    if x.len() != q.dim() {
        return Err(CoreError::InvalidArgument(format!(
            "point dimension {} does not match quadrature dimension {}",
            x.len(),
            q.dim()
        )));
    }
    if !(h > 0.0) {
        return Err(CoreError::InvalidArgument(format!(
            "radius h must be positive, got {h}"
        )));
    }
    if let Some(rad) = domain_radius {
        let xn = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if xn + h > rad + 1e-12 {
            return Err(CoreError::Domain(format!(
                "ball B_{h}(x) with |x| = {xn} not contained in B_{rad}(0)"
            )));
        }
    }
    let mut acc = 0.0;
    let mut y = vec![0.0; x.len()];
    for (node, &w) in q.nodes().iter().zip(q.weights()) {
        for (k, (xi, ni)) in x.iter().zip(node).enumerate() {
            y[k] = xi + h * ni;
        }
        acc += w * v(&y);
    }
    Ok(acc)
}
