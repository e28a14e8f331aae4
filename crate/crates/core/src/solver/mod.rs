//! Dirichlet solvers for det(u_{i j̄}) = f on balls, restricted to the
//! symmetry classes where trustworthy desk-scale schemes exist (disc n = 1,
//! radial any n, toric n = 2), plus the pointwise ingredients of the
//! second-difference barrier argument: complex Hessians, det^{1/n}
//! superadditivity, the barrier W, and comparison-principle scans.

mod barrier;
mod harmonic;
mod hessian;
mod poisson;
mod radial;
mod toric;

pub use barrier::{barrier_w, comparison_check, ComparisonReport};
pub use harmonic::harmonic_extension_disc;
pub use hessian::{complex_hessian, det_real, det_root_superadditivity, min_eigenvalue};
pub use poisson::poisson_disc_solve;
pub use radial::{profile_fn, radial_solve, ProfileFn, RadialSolution};
pub use toric::{toric_certify, toric_solve, ToricProfile};

use crate::error::{CoreError, Result};
use crate::geometry::BallDomain;
use crate::norms::SampledFunction;
use crate::util::ball_points;
use crate::RealFn;

/// Symmetry class of a Dirichlet instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry {
    /// n = 1, general data: the equation is Poisson's Δu = 4f.
    Disc,
    /// Data depending on |z|² only (any n).
    Radial,
    /// n = 2, data depending on (|z₁|², |z₂|²).
    Toric,
}

/// The Dirichlet problem det(u_{i j̄}) = f in B_r(0), u = φ on ∂B_r(0),
/// carried as evaluators of f^{1/n} and φ over real coordinates.
#[derive(Clone)]
pub struct DirichletProblem {
    pub domain: BallDomain,
    pub f_root: RealFn,
    pub phi: RealFn,
    pub symmetry: Symmetry,
}

impl DirichletProblem {
    /// Validates nonnegativity of f^{1/n} on samples and consistency of the
    /// claimed symmetry (value invariance under the group, to 1e-10).
    pub fn new(
        domain: BallDomain,
        f_root: RealFn,
        phi: RealFn,
        symmetry: Symmetry,
    ) -> Result<Self> {
        let m = domain.real_dim();
        let r = domain.radius();
        let samples = ball_points(m, r, 200, 0xd1e);
        for p in &samples {
            let v = f_root(p);
            if !(v >= 0.0) {
                return Err(CoreError::Domain(format!(
                    "f^(1/n) negative or non-finite ({v}) at {p:?}"
                )));
            }
        }
        let p = Self {
            domain,
            f_root,
            phi,
            symmetry,
        };
        p.check_symmetry(&samples)?;
        Ok(p)
    }

    fn check_symmetry(&self, samples: &[Vec<f64>]) -> Result<()> {
        const TOL: f64 = 1e-10;
        let n = self.domain.n();
        let r = self.domain.radius();
        let mismatch = |what: &str, a: f64, b: f64, p: &[f64]| {
            Err(CoreError::Inconsistent(format!(
                "{what} is not invariant under the claimed symmetry at {p:?}: {a} vs {b}"
            )))
        };
        match self.symmetry {
            Symmetry::Disc => {
                if n != 1 {
                    return Err(CoreError::InvalidArgument(format!(
                        "disc symmetry requires n = 1, got n = {n}"
                    )));
                }
            }
            Symmetry::Radial => {
                // compare each point against its axis representative of
                // equal norm
                for p in samples {
                    let nrm = p.iter().map(|c| c * c).sum::<f64>().sqrt();
                    let mut q = vec![0.0; p.len()];
                    q[0] = nrm;
                    let (a, b) = ((self.f_root)(p), (self.f_root)(&q));
                    if (a - b).abs() > TOL * (1.0 + a.abs()) {
                        return mismatch("f^(1/n)", a, b, p);
                    }
                }
                for k in 0..64 {
                    let p = sphere_rep(2 * n, r, k);
                    let mut q = vec![0.0; 2 * n];
                    q[0] = r;
                    let (a, b) = ((self.phi)(&p), (self.phi)(&q));
                    if (a - b).abs() > TOL * (1.0 + a.abs()) {
                        return mismatch("phi", a, b, &p);
                    }
                }
            }
            Symmetry::Toric => {
                if n != 2 {
                    return Err(CoreError::InvalidArgument(format!(
                        "toric symmetry requires n = 2, got n = {n}"
                    )));
                }
                // compare against the representative with both coordinates
                // rotated onto the positive real axes
                let rep = |p: &[f64]| {
                    let r1 = (p[0] * p[0] + p[1] * p[1]).sqrt();
                    let r2 = (p[2] * p[2] + p[3] * p[3]).sqrt();
                    vec![r1, 0.0, r2, 0.0]
                };
                for p in samples {
                    let (a, b) = ((self.f_root)(p), (self.f_root)(&rep(p)));
                    if (a - b).abs() > TOL * (1.0 + a.abs()) {
                        return mismatch("f^(1/n)", a, b, p);
                    }
                }
                for k in 0..64 {
                    let p = sphere_rep(4, r, k);
                    let (a, b) = ((self.phi)(&p), (self.phi)(&rep(&p)));
                    if (a - b).abs() > TOL * (1.0 + a.abs()) {
                        return mismatch("phi", a, b, &p);
                    }
                }
            }
        }
        Ok(())
    }
}

impl std::fmt::Debug for DirichletProblem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DirichletProblem")
            .field("domain", &self.domain)
            .field("symmetry", &self.symmetry)
            .finish()
    }
}

/// Deterministic boundary sample points for symmetry checks.
pub(crate) fn sphere_rep(m: usize, r: f64, k: usize) -> Vec<f64> {
    use rand::Rng;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xb0d + k as u64);
    loop {
        let p: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0f64..1.0)).collect();
        let nrm = p.iter().map(|c| c * c).sum::<f64>().sqrt();
        if nrm > 1e-3 {
            return p.iter().map(|c| c * r / nrm).collect();
        }
    }
}

/// A computed Dirichlet solution with its certification data.
#[derive(Debug, Clone)]
pub struct SolveResult {
    pub u: SampledFunction,
    /// sup |det(u_{i j̄}) - f| over interior stencil points.
    pub residual: f64,
    pub iterations: usize,
    /// Smallest eigenvalue of the discrete complex Hessian over the interior
    /// (≥ -tol certifies plurisubharmonicity up to discretization).
    pub psh_margin: f64,
}

impl SolveResult {
    /// Structured text summary (JSON-like, flat).
    pub fn summary(&self) -> String {
        format!(
            "{{\"residual\": {:.6e}, \"iterations\": {}, \"psh_margin\": {:.6e}, \"n_samples\": {}}}",
            self.residual,
            self.iterations,
            self.psh_margin,
            self.u.len()
        )
    }

    /// CSV of (point coordinates ';'-joined, u value).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("point,u\n");
        for (p, v) in self.u.points().iter().zip(self.u.values()) {
            let coords = p
                .iter()
                .map(|c| format!("{c:.12e}"))
                .collect::<Vec<_>>()
                .join(";");
            out.push_str(&format!("{coords},{v:.12e}\n"));
        }
        out
    }
}
