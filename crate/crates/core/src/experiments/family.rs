//! The built-in instance family: Dirichlet problems covering smooth,
//! degenerate (f = 0), nonsmooth-boundary-data, and higher-dimensional
//! symmetric cases, each with whatever oracle or explicit candidate it
//! admits. Estimate-ratio boundedness is asserted over this family.

use crate::error::{CoreError, Result};
use crate::geometry::{sphere_mean, BallDomain, SphereQuadrature};
use crate::real_fn;
use crate::solver::{
    harmonic_extension_disc, poisson_disc_solve, profile_fn, radial_solve, toric_certify,
    toric_solve, DirichletProblem, SolveResult, Symmetry,
};
use crate::util::ball_points;
use crate::RealFn;

/// A Dirichlet instance with optional exact-solution material.
pub struct Instance {
    pub name: &'static str,
    pub problem: DirichletProblem,
    /// Explicit solution to certify, for degenerate instances Newton cannot
    /// reach.
    pub candidate: Option<RealFn>,
    /// Independent high-accuracy evaluator of the true solution, when one
    /// exists.
    pub oracle: Option<RealFn>,
}

fn sq(z: &[f64]) -> f64 {
    z.iter().map(|c| c * c).sum()
}

/// The built-in family (7 instances: five n = 1 disc problems, one n = 2
/// radial, one n = 2 degenerate toric).
pub fn builtin_family() -> Vec<Instance> {
    let disc = BallDomain::new(1, 1.0).unwrap();
    let ball2 = BallDomain::new(2, 1.0).unwrap();
    let mk_disc = |f: RealFn, phi: RealFn| {
        DirichletProblem::new(disc, f, phi, Symmetry::Disc).unwrap()
    };
    let abspow_phi = real_fn(|x: &[f64]| x[0].abs().powf(1.5));
    let fourier_phi = real_fn(|x: &[f64]| {
        let th = x[1].atan2(x[0]);
        (3.0 * th).cos()
    });

    vec![
        Instance {
            name: "disc-unit-density",
            problem: mk_disc(real_fn(|_: &[f64]| 1.0), real_fn(|_: &[f64]| 0.0)),
            candidate: None,
            oracle: Some(real_fn(|z: &[f64]| sq(z) - 1.0)),
        },
        Instance {
            name: "disc-linear",
            problem: mk_disc(real_fn(|_: &[f64]| 0.0), real_fn(|x: &[f64]| x[0])),
            candidate: None,
            oracle: Some(real_fn(|z: &[f64]| z[0])),
        },
        Instance {
            name: "disc-abspow",
            problem: mk_disc(real_fn(|_: &[f64]| 0.0), abspow_phi.clone()),
            candidate: None,
            oracle: Some(harmonic_extension_disc(&abspow_phi, 2048).unwrap().0),
        },
        Instance {
            name: "disc-fourier3",
            problem: mk_disc(real_fn(|_: &[f64]| 0.0), fourier_phi),
            candidate: None,
            oracle: Some(real_fn(|z: &[f64]| {
                let r = sq(z).sqrt();
                let th = z[1].atan2(z[0]);
                r.powi(3) * (3.0 * th).cos()
            })),
        },
        Instance {
            name: "disc-mixed",
            problem: mk_disc(real_fn(|_: &[f64]| 1.0), real_fn(|x: &[f64]| x[0])),
            candidate: None,
            oracle: Some(real_fn(|z: &[f64]| sq(z) - 1.0 + z[0])),
        },
        Instance {
            name: "radial-n2",
            problem: DirichletProblem::new(
                ball2,
                real_fn(|_: &[f64]| 1.0),
                real_fn(|_: &[f64]| 0.0),
                Symmetry::Radial,
            )
            .unwrap(),
            candidate: None,
            oracle: Some(real_fn(|z: &[f64]| sq(z) - 1.0)),
        },
        Instance {
            name: "toric-degenerate",
            problem: DirichletProblem::new(
                ball2,
                real_fn(|_: &[f64]| 0.0),
                real_fn(|z: &[f64]| z[0] * z[0] + z[1] * z[1]),
                Symmetry::Toric,
            )
            .unwrap(),
            candidate: Some(real_fn(|z: &[f64]| z[0] * z[0] + z[1] * z[1])),
            oracle: Some(real_fn(|z: &[f64]| z[0] * z[0] + z[1] * z[1])),
        },
    ]
}

/// Dispatches an instance to the solver matching its symmetry class.
/// `resolution` is nodes per axis for the disc grid; the radial and toric
/// discretizations derive their sizes from it.
pub fn solve_instance(inst: &Instance, resolution: usize) -> Result<SolveResult> {
    let p = &inst.problem;
    match p.symmetry {
        Symmetry::Disc => poisson_disc_solve(p, resolution),
        Symmetry::Radial => {
            let n = p.domain.n();
            let r = p.domain.radius();
            let froot = p.f_root.clone();
            let profile = profile_fn(move |s: f64| {
                let mut x = vec![0.0; 2 * n];
                x[0] = s.max(0.0).sqrt();
                froot(&x).powi(n as i32)
            });
            let mut b = vec![0.0; 2 * n];
            b[0] = r;
            let sol = radial_solve(&profile, n, r, (p.phi)(&b))?;

            // wrap as a SolveResult with psh margin from the radial Hessian
            // eigenvalues g' (multiplicity n-1) and g' + s g''
            let mut residual: f64 = 0.0;
            let mut psh_margin = f64::INFINITY;
            for k in 0..=200 {
                let s = r * r * k as f64 / 200.0;
                residual = residual.max(sol.reduced_residual(s).abs());
                psh_margin = psh_margin.min(sol.gp(s).min(sol.gp(s) + s * sol.gpp(s)));
            }
            let evaluator = sol.evaluator();
            let points = ball_points(2 * n, 0.98 * r, 600, 0xfa01);
            let values: Vec<f64> = points.iter().map(|z| evaluator(z)).collect();
            let dist: Vec<f64> = points.iter().map(|z| r - sq(z).sqrt()).collect();
            let spacing = r * (points.len() as f64).powf(-1.0 / (2 * n) as f64);
            let u = crate::norms::SampledFunction::from_samples(2 * n, points, values, dist, spacing)?
                .with_radius(r)
                .with_evaluator(evaluator)
                .with_gradient(sol.gradient());
            Ok(SolveResult {
                u,
                residual,
                iterations: 0,
                psh_margin,
            })
        }
        Symmetry::Toric => match &inst.candidate {
            Some(cand) => toric_certify(p, cand, 128, 0x70c1),
            None => toric_solve(p, resolution.saturating_sub(1).clamp(16, 128)),
        },
    }
}

/// The per-solution basic certificate: sub-mean-value positivity and the
/// sup bound |u|₀ ≤ |φ|₀ + |f^{1/n}|₀.
#[derive(Debug, Clone)]
pub struct BasicCertificate {
    /// min over scanned (x, h) of the sphere mean minus the center value.
    pub min_mean_gap: f64,
    pub sup_u: f64,
    /// |φ|₀ + |f^{1/n}|₀ (sampled).
    pub sup_bound_rhs: f64,
    pub tol: f64,
}

impl BasicCertificate {
    pub fn mean_value_ok(&self) -> bool {
        self.min_mean_gap >= -self.tol
    }

    pub fn sup_bound_ok(&self) -> bool {
        self.sup_u <= self.sup_bound_rhs + self.tol
    }
}

/// Certifies a solved instance: scans sub-mean-value positivity at seeded
/// interior points with three ball radii each, and compares |u|₀ against
/// the data bound. The tolerance covers interpolation and quadrature error.
pub fn certify_basic(
    p: &DirichletProblem,
    res: &SolveResult,
    n_points: usize,
    seed: u64,
) -> Result<BasicCertificate> {
    let m = p.domain.real_dim();
    let r = p.domain.radius();
    let u = res
        .u
        .evaluator()
        .ok_or_else(|| CoreError::InvalidArgument("certification needs an evaluator".into()))?;
    let q = SphereQuadrature::for_dim(m, seed ^ 0x9ead)?;

    let mut min_mean_gap = f64::INFINITY;
    for x in ball_points(m, 0.9 * r, n_points, seed) {
        let room = r - sq(&x).sqrt();
        for frac in [0.25, 0.5, 0.75] {
            let h = frac * room;
            if h <= 0.0 {
                continue;
            }
            let gap = sphere_mean(u, &x, h, &q, Some(r))? - u(&x);
            min_mean_gap = min_mean_gap.min(gap);
        }
    }

    let sup_u = res.u.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut sup_phi: f64 = 0.0;
    for k in 0..256 {
        let b = crate::solver::sphere_rep(m, r, seed as usize + k);
        sup_phi = sup_phi.max((p.phi)(&b).abs());
    }
    let mut sup_froot: f64 = 0.0;
    for x in ball_points(m, r * (1.0 - 1e-9), 400, seed ^ 0xf) {
        sup_froot = sup_froot.max((p.f_root)(&x).abs());
    }
    let tol = 1e-3 * (1.0 + sup_u);
    Ok(BasicCertificate {
        min_mean_gap,
        sup_u,
        sup_bound_rhs: sup_phi + sup_froot,
        tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_has_seven_instances() {
        let fam = builtin_family();
        assert_eq!(fam.len(), 7);
        let names: Vec<_> = fam.iter().map(|i| i.name).collect();
        assert!(names.contains(&"toric-degenerate"));
    }

    #[test]
    fn every_instance_solves_and_certifies() {
        for inst in builtin_family() {
            let res = solve_instance(&inst, 65).unwrap_or_else(|e| {
                panic!("{} failed to solve: {e}", inst.name);
            });
            let cert = certify_basic(&inst.problem, &res, 60, 0xce7).unwrap();
            assert!(
                cert.mean_value_ok(),
                "{}: mean gap {} (tol {})",
                inst.name,
                cert.min_mean_gap,
                cert.tol
            );
            assert!(
                cert.sup_bound_ok(),
                "{}: sup {} vs rhs {}",
                inst.name,
                cert.sup_u,
                cert.sup_bound_rhs
            );
            assert!(
                res.psh_margin >= -10.0 * res.u.spacing() * res.u.spacing(),
                "{}: psh margin {}",
                inst.name,
                res.psh_margin
            );
        }
    }

    #[test]
    fn solutions_match_oracles() {
        for inst in builtin_family() {
            let Some(oracle) = &inst.oracle else { continue };
            let res = solve_instance(&inst, 65).unwrap();
            let u = res.u.evaluator().unwrap();
            let mut worst: f64 = 0.0;
            // oracle comparisons stay off the boundary layer where the
            // Poisson-kernel oracle itself degrades
            for x in ball_points(inst.problem.domain.real_dim(), 0.8, 150, 0x0c) {
                worst = worst.max((u(&x) - oracle(&x)).abs());
            }
            assert!(worst < 5e-3, "{}: worst {worst}", inst.name);
        }
    }
}
