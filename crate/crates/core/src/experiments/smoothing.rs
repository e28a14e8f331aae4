//! Uniform convergence under data smoothing: solve the disc problem with
//! shrink-mollified data (φ_ε, f_ε) down a ladder of ε and verify that
//! sup |u_ε - u| decreases toward zero. This is the numerical counterpart
//! of reducing to smooth data in the interior estimates.

use crate::error::{CoreError, Result};
use crate::mollify::smooth_dirichlet_data;
use crate::norms::default_extension;
use crate::real_fn;
use crate::solver::{poisson_disc_solve, DirichletProblem, Symmetry};
use crate::util::{ball_points, log_log_slope};

#[derive(Debug, Clone)]
pub struct SmoothingReport {
    /// (ε, sup |u_ε - u| over interior samples), in ladder order.
    pub rows: Vec<(f64, f64)>,
    /// sup differences never increase down the ladder (5% slack for solver
    /// and sampling noise).
    pub monotone: bool,
    /// log-log slope of sup difference against ε (≈ 1 for smooth data).
    pub rate: f64,
}

impl SmoothingReport {
    pub fn converged(&self, tol: f64) -> bool {
        self.monotone && self.rows.last().map(|&(_, d)| d <= tol).unwrap_or(false)
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("# rate = {:.6e}, monotone = {}\neps,sup_diff\n", self.rate, self.monotone);
        for (e, d) in &self.rows {
            out.push_str(&format!("{e:.12e},{d:.12e}\n"));
        }
        out
    }
}

/// Solves the smoothed problems for each ε in `eps_ladder` (descending) and
/// compares against the unsmoothed solution on interior samples. Restricted
/// to disc instances on the unit ball, where the mollifier geometry is
/// natural. `extension` overrides the ball extension of φ fed to the
/// mollifier (default: the blended radial projection); supply the exact
/// extension when one exists, since smoothing sees the extension, not just
/// the trace.
pub fn smoothing_convergence_check(
    p: &DirichletProblem,
    extension: Option<&crate::RealFn>,
    eps_ladder: &[f64],
    resolution: usize,
) -> Result<SmoothingReport> {
    if p.symmetry != Symmetry::Disc || (p.domain.radius() - 1.0).abs() > 1e-12 {
        return Err(CoreError::InvalidArgument(
            "smoothing check needs a disc instance on the unit ball".into(),
        ));
    }
    if eps_ladder.len() < 2 || eps_ladder.windows(2).any(|w| w[1] >= w[0]) {
        return Err(CoreError::InvalidArgument(
            "need a strictly descending ladder of at least 2 epsilons".into(),
        ));
    }
    let base = poisson_disc_solve(p, resolution)?;
    let u = base
        .u
        .evaluator()
        .ok_or_else(|| CoreError::InvalidArgument("missing evaluator".into()))?
        .clone();
    let probes = ball_points(2, 0.9, 300, 0x5a00);
    let ext = match extension {
        Some(e) => e.clone(),
        None => default_extension(p.phi.clone(), 2, 1.0).value,
    };

    let mut rows = Vec::with_capacity(eps_ladder.len());
    for &eps in eps_ladder {
        let (phi_eps, f_eps) = smooth_dirichlet_data(&ext, &p.f_root, 2, eps)?;
        // the mollifier preserves nonnegativity up to quadrature error;
        // clamp so the smoothed problem stays admissible
        let f_clamped = real_fn(move |x: &[f64]| f_eps(x).max(0.0));
        let smoothed = DirichletProblem::new(
            p.domain,
            f_clamped,
            phi_eps,
            Symmetry::Disc,
        )?;
        let res = poisson_disc_solve(&smoothed, resolution)?;
        let ue = res.u.evaluator().unwrap();
        let sup = probes
            .iter()
            .fold(0.0f64, |m, x| m.max((ue(x) - u(x)).abs()));
        rows.push((eps, sup));
    }

    let monotone = rows.windows(2).all(|w| w[1].1 <= w[0].1 * 1.05 + 1e-12);
    let rate = log_log_slope(&rows);
    Ok(SmoothingReport {
        rows,
        monotone,
        rate,
    })
}
