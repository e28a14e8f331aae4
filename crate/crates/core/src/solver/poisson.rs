//! The n = 1 Dirichlet solver: det(u_{1 1̄}) = u_{z z̄} = f is Poisson's
//! equation Δu = 4f on the disc, discretized by Shortley-Weller finite
//! differences (cut cells at the circular boundary) and solved by SOR with
//! the model-problem optimal relaxation factor.

use super::{DirichletProblem, SolveResult, Symmetry};
use crate::error::{CoreError, Result};
use crate::norms::SampledFunction;
use crate::real_fn;

const SOR_TOL: f64 = 1e-11;

struct Stencil {
    /// flat index of each axis neighbor; usize::MAX when the arm hits the
    /// boundary (its Dirichlet contribution is folded into `rhs`)
    nbr: [usize; 4],
    coef: [f64; 4],
    diag: f64,
    rhs: f64,
    regular: bool,
}

/// Arm length fraction from an interior node to the circle of radius r in
/// the given axis direction, in units of h (1.0 when the full step stays
/// inside), plus the boundary hit point.
fn arm(x: f64, y: f64, dx: f64, dy: f64, h: f64, r: f64) -> (f64, Option<[f64; 2]>) {
    let (nx, ny) = (x + dx * h, y + dy * h);
    if nx * nx + ny * ny < r * r {
        return (1.0, None);
    }
    // along the active axis: |moving coord| = sqrt(r² - other²)
    let t = if dx != 0.0 {
        (r * r - y * y).max(0.0).sqrt() * dx.signum() - x
    } else {
        (r * r - x * x).max(0.0).sqrt() * dy.signum() - y
    } * (dx + dy).signum();
    let frac = (t / h).clamp(1e-6, 1.0);
    let hit = [x + dx * frac * h, y + dy * frac * h];
    (frac, Some(hit))
}

/// Solves the n = 1 problem on a uniform grid with `resolution` nodes per
/// axis over [-r, r]².
pub fn poisson_disc_solve(p: &DirichletProblem, resolution: usize) -> Result<SolveResult> {
    if p.symmetry != Symmetry::Disc || p.domain.n() != 1 {
        return Err(CoreError::InvalidArgument(
            "poisson_disc_solve needs a disc-symmetry (n = 1) problem".into(),
        ));
    }
    if resolution < 9 {
        return Err(CoreError::InvalidArgument(
            "resolution must be at least 9".into(),
        ));
    }
    let r = p.domain.radius();
    let n = resolution;
    let h = 2.0 * r / (n - 1) as f64;
    let coord = |i: usize| -r + i as f64 * h;

    // interior node indexing
    let mut index = vec![usize::MAX; n * n];
    let mut nodes = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let (x, y) = (coord(i), coord(j));
            if x * x + y * y < r * r - 1e-14 {
                index[i * n + j] = nodes.len();
                nodes.push((i, j));
            }
        }
    }
    if nodes.is_empty() {
        return Err(CoreError::EmptySamples);
    }

    // Shortley-Weller stencils: u_xx ≈ 2/(aE+aW) (uE/aE + uW/aW)/h²
    //                                  - 2 uP/(aE aW h²), same in y
    let dirs = [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0)];
    let mut stencils = Vec::with_capacity(nodes.len());
    for &(i, j) in &nodes {
        let (x, y) = (coord(i), coord(j));
        let mut fr = [1.0f64; 4];
        let mut hits = [None; 4];
        for (k, &(dx, dy)) in dirs.iter().enumerate() {
            let (f, hit) = arm(x, y, dx, dy, h, r);
            fr[k] = f;
            hits[k] = hit;
        }
        let h2 = h * h;
        let pair = |a: f64, b: f64| 2.0 / ((a + b) * a * h2);
        let coef = [
            pair(fr[0], fr[1]),
            pair(fr[1], fr[0]),
            pair(fr[2], fr[3]),
            pair(fr[3], fr[2]),
        ];
        let diag = 2.0 / (fr[0] * fr[1] * h2) + 2.0 / (fr[2] * fr[3] * h2);
        // Δ_h u = 4f with boundary contributions folded in:
        // diag·u_P = Σ coef·u_nb + rhs, rhs = Σ_boundary coef·φ(hit) - 4f
        let mut rhs = -4.0 * (p.f_root)(&[x, y]);
        let mut nbr = [usize::MAX; 4];
        let mut regular = true;
        for (k, &(dx, dy)) in dirs.iter().enumerate() {
            match hits[k] {
                None => {
                    let (ni, nj) = ((i as f64 + dx) as usize, (j as f64 + dy) as usize);
                    nbr[k] = index[ni * n + nj];
                    if nbr[k] == usize::MAX {
                        // neighbor grid node sits outside: treat its circle
                        // projection as the Dirichlet value
                        let (bx, by) = (coord(ni), coord(nj));
                        let nrm = (bx * bx + by * by).sqrt();
                        rhs += coef[k] * (p.phi)(&[bx * r / nrm, by * r / nrm]);
                        regular = false;
                    }
                }
                Some(hit) => {
                    rhs += coef[k] * (p.phi)(&hit);
                    regular = false;
                }
            }
        }
        stencils.push(Stencil {
            nbr,
            coef,
            diag,
            rhs,
            regular,
        });
    }

    // SOR with the model-problem optimal relaxation factor
    let omega = 2.0 / (1.0 + (std::f64::consts::PI * h / (2.0 * r)).sin());
    let scale = 1.0
        + stencils
            .iter()
            .fold(0.0f64, |m, s| m.max(s.rhs.abs() * h * h));
    let mut u = vec![0.0f64; nodes.len()];
    let max_sweeps = 60 * n;
    let mut sweeps = 0;
    loop {
        sweeps += 1;
        for (k, s) in stencils.iter().enumerate() {
            let mut acc = s.rhs;
            for d in 0..4 {
                if s.nbr[d] != usize::MAX {
                    acc += s.coef[d] * u[s.nbr[d]];
                }
            }
            u[k] = (1.0 - omega) * u[k] + omega * acc / s.diag;
        }
        // residual of the discrete system, in units of u
        let mut res: f64 = 0.0;
        for (k, s) in stencils.iter().enumerate() {
            let mut acc = -s.diag * u[k];
            for d in 0..4 {
                if s.nbr[d] != usize::MAX {
                    acc += s.coef[d] * u[s.nbr[d]];
                }
            }
            acc += s.rhs;
            res = res.max(acc.abs() * h * h);
        }
        if res < SOR_TOL * scale {
            break;
        }
        if sweeps >= max_sweeps {
            return Err(CoreError::Solver(format!(
                "SOR failed to converge in {max_sweeps} sweeps (residual {res:.3e})"
            )));
        }
    }

    finish(p, n, h, r, &nodes, &index, &stencils, u, sweeps)
}

#[allow(clippy::too_many_arguments)]
fn finish(
    p: &DirichletProblem,
    n: usize,
    h: f64,
    r: f64,
    nodes: &[(usize, usize)],
    index: &[usize],
    stencils: &[Stencil],
    u: Vec<f64>,
    sweeps: usize,
) -> Result<SolveResult> {
    let coord = |i: usize| -r + i as f64 * h;

    // residual of det(u_{1 1̄}) - f = Δ_h u/4 - f and PSH margin over
    // regular interior nodes
    let mut residual: f64 = 0.0;
    let mut psh_margin = f64::INFINITY;
    for (k, s) in stencils.iter().enumerate() {
        if !s.regular {
            continue;
        }
        let mut lap = -s.diag * u[k];
        for d in 0..4 {
            lap += s.coef[d] * u[s.nbr[d]];
        }
        let (x, y) = (coord(nodes[k].0), coord(nodes[k].1));
        let f = (p.f_root)(&[x, y]);
        residual = residual.max((lap / 4.0 - f).abs());
        psh_margin = psh_margin.min(lap / 4.0);
    }
    if !psh_margin.is_finite() {
        psh_margin = 0.0;
    }

    // full-grid array for bilinear interpolation; exterior nodes take the
    // continuous boundary extension φ(r x/|x|)
    let mut grid = vec![0.0f64; n * n];
    for i in 0..n {
        for j in 0..n {
            let k = index[i * n + j];
            grid[i * n + j] = if k != usize::MAX {
                u[k]
            } else {
                let (x, y) = (coord(i), coord(j));
                let nrm = (x * x + y * y).sqrt().max(1e-300);
                (p.phi)(&[x * r / nrm, y * r / nrm])
            };
        }
    }
    let (gn, gh, gr) = (n, h, r);
    let evaluator = real_fn(move |q: &[f64]| {
        let fx = ((q[0] + gr) / gh).clamp(0.0, (gn - 1) as f64 - 1e-9);
        let fy = ((q[1] + gr) / gh).clamp(0.0, (gn - 1) as f64 - 1e-9);
        let (i, j) = (fx as usize, fy as usize);
        let (tx, ty) = (fx - i as f64, fy - j as f64);
        let g = |a: usize, b: usize| grid[a * gn + b];
        (1.0 - tx) * (1.0 - ty) * g(i, j)
            + tx * (1.0 - ty) * g(i + 1, j)
            + (1.0 - tx) * ty * g(i, j + 1)
            + tx * ty * g(i + 1, j + 1)
    });

    let points: Vec<Vec<f64>> = nodes
        .iter()
        .map(|&(i, j)| vec![coord(i), coord(j)])
        .collect();
    let dist: Vec<f64> = points
        .iter()
        .map(|pt| r - (pt[0] * pt[0] + pt[1] * pt[1]).sqrt())
        .collect();
    let sampled = SampledFunction::from_samples(2, points, u, dist, h)?
        .with_radius(r)
        .with_evaluator(evaluator);

    Ok(SolveResult {
        u: sampled,
        residual,
        iterations: sweeps,
        psh_margin,
    })
}
