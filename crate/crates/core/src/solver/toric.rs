//! The n = 2 toric Dirichlet solver. For data depending on (ρ₁, ρ₂) =
//! (|z₁|², |z₂|²) the ansatz u = v(ρ₁, ρ₂) reduces the equation to
//!
//!   (v₁ + ρ₁v₁₁)(v₂ + ρ₂v₂₂) - ρ₁ρ₂ v₁₂² = f(ρ₁, ρ₂)
//!
//! on the triangle {ρ₁, ρ₂ ≥ 0, ρ₁ + ρ₂ ≤ r²}; only the hypotenuse is real
//! boundary (|z| = r), the axes are interior. Solved by damped Newton with
//! an ellipticity safeguard and a hand-rolled sparse BiCGStab. Degenerate
//! f ≡ 0 instances are certified from a supplied candidate instead.

use super::{complex_hessian, det_real, min_eigenvalue, DirichletProblem, SolveResult, Symmetry};
use crate::error::{CoreError, Result};
use crate::norms::SampledFunction;
use crate::util::ball_points;
use crate::{real_fn, RealFn};

const NEWTON_TOL: f64 = 1e-10;
const MAX_NEWTON: usize = 60;
const MAX_HALVINGS: usize = 40;

/// Reduced toric data: f and φ as functions of (ρ₁, ρ₂).
pub struct ToricProfile {
    pub f: Box<dyn Fn(f64, f64) -> f64 + Send + Sync>,
    pub phi: Box<dyn Fn(f64, f64) -> f64 + Send + Sync>,
}

impl ToricProfile {
    /// Reads the reduced profiles off a toric DirichletProblem by evaluating
    /// on the positive-real-axis slice z = (√ρ₁, 0, √ρ₂, 0).
    pub fn from_problem(p: &DirichletProblem) -> Result<Self> {
        if p.symmetry != Symmetry::Toric || p.domain.n() != 2 {
            return Err(CoreError::InvalidArgument(
                "toric reduction needs a toric-symmetry n = 2 problem".into(),
            ));
        }
        let froot = p.f_root.clone();
        let phi = p.phi.clone();
        Ok(Self {
            // n = 2: f = (f^{1/2})²
            f: Box::new(move |r1: f64, r2: f64| {
                let v = froot(&[r1.max(0.0).sqrt(), 0.0, r2.max(0.0).sqrt(), 0.0]);
                v * v
            }),
            phi: Box::new(move |r1: f64, r2: f64| {
                phi(&[r1.max(0.0).sqrt(), 0.0, r2.max(0.0).sqrt(), 0.0])
            }),
        })
    }
}

/// Triangle grid bookkeeping: nodes (i, j) with i + j ≤ n_edge.
struct Tri {
    n_edge: usize,
    hs: f64,
    /// row offsets into the flat node array
    offsets: Vec<usize>,
}

impl Tri {
    fn new(n_edge: usize, big_r: f64) -> Self {
        let mut offsets = Vec::with_capacity(n_edge + 2);
        let mut acc = 0;
        for i in 0..=n_edge + 1 {
            offsets.push(acc);
            if i <= n_edge {
                acc += n_edge + 1 - i;
            }
        }
        Self {
            n_edge,
            hs: big_r / n_edge as f64,
            offsets,
        }
    }

    fn flat(&self, i: usize, j: usize) -> usize {
        self.offsets[i] + j
    }

    fn n_nodes(&self) -> usize {
        (self.n_edge + 1) * (self.n_edge + 2) / 2
    }
}

/// (a, b, c) = (v₁+ρ₁v₁₁, v₂+ρ₂v₂₂, v₁₂) at node (i, j), with one-sided
/// first differences on the axes and a backward cross stencil next to the
/// hypotenuse.
fn eval_ops(tri: &Tri, v: &[f64], i: usize, j: usize) -> (f64, f64, f64) {
    let hs = tri.hs;
    let n = tri.n_edge;
    let at = |a: usize, b: usize| v[tri.flat(a, b)];
    let (r1, r2) = (i as f64 * hs, j as f64 * hs);

    let a = if i == 0 {
        (at(1, j) - at(0, j)) / hs
    } else {
        let v1 = (at(i + 1, j) - at(i - 1, j)) / (2.0 * hs);
        let v11 = (at(i + 1, j) - 2.0 * at(i, j) + at(i - 1, j)) / (hs * hs);
        v1 + r1 * v11
    };
    let b = if j == 0 {
        (at(i, 1) - at(i, 0)) / hs
    } else {
        let v2 = (at(i, j + 1) - at(i, j - 1)) / (2.0 * hs);
        let v22 = (at(i, j + 1) - 2.0 * at(i, j) + at(i, j - 1)) / (hs * hs);
        v2 + r2 * v22
    };
    let c = if i == 0 || j == 0 {
        0.0 // the ρ₁ρ₂ v₁₂² term vanishes on the axes
    } else if i + j + 2 <= n {
        (at(i + 1, j + 1) - at(i + 1, j - 1) - at(i - 1, j + 1) + at(i - 1, j - 1))
            / (4.0 * hs * hs)
    } else {
        (at(i, j) - at(i - 1, j) - at(i, j - 1) + at(i - 1, j - 1)) / (hs * hs)
    };
    (a, b, c)
}

/// Sparse-row accumulation of ∂G/∂v over unknown columns.
#[allow(clippy::too_many_arguments)]
fn jac_row(
    tri: &Tri,
    unknown: &[usize],
    i: usize,
    j: usize,
    a: f64,
    b: f64,
    c: f64,
    row: &mut Vec<(usize, f64)>,
) {
    let hs = tri.hs;
    let n = tri.n_edge;
    let (r1, r2) = (i as f64 * hs, j as f64 * hs);
    row.clear();
    let mut push = |ii: usize, jj: usize, w: f64| {
        let col = unknown[tri.flat(ii, jj)];
        if col != usize::MAX && w != 0.0 {
            row.push((col, w));
        }
    };

    // b · d(v₁+ρ₁v₁₁)
    if i == 0 {
        push(1, j, b / hs);
        push(0, j, -b / hs);
    } else {
        let h2 = hs * hs;
        push(i + 1, j, b * (0.5 / hs + r1 / h2));
        push(i - 1, j, b * (-0.5 / hs + r1 / h2));
        push(i, j, b * (-2.0 * r1 / h2));
    }
    // a · d(v₂+ρ₂v₂₂)
    if j == 0 {
        push(i, 1, a / hs);
        push(i, 0, -a / hs);
    } else {
        let h2 = hs * hs;
        push(i, j + 1, a * (0.5 / hs + r2 / h2));
        push(i, j - 1, a * (-0.5 / hs + r2 / h2));
        push(i, j, a * (-2.0 * r2 / h2));
    }
    // -2ρ₁ρ₂ c · d(v₁₂)
    if i > 0 && j > 0 {
        let s = -2.0 * r1 * r2 * c;
        if s != 0.0 {
            if i + j + 2 <= n {
                let w = 1.0 / (4.0 * hs * hs);
                push(i + 1, j + 1, s * w);
                push(i + 1, j - 1, -s * w);
                push(i - 1, j + 1, -s * w);
                push(i - 1, j - 1, s * w);
            } else {
                let w = 1.0 / (hs * hs);
                push(i, j, s * w);
                push(i - 1, j, -s * w);
                push(i, j - 1, -s * w);
                push(i - 1, j - 1, s * w);
            }
        }
    }
    // merge duplicate columns
    row.sort_unstable_by_key(|e| e.0);
    let mut k = 0;
    for idx in 1..row.len() {
        if row[idx].0 == row[k].0 {
            row[k].1 += row[idx].1;
        } else {
            k += 1;
            row[k] = row[idx];
        }
    }
    row.truncate(k + 1);
}

/// CSR matrix with BiCGStab + Jacobi preconditioning.
struct Csr {
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
    n: usize,
}

impl Csr {
    fn matvec(&self, x: &[f64], y: &mut [f64]) {
        for (r, out) in y.iter_mut().enumerate().take(self.n) {
            let mut acc = 0.0;
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += self.vals[k] * x[self.cols[k]];
            }
            *out = acc;
        }
    }

    fn diagonal(&self) -> Vec<f64> {
        let mut d = vec![1.0; self.n];
        for (r, dr) in d.iter_mut().enumerate().take(self.n) {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                if self.cols[k] == r {
                    *dr = self.vals[k];
                }
            }
        }
        d
    }

    fn bicgstab(&self, rhs: &[f64], tol: f64, max_iter: usize) -> Result<Vec<f64>> {
        let n = self.n;
        let diag = self.diagonal();
        let prec = |x: &[f64], out: &mut [f64]| {
            for k in 0..n {
                out[k] = x[k] / if diag[k].abs() > 1e-300 { diag[k] } else { 1.0 };
            }
        };
        let mut x = vec![0.0; n];
        let mut r: Vec<f64> = rhs.to_vec();
        let r0 = r.clone();
        let rhs_norm = rhs.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
        let (mut rho, mut alpha, mut omega) = (1.0, 1.0, 1.0);
        let mut v = vec![0.0; n];
        let mut p = vec![0.0; n];
        let mut phat = vec![0.0; n];
        let mut shat = vec![0.0; n];
        let mut t = vec![0.0; n];
        for _ in 0..max_iter {
            let rho_new: f64 = r0.iter().zip(&r).map(|(a, b)| a * b).sum();
            if rho_new.abs() < 1e-300 {
                return Err(CoreError::Solver("BiCGStab breakdown (rho = 0)".into()));
            }
            let beta = (rho_new / rho) * (alpha / omega);
            rho = rho_new;
            for k in 0..n {
                p[k] = r[k] + beta * (p[k] - omega * v[k]);
            }
            prec(&p, &mut phat);
            self.matvec(&phat, &mut v);
            let denom: f64 = r0.iter().zip(&v).map(|(a, b)| a * b).sum();
            if denom.abs() < 1e-300 {
                return Err(CoreError::Solver("BiCGStab breakdown (r0·v = 0)".into()));
            }
            alpha = rho / denom;
            let s: Vec<f64> = r.iter().zip(&v).map(|(rk, vk)| rk - alpha * vk).collect();
            if s.iter().fold(0.0f64, |m, sv| m.max(sv.abs())) < tol * rhs_norm {
                for k in 0..n {
                    x[k] += alpha * phat[k];
                }
                return Ok(x);
            }
            prec(&s, &mut shat);
            self.matvec(&shat, &mut t);
            let tt: f64 = t.iter().map(|a| a * a).sum();
            if tt < 1e-300 {
                return Err(CoreError::Solver("BiCGStab breakdown (t = 0)".into()));
            }
            omega = t.iter().zip(&s).map(|(a, b)| a * b).sum::<f64>() / tt;
            for k in 0..n {
                x[k] += alpha * phat[k] + omega * shat[k];
                r[k] = s[k] - omega * t[k];
            }
            if r.iter().fold(0.0f64, |m, rv| m.max(rv.abs())) < tol * rhs_norm {
                return Ok(x);
            }
        }
        Err(CoreError::Solver(
            "BiCGStab failed to converge within the iteration budget".into(),
        ))
    }
}

/// Piecewise-linear (simplex) interpolation of triangle-grid values,
/// returning the lifted evaluator u(z) = v(|z₁|², |z₂|²).
fn lift_evaluator(tri_n: usize, hs: f64, values: Vec<f64>, offsets: Vec<usize>) -> RealFn {
    real_fn(move |z: &[f64]| {
        let r1 = z[0] * z[0] + z[1] * z[1];
        let r2 = z[2] * z[2] + z[3] * z[3];
        let fx = (r1 / hs).min(tri_n as f64 - 1e-12);
        let fy = (r2 / hs).min(tri_n as f64 - 1e-12);
        let (mut i, mut j) = (fx as usize, fy as usize);
        // clamp the cell into the triangle for points near the hypotenuse
        while i + j + 1 > tri_n && i + j > 0 {
            if i >= j && i > 0 {
                i -= 1;
            } else {
                j = j.saturating_sub(1);
            }
        }
        let (s, t) = ((fx - i as f64).min(1.0), (fy - j as f64).min(1.0));
        let at = |a: usize, b: usize| values[offsets[a] + b];
        if s + t <= 1.0 {
            at(i, j) * (1.0 - s - t) + at(i + 1, j) * s + at(i, j + 1) * t
        } else {
            at(i + 1, j + 1) * (s + t - 1.0) + at(i + 1, j) * (1.0 - t) + at(i, j + 1) * (1.0 - s)
        }
    })
}

/// Damped Newton solve of the reduced toric equation; `n_edge` grid nodes
/// per triangle edge.
pub fn toric_solve(p: &DirichletProblem, n_edge: usize) -> Result<SolveResult> {
    let prof = ToricProfile::from_problem(p)?;
    if n_edge < 8 {
        return Err(CoreError::InvalidArgument("need n_edge >= 8".into()));
    }
    let r = p.domain.radius();
    let big_r = r * r;
    let tri = Tri::new(n_edge, big_r);
    let hs = tri.hs;
    let n = n_edge;

    // f at nodes, clamped strictly positive for Newton
    let mut f_max: f64 = 0.0;
    let mut f_nodes = vec![0.0; tri.n_nodes()];
    for i in 0..=n {
        for j in 0..=n - i {
            let val = (prof.f)(i as f64 * hs, j as f64 * hs);
            f_max = f_max.max(val);
            f_nodes[tri.flat(i, j)] = val;
        }
    }
    let floor = 1e-10 * (1.0 + f_max);
    for val in &mut f_nodes {
        *val = val.max(floor);
    }

    // unknown numbering: nodes with i + j < n; hypotenuse is Dirichlet
    let mut unknown = vec![usize::MAX; tri.n_nodes()];
    let mut unknown_nodes = Vec::new();
    for i in 0..=n {
        for j in 0..=n - i {
            if i + j < n {
                unknown[tri.flat(i, j)] = unknown_nodes.len();
                unknown_nodes.push((i, j));
            }
        }
    }
    let m = unknown_nodes.len();

    // initial guess: hypotenuse data projected along rays, plus a convex
    // paraboloid-like term vanishing on the hypotenuse
    let c0 = 1.0 + f_max.sqrt();
    let phi_proj = |r1: f64, r2: f64| {
        let s = r1 + r2;
        if s < 1e-14 {
            ((prof.phi)(big_r, 0.0) + (prof.phi)(0.0, big_r) + (prof.phi)(big_r / 2.0, big_r / 2.0))
                / 3.0
        } else {
            (prof.phi)(r1 * big_r / s, r2 * big_r / s)
        }
    };
    let mut v = vec![0.0; tri.n_nodes()];
    for i in 0..=n {
        for j in 0..=n - i {
            let (r1, r2) = (i as f64 * hs, j as f64 * hs);
            v[tri.flat(i, j)] = if i + j == n {
                (prof.phi)(r1, r2)
            } else {
                phi_proj(r1, r2) + c0 * (r1 + r2 - big_r)
            };
        }
    }

    let residual_vec = |v: &[f64]| -> Vec<f64> {
        unknown_nodes
            .iter()
            .map(|&(i, j)| {
                let (a, b, c) = eval_ops(&tri, v, i, j);
                let (r1, r2) = (i as f64 * hs, j as f64 * hs);
                a * b - r1 * r2 * c * c - f_nodes[tri.flat(i, j)]
            })
            .collect()
    };
    let inf = |g: &[f64]| g.iter().fold(0.0f64, |mx, x| mx.max(x.abs()));
    let elliptic_ok = |v: &[f64]| {
        unknown_nodes.iter().all(|&(i, j)| {
            let (a, b, _) = eval_ops(&tri, v, i, j);
            a > 0.0 && b > 0.0
        })
    };
    if !elliptic_ok(&v) {
        return Err(CoreError::Solver(
            "initial guess violates the ellipticity safeguard".into(),
        ));
    }

    let tol = NEWTON_TOL * (1.0 + f_max);
    let mut g = residual_vec(&v);
    let mut iterations = 0;
    while inf(&g) > tol {
        iterations += 1;
        if iterations > MAX_NEWTON {
            return Err(CoreError::Solver(format!(
                "Newton stagnation: residual {:.3e} after {MAX_NEWTON} iterations",
                inf(&g)
            )));
        }
        // assemble the Jacobian in CSR
        let mut row_ptr = Vec::with_capacity(m + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        let mut row = Vec::new();
        row_ptr.push(0);
        for &(i, j) in &unknown_nodes {
            let (a, b, c) = eval_ops(&tri, &v, i, j);
            jac_row(&tri, &unknown, i, j, a, b, c, &mut row);
            for &(col, w) in &row {
                cols.push(col);
                vals.push(w);
            }
            row_ptr.push(cols.len());
        }
        let jac = Csr {
            row_ptr,
            cols,
            vals,
            n: m,
        };
        let neg_g: Vec<f64> = g.iter().map(|x| -x).collect();
        let delta = jac.bicgstab(&neg_g, 1e-12, 20 * m + 200)?;

        // damped update with the ellipticity safeguard
        let mut lambda = 1.0;
        let g_norm = inf(&g);
        let mut accepted = false;
        for _ in 0..=MAX_HALVINGS {
            let mut trial = v.clone();
            for (k, &(i, j)) in unknown_nodes.iter().enumerate() {
                trial[tri.flat(i, j)] += lambda * delta[k];
            }
            if elliptic_ok(&trial) {
                let gt = residual_vec(&trial);
                if inf(&gt) < g_norm {
                    v = trial;
                    g = gt;
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !accepted {
            return Err(CoreError::Solver(format!(
                "Newton line search exhausted {MAX_HALVINGS} halvings at residual {g_norm:.3e}"
            )));
        }
    }

    // psh margin: smallest eigenvalue of the 2×2 reduced Hessian
    // [[a, √(ρ₁ρ₂) c], [√(ρ₁ρ₂) c, b]] over the unknown nodes
    let mut psh_margin = f64::INFINITY;
    for &(i, j) in &unknown_nodes {
        let (a, b, c) = eval_ops(&tri, &v, i, j);
        let (r1, r2) = (i as f64 * hs, j as f64 * hs);
        let off = (r1 * r2).sqrt() * c;
        let tr = a + b;
        let disc = ((a - b) * (a - b) / 4.0 + off * off).sqrt();
        psh_margin = psh_margin.min(tr / 2.0 - disc);
    }

    let residual = inf(&g);
    let evaluator = lift_evaluator(n, hs, v, tri.offsets.clone());
    let samples = ball_points(4, r * 0.98, 600, 0x7031c);
    let values: Vec<f64> = samples.iter().map(|z| evaluator(z)).collect();
    let dist: Vec<f64> = samples
        .iter()
        .map(|z| r - z.iter().map(|c| c * c).sum::<f64>().sqrt())
        .collect();
    let spacing = r * (samples.len() as f64).powf(-0.25);
    let sampled = SampledFunction::from_samples(4, samples, values, dist, spacing)?
        .with_radius(r)
        .with_evaluator(evaluator);
    Ok(SolveResult {
        u: sampled,
        residual,
        iterations,
        psh_margin,
    })
}

/// Certification path for degenerate (f ≡ 0 or otherwise explicit)
/// instances: verifies that the supplied candidate solves the problem and
/// wraps it as a SolveResult.
pub fn toric_certify(
    p: &DirichletProblem,
    candidate: &RealFn,
    n_checks: usize,
    seed: u64,
) -> Result<SolveResult> {
    if p.domain.n() != 2 {
        return Err(CoreError::InvalidArgument("certification needs n = 2".into()));
    }
    let r = p.domain.radius();
    let step = 1e-3 * r;
    let fd_tol = 1e-4 * (1.0 + r * r);

    // boundary match
    for k in 0..n_checks {
        let b = super::sphere_rep(4, r, seed as usize + k);
        let (cv, pv) = (candidate(&b), (p.phi)(&b));
        if (cv - pv).abs() > 1e-8 * (1.0 + pv.abs()) {
            return Err(CoreError::Inconsistent(format!(
                "candidate mismatches boundary data at {b:?}: {cv} vs {pv}"
            )));
        }
    }

    // interior: det of the FD complex Hessian vs f, and PSH margin
    let samples = ball_points(4, 0.9 * r, n_checks.max(64), seed);
    let mut residual: f64 = 0.0;
    let mut psh_margin = f64::INFINITY;
    for z in &samples {
        let h = complex_hessian(candidate, z, step, None)?;
        let froot = (p.f_root)(z);
        residual = residual.max((det_real(&h) - froot * froot).abs());
        psh_margin = psh_margin.min(min_eigenvalue(&h));
    }
    if residual > fd_tol {
        return Err(CoreError::Inconsistent(format!(
            "candidate equation residual {residual:.3e} exceeds {fd_tol:.3e}"
        )));
    }
    if psh_margin < -fd_tol {
        return Err(CoreError::NotPsd {
            min_eig: psh_margin,
        });
    }

    let values: Vec<f64> = samples.iter().map(|z| candidate(z)).collect();
    let dist: Vec<f64> = samples
        .iter()
        .map(|z| r - z.iter().map(|c| c * c).sum::<f64>().sqrt())
        .collect();
    let spacing = r * (samples.len() as f64).powf(-0.25);
    let sampled = SampledFunction::from_samples(4, samples, values, dist, spacing)?
        .with_radius(r)
        .with_evaluator(candidate.clone());
    Ok(SolveResult {
        u: sampled,
        residual,
        iterations: 0,
        psh_margin,
    })
}
