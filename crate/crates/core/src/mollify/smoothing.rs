//! Shrink-and-mollify smoothing of Dirichlet data:
//! φ_ε(x) = ∫ ρ_ε(y) φ((1-ε)(x-y)) dy.
//!
//! The inner argument satisfies |(1-ε)(x-y)| ≤ (1-ε)(1+ε) < 1 for x in the
//! closed unit ball and |y| ≤ ε, so φ is only ever evaluated inside its
//! domain. The same operator is applied to the density root f^{1/n}. The
//! combination of the contraction (factor (1-ε)^{1+α} on C^{1,α} seminorms)
//! and averaging (non-expansive) gives [φ_ε]_{1,α;B} ≤ [φ]_{1,α;B}.

use super::MollifierKernel;
use crate::error::{CoreError, Result};
use crate::{real_fn, RealFn};

fn cells_for(dim: usize) -> usize {
    match dim {
        1 => 64,
        2 => 32,
        3 => 16,
        _ => 12,
    }
}

/// One shrink-and-mollify pass at scale ε with baked-in quadrature weights.
fn shrink_mollify(g: &RealFn, kernel: &MollifierKernel, eps: f64, cells: usize) -> RealFn {
    let m = kernel.dim();
    let h = kernel.eps();
    let step = 2.0 * h / cells as f64;
    let vol = step.powi(m as i32);
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    let mut idx = vec![0usize; m];
    'outer: loop {
        let y: Vec<f64> = idx
            .iter()
            .map(|&i| -h + (i as f64 + 0.5) * step)
            .collect();
        if y.iter().map(|v| v * v).sum::<f64>() < h * h {
            weights.push(kernel.density(&y) * vol);
            nodes.push(y);
        }
        let mut k = 0;
        loop {
            idx[k] += 1;
            if idx[k] < cells {
                break;
            }
            idx[k] = 0;
            k += 1;
            if k == m {
                break 'outer;
            }
        }
    }
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    let g = g.clone();
    let shrink = 1.0 - eps;
    real_fn(move |x: &[f64]| {
        let mut acc = 0.0;
        let mut p = vec![0.0; m];
        for (y, &w) in nodes.iter().zip(&weights) {
            for k in 0..m {
                p[k] = shrink * (x[k] - y[k]);
            }
            acc += w * g(&p);
        }
        acc
    })
}

/// Smooths boundary-data extension φ and density root f^{1/n} (both defined
/// on the closed unit ball of ℝ^m) at scale ε ∈ (0, 1/2).
pub fn smooth_dirichlet_data(
    phi: &RealFn,
    f_root: &RealFn,
    dim: usize,
    eps: f64,
) -> Result<(RealFn, RealFn)> {
    if !(eps > 0.0 && eps < 0.5) {
        return Err(CoreError::InvalidArgument(format!(
            "eps = {eps} out of (0, 1/2)"
        )));
    }
    let kernel = MollifierKernel::new(eps, dim)?;
    let cells = cells_for(dim);
    Ok((
        shrink_mollify(phi, &kernel, eps, cells),
        shrink_mollify(f_root, &kernel, eps, cells),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::{holder_seminorm, SampledFunction};
    use crate::{grad_fn, real_fn};
    use approx::assert_abs_diff_eq;

    #[test]
    fn eps_out_of_range_rejected() {
        let f = real_fn(|_: &[f64]| 0.0);
        assert!(smooth_dirichlet_data(&f, &f, 2, 0.0).is_err());
        assert!(smooth_dirichlet_data(&f, &f, 2, 0.5).is_err());
        assert!(smooth_dirichlet_data(&f, &f, 2, 0.25).is_ok());
    }

    #[test]
    fn linear_contracts_by_shrink_factor() {
        // φ = a·x: the symmetric kernel kills the shift, leaving (1-ε)φ.
        let eps = 0.1;
        let phi = real_fn(|x: &[f64]| 2.0 * x[0] - x[1]);
        let (phi_eps, _) = smooth_dirichlet_data(&phi, &phi, 2, eps).unwrap();
        for p in [[0.0, 0.0], [0.5, -0.3], [0.9, 0.1]] {
            assert_abs_diff_eq!(phi_eps(&p), (1.0 - eps) * phi(&p), epsilon = 1e-12);
        }
    }

    #[test]
    fn seminorm_non_expansive() {
        // [φ_ε]_{1,α} ≤ [φ]_{1,α} + grid tolerance for φ = |Re z|^{1+α}.
        let alpha = 0.5;
        let eps = 0.1;
        let phi = real_fn(move |x: &[f64]| x[0].abs().powf(1.0 + alpha));
        let gphi = grad_fn(move |x: &[f64]| {
            vec![(1.0 + alpha) * x[0].abs().powf(alpha) * x[0].signum(), 0.0]
        });
        let (phi_eps, _) = smooth_dirichlet_data(&phi, &phi, 2, eps).unwrap();
        let before = SampledFunction::on_disc_grid(1.0, 101, &phi)
            .unwrap()
            .with_gradient(gphi);
        let after = SampledFunction::on_disc_grid(1.0, 61, &phi_eps).unwrap();
        let s_before = holder_seminorm(&before, 1, alpha).unwrap().value;
        let s_after = holder_seminorm(&after, 1, alpha).unwrap().value;
        assert!(
            s_after <= s_before * (1.0 + 0.05),
            "after {s_after} before {s_before}"
        );
    }

    #[test]
    fn uniform_convergence_as_eps_shrinks() {
        let phi = real_fn(|x: &[f64]| (2.0 * x[0]).sin() + x[1].abs().powf(1.5));
        let probes = crate::util::ball_points(2, 1.0, 64, 11);
        let mut sups = Vec::new();
        for eps in [0.1, 0.05, 0.025] {
            let (phi_eps, _) = smooth_dirichlet_data(&phi, &phi, 2, eps).unwrap();
            let sup = probes
                .iter()
                .fold(0.0f64, |m, p| m.max((phi_eps(p) - phi(p)).abs()));
            sups.push(sup);
        }
        assert!(sups[0] > sups[1] && sups[1] > sups[2], "{sups:?}");
    }

    #[test]
    fn density_root_smoothed_alongside() {
        let phi = real_fn(|x: &[f64]| x[0]);
        let froot = real_fn(|_: &[f64]| 2.0);
        let (_, f_eps) = smooth_dirichlet_data(&phi, &froot, 2, 0.2).unwrap();
        // constants are fixed points of the averaging
        assert_abs_diff_eq!(f_eps(&[0.3, -0.4]), 2.0, epsilon = 1e-12);
    }
}
