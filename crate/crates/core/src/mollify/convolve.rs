//! Convolution against the mollifier kernel: v_h = ρ_h * v.
//!
//! Quadrature is a kernel-relative tensor midpoint rule on [-h, h]^m. The
//! integrand ρ_h(y) v(x-y) is C^∞ with all derivatives vanishing at the
//! support boundary, so the midpoint rule converges super-algebraically.
//! Weights are normalized to unit mass (values), or to exact zero sum
//! (gradient and Laplacian stencils), so constants are reproduced, resp.
//! annihilated, exactly.

use super::MollifierKernel;
use crate::error::{CoreError, Result};
use crate::norms::SampledFunction;
use crate::{real_fn, GradFn, RealFn};

/// Default midpoint cells per axis by real dimension: dense in low
/// dimension, coarser in ℝ^4 where the tensor grid grows quartically.
fn default_cells(dim: usize) -> usize {
    match dim {
        1 => 64,
        2 => 32,
        3 => 16,
        _ => 12,
    }
}

/// Tensor midpoint nodes in the kernel support with raw cell volume.
fn support_nodes(kernel: &MollifierKernel, cells: usize) -> (Vec<Vec<f64>>, f64) {
    let m = kernel.dim();
    let h = kernel.eps();
    let step = 2.0 * h / cells as f64;
    let vol = step.powi(m as i32);
    let mut nodes = Vec::new();
    let mut idx = vec![0usize; m];
    loop {
        let y: Vec<f64> = idx
            .iter()
            .map(|&i| -h + (i as f64 + 0.5) * step)
            .collect();
        if y.iter().map(|v| v * v).sum::<f64>() < h * h {
            nodes.push(y);
        }
        // odometer over the tensor grid
        let mut k = 0;
        loop {
            idx[k] += 1;
            if idx[k] < cells {
                break;
            }
            idx[k] = 0;
            k += 1;
            if k == m {
                return (nodes, vol);
            }
        }
    }
}

/// ρ_h * v as an evaluator, with quadrature weights baked in.
pub fn convolve_eval(v: &RealFn, kernel: &MollifierKernel, cells: usize) -> RealFn {
    let (nodes, vol) = support_nodes(kernel, cells);
    let mut weights: Vec<f64> = nodes.iter().map(|y| kernel.density(y) * vol).collect();
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    let v = v.clone();
    let m = kernel.dim();
    real_fn(move |x: &[f64]| {
        let mut acc = 0.0;
        let mut p = vec![0.0; m];
        for (y, &w) in nodes.iter().zip(&weights) {
            for k in 0..m {
                p[k] = x[k] - y[k];
            }
            acc += w * v(&p);
        }
        acc
    })
}

/// ∇(ρ_h * v)(x) = ∫ ∇ρ_h(y) v(x-y) dy as an evaluator.
pub fn convolve_grad_eval(v: &RealFn, kernel: &MollifierKernel, cells: usize) -> GradFn {
    let (nodes, vol) = support_nodes(kernel, cells);
    let m = kernel.dim();
    let mut weights: Vec<Vec<f64>> = nodes
        .iter()
        .map(|y| kernel.gradient(y).iter().map(|g| g * vol).collect())
        .collect();
    zero_sum(&mut weights, m);
    let v = v.clone();
    crate::grad_fn(move |x: &[f64]| {
        let mut acc = vec![0.0; m];
        let mut p = vec![0.0; m];
        for (y, w) in nodes.iter().zip(&weights) {
            for k in 0..m {
                p[k] = x[k] - y[k];
            }
            let val = v(&p);
            for k in 0..m {
                acc[k] += w[k] * val;
            }
        }
        acc
    })
}

/// Δ(ρ_h * v)(x) = ∫ Δρ_h(y) v(x-y) dy as an evaluator.
pub fn convolve_lap_eval(v: &RealFn, kernel: &MollifierKernel, cells: usize) -> RealFn {
    let (nodes, vol) = support_nodes(kernel, cells);
    let mut weights: Vec<Vec<f64>> = nodes
        .iter()
        .map(|y| vec![kernel.laplacian(y) * vol])
        .collect();
    zero_sum(&mut weights, 1);
    let v = v.clone();
    let m = kernel.dim();
    real_fn(move |x: &[f64]| {
        let mut acc = 0.0;
        let mut p = vec![0.0; m];
        for (y, w) in nodes.iter().zip(&weights) {
            for k in 0..m {
                p[k] = x[k] - y[k];
            }
            acc += w[0] * v(&p);
        }
        acc
    })
}

/// Enforces Σ_i w_i = 0 per component, so the discrete derivative stencils
/// annihilate constants exactly (the continuous ∫∇ρ = ∫Δρ = 0).
fn zero_sum(weights: &mut [Vec<f64>], comps: usize) {
    let n = weights.len() as f64;
    for k in 0..comps {
        let mean: f64 = weights.iter().map(|w| w[k]).sum::<f64>() / n;
        for w in weights.iter_mut() {
            w[k] -= mean;
        }
    }
}

/// Mollifies samples on B_R: returns ρ_h * v on the shrunken ball B_{R-h}.
///
/// Needs an attached analytic evaluator (all constructors attach one) and a
/// grid fine enough to resolve the kernel: spacing ≤ h/4.
pub fn convolve(v: &SampledFunction, h: f64) -> Result<SampledFunction> {
    let radius = v.radius().ok_or_else(|| {
        CoreError::InvalidArgument("convolve needs a ball domain of known radius".into())
    })?;
    if !(h > 0.0) {
        return Err(CoreError::InvalidArgument(format!("h = {h} must be > 0")));
    }
    if v.spacing() > h / 4.0 {
        return Err(CoreError::GridTooCoarse {
            h,
            spacing: v.spacing(),
        });
    }
    let f = v
        .evaluator()
        .ok_or_else(|| {
            CoreError::InvalidArgument("convolve needs an analytic evaluator".into())
        })?
        .clone();
    let kernel = MollifierKernel::new(h, v.dim())?;
    let smooth = convolve_eval(&f, &kernel, default_cells(v.dim()));
    let shrunk = radius - h;

    let mut points = Vec::new();
    let mut values = Vec::new();
    let mut dist = Vec::new();
    for p in v.points() {
        let nrm = p.iter().map(|c| c * c).sum::<f64>().sqrt();
        if nrm <= shrunk + 1e-12 {
            points.push(p.clone());
            values.push(smooth(p));
            dist.push((shrunk - nrm).max(0.0));
        }
    }
    if points.is_empty() {
        return Err(CoreError::Domain(format!(
            "shrunken ball of radius {shrunk} contains no sample sites"
        )));
    }
    Ok(
        SampledFunction::from_samples(v.dim(), points, values, dist, v.spacing())?
            .with_radius(shrunk)
            .with_evaluator(smooth),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real_fn;
    use approx::assert_abs_diff_eq;

    #[test]
    fn constant_preserved_exactly() {
        let k = MollifierKernel::new(0.2, 2).unwrap();
        let vh = convolve_eval(&real_fn(|_: &[f64]| 7.5), &k, 32);
        assert_abs_diff_eq!(vh(&[0.3, -0.1]), 7.5, epsilon = 1e-12);
    }

    #[test]
    fn linear_preserved() {
        // odd kernel moments vanish (symmetric nodes): ρ_h * L = L.
        let k = MollifierKernel::new(0.2, 2).unwrap();
        let vh = convolve_eval(&real_fn(|x: &[f64]| 2.0 * x[0] - x[1] + 0.5), &k, 32);
        for p in [[0.0, 0.0], [0.4, -0.2]] {
            assert_abs_diff_eq!(vh(&p), 2.0 * p[0] - p[1] + 0.5, epsilon = 1e-12);
        }
    }

    #[test]
    fn quadratic_shift_matches_second_moment_oracle() {
        // ρ_h * |x|² = |x|² + σ_h with σ_h from independent radial quadrature.
        let k = MollifierKernel::new(0.3, 2).unwrap();
        let sigma = k.second_moment();
        let vh = convolve_eval(&real_fn(|x: &[f64]| x[0] * x[0] + x[1] * x[1]), &k, 32);
        for p in [[0.0, 0.0], [0.5, 0.2], [-0.3, 0.7]] {
            let expect = p[0] * p[0] + p[1] * p[1] + sigma;
            assert_abs_diff_eq!(vh(&p), expect, epsilon = 1e-5);
        }
    }

    #[test]
    fn laplacian_stencil_on_quadratic() {
        // Δ(ρ_h * |x|²) = 2m everywhere.
        let k = MollifierKernel::new(0.25, 2).unwrap();
        // the Laplacian stencil is the roughest integrand: ~1% quadrature
        // error at 32 cells
        let lap = convolve_lap_eval(&real_fn(|x: &[f64]| x[0] * x[0] + x[1] * x[1]), &k, 32);
        assert_abs_diff_eq!(lap(&[0.1, 0.4]), 4.0, epsilon = 0.05);
    }

    #[test]
    fn laplacian_stencil_kills_constants_exactly() {
        let k = MollifierKernel::new(0.25, 2).unwrap();
        let lap = convolve_lap_eval(&real_fn(|_: &[f64]| 3.0), &k, 32);
        assert_abs_diff_eq!(lap(&[0.1, 0.4]), 0.0, epsilon = 1e-10);
    }

    #[test]
    fn gradient_stencil_on_linear() {
        let k = MollifierKernel::new(0.25, 2).unwrap();
        let grad = convolve_grad_eval(&real_fn(|x: &[f64]| 3.0 * x[0] - 2.0 * x[1]), &k, 32);
        let g = grad(&[0.2, -0.3]);
        assert_abs_diff_eq!(g[0], 3.0, epsilon = 5e-3);
        assert_abs_diff_eq!(g[1], -2.0, epsilon = 5e-3);
    }

    #[test]
    fn sampled_convolution_shrinks_domain() {
        let f = real_fn(|x: &[f64]| x[0] * x[0] + x[1] * x[1]);
        let v = SampledFunction::on_disc_grid(1.0, 129, &f).unwrap();
        let vh = convolve(&v, 0.25).unwrap();
        assert_eq!(vh.radius(), Some(0.75));
        for p in vh.points() {
            assert!(p.iter().map(|c| c * c).sum::<f64>().sqrt() <= 0.75 + 1e-9);
        }
        // values shifted by the second moment
        let sigma = MollifierKernel::new(0.25, 2).unwrap().second_moment();
        for (p, &val) in vh.points().iter().zip(vh.values()) {
            assert_abs_diff_eq!(val, p[0] * p[0] + p[1] * p[1] + sigma, epsilon = 1e-5);
        }
    }

    #[test]
    fn coarse_grid_rejected() {
        let f = real_fn(|x: &[f64]| x[0]);
        let v = SampledFunction::on_disc_grid(1.0, 17, &f).unwrap();
        assert!(matches!(
            convolve(&v, 0.3),
            Err(CoreError::GridTooCoarse { .. })
        ));
    }

    #[test]
    fn commutes_with_adding_constants() {
        let k = MollifierKernel::new(0.2, 2).unwrap();
        let f = real_fn(|x: &[f64]| (3.0 * x[0]).sin() * x[1]);
        let g = real_fn(|x: &[f64]| (3.0 * x[0]).sin() * x[1] + 5.0);
        let fh = convolve_eval(&f, &k, 32);
        let gh = convolve_eval(&g, &k, 32);
        for p in [[0.1, 0.2], [-0.4, 0.3]] {
            assert_abs_diff_eq!(gh(&p), fh(&p) + 5.0, epsilon = 1e-12);
        }
    }
}
