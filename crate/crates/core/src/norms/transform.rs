//! Normalization and rescaling transforms: subtracting the linear part of a
//! boundary extension, and the r² u(z/r) rescaling that reduces a ball of
//! radius r to the unit ball.

use super::SampledFunction;
use crate::error::{CoreError, Result};
use crate::{grad_fn, real_fn, GradFn, RealFn};

/// ṽ(x) = v(x) - Φ(0) - ⟨∇Φ(0), x⟩ (real inner product in ℝ^m).
///
/// Second-order differences and every k = 1 seminorm are unchanged: the
/// subtraction is affine.
pub fn normalize_linear(v: &SampledFunction, phi0: f64, grad_phi0: &[f64]) -> Result<SampledFunction> {
    if grad_phi0.len() != v.dim() {
        return Err(CoreError::InvalidArgument(format!(
            "gradient dimension {} does not match samples of dimension {}",
            grad_phi0.len(),
            v.dim()
        )));
    }
    let g0 = grad_phi0.to_vec();
    let values: Vec<f64> = v
        .points()
        .iter()
        .zip(v.values())
        .map(|(p, &val)| val - phi0 - dot(&g0, p))
        .collect();
    let mut out = SampledFunction::from_samples(
        v.dim(),
        v.points().to_vec(),
        values,
        v.boundary_distances().to_vec(),
        v.spacing(),
    )?;
    if let Some(r) = v.radius() {
        out = out.with_radius(r);
    }
    if let Some(f) = v.evaluator() {
        let f = f.clone();
        let g0c = g0.clone();
        out = out.with_evaluator(real_fn(move |x: &[f64]| f(x) - phi0 - dot(&g0c, x)));
    }
    if let Some(g) = v.grad_evaluator() {
        let g = g.clone();
        let g0c = g0;
        out = out.with_gradient(grad_fn(move |x: &[f64]| {
            g(x).iter().zip(&g0c).map(|(a, b)| a - b).collect()
        }));
    }
    Ok(out)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Builds ũ(z) = r² u(z/r) on B_r from samples of u on B_1.
///
/// The seminorm transformation law [ũ]_{1,α;rD} = r^{1-α}[u]_{1,α;D} holds
/// exactly for analytic evaluators.
pub fn rescale_from_unit(u: &SampledFunction, r: f64) -> Result<SampledFunction> {
    if !(r > 0.0) {
        return Err(CoreError::InvalidArgument(format!("r = {r} must be > 0")));
    }
    scale_samples(u, r)
}

/// Inverse of [`rescale_from_unit`]: maps samples on B_r back to B_1 via
/// v(z) = r^{-2} u(r z).
pub fn rescale_to_unit(u: &SampledFunction) -> Result<SampledFunction> {
    let r = u.radius().ok_or_else(|| {
        CoreError::InvalidArgument("rescale needs a ball domain of known radius".into())
    })?;
    scale_samples(u, 1.0 / r)
}

fn scale_samples(u: &SampledFunction, r: f64) -> Result<SampledFunction> {
    let points: Vec<Vec<f64>> = u
        .points()
        .iter()
        .map(|p| p.iter().map(|c| c * r).collect())
        .collect();
    let values: Vec<f64> = u.values().iter().map(|v| v * r * r).collect();
    let dist: Vec<f64> = u.boundary_distances().iter().map(|d| d * r).collect();
    let mut out = SampledFunction::from_samples(u.dim(), points, values, dist, u.spacing() * r)?;
    if let Some(r0) = u.radius() {
        out = out.with_radius(r0 * r);
    }
    if let Some(f) = u.evaluator() {
        let f = f.clone();
        out = out.with_evaluator(real_fn(move |x: &[f64]| {
            let inner: Vec<f64> = x.iter().map(|c| c / r).collect();
            r * r * f(&inner)
        }));
    }
    if let Some(g) = u.grad_evaluator() {
        let g = g.clone();
        out = out.with_gradient(grad_fn(move |x: &[f64]| {
            let inner: Vec<f64> = x.iter().map(|c| c / r).collect();
            g(&inner).iter().map(|t| t * r).collect()
        }));
    }
    Ok(out)
}

/// Rescaled evaluator pair without sampling: (value, gradient) of
/// ũ(z) = r² u(z/r).
pub fn rescale_evaluators(u: &RealFn, grad_u: &GradFn, r: f64) -> (RealFn, GradFn) {
    let uc = u.clone();
    let gc = grad_u.clone();
    (
        real_fn(move |x: &[f64]| {
            let inner: Vec<f64> = x.iter().map(|c| c / r).collect();
            r * r * uc(&inner)
        }),
        grad_fn(move |x: &[f64]| {
            let inner: Vec<f64> = x.iter().map(|c| c / r).collect();
            gc(&inner).iter().map(|t| t * r).collect()
        }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::{holder_seminorm, sup_norm};
    use crate::real_fn;
    use approx::assert_abs_diff_eq;

    #[test]
    fn second_differences_invariant() {
        let f = real_fn(|x: &[f64]| x[0].abs().powf(1.5) + 0.3 * x[0]);
        let v = SampledFunction::on_interval_grid(-1.0, 1.0, 101, &f).unwrap();
        let vt = normalize_linear(&v, 0.7, &[-0.4]).unwrap();
        let ev = v.evaluator().unwrap();
        let et = vt.evaluator().unwrap();
        for (x, h) in [(0.2, 0.1), (-0.5, 0.3), (0.0, 0.05)] {
            let d_orig = ev(&[x + h]) + ev(&[x - h]) - 2.0 * ev(&[x]);
            let d_norm = et(&[x + h]) + et(&[x - h]) - 2.0 * et(&[x]);
            assert_abs_diff_eq!(d_orig, d_norm, epsilon = 1e-14);
        }
    }

    #[test]
    fn linear_normalizes_to_zero() {
        let f = real_fn(|x: &[f64]| 2.0 + 3.0 * x[0]);
        let v = SampledFunction::on_interval_grid(-1.0, 1.0, 51, &f).unwrap();
        let vt = normalize_linear(&v, 2.0, &[3.0]).unwrap();
        assert!(sup_norm(&vt).unwrap().value <= 1e-14);
    }

    #[test]
    fn k1_seminorm_invariant_under_normalization() {
        let f = real_fn(|x: &[f64]| x[0].powi(2) * x[0].abs().powf(0.5));
        let g = crate::grad_fn(|x: &[f64]| vec![2.5 * x[0].abs().powf(1.5) * x[0].signum()]);
        let v = SampledFunction::on_interval_grid(-1.0, 1.0, 401, &f)
            .unwrap()
            .with_gradient(g);
        let vt = normalize_linear(&v, 0.2, &[1.3]).unwrap();
        let a = holder_seminorm(&v, 1, 0.5).unwrap().value;
        let b = holder_seminorm(&vt, 1, 0.5).unwrap().value;
        assert_abs_diff_eq!(a, b, epsilon = 1e-12);
    }

    #[test]
    fn rescale_r1_is_identity() {
        let f = real_fn(|x: &[f64]| x[0] * x[0]);
        let v = SampledFunction::on_interval_grid(-1.0, 1.0, 51, &f).unwrap();
        let w = rescale_from_unit(&v, 1.0).unwrap();
        assert_eq!(v.values(), w.values());
        assert_eq!(v.points(), w.points());
    }

    #[test]
    fn rescale_fixes_quadratics() {
        // u = |x|² on B_1, r = 2: ũ(z) = 4 |z/2|² = |z|².
        let f = real_fn(|x: &[f64]| x[0] * x[0] + x[1] * x[1]);
        let v = SampledFunction::on_disc_grid(1.0, 33, &f).unwrap();
        let w = rescale_from_unit(&v, 2.0).unwrap();
        let we = w.evaluator().unwrap();
        for p in [[0.5, 0.3], [1.5, -0.8]] {
            assert_abs_diff_eq!(we(&p), p[0] * p[0] + p[1] * p[1], epsilon = 1e-14);
        }
    }

    #[test]
    fn rescale_roundtrip() {
        let f = real_fn(|x: &[f64]| x[0].abs().powf(1.5));
        let v = SampledFunction::on_interval_grid(-1.0, 1.0, 51, &f).unwrap();
        let w = rescale_from_unit(&v, 2.0).unwrap();
        let back = rescale_to_unit(&w).unwrap();
        for (a, b) in v.values().iter().zip(back.values()) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-14);
        }
    }

    #[test]
    fn seminorm_transformation_law() {
        // [ũ]_{1,α;B_{r/2}} / [u]_{1,α;B_{1/2}} = r^{1-α} for u = |Re z|^{1+α}.
        let alpha = 0.5;
        let r = 2.0;
        let f = real_fn(move |x: &[f64]| x[0].abs().powf(1.0 + alpha));
        let g = crate::grad_fn(move |x: &[f64]| {
            vec![(1.0 + alpha) * x[0].abs().powf(alpha) * x[0].signum(), 0.0]
        });
        let base = SampledFunction::on_disc_grid(0.5, 201, &f)
            .unwrap()
            .with_gradient(g);
        let scaled = rescale_from_unit(&base, r).unwrap();
        let s0 = holder_seminorm(&base, 1, alpha).unwrap().value;
        let s1 = holder_seminorm(&scaled, 1, alpha).unwrap().value;
        let ratio = s1 / s0;
        assert!(
            (ratio / r.powf(1.0 - alpha) - 1.0).abs() < 0.02,
            "ratio {ratio}, expected {}",
            r.powf(1.0 - alpha)
        );
    }
}
