//! Poisson-kernel harmonic extension on the unit disc: the independent
//! oracle for the n = 1, f = 0 Dirichlet problem.
//!
//! u(re^{iθ}) = (1/2π) ∫ φ(e^{it}) (1-r²)/(1-2r cos(θ-t)+r²) dt by the
//! trapezoid rule, which is spectrally accurate for smooth φ. The gradient
//! comes from the Herglotz representation u = Re g with
//! g'(z) = (1/π) ∫ φ(e^{it}) e^{it}/(e^{it}-z)² dt.

use crate::error::{CoreError, Result};
use crate::{grad_fn, real_fn, GradFn, RealFn};
use num_complex::Complex64;

/// Harmonic extension of circle data φ (evaluated at points [cos t, sin t])
/// with an N-point trapezoid rule. Returns (value, gradient) evaluators;
/// values at |z| ≥ 1 fall back to φ at the radial projection.
///
/// The kernel is nearly singular close to the circle: the rule is accurate
/// only where 1 - |z| comfortably exceeds the node spacing 2π/N. Raise N
/// (or stay inside |z| ≤ 0.9) when comparing near the boundary.
pub fn harmonic_extension_disc(phi: &RealFn, n_quad: usize) -> Result<(RealFn, GradFn)> {
    if n_quad < 64 {
        return Err(CoreError::InvalidArgument(format!(
            "need at least 64 quadrature nodes, got {n_quad}"
        )));
    }
    let mut boundary = Vec::with_capacity(n_quad);
    let mut nodes = Vec::with_capacity(n_quad);
    for k in 0..n_quad {
        let t = 2.0 * std::f64::consts::PI * k as f64 / n_quad as f64;
        boundary.push(phi(&[t.cos(), t.sin()]));
        nodes.push(Complex64::new(t.cos(), t.sin()));
    }
    let w = 1.0 / n_quad as f64;

    let phi_outer = phi.clone();
    let (bv, nv) = (boundary.clone(), nodes.clone());
    let value = real_fn(move |x: &[f64]| {
        let z = Complex64::new(x[0], x[1]);
        let r2 = z.norm_sqr();
        if r2 >= 1.0 - 1e-12 {
            let nrm = r2.sqrt().max(1e-300);
            return phi_outer(&[x[0] / nrm, x[1] / nrm]);
        }
        let mut acc = 0.0;
        for (zeta, &val) in nv.iter().zip(&bv) {
            let denom = (zeta - z).norm_sqr();
            acc += val * (1.0 - r2) / denom;
        }
        acc * w
    });

    let grad = grad_fn(move |x: &[f64]| {
        let z = Complex64::new(x[0], x[1]);
        // g'(z) = (1/2π) ∫ φ · 2ζ/(ζ-z)² dt; ∇u = (Re g', -Im g')
        let mut gp = Complex64::new(0.0, 0.0);
        for (zeta, &val) in nodes.iter().zip(&boundary) {
            let d = zeta - z;
            gp += 2.0 * val * zeta / (d * d);
        }
        gp *= w;
        vec![gp.re, -gp.im]
    });
    Ok((value, grad))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real_fn;
    use approx::assert_abs_diff_eq;

    #[test]
    fn constant_data_is_constant() {
        let (u, _) = harmonic_extension_disc(&real_fn(|_: &[f64]| 1.0), 128).unwrap();
        for p in [[0.0, 0.0], [0.5, 0.3], [-0.7, 0.1]] {
            assert_abs_diff_eq!(u(&p), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn linear_data_extends_linearly() {
        let (u, g) = harmonic_extension_disc(&real_fn(|x: &[f64]| x[0]), 256).unwrap();
        for p in [[0.2, 0.1], [-0.5, 0.4], [0.0, 0.0]] {
            assert_abs_diff_eq!(u(&p), p[0], epsilon = 1e-12);
            let gr = g(&p);
            assert_abs_diff_eq!(gr[0], 1.0, epsilon = 1e-10);
            assert_abs_diff_eq!(gr[1], 0.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn fourier_mode_eigenfunction() {
        // φ = cos 3θ → u = r³ cos 3θ.
        let phi = real_fn(|x: &[f64]| {
            let t = x[1].atan2(x[0]);
            (3.0 * t).cos()
        });
        let (u, _) = harmonic_extension_disc(&phi, 1024).unwrap();
        for (r, th) in [(0.3f64, 0.7f64), (0.8, 2.1), (0.5, -1.2)] {
            let p = [r * th.cos(), r * th.sin()];
            assert_abs_diff_eq!(u(&p), r.powi(3) * (3.0 * th).cos(), epsilon = 1e-10);
        }
    }

    #[test]
    fn boundary_falls_back_to_data() {
        let phi = real_fn(|x: &[f64]| x[0] * x[0]);
        let (u, _) = harmonic_extension_disc(&phi, 128).unwrap();
        let t = 0.9f64;
        assert_abs_diff_eq!(u(&[t.cos(), t.sin()]), t.cos().powi(2), epsilon = 1e-12);
    }

    #[test]
    fn too_few_nodes_rejected() {
        assert!(harmonic_extension_disc(&real_fn(|_: &[f64]| 0.0), 32).is_err());
    }

    #[test]
    fn gradient_matches_fd() {
        let phi = real_fn(|x: &[f64]| {
            let t = x[1].atan2(x[0]);
            (2.0 * t).cos() + 0.5 * t.sin()
        });
        let (u, g) = harmonic_extension_disc(&phi, 512).unwrap();
        let p = [0.3, -0.2];
        let h = 1e-6;
        let gx = (u(&[p[0] + h, p[1]]) - u(&[p[0] - h, p[1]])) / (2.0 * h);
        let gy = (u(&[p[0], p[1] + h]) - u(&[p[0], p[1] - h])) / (2.0 * h);
        let gr = g(&p);
        assert_abs_diff_eq!(gr[0], gx, epsilon = 1e-8);
        assert_abs_diff_eq!(gr[1], gy, epsilon = 1e-8);
    }
}
