//! Finite-difference complex Hessians u_{i j̄} and the det^{1/n}
//! superadditivity inequality on Hermitian PSD matrices.
//!
//! Real coordinates are interleaved [Re z₁, Im z₁, ...]; with z_k = x_k+iy_k,
//! u_{i j̄} = ¼[u_{x_i x_j} + u_{y_i y_j} + i(u_{x_i y_j} - u_{y_i x_j})].

use crate::error::{CoreError, Result};
use crate::geometry::BallDomain;
use crate::RealFn;
use nalgebra::{Complex, DMatrix};

type Complex64 = Complex<f64>;

/// Second-order central second partial ∂²u/∂q_a∂q_b at `p`.
fn second_partial(u: &RealFn, p: &[f64], a: usize, b: usize, step: f64) -> f64 {
    let mut q = p.to_vec();
    if a == b {
        let c = u(p);
        q[a] = p[a] + step;
        let fp = u(&q);
        q[a] = p[a] - step;
        let fm = u(&q);
        (fp + fm - 2.0 * c) / (step * step)
    } else {
        let mut val = 0.0;
        for (sa, sb, sign) in [
            (1.0, 1.0, 1.0),
            (1.0, -1.0, -1.0),
            (-1.0, 1.0, -1.0),
            (-1.0, -1.0, 1.0),
        ] {
            q[a] = p[a] + sa * step;
            q[b] = p[b] + sb * step;
            val += sign * u(&q);
            q[a] = p[a];
            q[b] = p[b];
        }
        val / (4.0 * step * step)
    }
}

/// n×n Hermitian complex Hessian of `u` at the real point `z` (length 2n),
/// by central differences with the given step. When a domain is supplied,
/// every stencil point must stay inside it.
pub fn complex_hessian(
    u: &RealFn,
    z: &[f64],
    step: f64,
    domain: Option<&BallDomain>,
) -> Result<DMatrix<Complex64>> {
    if !z.len().is_multiple_of(2) || z.is_empty() {
        return Err(CoreError::InvalidArgument(
            "point must have even real dimension 2n".into(),
        ));
    }
    if !(step > 0.0) {
        return Err(CoreError::InvalidArgument(format!("step = {step}")));
    }
    if let Some(dom) = domain {
        // stencil excursion is at most step in each of two coordinates
        let nrm = z.iter().map(|c| c * c).sum::<f64>().sqrt();
        if nrm + std::f64::consts::SQRT_2 * step > dom.radius() + 1e-12 {
            return Err(CoreError::Domain(format!(
                "hessian stencil at |z| = {nrm} with step {step} leaves the ball of radius {}",
                dom.radius()
            )));
        }
    }
    let n = z.len() / 2;
    let mut h = DMatrix::<Complex64>::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let (xi, yi) = (2 * i, 2 * i + 1);
            let (xj, yj) = (2 * j, 2 * j + 1);
            let re = second_partial(u, z, xi, xj, step) + second_partial(u, z, yi, yj, step);
            let im = second_partial(u, z, xi, yj, step) - second_partial(u, z, yi, xj, step);
            h[(i, j)] = Complex64::new(re / 4.0, im / 4.0);
        }
    }
    // exact Hermitian symmetrization
    let ha = h.adjoint();
    Ok((h + ha) * Complex64::new(0.5, 0.0))
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(h: &DMatrix<Complex64>) -> f64 {
    h.clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .fold(f64::INFINITY, |m, &e| m.min(e))
}

/// Real determinant of a Hermitian matrix (imaginary part is rounding).
pub fn det_real(h: &DMatrix<Complex64>) -> f64 {
    h.clone().determinant().re
}

/// det(A+B)^{1/n} ≥ det(A)^{1/n} + det(B)^{1/n} for Hermitian PSD A, B.
///
/// Returns (lhs, rhs, holds). Inputs with an eigenvalue below -1e-12 are
/// rejected; small negative determinants from rounding are clamped to zero
/// before the root.
pub fn det_root_superadditivity(
    a: &DMatrix<Complex64>,
    b: &DMatrix<Complex64>,
) -> Result<(f64, f64, bool)> {
    const PSD_SLACK: f64 = 1e-12;
    let n = a.nrows();
    if b.nrows() != n || !a.is_square() || !b.is_square() {
        return Err(CoreError::InvalidArgument(
            "matrices must be square of equal size".into(),
        ));
    }
    for m in [a, b] {
        let min_eig = min_eigenvalue(m);
        if min_eig < -PSD_SLACK {
            return Err(CoreError::NotPsd { min_eig });
        }
    }
    let root = |m: &DMatrix<Complex64>| det_real(m).max(0.0).powf(1.0 / n as f64);
    let lhs = root(&(a + b));
    let rhs = root(a) + root(b);
    let scale = 1.0 + lhs.abs() + rhs.abs();
    Ok((lhs, rhs, lhs >= rhs - PSD_SLACK * scale))
}
