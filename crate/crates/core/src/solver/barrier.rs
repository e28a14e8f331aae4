//! The second-difference barrier and the comparison-principle scan.
//!
//! For a translation pair u_{x±h} on the closed unit ball the barrier is
//!
//!   W(z) = u_{x+h}(z) + u_{x-h}(z) + |h|^{1+α} (-A₁ + A₂(|z|² - 1)),
//!
//! which is PSH whenever the translates are (the added term contributes
//! A₂|h|^{1+α}·I to the complex Hessian) and drops to
//! u_{x+h} + u_{x-h} - A₁|h|^{1+α} on the boundary sphere. comparison_check
//! is a falsification scan of the resulting ordering W ≤ v, not a proof:
//! preconditions (boundary ordering and determinant-root domination) are
//! verified numerically, and their failure is reported as inconclusive
//! rather than as a violation.

use super::{complex_hessian, det_real, min_eigenvalue};
use crate::error::Result;
use crate::util::ball_points;
use crate::{real_fn, RealFn};

/// Builds W from the two translates, the constants A₁, A₂ ≥ 0, the
/// translation norm |h|, and the exponent α.
pub fn barrier_w(
    u_plus: &RealFn,
    u_minus: &RealFn,
    a1: f64,
    a2: f64,
    h_norm: f64,
    alpha: f64,
) -> RealFn {
    let (up, um) = (u_plus.clone(), u_minus.clone());
    let scale = h_norm.powf(1.0 + alpha);
    real_fn(move |z: &[f64]| {
        let s: f64 = z.iter().map(|c| c * c).sum();
        up(z) + um(z) + scale * (-a1 + a2 * (s - 1.0))
    })
}

/// Outcome of a comparison-principle scan.
#[derive(Debug, Clone)]
pub struct ComparisonReport {
    /// True when every interior sample satisfied w ≤ v + margin.
    pub holds: bool,
    /// Set when a precondition failed; the scan result is then meaningless.
    pub inconclusive: Option<String>,
    /// max over interior samples of w - v (negative when the ordering has
    /// slack everywhere).
    pub worst_gap: f64,
    /// The sample attaining worst_gap.
    pub witness: Vec<f64>,
}

/// Scans for violations of the comparison-principle conclusion w ≤ v on the
/// unit ball in ℂⁿ. Preconditions checked first: w ≤ v on boundary samples
/// within `margin`, and det(w_{i j̄})^{1/n} ≥ det(v_{i j̄})^{1/n} - margin
/// with both Hessians PSH (up to discretization) at interior stencil
/// points. A precondition failure yields `inconclusive`, never `holds =
/// false`.
pub fn comparison_check(
    w: &RealFn,
    v: &RealFn,
    n: usize,
    margin: f64,
    n_samples: usize,
    seed: u64,
) -> Result<ComparisonReport> {
    let m = 2 * n;
    let step = 1e-3;
    let eig_tol = margin + 10.0 * step * step;
    let inconclusive = |why: String| {
        Ok(ComparisonReport {
            holds: false,
            inconclusive: Some(why),
            worst_gap: f64::NAN,
            witness: Vec::new(),
        })
    };

    // boundary ordering on sphere samples
    for k in 0..n_samples.max(32) {
        let b = super::sphere_rep(m, 1.0, seed as usize + k);
        let (wb, vb) = (w(&b), v(&b));
        if wb > vb + margin {
            return inconclusive(format!(
                "boundary ordering fails at {b:?}: w = {wb}, v = {vb}"
            ));
        }
    }

    // determinant-root domination and plurisubharmonicity at interior
    // stencil points (a sparser set: Hessians are the expensive part)
    let stencil = ball_points(m, 0.9, (n_samples / 4).max(24), seed ^ 0x5ca1);
    for z in &stencil {
        let hw = complex_hessian(w, z, step, None)?;
        let hv = complex_hessian(v, z, step, None)?;
        let (ew, ev) = (min_eigenvalue(&hw), min_eigenvalue(&hv));
        if ew < -eig_tol || ev < -eig_tol {
            return inconclusive(format!(
                "plurisubharmonicity fails at {z:?}: min eigenvalues {ew:.3e}, {ev:.3e}"
            ));
        }
        let root = |d: f64| d.max(0.0).powf(1.0 / n as f64);
        let (dw, dv) = (root(det_real(&hw)), root(det_real(&hv)));
        if dw < dv - margin {
            return inconclusive(format!(
                "determinant-root domination fails at {z:?}: {dw:.6e} < {dv:.6e}"
            ));
        }
    }

    // the scan proper
    let mut worst_gap = f64::NEG_INFINITY;
    let mut witness = vec![0.0; m];
    for z in ball_points(m, 1.0 - 1e-9, n_samples, seed ^ 0x5ca2) {
        let gap = w(&z) - v(&z);
        if gap > worst_gap {
            worst_gap = gap;
            witness = z;
        }
    }
    Ok(ComparisonReport {
        holds: worst_gap <= margin,
        inconclusive: None,
        worst_gap,
        witness,
    })
}
