//! The r-scaling law that reduces every interior estimate to the unit
//! ball: ũ(z) = r² u(z/r) satisfies [ũ]_{1,α;B_{(1-t)r}} =
//! r^{1-α} [u]_{1,α;B_{1-t}} exactly. Verified by pair scans on matched
//! grids (the scaled grid is the image of the unit grid, so the law holds
//! to scan determinism, not just statistically).

use crate::error::{CoreError, Result};
use crate::norms::{holder_seminorm, rescale_evaluators, SampledFunction};
use crate::{GradFn, RealFn};

#[derive(Debug, Clone)]
pub struct ScalingReport {
    pub r: f64,
    pub alpha: f64,
    /// [u]_{1,α;B_{1-t}} on the unit-ball grid.
    pub unit_seminorm: f64,
    /// [ũ]_{1,α;B_{(1-t)r}} on the matched scaled grid.
    pub scaled_seminorm: f64,
    /// r^{1-α}·unit_seminorm.
    pub expected: f64,
    /// |scaled - expected| / expected (0 when both sides vanish).
    pub rel_error: f64,
}

impl ScalingReport {
    pub fn holds(&self, tol: f64) -> bool {
        self.rel_error <= tol
    }

    pub fn to_csv(&self) -> String {
        format!(
            "r,alpha,unit_seminorm,scaled_seminorm,expected,rel_error\n{},{},{:.12e},{:.12e},{:.12e},{:.6e}\n",
            self.r, self.alpha, self.unit_seminorm, self.scaled_seminorm, self.expected, self.rel_error
        )
    }
}

/// Checks the scaling law for `u` (with analytic gradient) on B_1 in ℝ²,
/// target radius `r`, interior fraction 1-t, pair scans at `resolution`.
pub fn scaling_check(
    u: &RealFn,
    grad_u: &GradFn,
    r: f64,
    t: f64,
    alpha: f64,
    resolution: usize,
) -> Result<ScalingReport> {
    if !(r > 0.0) || !(t > 0.0 && t < 1.0) || !(alpha > 0.0 && alpha < 1.0) {
        return Err(CoreError::InvalidArgument(format!(
            "r = {r}, t = {t}, alpha = {alpha}"
        )));
    }
    let inner = 1.0 - t;
    let base = SampledFunction::on_disc_grid(inner, resolution, u)?.with_gradient(grad_u.clone());
    let (ut, gt) = rescale_evaluators(u, grad_u, r);
    let scaled =
        SampledFunction::on_disc_grid(inner * r, resolution, &ut)?.with_gradient(gt.clone());

    let s_unit = holder_seminorm(&base, 1, alpha)?.value;
    let s_scaled = holder_seminorm(&scaled, 1, alpha)?.value;
    let expected = r.powf(1.0 - alpha) * s_unit;
    let denom = expected.abs().max(1e-300);
    let rel_error = if s_unit == 0.0 && s_scaled == 0.0 {
        0.0
    } else {
        (s_scaled - expected).abs() / denom
    };
    Ok(ScalingReport {
        r,
        alpha,
        unit_seminorm: s_unit,
        scaled_seminorm: s_scaled,
        expected,
        rel_error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{grad_fn, real_fn};

    fn quad() -> (RealFn, GradFn) {
        (
            real_fn(|z: &[f64]| z[0] * z[0] + z[1] * z[1]),
            grad_fn(|z: &[f64]| vec![2.0 * z[0], 2.0 * z[1]]),
        )
    }

    #[test]
    fn identity_scale_is_exact() {
        let (u, g) = quad();
        let rep = scaling_check(&u, &g, 1.0, 0.25, 0.5, 33).unwrap();
        assert_eq!(rep.rel_error, 0.0, "{rep:?}");
    }

    #[test]
    fn quadratic_scales_by_sqrt_two() {
        let (u, g) = quad();
        for r in [0.5, 2.0] {
            let rep = scaling_check(&u, &g, r, 0.25, 0.5, 49).unwrap();
            assert!(rep.holds(0.01), "r = {r}: {rep:?}");
            // cross-check the law numerically: scaled/unit = r^{0.5}
            let measured = rep.scaled_seminorm / rep.unit_seminorm;
            assert!(
                (measured - r.powf(0.5)).abs() < 0.01 * r.powf(0.5),
                "measured {measured}"
            );
        }
    }

    #[test]
    fn abspow_scales_correctly() {
        let alpha = 0.5;
        let u = real_fn(move |z: &[f64]| z[0].abs().powf(1.0 + alpha));
        let g = grad_fn(move |z: &[f64]| {
            vec![(1.0 + alpha) * z[0].signum() * z[0].abs().powf(alpha), 0.0]
        });
        for r in [0.5, 2.0] {
            let rep = scaling_check(&u, &g, r, 0.25, alpha, 49).unwrap();
            assert!(rep.holds(0.01), "r = {r}: {rep:?}");
        }
    }

    #[test]
    fn linear_function_both_sides_zero() {
        let u = real_fn(|z: &[f64]| 2.0 * z[0] - z[1]);
        let g = grad_fn(|_: &[f64]| vec![2.0, -1.0]);
        let rep = scaling_check(&u, &g, 2.0, 0.25, 0.5, 33).unwrap();
        assert_eq!(rep.unit_seminorm, 0.0);
        assert_eq!(rep.rel_error, 0.0);
    }

    #[test]
    fn bad_parameters_rejected() {
        let (u, g) = quad();
        assert!(scaling_check(&u, &g, -1.0, 0.25, 0.5, 33).is_err());
        assert!(scaling_check(&u, &g, 1.0, 1.5, 0.5, 33).is_err());
    }
}
