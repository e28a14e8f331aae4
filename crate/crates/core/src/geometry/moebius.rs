//! Automorphisms T_a of the unit ball in ℂⁿ and the associated pullbacks.
//!
//! For a ≠ 0 the map is T_a(z) = Γ_a (z - a) / (1 - a*z) with
//! Γ_a = aa*/(1 - v(a)) - v(a) I and v(a) = √(1 - |a|²); T_0 is the identity.
//! T_a sends a to 0 and 0 to -a, and preserves the closed ball.

use super::ComplexPoint;
use crate::error::{CoreError, Result};
use crate::RealFn;
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::sync::Arc;

/// Γ_a = aa*/(1 - v(a)) - v(a)·I for 0 < |a| < 1.
///
/// Γ_a fixes span(a) and acts as -v(a) on its orthogonal complement. The
/// case a = 0 is rejected: Γ_a degenerates there and T_0 is defined as the
/// identity separately.
pub fn gamma_matrix(a: &ComplexPoint) -> Result<DMatrix<Complex64>> {
    let norm = a.norm();
    if norm == 0.0 {
        return Err(CoreError::InvalidArgument(
            "gamma_matrix undefined at a = 0 (T_0 is the identity)".into(),
        ));
    }
    if norm >= 1.0 {
        return Err(CoreError::Domain(format!("|a| = {norm} must be < 1")));
    }
    let n = a.dim();
    let v = (1.0 - norm * norm).sqrt();
    let scale = Complex64::new(1.0 / (1.0 - v), 0.0);
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            // (aa*)_{ij} = a_i conj(a_j)
            m[(i, j)] = scale * a.coords()[i] * a.coords()[j].conj();
        }
        m[(i, i)] -= Complex64::new(v, 0.0);
    }
    Ok(m)
}

/// The automorphism T_a of the unit ball, with its Γ_a matrix cached.
#[derive(Debug, Clone)]
pub struct MoebiusMap {
    a: ComplexPoint,
    v: f64,
    gamma: Option<DMatrix<Complex64>>,
}

impl MoebiusMap {
    pub fn new(a: ComplexPoint) -> Result<Self> {
        let norm = a.norm();
        if norm >= 1.0 {
            return Err(CoreError::Domain(format!("|a| = {norm} must be < 1")));
        }
        let v = (1.0 - norm * norm).sqrt();
        let gamma = if norm == 0.0 {
            None
        } else {
            Some(gamma_matrix(&a)?)
        };
        Ok(Self { a, v, gamma })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            a: ComplexPoint::zero(n),
            v: 1.0,
            gamma: None,
        }
    }

    pub fn center(&self) -> &ComplexPoint {
        &self.a
    }

    /// v(a) = √(1 - |a|²).
    pub fn v(&self) -> f64 {
        self.v
    }

    pub fn gamma(&self) -> Option<&DMatrix<Complex64>> {
        self.gamma.as_ref()
    }

    pub fn n(&self) -> usize {
        self.a.dim()
    }

    /// The inverse automorphism T_{-a}.
    pub fn inverse(&self) -> Self {
        // |−a| = |a| < 1, so this cannot fail.
        Self::new(self.a.neg()).expect("inverse center stays in the ball")
    }

    /// Applies T_a to a point of the closed unit ball.
    pub fn apply(&self, z: &ComplexPoint) -> Result<ComplexPoint> {
        const TOL: f64 = 1e-9;
        if z.dim() != self.n() {
            return Err(CoreError::InvalidArgument(format!(
                "dimension mismatch: map in C^{}, point in C^{}",
                self.n(),
                z.dim()
            )));
        }
        let zn = z.norm();
        if zn > 1.0 + TOL {
            return Err(CoreError::Domain(format!("|z| = {zn} must be <= 1")));
        }
        let gamma = match &self.gamma {
            None => return Ok(z.clone()),
            Some(g) => g,
        };
        // a*z
        let az: Complex64 = self
            .a
            .coords()
            .iter()
            .zip(z.coords())
            .map(|(ai, zi)| ai.conj() * zi)
            .sum();
        let denom = Complex64::new(1.0, 0.0) - az;
        let mut out = vec![Complex64::new(0.0, 0.0); self.n()];
        for i in 0..self.n() {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..self.n() {
                acc += gamma[(i, j)] * (z.coords()[j] - self.a.coords()[j]);
            }
            out[i] = acc / denom;
        }
        ComplexPoint::new(out)
    }

    /// |det JT_a(z)|² in closed form: (1 - |a|²)^{n+1} / |1 - a*z|^{2(n+1)}.
    ///
    /// The closed form is cross-validated against a central-difference
    /// complex Jacobian in the test suite; the numerical Jacobian is
    /// authoritative if they ever disagree.
    pub fn jacobian_det_sq(&self, z: &ComplexPoint) -> Result<f64> {
        let zn = z.norm();
        if zn > 1.0 + 1e-9 {
            return Err(CoreError::Domain(format!("|z| = {zn} must be <= 1")));
        }
        if self.gamma.is_none() {
            return Ok(1.0);
        }
        let az: Complex64 = self
            .a
            .coords()
            .iter()
            .zip(z.coords())
            .map(|(ai, zi)| ai.conj() * zi)
            .sum();
        let one_minus = Complex64::new(1.0, 0.0) - az;
        let n = self.n() as i32;
        let num = (self.v * self.v).powi(n + 1);
        Ok(num / one_minus.norm_sqr().powi(n + 1))
    }

    /// Central-difference complex Jacobian determinant squared, for
    /// cross-validation of the closed form. `step` is the FD step.
    pub fn jacobian_det_sq_numeric(&self, z: &ComplexPoint, step: f64) -> Result<f64> {
        let n = self.n();
        let mut jac = DMatrix::<Complex64>::zeros(n, n);
        for j in 0..n {
            // T_a is holomorphic, so dT/dz_j equals the real-direction
            // difference quotient.
            let mut zp = z.coords().to_vec();
            let mut zm = z.coords().to_vec();
            zp[j] += Complex64::new(step, 0.0);
            zm[j] -= Complex64::new(step, 0.0);
            let tp = self.apply(&ComplexPoint::new(zp)?)?;
            let tm = self.apply(&ComplexPoint::new(zm)?)?;
            for i in 0..n {
                jac[(i, j)] = (tp.coords()[i] - tm.coords()[i]) / (2.0 * step);
            }
        }
        Ok(jac.determinant().norm_sqr())
    }
}

/// Pullback u_x(z) = u(T_{-x}(z)). Evaluated at 0 it returns u(x).
///
/// `u` takes interleaved real coordinates of a point in the closed unit ball.
pub fn pullback(u: RealFn, x: &ComplexPoint) -> Result<RealFn> {
    if x.norm() >= 1.0 {
        return Err(CoreError::Domain(format!(
            "|x| = {} must be < 1",
            x.norm()
        )));
    }
    let t = MoebiusMap::new(x.neg())?;
    Ok(Arc::new(move |reals: &[f64]| {
        let z = ComplexPoint::from_reals(reals).expect("valid real coordinates");
        let w = t.apply(&z).expect("point inside the closed ball");
        u(&w.to_reals())
    }))
}

/// Pullback of a density: f_x(z) = f(T_{-x}(z)) · |det JT_{-x}(z)|².
pub fn pullback_density(f: RealFn, x: &ComplexPoint) -> Result<RealFn> {
    if x.norm() >= 1.0 {
        return Err(CoreError::Domain(format!(
            "|x| = {} must be < 1",
            x.norm()
        )));
    }
    let t = MoebiusMap::new(x.neg())?;
    Ok(Arc::new(move |reals: &[f64]| {
        let z = ComplexPoint::from_reals(reals).expect("valid real coordinates");
        let w = t.apply(&z).expect("point inside the closed ball");
        let jac = t.jacobian_det_sq(&z).expect("point inside the closed ball");
        let val = f(&w.to_reals());
        debug_assert!(val >= -1e-12, "density must be nonnegative, got {val}");
        val * jac
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real_fn;
    use approx::assert_abs_diff_eq;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cp(reals: &[f64]) -> ComplexPoint {
        ComplexPoint::from_reals(reals).unwrap()
    }

    fn random_ball_point(rng: &mut ChaCha8Rng, n: usize, max_norm: f64) -> ComplexPoint {
        loop {
            let reals: Vec<f64> = (0..2 * n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let p = cp(&reals);
            if p.norm() < max_norm {
                return p;
            }
        }
    }

    #[test]
    fn gamma_fixes_a_direction() {
        // a = (1/2, 0) in C^2: Γ_a a = a.
        let a = cp(&[0.5, 0.0, 0.0, 0.0]);
        let g = gamma_matrix(&a).unwrap();
        let ga0 = g[(0, 0)] * a.coords()[0] + g[(0, 1)] * a.coords()[1];
        let ga1 = g[(1, 0)] * a.coords()[0] + g[(1, 1)] * a.coords()[1];
        assert_abs_diff_eq!(ga0.re, 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(ga0.im, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(ga1.norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn gamma_scales_orthogonal_complement() {
        // a = (1/2, 0), w = (0, 1): Γ_a w = -v w = (0, -sqrt(3)/2).
        let a = cp(&[0.5, 0.0, 0.0, 0.0]);
        let g = gamma_matrix(&a).unwrap();
        let gw0 = g[(0, 1)];
        let gw1 = g[(1, 1)];
        assert_abs_diff_eq!(gw0.norm(), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(gw1.re, -(3.0f64).sqrt() / 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(gw1.im, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn gamma_matches_entrywise_formula() {
        // Independent re-evaluation of aa*/(1-v) - vI entry by entry.
        let a = cp(&[0.3, 0.4, 0.1, 0.0]);
        let g = gamma_matrix(&a).unwrap();
        let norm_sq = 0.3f64 * 0.3 + 0.4 * 0.4 + 0.1 * 0.1;
        let v = (1.0 - norm_sq).sqrt();
        for i in 0..2 {
            for j in 0..2 {
                let mut expect = a.coords()[i] * a.coords()[j].conj() / (1.0 - v);
                if i == j {
                    expect -= v;
                }
                assert_abs_diff_eq!((g[(i, j)] - expect).norm(), 0.0, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn gamma_rejects_zero_and_outside() {
        assert!(gamma_matrix(&ComplexPoint::zero(2)).is_err());
        assert!(gamma_matrix(&cp(&[1.0, 0.0])).is_err());
        assert!(gamma_matrix(&cp(&[0.8, 0.8])).is_err());
    }

    #[test]
    fn gamma_spectral_structure_random() {
        // Eigenvalue 1 on span(a), eigenvalue -v on its orthogonal complement.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let a = random_ball_point(&mut rng, 3, 0.95);
            if a.norm() < 1e-3 {
                continue;
            }
            let m = MoebiusMap::new(a.clone()).unwrap();
            let g = m.gamma().unwrap();
            // Γ_a a = a
            for i in 0..3 {
                let row: Complex64 = (0..3).map(|j| g[(i, j)] * a.coords()[j]).sum();
                assert_abs_diff_eq!((row - a.coords()[i]).norm(), 0.0, epsilon = 1e-12);
            }
            // w ⟂ a: w = (conj(a2), -conj(a1), 0)
            let w = [a.coords()[1].conj(), -a.coords()[0].conj(), Complex64::new(0.0, 0.0)];
            for i in 0..3 {
                let row: Complex64 = (0..3).map(|j| g[(i, j)] * w[j]).sum();
                assert_abs_diff_eq!((row + m.v() * w[i]).norm(), 0.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn maps_a_to_zero_and_zero_to_minus_a() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let a = random_ball_point(&mut rng, 2, 0.98);
            let m = MoebiusMap::new(a.clone()).unwrap();
            let ta = m.apply(&a).unwrap();
            assert!(ta.norm() <= 1e-12, "T_a(a) = {:?}", ta);
            let t0 = m.apply(&ComplexPoint::zero(2)).unwrap();
            for i in 0..2 {
                assert_abs_diff_eq!((t0.coords()[i] + a.coords()[i]).norm(), 0.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn preserves_boundary_sphere() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..1000 {
            let a = random_ball_point(&mut rng, 2, 0.97);
            let mut z = random_ball_point(&mut rng, 2, 1.0);
            // project to |z| = 1
            let zn = z.norm();
            if zn < 1e-6 {
                continue;
            }
            z = cp(&z.to_reals().iter().map(|v| v / zn).collect::<Vec<_>>());
            let m = MoebiusMap::new(a).unwrap();
            let tz = m.apply(&z).unwrap();
            assert!((tz.norm() - 1.0).abs() <= 1e-10);
        }
    }

    #[test]
    fn identity_at_zero_center() {
        let m = MoebiusMap::identity(2);
        let z = cp(&[0.3, -0.2, 0.1, 0.4]);
        assert_eq!(m.apply(&z).unwrap(), z);
        assert_eq!(m.jacobian_det_sq(&z).unwrap(), 1.0);
    }

    #[test]
    fn rejects_points_outside_ball() {
        let m = MoebiusMap::new(cp(&[0.5, 0.0])).unwrap();
        assert!(m.apply(&cp(&[1.5, 0.0])).is_err());
    }

    #[test]
    fn jacobian_closed_form_example() {
        // a = (1/2, 0), z = a, n = 2: (3/4)^{-3} = 64/27.
        let a = cp(&[0.5, 0.0, 0.0, 0.0]);
        let m = MoebiusMap::new(a.clone()).unwrap();
        let val = m.jacobian_det_sq(&a).unwrap();
        assert_abs_diff_eq!(val, 64.0 / 27.0, epsilon = 1e-13);
        let num = m.jacobian_det_sq_numeric(&a, 1e-5).unwrap();
        assert_abs_diff_eq!(val, num, epsilon = 1e-6 * val);
    }

    #[test]
    fn jacobian_closed_form_vs_numeric_sweep() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let a = random_ball_point(&mut rng, 2, 0.9);
            let z = random_ball_point(&mut rng, 2, 0.9);
            let m = MoebiusMap::new(a).unwrap();
            let cf = m.jacobian_det_sq(&z).unwrap();
            let num = m.jacobian_det_sq_numeric(&z, 1e-5).unwrap();
            assert!(
                (cf - num).abs() <= 1e-6 * cf.max(1.0),
                "closed form {cf} vs numeric {num}"
            );
        }
    }

    #[test]
    fn pullback_at_origin_recovers_value() {
        let u = real_fn(|x: &[f64]| x[0] + 2.0 * x[1] * x[1]);
        let x = cp(&[0.3, -0.1]);
        let ux = pullback(u.clone(), &x).unwrap();
        assert_abs_diff_eq!(ux(&[0.0, 0.0]), u(&x.to_reals()), epsilon = 1e-14);
    }

    #[test]
    fn pullback_at_zero_center_is_identity() {
        let u = real_fn(|x: &[f64]| x[0] * x[1]);
        let ux = pullback(u.clone(), &ComplexPoint::zero(1)).unwrap();
        for p in [[0.1, 0.2], [-0.5, 0.3]] {
            assert_eq!(ux(&p), u(&p));
        }
    }

    #[test]
    fn pullback_of_norm_sq_matches_direct_composition() {
        let u = real_fn(|x: &[f64]| x.iter().map(|v| v * v).sum());
        let x = cp(&[0.2, 0.4, -0.1, 0.0]);
        let ux = pullback(u, &x).unwrap();
        let t = MoebiusMap::new(x.neg()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let z = random_ball_point(&mut rng, 2, 0.99);
            let direct = t.apply(&z).unwrap().norm_sqr();
            assert_abs_diff_eq!(ux(&z.to_reals()), direct, epsilon = 1e-13);
        }
    }

    #[test]
    fn pullback_density_n1_closed_form() {
        // f ≡ 1, n = 1: f_x(z) = (1-|x|²)² / |1 - (-x)* z|⁴ with a = -x.
        let f = real_fn(|_: &[f64]| 1.0);
        let x = cp(&[0.4, 0.2]);
        let fx = pullback_density(f, &x).unwrap();
        let a = Complex64::new(-0.4, -0.2);
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..50 {
            let z = random_ball_point(&mut rng, 1, 0.99);
            let zc = z.coords()[0];
            let denom = (Complex64::new(1.0, 0.0) - a.conj() * zc).norm_sqr();
            let expect = (1.0 - a.norm_sqr()).powi(2) / (denom * denom);
            assert_abs_diff_eq!(fx(&z.to_reals()), expect, epsilon = 1e-12);
        }
    }

    #[test]
    fn pullback_density_at_zero_is_identity() {
        let f = real_fn(|x: &[f64]| 1.0 + x[0] * x[0]);
        let fx = pullback_density(f.clone(), &ComplexPoint::zero(1)).unwrap();
        for p in [[0.1, 0.2], [-0.3, 0.5]] {
            assert_eq!(fx(&p), f(&p));
        }
    }
}
