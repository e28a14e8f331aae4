//! Radial Monge-Ampère reduction: for u = g(s), s = |z|², the equation
//! det(u_{i j̄}) = f becomes (g')^{n-1}(g' + s g'') = F(s), which integrates
//! in closed form:
//!
//!   g'(s) = (n s^{-n} ∫₀^s t^{n-1} F(t) dt)^{1/n},
//!
//! with g pinned to the boundary value g(r²) = c. The output is PSH by
//! construction (g' ≥ 0 and g' + s g'' = F/(g')^{n-1} ≥ 0).

use crate::error::{CoreError, Result};
use crate::util::gl_integrate;
use crate::{grad_fn, real_fn, GradFn, RealFn};
use std::sync::Arc;

/// A radial profile: a function of s = |z|².
pub type ProfileFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

pub fn profile_fn<F: Fn(f64) -> f64 + Send + Sync + 'static>(f: F) -> ProfileFn {
    Arc::new(f)
}

const GRID: usize = 400;
const GL_NODES: usize = 12;

/// The solved radial problem: g and its derivatives on [0, r²].
#[derive(Clone)]
pub struct RadialSolution {
    n: usize,
    r: f64,
    profile: ProfileFn,
    /// cumulative I(s_j) = ∫₀^{s_j} t^{n-1} F dt on the uniform s-grid
    i_grid: Vec<f64>,
    g_grid: Vec<f64>,
    gp_grid: Vec<f64>,
    ds: f64,
}

/// Solves the radial reduction with F = f as a function of s = |z|², complex
/// dimension n, ball radius r, and boundary value u = c on |z| = r.
pub fn radial_solve(f_profile: &ProfileFn, n: usize, r: f64, c: f64) -> Result<RadialSolution> {
    if n == 0 || !(r > 0.0) {
        return Err(CoreError::InvalidArgument(format!("n = {n}, r = {r}")));
    }
    let s_max = r * r;
    let ds = s_max / GRID as f64;
    for j in 0..=4 * GRID {
        let s = j as f64 * s_max / (4 * GRID) as f64;
        if f_profile(s) < 0.0 {
            return Err(CoreError::Domain(format!(
                "density profile negative at s = {s}: {}",
                f_profile(s)
            )));
        }
    }

    let mut i_grid = vec![0.0; GRID + 1];
    let np = n as i32;
    for j in 1..=GRID {
        let (a, b) = ((j - 1) as f64 * ds, j as f64 * ds);
        i_grid[j] =
            i_grid[j - 1] + gl_integrate(|t| t.powi(np - 1) * f_profile(t), a, b, GL_NODES);
    }

    let mut sol = RadialSolution {
        n,
        r,
        profile: f_profile.clone(),
        i_grid,
        g_grid: vec![0.0; GRID + 1],
        gp_grid: vec![0.0; GRID + 1],
        ds,
    };
    for j in 0..=GRID {
        sol.gp_grid[j] = sol.gp(j as f64 * ds);
    }
    // integrate g backwards from g(r²) = c
    sol.g_grid[GRID] = c;
    for j in (0..GRID).rev() {
        let (a, b) = (j as f64 * ds, (j + 1) as f64 * ds);
        sol.g_grid[j] = sol.g_grid[j + 1] - gl_integrate(|s| sol.gp(s), a, b, GL_NODES);
    }
    Ok(sol)
}

impl RadialSolution {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn radius(&self) -> f64 {
        self.r
    }

    /// I(s) = ∫₀^s t^{n-1} F dt: cached grid value plus a local panel.
    fn cumulative(&self, s: f64) -> f64 {
        let s = s.clamp(0.0, self.r * self.r);
        let j = ((s / self.ds) as usize).min(GRID - 1);
        let a = j as f64 * self.ds;
        let f = &self.profile;
        let np = self.n as i32;
        self.i_grid[j] + gl_integrate(|t| t.powi(np - 1) * f(t), a, s, GL_NODES)
    }

    /// g'(s) = (n s^{-n} I(s))^{1/n}; g'(0) = F(0)^{1/n} by the limit.
    pub fn gp(&self, s: f64) -> f64 {
        let n = self.n as f64;
        if s < 1e-12 {
            return (self.profile)(0.0).max(0.0).powf(1.0 / n);
        }
        (n * s.powf(-n) * self.cumulative(s)).max(0.0).powf(1.0 / n)
    }

    /// g''(s) analytically: with J = n s^{-n} I, g' = J^{1/n} and
    /// J' = n(-n s^{-n-1} I + s^{-1} F), so g'' = (1/n) J^{1/n - 1} J'.
    pub fn gpp(&self, s: f64) -> f64 {
        let n = self.n as f64;
        if s < 1e-10 {
            // expansion: J(s) = F(0) + n F'(0) s/(n+1) + O(s²)
            let h = 1e-6 * (1.0 + self.r * self.r);
            let fp0 = ((self.profile)(h) - (self.profile)(0.0)) / h;
            let j0 = (self.profile)(0.0).max(0.0);
            let jp0 = n * fp0 / (n + 1.0);
            if j0 == 0.0 {
                return 0.0;
            }
            return (1.0 / n) * j0.powf(1.0 / n - 1.0) * jp0;
        }
        let i = self.cumulative(s);
        let j = (n * s.powf(-n) * i).max(0.0);
        if j == 0.0 {
            return 0.0;
        }
        let jp = n * (-n * s.powf(-n - 1.0) * i + (self.profile)(s) / s);
        (1.0 / n) * j.powf(1.0 / n - 1.0) * jp
    }

    /// g(s) by cubic Hermite interpolation on the solved grid.
    pub fn g(&self, s: f64) -> f64 {
        let s = s.clamp(0.0, self.r * self.r);
        let j = ((s / self.ds) as usize).min(GRID - 1);
        let (a, h) = (j as f64 * self.ds, self.ds);
        let t = (s - a) / h;
        let (g0, g1) = (self.g_grid[j], self.g_grid[j + 1]);
        let (d0, d1) = (self.gp_grid[j], self.gp_grid[j + 1]);
        let t2 = t * t;
        let t3 = t2 * t;
        (2.0 * t3 - 3.0 * t2 + 1.0) * g0
            + (t3 - 2.0 * t2 + t) * h * d0
            + (-2.0 * t3 + 3.0 * t2) * g1
            + (t3 - t2) * h * d1
    }

    /// Residual of the reduced equation (g')^{n-1}(g' + s g'') - F(s).
    pub fn reduced_residual(&self, s: f64) -> f64 {
        let gp = self.gp(s);
        gp.powi(self.n as i32 - 1) * (gp + s * self.gpp(s)) - (self.profile)(s)
    }

    /// u(z) = g(|z|²) on real coordinates of ℂⁿ.
    pub fn evaluator(&self) -> RealFn {
        let me = self.clone();
        real_fn(move |x: &[f64]| me.g(x.iter().map(|c| c * c).sum()))
    }

    /// ∇u(x) = 2 g'(|x|²) x.
    pub fn gradient(&self) -> GradFn {
        let me = self.clone();
        grad_fn(move |x: &[f64]| {
            let gp = me.gp(x.iter().map(|c| c * c).sum());
            x.iter().map(|c| 2.0 * gp * c).collect()
        })
    }
}

impl std::fmt::Debug for RadialSolution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RadialSolution")
            .field("n", &self.n)
            .field("r", &self.r)
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{complex_hessian, det_real};
    use approx::assert_abs_diff_eq;

    #[test]
    fn unit_density_gives_paraboloid() {
        // F ≡ 1, c = 0, r = 1: g(s) = s - 1 for every n.
        for n in [1usize, 2, 3] {
            let sol = radial_solve(&profile_fn(|_| 1.0), n, 1.0, 0.0).unwrap();
            for s in [0.0, 0.3, 0.77, 1.0] {
                assert_abs_diff_eq!(sol.gp(s), 1.0, epsilon = 1e-12);
                assert_abs_diff_eq!(sol.g(s), s - 1.0, epsilon = 1e-11);
            }
        }
    }

    #[test]
    fn zero_density_gives_constant() {
        let sol = radial_solve(&profile_fn(|_| 0.0), 2, 1.0, 0.0).unwrap();
        for s in [0.0, 0.5, 1.0] {
            assert_eq!(sol.gp(s), 0.0);
            assert_abs_diff_eq!(sol.g(s), 0.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn linear_profile_matches_symbolic() {
        // F(s) = s, n = 2: g'(s) = (2 s^{-2} s³/3)^{1/2} = sqrt(2s/3).
        let sol = radial_solve(&profile_fn(|s| s), 2, 1.0, 0.0).unwrap();
        for s in [0.1, 0.4, 0.9, 1.0] {
            assert_abs_diff_eq!(sol.gp(s), (2.0 * s / 3.0).sqrt(), epsilon = 1e-10);
        }
    }

    #[test]
    fn negative_profile_rejected() {
        assert!(radial_solve(&profile_fn(|s| 0.5 - s), 2, 1.0, 0.0).is_err());
    }

    #[test]
    fn reduced_equation_residual() {
        let sol = radial_solve(&profile_fn(|s| 1.0 + 0.5 * (3.0 * s).sin()), 2, 1.0, 0.0).unwrap();
        for s in [0.05, 0.3, 0.62, 0.97] {
            assert!(
                sol.reduced_residual(s).abs() < 1e-10,
                "s = {s}: {}",
                sol.reduced_residual(s)
            );
        }
    }

    #[test]
    fn lift_satisfies_full_equation() {
        // det of the FD complex Hessian of u = g(|z|²) matches F(|z|²).
        let profile = profile_fn(|s| 1.0 + s);
        let sol = radial_solve(&profile, 2, 1.0, 0.0).unwrap();
        let u = sol.evaluator();
        for z in [[0.2, 0.1, -0.3, 0.15], [0.4, 0.0, 0.1, 0.2]] {
            let s: f64 = z.iter().map(|c| c * c).sum();
            let h = complex_hessian(&u, &z, 1e-3, None).unwrap();
            assert_abs_diff_eq!(det_real(&h), profile(s), epsilon = 1e-3);
        }
    }

    #[test]
    fn boundary_value_pinned() {
        let sol = radial_solve(&profile_fn(|s| (1.0 + s).sqrt()), 2, 0.8, 2.5).unwrap();
        assert_abs_diff_eq!(sol.g(0.64), 2.5, epsilon = 1e-12);
    }
}
