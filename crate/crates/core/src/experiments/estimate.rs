//! Interior estimate ratios: measure the interior C^{1,α} (resp. C^{0,α})
//! seminorm of a solved instance on B_{(1-t)r} and divide by the data-side
//! quantity
//!
//!   C^{1,α}:  [φ]_{1,α;∂B_r} + r^{1-α} |f^{1/n}|'_{1,α;B_r}
//!   C^{0,α}:  [φ]_{0,α;∂B_r} + r^{2-α} |f^{1/n}|'_{0,α;B_r}.
//!
//! The constants relating the two sides are unknowable a priori: the
//! experiments assert boundedness of the measured ratios across the
//! instance family and their stability under grid refinement, never
//! specific values.

use crate::error::{CoreError, Result};
use crate::norms::{
    boundary_seminorm_c0, boundary_seminorm_c1a, default_extension, holder_seminorm, primed_norm,
    SampledFunction,
};
use crate::solver::{DirichletProblem, SolveResult};
use crate::RealFn;

/// One measured instance of an interior estimate.
#[derive(Debug, Clone)]
pub struct EstimateRatio {
    pub lhs: f64,
    /// Named right-hand-side contributions (φ-term, f-term).
    pub rhs_terms: Vec<(String, f64)>,
    pub ratio: f64,
    pub n: usize,
    pub alpha: f64,
    pub t: f64,
    pub r: f64,
}

impl EstimateRatio {
    pub fn rhs(&self) -> f64 {
        self.rhs_terms.iter().map(|(_, v)| v).sum()
    }

    pub fn to_csv(&self) -> String {
        let terms = self
            .rhs_terms
            .iter()
            .map(|(k, v)| format!("{k}={v:.6e}"))
            .collect::<Vec<_>>()
            .join(";");
        format!(
            "n,alpha,t,r,lhs,rhs,ratio,terms\n{},{},{},{},{:.12e},{:.12e},{:.12e},{}\n",
            self.n,
            self.alpha,
            self.t,
            self.r,
            self.lhs,
            self.rhs(),
            self.ratio,
            terms
        )
    }
}

fn ratio_of(lhs: f64, rhs: f64) -> f64 {
    if rhs > 0.0 {
        lhs / rhs
    } else if lhs == 0.0 {
        0.0
    } else {
        f64::INFINITY
    }
}

/// Samples the solution evaluator on the open interior ball B_{(1-t)r}
/// (strict admission via a hair below the nominal radius).
fn interior_sample(
    p: &DirichletProblem,
    u: &RealFn,
    t: f64,
    resolution: usize,
) -> Result<SampledFunction> {
    let m = p.domain.real_dim();
    let r = p.domain.radius();
    let inner = (1.0 - t) * r * (1.0 - 1e-12);
    match m {
        2 => SampledFunction::on_disc_grid_within(inner, r, resolution, u),
        _ => SampledFunction::on_ball_random(m, inner, resolution * resolution / 4, 0x1a7e, u),
    }
}

/// The first-order interior estimate ratio for a solved instance.
pub fn interior_c1alpha_experiment(
    p: &DirichletProblem,
    res: &SolveResult,
    t: f64,
    alpha: f64,
    resolution: usize,
) -> Result<EstimateRatio> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(CoreError::InvalidArgument(format!(
            "alpha = {alpha} out of (0, 1)"
        )));
    }
    if !(t > 0.0 && t < 1.0) {
        return Err(CoreError::InvalidArgument(format!("t = {t} out of (0, 1)")));
    }
    let m = p.domain.real_dim();
    let r = p.domain.radius();
    let u = res
        .u
        .evaluator()
        .ok_or_else(|| CoreError::InvalidArgument("need a solution evaluator".into()))?;

    let mut interior = interior_sample(p, u, t, resolution)?;
    if let Some(g) = res.u.grad_evaluator() {
        interior = interior.with_gradient(g.clone());
    }
    let lhs = holder_seminorm(&interior, 1, alpha)?.value;

    let ext = default_extension(p.phi.clone(), m, r);
    let phi_term = boundary_seminorm_c1a(&ext, m, r, alpha, 65)?.value;

    let f_sampled = match m {
        2 => SampledFunction::on_disc_grid(r * (1.0 - 1e-9), resolution, &p.f_root)?,
        _ => SampledFunction::on_ball_random(
            m,
            r * (1.0 - 1e-9),
            resolution * resolution / 4,
            0x1a7f,
            &p.f_root,
        )?,
    }
    .with_radius(r);
    let f_term = r.powf(1.0 - alpha) * primed_norm(&f_sampled, 1, alpha)?;

    let rhs_terms = vec![("phi_c1a".to_string(), phi_term), ("f_c1a".to_string(), f_term)];
    let rhs: f64 = rhs_terms.iter().map(|(_, v)| v).sum();
    Ok(EstimateRatio {
        lhs,
        rhs_terms,
        ratio: ratio_of(lhs, rhs),
        n: p.domain.n(),
        alpha,
        t,
        r,
    })
}

/// The zeroth-order interior C^{0,α} estimate ratio for a solved instance.
pub fn interior_c0alpha_experiment(
    p: &DirichletProblem,
    res: &SolveResult,
    t: f64,
    alpha: f64,
    resolution: usize,
) -> Result<EstimateRatio> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(CoreError::InvalidArgument(format!(
            "alpha = {alpha} out of (0, 1]"
        )));
    }
    if !(t > 0.0 && t < 1.0) {
        return Err(CoreError::InvalidArgument(format!("t = {t} out of (0, 1)")));
    }
    let m = p.domain.real_dim();
    let r = p.domain.radius();
    let u = res
        .u
        .evaluator()
        .ok_or_else(|| CoreError::InvalidArgument("need a solution evaluator".into()))?;

    let interior = interior_sample(p, u, t, resolution)?;
    let lhs = holder_seminorm(&interior, 0, alpha)?.value;

    // boundary C^{0,α} seminorm from sphere samples
    let n_bd = if m == 2 { 512 } else { 1500 };
    let bd_points: Vec<Vec<f64>> = if m == 2 {
        (0..n_bd)
            .map(|k| {
                let th = 2.0 * std::f64::consts::PI * k as f64 / n_bd as f64;
                vec![r * th.cos(), r * th.sin()]
            })
            .collect()
    } else {
        (0..n_bd).map(|k| crate::solver::sphere_rep(m, r, k)).collect()
    };
    let bd_values: Vec<f64> = bd_points.iter().map(|b| (p.phi)(b)).collect();
    let phi_term = boundary_seminorm_c0(&bd_points, &bd_values, alpha)?.value;

    let f_sampled = match m {
        2 => SampledFunction::on_disc_grid(r * (1.0 - 1e-9), resolution, &p.f_root)?,
        _ => SampledFunction::on_ball_random(
            m,
            r * (1.0 - 1e-9),
            resolution * resolution / 4,
            0x1a7f,
            &p.f_root,
        )?,
    }
    .with_radius(r);
    let f_term = r.powf(2.0 - alpha) * primed_norm(&f_sampled, 0, alpha)?;

    let rhs_terms = vec![("phi_c0a".to_string(), phi_term), ("f_c0a".to_string(), f_term)];
    let rhs: f64 = rhs_terms.iter().map(|(_, v)| v).sum();
    Ok(EstimateRatio {
        lhs,
        rhs_terms,
        ratio: ratio_of(lhs, rhs),
        n: p.domain.n(),
        alpha,
        t,
        r,
    })
}
