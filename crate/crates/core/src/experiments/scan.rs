//! The second-order difference scan: for x in B_{1-t} and translations h in
//! B_{t/2}, measure sup u(x+h) + u(x-h) - 2u(x) per dyadic |h| scale and
//! fit the growth exponent. C^{1,α} regularity shows up as slope ≥ 1 + α;
//! plurisubharmonicity shows up as nonnegative direction-averaged second
//! differences.

use super::{exponent_fit, ExponentFit};
use crate::error::{CoreError, Result};
use crate::util::ball_points;
use crate::RealFn;
use rand::Rng;
use rand::SeedableRng;
use rayon::prelude::*;

/// Sampling budget of a second-difference scan.
#[derive(Debug, Clone)]
pub struct ScanBudget {
    pub base_points: usize,
    pub directions: usize,
    /// Number of dyadic |h| scales, largest = t/2.
    pub octaves: usize,
    /// Scales below this are excluded (set to the grid spacing when u is an
    /// interpolant so the scan never differentiates interpolation noise).
    pub min_scale: f64,
}

impl Default for ScanBudget {
    fn default() -> Self {
        Self {
            base_points: 2000,
            directions: 16,
            octaves: 6,
            min_scale: 0.0,
        }
    }
}

/// Result of a second-difference scan.
#[derive(Debug, Clone)]
pub struct SecondDifferenceScan {
    pub fit: ExponentFit,
    /// (scale, sup of the second difference at that scale)
    pub table: Vec<(f64, f64)>,
    /// min over (x, scale) of the direction-averaged second difference; for
    /// PSH inputs this must not drop below -(quadrature tolerance).
    pub positivity_floor: f64,
    pub t: f64,
    pub seed: u64,
}

impl SecondDifferenceScan {
    pub fn to_csv(&self) -> String {
        let mut out = format!(
            "# slope = {:.6e}, positivity_floor = {:.6e}, t = {}, seed = {}\nscale,sup\n",
            self.fit.slope, self.positivity_floor, self.t, self.seed
        );
        for (h, s) in &self.table {
            out.push_str(&format!("{h:.12e},{s:.12e}\n"));
        }
        out
    }
}

/// Scans second differences of `u` (defined on the closed unit ball of
/// ℝ^dim) over seeded base points in B_{1-t} and seeded directions, with
/// dyadic |h| descending from t/2.
pub fn second_difference_scan(
    u: &RealFn,
    dim: usize,
    t: f64,
    budget: &ScanBudget,
    seed: u64,
) -> Result<SecondDifferenceScan> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(CoreError::InvalidArgument(format!("t = {t} out of (0, 1]")));
    }
    if budget.base_points == 0 || budget.directions == 0 || budget.octaves < 4 {
        return Err(CoreError::InvalidArgument(
            "budget needs base points, directions, and at least 4 octaves".into(),
        ));
    }
    let scales: Vec<f64> = (0..budget.octaves)
        .map(|j| t / 2.0 * 0.5f64.powi(j as i32))
        .filter(|&h| h >= budget.min_scale)
        .collect();
    if scales.len() < 4 {
        return Err(CoreError::InvalidArgument(format!(
            "only {} scales survive the min_scale cut; need 4",
            scales.len()
        )));
    }

    // strict interior admission: |x| < 1 - t (open-ball convention), so the
    // largest translation stays inside the closed unit ball
    let points: Vec<Vec<f64>> = ball_points(dim, 1.0 - t, budget.base_points, seed)
        .into_iter()
        .filter(|p| p.iter().map(|c| c * c).sum::<f64>().sqrt() < 1.0 - t)
        .collect();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ 0xd1f);
    let dirs: Vec<Vec<f64>> = (0..budget.directions)
        .map(|_| loop {
            let d: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0f64..1.0)).collect();
            let nrm = d.iter().map(|c| c * c).sum::<f64>().sqrt();
            if nrm > 1e-3 {
                break d.iter().map(|c| c / nrm).collect();
            }
        })
        .collect();

    // per scale: (sup of the second difference, min direction average),
    // max/min-reduced over base points so the result is order-independent
    let per_scale: Vec<(f64, f64)> = scales
        .iter()
        .map(|&h| {
            points
                .par_iter()
                .map(|x| {
                    let u0 = u(x);
                    let mut sup = f64::NEG_INFINITY;
                    let mut mean = 0.0;
                    let mut plus = vec![0.0; dim];
                    let mut minus = vec![0.0; dim];
                    for d in &dirs {
                        for k in 0..dim {
                            plus[k] = x[k] + h * d[k];
                            minus[k] = x[k] - h * d[k];
                        }
                        let dd = u(&plus) + u(&minus) - 2.0 * u0;
                        sup = sup.max(dd);
                        mean += dd / dirs.len() as f64;
                    }
                    (sup, mean)
                })
                .reduce(
                    || (f64::NEG_INFINITY, f64::INFINITY),
                    |a, b| (a.0.max(b.0), a.1.min(b.1)),
                )
        })
        .collect();

    let sups: Vec<f64> = per_scale.iter().map(|&(s, _)| s).collect();
    let positivity_floor = per_scale.iter().fold(f64::INFINITY, |m, &(_, p)| m.min(p));
    let fit = exponent_fit(&scales, &sups)?;
    Ok(SecondDifferenceScan {
        fit,
        table: scales.into_iter().zip(sups).collect(),
        positivity_floor,
        t,
        seed,
    })
}
