//! The Hölder norm calculus on sampled functions: sup, plain, starred,
//! primed, weighted and boundary (semi-)norms, plus the linear-normalization
//! and rescaling transforms.
//!
//! Every seminorm is a supremum over scanned pairs and therefore a lower
//! bound of the true seminorm, converging as sampling refines.

mod boundary;
mod pair_scan;
mod transform;

pub use boundary::{boundary_seminorm_c0, boundary_seminorm_c1a, default_extension, Extension};
pub use pair_scan::{scan_pairs, scan_points, PairScanResult};
pub use transform::{normalize_linear, rescale_evaluators, rescale_from_unit, rescale_to_unit};

use crate::error::{CoreError, Result};
use crate::{GradFn, RealFn};
use std::sync::OnceLock;

/// Default seed for the long-range stage of big pair scans.
pub const DEFAULT_SCAN_SEED: u64 = 0x5eed;

/// Which Hölder quantity a report measures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormKind {
    /// |u|_{0;Ω}
    Sup,
    /// [u]_{k,α;Ω}
    Seminorm { k: u8, alpha: f64 },
    /// [u]*_{k,α;Ω} (α = 0 gives the weighted gradient sup [u]*_{k;Ω})
    Starred { k: u8, alpha: f64 },
    /// [φ]_{k,α;∂B_r}
    Boundary { k: u8, alpha: f64 },
}

impl NormKind {
    pub fn label(&self) -> String {
        match self {
            NormKind::Sup => "sup".into(),
            NormKind::Seminorm { k, alpha } => format!("seminorm_k{k}_a{alpha}"),
            NormKind::Starred { k, alpha } => format!("starred_k{k}_a{alpha}"),
            NormKind::Boundary { k, alpha } => format!("boundary_k{k}_a{alpha}"),
        }
    }

    fn k_alpha(&self) -> (u8, f64) {
        match *self {
            NormKind::Sup => (0, 0.0),
            NormKind::Seminorm { k, alpha }
            | NormKind::Starred { k, alpha }
            | NormKind::Boundary { k, alpha } => (k, alpha),
        }
    }
}

/// A measured norm/seminorm with its witnessing points and scale metadata.
#[derive(Debug, Clone)]
pub struct HolderReport {
    pub kind: NormKind,
    pub value: f64,
    pub witness_x: Vec<f64>,
    /// Second witness point for pairwise quantities.
    pub witness_y: Option<Vec<f64>>,
    pub min_pair_dist: f64,
    pub max_pair_dist: f64,
    pub n_pairs: u64,
    /// Finite-difference error estimate when gradients were differenced.
    pub fd_error: Option<f64>,
    /// Set when the value is an upper bound (boundary C^{1,α} extension).
    pub is_upper_bound: bool,
}

impl HolderReport {
    /// CSV row: kind, k, alpha, value, witness_x, witness_y, n_pairs_scanned.
    pub fn to_csv_row(&self) -> String {
        let (k, alpha) = self.kind.k_alpha();
        let fmt_pt = |p: &[f64]| {
            p.iter()
                .map(|v| format!("{v:.12e}"))
                .collect::<Vec<_>>()
                .join(";")
        };
        format!(
            "{},{},{},{:.12e},{},{},{}",
            self.kind.label(),
            k,
            alpha,
            self.value,
            fmt_pt(&self.witness_x),
            self.witness_y.as_deref().map(fmt_pt).unwrap_or_default(),
            self.n_pairs
        )
    }
}

/// Real-valued samples of a function on a bounded domain, with boundary
/// distances and optional analytic evaluators.
#[derive(Clone)]
pub struct SampledFunction {
    dim: usize,
    points: Vec<Vec<f64>>,
    values: Vec<f64>,
    dist: Vec<f64>,
    spacing: f64,
    radius: Option<f64>,
    evaluator: Option<RealFn>,
    grad_evaluator: Option<GradFn>,
    grads: OnceLock<Option<Vec<Option<Vec<f64>>>>>,
}

impl std::fmt::Debug for SampledFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SampledFunction")
            .field("dim", &self.dim)
            .field("n_points", &self.points.len())
            .field("spacing", &self.spacing)
            .field("radius", &self.radius)
            .finish()
    }
}

impl SampledFunction {
    /// Builds from explicit samples. `dist` holds the boundary distance per
    /// site; `spacing` is the typical sample spacing (drives FD steps and
    /// short-range scan radii).
    pub fn from_samples(
        dim: usize,
        points: Vec<Vec<f64>>,
        values: Vec<f64>,
        dist: Vec<f64>,
        spacing: f64,
    ) -> Result<Self> {
        if points.is_empty() {
            return Err(CoreError::EmptySamples);
        }
        if points.len() != values.len() || points.len() != dist.len() {
            return Err(CoreError::InvalidArgument(
                "points/values/dist length mismatch".into(),
            ));
        }
        if dist.iter().any(|&d| d < -1e-12) {
            return Err(CoreError::InvalidArgument(
                "boundary distance must be nonnegative".into(),
            ));
        }
        Ok(Self {
            dim,
            points,
            values,
            dist,
            spacing,
            radius: None,
            evaluator: None,
            grad_evaluator: None,
            grads: OnceLock::new(),
        })
    }

    /// Samples `f` on the lattice points of the closed disc of radius `r`
    /// in ℝ², with `resolution` points per axis.
    pub fn on_disc_grid(r: f64, resolution: usize, f: &RealFn) -> Result<Self> {
        Self::on_disc_grid_within(r, r, resolution, f)
    }

    /// Samples `f` on the lattice of the closed disc of radius `r`, recording
    /// boundary distances to the sphere of radius `domain_r >= r` (for
    /// interior-ball scans inside a larger domain).
    pub fn on_disc_grid_within(
        r: f64,
        domain_r: f64,
        resolution: usize,
        f: &RealFn,
    ) -> Result<Self> {
        if resolution < 3 {
            return Err(CoreError::InvalidArgument("resolution must be >= 3".into()));
        }
        let h = 2.0 * r / (resolution - 1) as f64;
        let mut points = Vec::new();
        let mut values = Vec::new();
        let mut dist = Vec::new();
        for i in 0..resolution {
            for j in 0..resolution {
                let x = -r + i as f64 * h;
                let y = -r + j as f64 * h;
                let nrm = (x * x + y * y).sqrt();
                if nrm <= r + 1e-12 {
                    points.push(vec![x, y]);
                    values.push(f(&[x, y]));
                    dist.push((domain_r - nrm).max(0.0));
                }
            }
        }
        let mut s = Self::from_samples(2, points, values, dist, h)?;
        s.radius = Some(r);
        s.evaluator = Some(f.clone());
        Ok(s)
    }

    /// Samples `f` at `count` seeded random points of the closed ball of
    /// radius `r` in ℝ^m (used for m = 4 where grids are too large).
    pub fn on_ball_random(
        m: usize,
        r: f64,
        count: usize,
        seed: u64,
        f: &RealFn,
    ) -> Result<Self> {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut points = Vec::with_capacity(count);
        let mut values = Vec::with_capacity(count);
        let mut dist = Vec::with_capacity(count);
        while points.len() < count {
            let p: Vec<f64> = (0..m).map(|_| rng.gen_range(-r..r)).collect();
            let nrm = p.iter().map(|v| v * v).sum::<f64>().sqrt();
            if nrm <= r {
                values.push(f(&p));
                dist.push(r - nrm);
                points.push(p);
            }
        }
        // effective spacing ~ r * count^{-1/m}
        let spacing = r * (count as f64).powf(-1.0 / m as f64);
        let mut s = Self::from_samples(m, points, values, dist, spacing)?;
        s.radius = Some(r);
        s.evaluator = Some(f.clone());
        Ok(s)
    }

    /// Samples `f` on a uniform grid of the interval [a, b] ⊂ ℝ.
    pub fn on_interval_grid(a: f64, b: f64, n: usize, f: &RealFn) -> Result<Self> {
        if n < 2 || !(b > a) {
            return Err(CoreError::InvalidArgument("bad interval grid".into()));
        }
        let h = (b - a) / (n - 1) as f64;
        let points: Vec<Vec<f64>> = (0..n).map(|i| vec![a + i as f64 * h]).collect();
        let values: Vec<f64> = points.iter().map(|p| f(&p[..])).collect();
        let dist: Vec<f64> = points
            .iter()
            .map(|p| (p[0] - a).min(b - p[0]).max(0.0))
            .collect();
        let mut s = Self::from_samples(1, points, values, dist, h)?;
        s.evaluator = Some(f.clone());
        if a == -b {
            s.radius = Some(b);
        }
        Ok(s)
    }

    pub fn with_radius(mut self, r: f64) -> Self {
        self.radius = Some(r);
        self
    }

    pub fn with_evaluator(mut self, f: RealFn) -> Self {
        self.evaluator = Some(f);
        self
    }

    pub fn with_gradient(mut self, g: GradFn) -> Self {
        self.grad_evaluator = Some(g);
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn boundary_distances(&self) -> &[f64] {
        &self.dist
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn radius(&self) -> Option<f64> {
        self.radius
    }

    pub fn evaluator(&self) -> Option<&RealFn> {
        self.evaluator.as_ref()
    }

    pub fn grad_evaluator(&self) -> Option<&GradFn> {
        self.grad_evaluator.as_ref()
    }

    /// Gradient samples: analytic when a gradient evaluator is attached,
    /// otherwise central differences with step = grid spacing (skipping
    /// sites too close to the boundary for a centered stencil).
    ///
    /// Returns `None` per site where no gradient is available.
    pub fn gradients(&self) -> Result<&[Option<Vec<f64>>]> {
        let computed = self.grads.get_or_init(|| self.compute_gradients());
        match computed {
            Some(g) => Ok(g),
            None => Err(CoreError::InvalidArgument(
                "k = 1 norms need gradient samples, a gradient evaluator, \
                 or a value evaluator for finite differences"
                    .into(),
            )),
        }
    }

    /// Estimated finite-difference error for differenced gradients
    /// (zero when gradients are analytic).
    pub fn gradient_fd_error(&self) -> f64 {
        if self.grad_evaluator.is_some() {
            0.0
        } else {
            self.spacing * self.spacing
        }
    }

    fn compute_gradients(&self) -> Option<Vec<Option<Vec<f64>>>> {
        if let Some(g) = &self.grad_evaluator {
            return Some(self.points.iter().map(|p| Some(g(p))).collect());
        }
        let f = self.evaluator.as_ref()?;
        let step = self.spacing;
        Some(
            self.points
                .iter()
                .zip(&self.dist)
                .map(|(p, &d)| {
                    if d < step {
                        return None; // centered stencil would leave the domain
                    }
                    let mut grad = vec![0.0; self.dim];
                    let mut pp = p.clone();
                    for k in 0..self.dim {
                        pp[k] = p[k] + step;
                        let fp = f(&pp);
                        pp[k] = p[k] - step;
                        let fm = f(&pp);
                        pp[k] = p[k];
                        grad[k] = (fp - fm) / (2.0 * step);
                    }
                    Some(grad)
                })
                .collect(),
        )
    }

    /// Restriction to sites with boundary distance above `min_dist`
    /// (strict inequality: open-ball convention).
    pub fn restrict_interior(&self, min_dist: f64) -> Result<Self> {
        let keep: Vec<usize> = (0..self.len())
            .filter(|&i| self.dist[i] > min_dist)
            .collect();
        if keep.is_empty() {
            return Err(CoreError::EmptySamples);
        }
        let mut s = Self::from_samples(
            self.dim,
            keep.iter().map(|&i| self.points[i].clone()).collect(),
            keep.iter().map(|&i| self.values[i]).collect(),
            keep.iter().map(|&i| self.dist[i]).collect(),
            self.spacing,
        )?;
        s.radius = self.radius;
        s.evaluator = self.evaluator.clone();
        s.grad_evaluator = self.grad_evaluator.clone();
        Ok(s)
    }
}

fn check_alpha(alpha: f64, allow_zero: bool) -> Result<()> {
    let lo_ok = if allow_zero { alpha >= 0.0 } else { alpha > 0.0 };
    if !lo_ok || alpha > 1.0 {
        return Err(CoreError::InvalidArgument(format!(
            "alpha = {alpha} out of range"
        )));
    }
    Ok(())
}

fn check_k(k: u8) -> Result<()> {
    if k > 1 {
        return Err(CoreError::InvalidArgument(format!(
            "only k in {{0, 1}} supported, got {k}"
        )));
    }
    Ok(())
}

fn grad_diff_norm(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// |v|_{0;Ω} = sup |v| with witness.
pub fn sup_norm(v: &SampledFunction) -> Result<HolderReport> {
    let admit = vec![true; v.len()];
    let (value, i) = scan_points(v.len(), &admit, |i| v.values()[i].abs())?;
    Ok(HolderReport {
        kind: NormKind::Sup,
        value,
        witness_x: v.points()[i].clone(),
        witness_y: None,
        min_pair_dist: 0.0,
        max_pair_dist: 0.0,
        n_pairs: v.len() as u64,
        fd_error: None,
        is_upper_bound: false,
    })
}

/// [v]_{k,α;Ω}: sup over pairs of |∇^k v(x) - ∇^k v(y)| / |x-y|^α.
pub fn holder_seminorm(v: &SampledFunction, k: u8, alpha: f64) -> Result<HolderReport> {
    check_k(k)?;
    check_alpha(alpha, false)?;
    seminorm_impl(v, k, alpha, Weighting::None, DEFAULT_SCAN_SEED)
}

/// [v]*_{k,α;Ω}: the interior seminorm weighted by d_{x,y}^{k+α}.
/// With α = 0 returns the point quantity [v]*_{k;Ω} = sup d_x^k |∇^k v(x)|.
pub fn starred_seminorm(v: &SampledFunction, k: u8, alpha: f64) -> Result<HolderReport> {
    check_k(k)?;
    check_alpha(alpha, true)?;
    if alpha == 0.0 {
        let (admit, fd_error) = match k {
            0 => (vec![true; v.len()], None),
            _ => {
                let grads = v.gradients()?;
                (
                    grads.iter().map(|g| g.is_some()).collect(),
                    Some(v.gradient_fd_error()),
                )
            }
        };
        let (value, i) = scan_points(v.len(), &admit, |i| {
            let w = if k == 0 { 1.0 } else { v.boundary_distances()[i] };
            let mag = if k == 0 {
                v.values()[i].abs()
            } else {
                let g = v.gradients().unwrap()[i].as_ref().unwrap();
                g.iter().map(|t| t * t).sum::<f64>().sqrt()
            };
            w.powi(k as i32) * mag
        })?;
        return Ok(HolderReport {
            kind: NormKind::Starred { k, alpha },
            value,
            witness_x: v.points()[i].clone(),
            witness_y: None,
            min_pair_dist: 0.0,
            max_pair_dist: 0.0,
            n_pairs: v.len() as u64,
            fd_error,
            is_upper_bound: false,
        });
    }
    seminorm_impl(v, k, alpha, Weighting::Starred, DEFAULT_SCAN_SEED)
}

enum Weighting {
    None,
    Starred,
}

fn seminorm_impl(
    v: &SampledFunction,
    k: u8,
    alpha: f64,
    weighting: Weighting,
    seed: u64,
) -> Result<HolderReport> {
    let exponent = k as f64 + alpha;
    let dists = v.boundary_distances();
    let (result, fd_error) = match k {
        0 => {
            let values = v.values();
            let admit = vec![true; v.len()];
            let obj = |i: usize, j: usize, d: f64| {
                let w = match weighting {
                    Weighting::None => 1.0,
                    Weighting::Starred => dists[i].min(dists[j]).powf(exponent),
                };
                w * (values[i] - values[j]).abs() / d.powf(alpha)
            };
            (
                scan_pairs(v.points(), &admit, obj, v.spacing(), seed)?,
                None,
            )
        }
        _ => {
            let grads = v.gradients()?;
            let admit: Vec<bool> = grads.iter().map(|g| g.is_some()).collect();
            let obj = |i: usize, j: usize, d: f64| {
                let w = match weighting {
                    Weighting::None => 1.0,
                    Weighting::Starred => dists[i].min(dists[j]).powf(exponent),
                };
                let gi = grads[i].as_ref().unwrap();
                let gj = grads[j].as_ref().unwrap();
                w * grad_diff_norm(gi, gj) / d.powf(alpha)
            };
            (
                scan_pairs(v.points(), &admit, obj, v.spacing(), seed)?,
                Some(v.gradient_fd_error()),
            )
        }
    };
    let kind = match weighting {
        Weighting::None => NormKind::Seminorm { k, alpha },
        Weighting::Starred => NormKind::Starred { k, alpha },
    };
    Ok(HolderReport {
        kind,
        value: result.value,
        witness_x: v.points()[result.i].clone(),
        witness_y: Some(v.points()[result.j].clone()),
        min_pair_dist: result.min_dist,
        max_pair_dist: result.max_dist,
        n_pairs: result.n_pairs,
        fd_error,
        is_upper_bound: false,
    })
}

/// [v]_{k;Ω} = sup |∇^k v| (with [v]_{0;Ω} = sup |v|).
pub fn k_seminorm(v: &SampledFunction, k: u8) -> Result<f64> {
    check_k(k)?;
    if k == 0 {
        return Ok(sup_norm(v)?.value);
    }
    let grads = v.gradients()?;
    let admit: Vec<bool> = grads.iter().map(|g| g.is_some()).collect();
    let (value, _) = scan_points(v.len(), &admit, |i| {
        let g = grads[i].as_ref().unwrap();
        g.iter().map(|t| t * t).sum::<f64>().sqrt()
    })?;
    Ok(value)
}

/// |v|'_{k,α;B_r} = Σ_{i≤k} r^i [v]_{i;B_r} + r^{k+α} [v]_{k,α;B_r}.
pub fn primed_norm(v: &SampledFunction, k: u8, alpha: f64) -> Result<f64> {
    check_k(k)?;
    check_alpha(alpha, false)?;
    let r = v.radius().ok_or_else(|| {
        CoreError::InvalidArgument("primed norm needs a ball domain of known radius".into())
    })?;
    let mut total = 0.0;
    for i in 0..=k {
        total += r.powi(i as i32) * k_seminorm(v, i)?;
    }
    total += r.powf(k as f64 + alpha) * holder_seminorm(v, k, alpha)?.value;
    Ok(total)
}

/// |f|^{(k)}_{0,α;Ω} = sup d_x^k |f(x)| + sup d_{x,y}^{k+α} |f(x)-f(y)|/|x-y|^α.
/// With `alpha = None` only the first (weighted sup) term is returned.
pub fn weighted_density_norm(f: &SampledFunction, k: u32, alpha: Option<f64>) -> Result<f64> {
    let dists = f.boundary_distances();
    let values = f.values();
    let admit = vec![true; f.len()];
    let (first, _) = scan_points(f.len(), &admit, |i| {
        dists[i].powi(k as i32) * values[i].abs()
    })?;
    let second = match alpha {
        None => 0.0,
        Some(a) => {
            check_alpha(a, false)?;
            let exponent = k as f64 + a;
            let r = scan_pairs(
                f.points(),
                &admit,
                |i, j, d| {
                    dists[i].min(dists[j]).powf(exponent) * (values[i] - values[j]).abs()
                        / d.powf(a)
                },
                f.spacing(),
                DEFAULT_SCAN_SEED,
            )?;
            r.value
        }
    };
    Ok(first + second)
}
