//! Sup-over-pairs scanning engine behind every Hölder seminorm.
//!
//! Up to 4e6 pairs the scan is exhaustive. Beyond that it switches to a
//! two-stage strategy: all pairs within 8 grid steps (cell binning) plus a
//! seeded random subset of 1e6 long-range pairs. Hölder sups for the
//! functions of interest are attained at short range; the long-range
//! subsample guards against surprises.
//!
//! Reductions are max-based and therefore order-independent: results are
//! identical under any thread count.

use crate::error::{CoreError, Result};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::collections::HashMap;

const MAX_EXHAUSTIVE_PAIRS: u64 = 4_000_000;
const LONG_RANGE_PAIRS: usize = 1_000_000;
const SHORT_RANGE_STEPS: f64 = 8.0;
const DEGENERATE_DIST: f64 = 1e-12;

/// Result of a pair scan: the supremum, its witnessing index pair, and
/// scale metadata.
#[derive(Debug, Clone, Copy)]
pub struct PairScanResult {
    pub value: f64,
    pub i: usize,
    pub j: usize,
    pub n_pairs: u64,
    pub min_dist: f64,
    pub max_dist: f64,
}

#[derive(Debug, Clone, Copy, Default)]
struct Best {
    value: f64,
    i: usize,
    j: usize,
    n_pairs: u64,
    min_dist: f64,
    max_dist: f64,
}

impl Best {
    fn new() -> Self {
        Self {
            value: f64::NEG_INFINITY,
            i: usize::MAX,
            j: usize::MAX,
            n_pairs: 0,
            min_dist: f64::INFINITY,
            max_dist: 0.0,
        }
    }

    fn consider(&mut self, value: f64, i: usize, j: usize, dist: f64) {
        self.n_pairs += 1;
        self.min_dist = self.min_dist.min(dist);
        self.max_dist = self.max_dist.max(dist);
        // Deterministic tie-break on (value, i, j) so parallel reductions are
        // order-independent.
        if value > self.value || (value == self.value && (i, j) < (self.i, self.j)) {
            self.value = value;
            self.i = i;
            self.j = j;
        }
    }

    fn merge(mut self, other: Best) -> Best {
        self.n_pairs += other.n_pairs;
        self.min_dist = self.min_dist.min(other.min_dist);
        self.max_dist = self.max_dist.max(other.max_dist);
        if other.value > self.value
            || (other.value == self.value && (other.i, other.j) < (self.i, self.j))
        {
            self.value = other.value;
            self.i = other.i;
            self.j = other.j;
        }
        self
    }
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Scans pairs of `points`, maximizing `objective(i, j, |x_i - x_j|)`.
///
/// `admit` filters which indices participate (e.g. sites with gradients).
/// `spacing` drives the short-range radius of the two-stage strategy;
/// `seed` drives the long-range random subset.
pub fn scan_pairs<F>(
    points: &[Vec<f64>],
    admit: &[bool],
    objective: F,
    spacing: f64,
    seed: u64,
) -> Result<PairScanResult>
where
    F: Fn(usize, usize, f64) -> f64 + Sync,
{
    let idx: Vec<usize> = (0..points.len()).filter(|&i| admit[i]).collect();
    if idx.len() < 2 {
        return Err(CoreError::EmptySamples);
    }
    let n = idx.len() as u64;
    let total_pairs = n * (n - 1) / 2;

    let best = if total_pairs <= MAX_EXHAUSTIVE_PAIRS {
        idx.par_iter()
            .enumerate()
            .fold(Best::new, |mut acc, (pi, &i)| {
                for &j in &idx[pi + 1..] {
                    let d = dist(&points[i], &points[j]);
                    if d < DEGENERATE_DIST {
                        continue;
                    }
                    acc.consider(objective(i, j, d), i, j, d);
                }
                acc
            })
            .reduce(Best::new, Best::merge)
    } else {
        two_stage_scan(points, &idx, &objective, spacing, seed)
    };

    if best.n_pairs == 0 {
        return Err(CoreError::AllPairsDegenerate);
    }
    Ok(PairScanResult {
        value: best.value,
        i: best.i,
        j: best.j,
        n_pairs: best.n_pairs,
        min_dist: best.min_dist,
        max_dist: best.max_dist,
    })
}

fn cell_key(p: &[f64], cell: f64) -> (i64, i64, i64, i64) {
    let q = |k: usize| {
        if k < p.len() {
            (p[k] / cell).floor() as i64
        } else {
            0
        }
    };
    (q(0), q(1), q(2), q(3))
}

fn two_stage_scan<F>(
    points: &[Vec<f64>],
    idx: &[usize],
    objective: &F,
    spacing: f64,
    seed: u64,
) -> Best
where
    F: Fn(usize, usize, f64) -> f64 + Sync,
{
    let radius = SHORT_RANGE_STEPS * spacing;
    let cell = radius.max(1e-9);
    let mut bins: HashMap<(i64, i64, i64, i64), Vec<usize>> = HashMap::new();
    for &i in idx {
        bins.entry(cell_key(&points[i], cell)).or_default().push(i);
    }
    let m = points[idx[0]].len().min(4);
    let offsets: Vec<[i64; 4]> = neighbor_offsets(m);

    // Stage 1: all short-range pairs via cell binning.
    let short = idx
        .par_iter()
        .fold(Best::new, |mut acc, &i| {
            let key = cell_key(&points[i], cell);
            for off in &offsets {
                let nk = (key.0 + off[0], key.1 + off[1], key.2 + off[2], key.3 + off[3]);
                if let Some(others) = bins.get(&nk) {
                    for &j in others {
                        if j <= i {
                            continue;
                        }
                        let d = dist(&points[i], &points[j]);
                        if d < DEGENERATE_DIST || d > radius {
                            continue;
                        }
                        acc.consider(objective(i, j, d), i, j, d);
                    }
                }
            }
            acc
        })
        .reduce(Best::new, Best::merge);

    // Stage 2: seeded random long-range subset.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(usize, usize)> = (0..LONG_RANGE_PAIRS)
        .map(|_| {
            let a = idx[rng.gen_range(0..idx.len())];
            let b = idx[rng.gen_range(0..idx.len())];
            (a.min(b), a.max(b))
        })
        .filter(|(a, b)| a != b)
        .collect();
    let long = pairs
        .par_iter()
        .fold(Best::new, |mut acc, &(i, j)| {
            let d = dist(&points[i], &points[j]);
            if d >= DEGENERATE_DIST {
                acc.consider(objective(i, j, d), i, j, d);
            }
            acc
        })
        .reduce(Best::new, Best::merge);

    short.merge(long)
}

fn neighbor_offsets(m: usize) -> Vec<[i64; 4]> {
    let mut out = Vec::new();
    let range = |active: bool| if active { -1..=1 } else { 0..=0 };
    for a in range(m >= 1) {
        for b in range(m >= 2) {
            for c in range(m >= 3) {
                for d in range(m >= 4) {
                    out.push([a, b, c, d]);
                }
            }
        }
    }
    out
}

/// Sup over single points: maximizes `objective(i)` over admitted indices.
pub fn scan_points<F>(count: usize, admit: &[bool], objective: F) -> Result<(f64, usize)>
where
    F: Fn(usize) -> f64 + Sync,
{
    let best = (0..count)
        .into_par_iter()
        .filter(|&i| admit[i])
        .fold(
            || (f64::NEG_INFINITY, usize::MAX),
            |acc, i| {
                let v = objective(i);
                if v > acc.0 || (v == acc.0 && i < acc.1) {
                    (v, i)
                } else {
                    acc
                }
            },
        )
        .reduce(
            || (f64::NEG_INFINITY, usize::MAX),
            |a, b| {
                if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
                    b
                } else {
                    a
                }
            },
        );
    if best.1 == usize::MAX {
        return Err(CoreError::EmptySamples);
    }
    Ok(best)
}
