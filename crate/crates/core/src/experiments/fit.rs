//! Log-log exponent fitting for decay-rate measurements: given suprema
//! measured at a ladder of scales, the fitted slope is the empirical Hölder
//! exponent.

use crate::error::{CoreError, Result};

/// Least-squares fit of log(sup) against log(scale).
#[derive(Debug, Clone)]
pub struct ExponentFit {
    pub scales: Vec<f64>,
    pub sups: Vec<f64>,
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual of the fit in log space.
    pub residual: f64,
}

impl ExponentFit {
    /// CSV: one row per scale plus the fitted parameters in the header.
    pub fn to_csv(&self) -> String {
        let mut out = format!(
            "# slope = {:.6e}, intercept = {:.6e}, residual = {:.6e}\nscale,sup\n",
            self.slope, self.intercept, self.residual
        );
        for (h, s) in self.scales.iter().zip(&self.sups) {
            out.push_str(&format!("{h:.12e},{s:.12e}\n"));
        }
        out
    }
}

/// Fits sup ≈ C·h^slope by least squares on (log h, log sup). Requires at
/// least 4 scales spanning a factor of 8; zero suprema are floored at
/// machine epsilon times the largest supremum so degenerate (identically
/// zero) ladders fit a steep positive slope rather than erroring.
pub fn exponent_fit(scales: &[f64], sups: &[f64]) -> Result<ExponentFit> {
    if scales.len() != sups.len() {
        return Err(CoreError::InvalidArgument(format!(
            "{} scales vs {} suprema",
            scales.len(),
            sups.len()
        )));
    }
    let usable: Vec<(f64, f64)> = scales
        .iter()
        .zip(sups)
        .filter(|(h, s)| **h > 0.0 && s.is_finite())
        .map(|(&h, &s)| (h, s))
        .collect();
    if usable.len() < 4 {
        return Err(CoreError::InvalidArgument(format!(
            "need at least 4 usable (scale, sup) points, got {}",
            usable.len()
        )));
    }
    let (hmin, hmax) = usable.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &(h, _)| {
        (lo.min(h), hi.max(h))
    });
    if hmax / hmin < 8.0 - 1e-9 {
        return Err(CoreError::InvalidArgument(format!(
            "scales span a factor {:.3} < 8",
            hmax / hmin
        )));
    }
    let smax = usable.iter().fold(0.0f64, |m, &(_, s)| m.max(s));
    let floor = f64::EPSILON * smax.max(f64::MIN_POSITIVE);
    let logs: Vec<(f64, f64)> = usable
        .iter()
        .map(|&(h, s)| (h.ln(), s.max(floor).ln()))
        .collect();
    let n = logs.len() as f64;
    let (mx, my) = logs
        .iter()
        .fold((0.0, 0.0), |(a, b), &(x, y)| (a + x / n, b + y / n));
    let sxx: f64 = logs.iter().map(|&(x, _)| (x - mx) * (x - mx)).sum();
    let sxy: f64 = logs.iter().map(|&(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = (logs
        .iter()
        .map(|&(x, y)| {
            let e = y - (intercept + slope * x);
            e * e
        })
        .sum::<f64>()
        / n)
        .sqrt();
    Ok(ExponentFit {
        scales: usable.iter().map(|&(h, _)| h).collect(),
        sups: usable.iter().map(|&(_, s)| s).collect(),
        slope,
        intercept,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::Rng;
    use rand::SeedableRng;

    fn ladder(n: usize) -> Vec<f64> {
        (0..n).map(|k| 0.5f64.powi(k as i32)).collect()
    }

    #[test]
    fn exact_square_law() {
        let scales = ladder(6);
        let sups: Vec<f64> = scales.iter().map(|h| h * h).collect();
        let fit = exponent_fit(&scales, &sups).unwrap();
        assert_abs_diff_eq!(fit.slope, 2.0, epsilon = 1e-12);
        assert!(fit.residual < 1e-12);
    }

    #[test]
    fn noisy_three_halves_law() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let scales = ladder(8);
        let sups: Vec<f64> = scales
            .iter()
            .map(|h| 2.7 * h.powf(1.5) * (1.0 + 0.01 * rng.gen_range(-1.0f64..1.0)))
            .collect();
        let fit = exponent_fit(&scales, &sups).unwrap();
        assert!((1.45..=1.55).contains(&fit.slope), "slope {}", fit.slope);
    }

    #[test]
    fn constant_sups_have_zero_slope() {
        let scales = ladder(5);
        let sups = vec![0.7; 5];
        let fit = exponent_fit(&scales, &sups).unwrap();
        assert_abs_diff_eq!(fit.slope, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn too_few_scales_rejected() {
        assert!(exponent_fit(&[1.0, 0.5, 0.25], &[1.0, 0.5, 0.25]).is_err());
    }

    #[test]
    fn narrow_span_rejected() {
        let scales = [1.0, 0.9, 0.8, 0.7];
        assert!(exponent_fit(&scales, &[1.0; 4]).is_err());
    }

    #[test]
    fn zero_sups_floored_not_fatal() {
        let scales = ladder(6);
        let sups = vec![0.0; 6];
        let fit = exponent_fit(&scales, &sups).unwrap();
        assert!(fit.slope.is_finite());
    }
}
