//! Small shared numeric utilities.

/// Gauss-Legendre nodes and weights on [-1, 1], computed by Newton iteration
/// on the Legendre polynomial. Accurate to machine precision for n ≤ ~200.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Chebyshev-based initial guess.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut pp = 0.0;
        for _ in 0..100 {
            // Evaluate P_n and its derivative by recurrence.
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            // p1 = P_n(x), p0 = P_{n-1}(x)
            pp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / pp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * pp * pp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n == 1 {
        nodes[0] = 0.0;
        weights[0] = 2.0;
    }
    (nodes, weights)
}

/// Gauss-Legendre quadrature of `f` on [a, b] with `n` nodes.
pub fn gl_integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let (nodes, weights) = gauss_legendre(n);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    nodes
        .iter()
        .zip(&weights)
        .map(|(&x, &w)| w * f(mid + half * x))
        .sum::<f64>()
        * half
}

/// Composite Gauss-Legendre on [a, b] split into `panels` panels of `n` nodes.
pub fn gl_integrate_composite<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    n: usize,
    panels: usize,
) -> f64 {
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        total += gl_integrate(&f, a + p as f64 * h, a + (p + 1) as f64 * h, n);
    }
    total
}

/// Least-squares slope of log y against log x over `(x, y)` pairs.
/// Pairs with a nonpositive coordinate are skipped; returns NaN if fewer
/// than two usable pairs remain.
pub fn log_log_slope(pairs: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = pairs
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return f64::NAN;
    }
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

/// Deterministic scan sites in the closed ball of radius `r` ⊂ ℝ^m: the
/// origin plus axis points plus seeded uniform fill.
pub fn ball_points(m: usize, r: f64, count: usize, seed: u64) -> Vec<Vec<f64>> {
    use rand::Rng;
    use rand::SeedableRng;
    let mut out = Vec::with_capacity(count);
    out.push(vec![0.0; m]);
    'axes: for frac in [0.5, 0.9] {
        for k in 0..m {
            for sign in [1.0, -1.0] {
                if out.len() >= count {
                    break 'axes;
                }
                let mut p = vec![0.0; m];
                p[k] = sign * frac * r;
                out.push(p);
            }
        }
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    while out.len() < count {
        let p: Vec<f64> = (0..m).map(|_| rng.gen_range(-r..r)).collect();
        if p.iter().map(|v| v * v).sum::<f64>().sqrt() <= r {
            out.push(p);
        }
    }
    out
}

/// Surface area of the unit sphere S^{m-1} in R^m.
pub fn unit_sphere_area(m: usize) -> f64 {
    // 2 π^{m/2} / Γ(m/2)
    let half = m as f64 / 2.0;
    2.0 * std::f64::consts::PI.powf(half) / gamma_fn(half)
}

/// Γ(x) for x > 0, via the Lanczos approximation.
#[allow(clippy::excessive_precision, clippy::inconsistent_digit_grouping)]
pub fn gamma_fn(x: f64) -> f64 {
    // Lanczos g = 7, n = 9 coefficients.
    const G: f64 = 7.0;
    const C: [f64; 9] = [
        0.999_999_999_999_809_93,
        676.520_368_121_885_1,
        -1259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        std::f64::consts::PI / ((std::f64::consts::PI * x).sin() * gamma_fn(1.0 - x))
    } else {
        let x = x - 1.0;
        let mut a = C[0];
        let t = x + G + 0.5;
        for (i, &c) in C.iter().enumerate().skip(1) {
            a += c / (x + i as f64);
        }
        (2.0 * std::f64::consts::PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * a
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn gl_exact_on_polynomials() {
        // n nodes integrate degree 2n-1 exactly.
        let val = gl_integrate(|x| x.powi(7) + 3.0 * x * x, -1.0, 1.0, 4);
        assert_abs_diff_eq!(val, 2.0, epsilon = 1e-14);
    }

    #[test]
    fn gl_smooth_integrand() {
        let val = gl_integrate_composite(|x| x.exp(), 0.0, 1.0, 8, 4);
        assert_abs_diff_eq!(val, 1.0f64.exp() - 1.0, epsilon = 1e-14);
    }

    #[test]
    fn sphere_areas() {
        assert_abs_diff_eq!(unit_sphere_area(2), 2.0 * std::f64::consts::PI, epsilon = 1e-12);
        assert_abs_diff_eq!(unit_sphere_area(3), 4.0 * std::f64::consts::PI, epsilon = 1e-11);
        assert_abs_diff_eq!(
            unit_sphere_area(4),
            2.0 * std::f64::consts::PI * std::f64::consts::PI,
            epsilon = 1e-11
        );
    }

    #[test]
    fn gamma_small_values() {
        assert_abs_diff_eq!(gamma_fn(1.0), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(gamma_fn(0.5), std::f64::consts::PI.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(gamma_fn(5.0), 24.0, epsilon = 1e-10);
    }
}
