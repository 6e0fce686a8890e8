//! Small numerical kernels shared by the physics modules: the global square
//! root branch, finite differences, quadrature, phase unwrapping and a
//! least-squares line fit.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

/// Square root on the physical branch: `Re >= 0`, and `Im >= 0` when the real
/// part vanishes. A wave `exp(i k z)` with this `k` either propagates toward
/// `+z` or decays toward `+z`. Every wavenumber in the crate goes through here.
pub fn branch_sqrt(z: Complex64) -> Complex64 {
    let s = z.sqrt();
    if s.re < 0.0 || (s.re == 0.0 && s.im < 0.0) {
        -s
    } else {
        s
    }
}

/// `sqrt(a^2 - b^2)` for real inputs on the physical branch. Factored as
/// `(a - b)(a + b)` so the threshold `a = b` lands exactly on zero.
pub fn branch_sqrt_diff_sq(a: f64, b: f64) -> Complex64 {
    let d = (a - b) * (a + b);
    if d >= 0.0 {
        Complex64::new(d.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-d).sqrt())
    }
}

/// Central differences inside, first-order one-sided at both ends.
pub fn first_derivative<T>(y: &[T], h: f64) -> Vec<T>
where
    T: Copy + Add<Output = T> + Sub<Output = T> + Mul<f64, Output = T>,
{
    let n = y.len();
    assert!(n >= 3, "first_derivative needs at least 3 samples");
    let mut d = Vec::with_capacity(n);
    d.push((y[1] - y[0]) * (1.0 / h));
    for i in 1..n - 1 {
        d.push((y[i + 1] - y[i - 1]) * (0.5 / h));
    }
    d.push((y[n - 1] - y[n - 2]) * (1.0 / h));
    d
}

/// Three-point second difference inside; each end copies its neighbour.
pub fn second_derivative<T>(y: &[T], h: f64) -> Vec<T>
where
    T: Copy + Add<Output = T> + Sub<Output = T> + Mul<f64, Output = T>,
{
    let n = y.len();
    assert!(n >= 3, "second_derivative needs at least 3 samples");
    let inv = 1.0 / (h * h);
    let mut d = Vec::with_capacity(n);
    d.push(y[0]);
    for i in 1..n - 1 {
        d.push((y[i + 1] - y[i] - (y[i] - y[i - 1])) * inv);
    }
    d[0] = d[1];
    d.push(d[n - 2]);
    d
}

/// Composite Simpson rule over uniformly spaced samples. An odd interval count
/// closes with the 3/8 rule on the last three intervals; two samples fall back
/// to the trapezoid.
pub fn simpson(y: &[f64], h: f64) -> f64 {
    let m = y.len().saturating_sub(1);
    match m {
        0 => 0.0,
        1 => 0.5 * h * (y[0] + y[1]),
        _ => {
            let even = if m.is_multiple_of(2) { m } else { m - 3 };
            let mut s = 0.0;
            let mut i = 0;
            while i + 2 <= even {
                s += y[i] + 4.0 * y[i + 1] + y[i + 2];
                i += 2;
            }
            let mut total = s * h / 3.0;
            if m % 2 == 1 {
                let j = even;
                total += 3.0 * h / 8.0 * (y[j] + 3.0 * y[j + 1] + 3.0 * y[j + 2] + y[j + 3]);
            }
            total
        }
    }
}

/// Running trapezoid integral, `out[0] = 0`.
pub fn cumulative_trapezoid(y: &[f64], h: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(y.len());
    let mut acc = 0.0;
    out.push(0.0);
    for w in y.windows(2) {
        acc += 0.5 * h * (w[0] + w[1]);
        out.push(acc);
    }
    out
}

/// Increments of magnitude at or beyond this are treated as ambiguous.
pub const UNWRAP_LIMIT: f64 = PI * (1.0 - 1e-9);

/// Continuous phase of a sequence of nonzero complex numbers, starting from
/// `start` for the first element. Each step takes the nearest branch
/// `arg(z[i+1] / z[i])`; a step whose magnitude reaches `UNWRAP_LIMIT` cannot
/// be resolved and its index is returned as the error.
pub fn unwrap_phase(z: &[Complex64], start: f64) -> Result<Vec<f64>, usize> {
    let mut out = Vec::with_capacity(z.len());
    if z.is_empty() {
        return Ok(out);
    }
    let mut phase = start;
    out.push(phase);
    for (i, w) in z.windows(2).enumerate() {
        let step = (w[1] / w[0]).arg();
        if !step.is_finite() || step.abs() >= UNWRAP_LIMIT {
            return Err(i);
        }
        phase += step;
        out.push(phase);
    }
    Ok(out)
}

/// Moves `phase` by a multiple of 2π so it lies within π of `reference`.
pub fn nearest_branch(phase: f64, reference: f64) -> f64 {
    let k = ((reference - phase) / (2.0 * PI)).round();
    phase + 2.0 * PI * k
}

/// Ordinary least-squares line `y = intercept + slope * x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope; zero for exactly two points.
    pub slope_std_err: f64,
}

pub fn fit_line(x: &[f64], y: &[f64]) -> LineFit {
    assert_eq!(x.len(), y.len());
    assert!(x.len() >= 2, "fit_line needs two points");
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|xi| (xi - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(xi, yi)| (xi - mx) * (yi - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let slope_std_err = if x.len() > 2 {
        let ssr: f64 = x
            .iter()
            .zip(y)
            .map(|(xi, yi)| (yi - intercept - slope * xi).powi(2))
            .sum();
        (ssr / (n - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    LineFit {
        slope,
        intercept,
        slope_std_err,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn branch_sqrt_quadrants() {
        let c = |re, im| Complex64::new(re, im);
        assert_eq!(branch_sqrt(c(4.0, 0.0)), c(2.0, 0.0));
        assert_eq!(branch_sqrt(c(-4.0, 0.0)), c(0.0, 2.0));
        assert_eq!(branch_sqrt(c(-4.0, -0.0)), c(0.0, 2.0));
        let s = branch_sqrt(c(-3.0, -4.0));
        assert!(s.re >= 0.0);
        assert_relative_eq!((s * s - c(-3.0, -4.0)).norm(), 0.0, epsilon = 1e-15);
        assert_eq!(branch_sqrt_diff_sq(1.5, 1.5), c(0.0, 0.0));
        assert_eq!(branch_sqrt_diff_sq(1.0, 2.0).re, 0.0);
    }

    #[test]
    fn simpson_is_exact_for_cubics() {
        for n in [2usize, 3, 4, 5, 8, 11] {
            let h = 1.0 / (n - 1) as f64;
            let y: Vec<f64> = (0..n).map(|i| (i as f64 * h).powi(3)).collect();
            let want = if n == 2 { 0.5 } else { 0.25 };
            assert_relative_eq!(simpson(&y, h), want, max_relative = 1e-14);
        }
        assert_eq!(simpson(&[3.0], 0.1), 0.0);
    }

    #[test]
    fn derivatives_of_a_quadratic() {
        let h = 0.1;
        let y: Vec<f64> = (0..11).map(|i| (i as f64 * h).powi(2)).collect();
        let d = first_derivative(&y, h);
        for (i, di) in d.iter().enumerate().take(10).skip(1) {
            assert_relative_eq!(*di, 2.0 * i as f64 * h, epsilon = 1e-12);
        }
        assert_relative_eq!(d[0], h, epsilon = 1e-12);
        let dd = second_derivative(&y, h);
        assert!(dd.iter().all(|v| (v - 2.0).abs() < 1e-10));
    }

    #[test]
    fn unwrap_follows_a_rotating_phasor() {
        let z: Vec<Complex64> = (0..200)
            .map(|i| Complex64::from_polar(1.0, 0.3 * i as f64))
            .collect();
        let p = unwrap_phase(&z, 0.0).unwrap();
        assert_relative_eq!(p[199], 0.3 * 199.0, max_relative = 1e-12);
        let alternating = [Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)];
        assert_eq!(unwrap_phase(&alternating, 0.0), Err(0));
    }

    #[test]
    fn nearest_branch_moves_by_two_pi() {
        assert_relative_eq!(nearest_branch(0.1, 4.0 * PI), 0.1 + 4.0 * PI, epsilon = 1e-12);
        assert_relative_eq!(nearest_branch(3.0, -3.0), 3.0 - 2.0 * PI, epsilon = 1e-12);
    }

    #[test]
    fn line_fit_recovers_slope() {
        let x = [0.0, 1.0, 2.0, 3.0];
        let y = [1.0, 3.0, 5.0, 7.0];
        let f = fit_line(&x, &y);
        assert_relative_eq!(f.slope, 2.0, epsilon = 1e-14);
        assert_relative_eq!(f.intercept, 1.0, epsilon = 1e-14);
        assert!(f.slope_std_err < 1e-12);
    }
}
