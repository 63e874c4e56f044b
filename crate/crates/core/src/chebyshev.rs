//! Chebyshev interpolation on `[-1, 1]` and conversion to monomial form.

use std::f64::consts::PI;

/// Chebyshev coefficients `c[0..n]` of the degree `n - 1` interpolant of `f`
/// through the `n` Chebyshev nodes `cos(pi (k + 1/2) / n)`.
///
/// `f(x) ~ c[0] + sum_{j>=1} c[j] T_j(x)`.
pub fn interpolate<F: Fn(f64) -> f64>(f: F, n: usize) -> Vec<f64> {
    assert!(n > 0);
    let nf = n as f64;
    let samples: Vec<f64> = (0..n).map(|k| f((PI * (k as f64 + 0.5) / nf).cos())).collect();
    let mut coeffs: Vec<f64> = (0..n)
        .map(|j| {
            let sum: f64 = samples
                .iter()
                .enumerate()
                .map(|(k, fk)| fk * (PI * j as f64 * (k as f64 + 0.5) / nf).cos())
                .sum();
            2.0 * sum / nf
        })
        .collect();
    coeffs[0] *= 0.5;
    coeffs
}

/// Rewrites a Chebyshev series as power-series coefficients `a[k]` of `x^k`.
pub fn to_monomial(cheb: &[f64]) -> Vec<f64> {
    let n = cheb.len();
    let mut out = vec![0.0; n];
    if n == 0 {
        return out;
    }
    // T_{j-1} and T_j in monomial form
    let mut prev = vec![0.0; n];
    let mut cur = vec![0.0; n];
    prev[0] = 1.0;
    out[0] += cheb[0];
    if n == 1 {
        return out;
    }
    cur[1] = 1.0;
    out[1] += cheb[1];
    for c in cheb.iter().skip(2) {
        // T_{j+1} = 2x T_j - T_{j-1}
        let mut next = vec![0.0; n];
        for k in 0..n - 1 {
            next[k + 1] += 2.0 * cur[k];
        }
        for k in 0..n {
            next[k] -= prev[k];
        }
        for (o, t) in out.iter_mut().zip(&next) {
            *o += c * t;
        }
        prev = std::mem::replace(&mut cur, next);
    }
    out
}

/// Evaluates a Chebyshev series at `x` by Clenshaw recurrence.
pub fn clenshaw(cheb: &[f64], x: f64) -> f64 {
    let mut b1 = 0.0;
    let mut b2 = 0.0;
    for &c in cheb.iter().skip(1).rev() {
        let b0 = 2.0 * x * b1 - b2 + c;
        b2 = b1;
        b1 = b0;
    }
    cheb.first().copied().unwrap_or(0.0) + x * b1 - b2
}
