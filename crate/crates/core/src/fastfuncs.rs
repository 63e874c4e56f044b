//! Fast polynomial kernels used by the B2, B3 and P2 generators.
//!
//! * `sin`/`cos` of `2 pi v - pi` from degree 7/6 polynomials on `|y| <= pi/16`
//!   followed by four angle doublings.
//! * `g(u) = sqrt(-ln(1 - u) / u)` on `[0, tau]` through the bilinear map
//!   `v = (rho + 1)((rho + 2)u - 2) / (2(rho + 1) - (rho + 2)u)` and a
//!   polynomial `h(v)` on `[-1, 1]`. With `rho = 1`, `tau = 8/9` and `h` has
//!   its singularities at `v = +-2`.
//!
//! All coefficients come from [`fit_sincos_coeffs`] and [`fit_h_coeffs`]
//! (truncated Chebyshev interpolants). The standard sets are embedded below as
//! constants; a unit test refits them and checks they still agree.

use std::f64::consts::{PI, TAU};
use std::sync::OnceLock;

use thiserror::Error;

use crate::chebyshev;

/// End-to-end accuracy target for the sin/cos kernel.
pub const SINCOS_ERROR_BOUND: f64 = 1e-10;
/// Accuracy target for `h(v)` with `rho = 1` and degree 15.
pub const H_ERROR_BOUND: f64 = 2e-11;
/// Default degree of the `h(v)` polynomial.
pub const H_DEGREE: usize = 15;
/// Default Möbius parameter.
pub const DEFAULT_RHO: f64 = 1.0;

/// Grid size used to certify fitted coefficients.
pub const CERTIFY_POINTS: usize = 200_001;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FitError {
    #[error("rho must be positive and finite, got {0}")]
    InvalidRho(f64),
    #[error("polynomial degree must be at least 1")]
    InvalidDegree,
    #[error("certified error {error:e} exceeds the bound {bound:e}")]
    CertificationFailed { error: f64, bound: f64 },
}

/// Coefficients of the odd sine polynomial `s1 y + s3 y^3 + s5 y^5 + s7 y^7`
/// and the even cosine polynomial `c0 + c2 y^2 + c4 y^4 + c6 y^6`, both valid
/// for `|y| <= pi/16`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SinCos16Coeffs {
    pub s1: f64,
    pub s3: f64,
    pub s5: f64,
    pub s7: f64,
    pub c0: f64,
    pub c2: f64,
    pub c4: f64,
    pub c6: f64,
    /// Max end-to-end error of [`SinCos16Coeffs::sin_cos`] found when certifying.
    pub certified_error: f64,
}

const STANDARD_SINCOS: SinCos16Coeffs = SinCos16Coeffs {
    s1: 0.9999999999997874,
    s3: -0.16666666659279933,
    s5: 0.008333326429258204,
    s7: -0.00019817381060819304,
    c0: 0.9999999999995723,
    c2: -0.4999999996449874,
    c4: 0.04166662062144835,
    c6: -0.0013869776383438036,
    certified_error: 1.8235298755692307e-12,
};

impl Default for SinCos16Coeffs {
    fn default() -> Self {
        STANDARD_SINCOS
    }
}

impl SinCos16Coeffs {
    /// `(sin(2 pi v - pi), cos(2 pi v - pi))` for `v` in `[0, 1)`.
    #[inline]
    pub fn sin_cos(&self, v: f64) -> (f64, f64) {
        let y = (TAU * v - PI) * 0.0625;
        let y2 = y * y;
        let mut s = y * (self.s1 + y2 * (self.s3 + y2 * (self.s5 + y2 * self.s7)));
        let mut c = self.c0 + y2 * (self.c2 + y2 * (self.c4 + y2 * self.c6));
        for _ in 0..4 {
            let s2 = 2.0 * s * c;
            c = 1.0 - 2.0 * s * s;
            s = s2;
        }
        (s, c)
    }
}

/// Batch form of [`SinCos16Coeffs::sin_cos`].
pub fn sincos16_batch(coeffs: &SinCos16Coeffs, v: &[f64], sin_out: &mut [f64], cos_out: &mut [f64]) {
    assert!(sin_out.len() >= v.len() && cos_out.len() >= v.len());
    for ((vi, s), c) in v.iter().zip(sin_out.iter_mut()).zip(cos_out.iter_mut()) {
        (*s, *c) = coeffs.sin_cos(*vi);
    }
}

/// `g(u) = sqrt(-ln(1 - u) / u)` at full double precision, with `g(0) = 1`.
#[inline]
pub fn g_reference(u: f64) -> f64 {
    if u == 0.0 {
        1.0
    } else {
        (-(-u).ln_1p() / u).sqrt()
    }
}

/// Upper end `tau = 1 - (rho / (rho + 2))^2` of the interval handled by `h`.
#[inline]
pub fn tau_for(rho: f64) -> f64 {
    let q = rho / (rho + 2.0);
    1.0 - q * q
}

/// Maps `u` in `[0, tau]` onto `v` in `[-1, 1]`.
#[inline]
pub fn mobius_map(u: f64, rho: f64) -> f64 {
    let a = rho + 1.0;
    let b = rho + 2.0;
    a * (b * u - 2.0) / (2.0 * a - b * u)
}

/// Inverse of [`mobius_map`].
#[inline]
pub fn mobius_inverse(v: f64, rho: f64) -> f64 {
    let a = rho + 1.0;
    let b = rho + 2.0;
    2.0 * a * (1.0 + v) / (b * (a + v))
}

/// Polynomial approximation `h(v) ~ g(u(v))` on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct HApprox {
    /// Power-series coefficients `h0..=h_degree`.
    pub h_coeffs: Vec<f64>,
    pub rho: f64,
    pub tau: f64,
    /// Max `|h(v) - g(u(v))|` over the certification grid.
    pub certified_error: f64,
}

// printed with 17 significant digits so they round-trip exactly
#[allow(clippy::excessive_precision)]
const STANDARD_H: [f64; 16] = [
    1.2837127533005861e0,
    2.6331466344181664e-1,
    1.8012621610676016e-3,
    1.9510673659350011e-2,
    4.6001010871343784e-4,
    2.7179094738305487e-3,
    1.0548884357108879e-4,
    4.6038557533378821e-4,
    2.3398029875387749e-5,
    8.4177538153262788e-5,
    6.3568132784297404e-6,
    1.9708876749291449e-5,
    2.3613045385673104e-7,
    7.5610462602071493e-7,
    8.0008166492007149e-7,
    2.0307981003497844e-6,
];
#[allow(clippy::excessive_precision)]
const STANDARD_H_ERROR: f64 = 1.5136558673134459e-11;

impl Default for HApprox {
    fn default() -> Self {
        HApprox::standard().clone()
    }
}

impl HApprox {
    /// The embedded degree-15, `rho = 1` approximation.
    pub fn standard() -> &'static HApprox {
        static STANDARD: OnceLock<HApprox> = OnceLock::new();
        STANDARD.get_or_init(|| HApprox {
            h_coeffs: STANDARD_H.to_vec(),
            rho: DEFAULT_RHO,
            tau: tau_for(DEFAULT_RHO),
            certified_error: STANDARD_H_ERROR,
        })
    }

    pub fn degree(&self) -> usize {
        self.h_coeffs.len() - 1
    }

    #[inline]
    pub fn mobius(&self, u: f64) -> f64 {
        mobius_map(u, self.rho)
    }

    /// `h(v)`, Horner on the even and odd halves.
    #[inline]
    pub fn eval(&self, v: f64) -> f64 {
        let w = v * v;
        let even = self.h_coeffs.iter().step_by(2).rev().fold(0.0, |acc, &e| acc * w + e);
        let odd = self
            .h_coeffs
            .iter()
            .skip(1)
            .step_by(2)
            .rev()
            .fold(0.0, |acc, &o| acc * w + o);
        even + v * odd
    }

    /// Batch `h(v)`.
    pub fn eval_h(&self, v: &[f64], out: &mut [f64]) {
        assert!(out.len() >= v.len());
        for (o, vi) in out.iter_mut().zip(v) {
            *o = self.eval(*vi);
        }
    }

    /// Batch `g(u)` for `u` in `[0, 1)`: `h(v(u))` for `u <= tau`, the
    /// library `ln`/`sqrt` route above `tau`. Tail indices are gathered into a
    /// contiguous list, evaluated, then scattered back.
    pub fn g_fast(&self, u: &[f64], out: &mut [f64]) {
        assert!(out.len() >= u.len());
        let mut tail = Vec::new();
        for (i, (o, &ui)) in out.iter_mut().zip(u).enumerate() {
            *o = self.eval(self.mobius(ui));
            if ui > self.tau {
                tail.push(i);
            }
        }
        let gathered: Vec<f64> = tail.iter().map(|&i| u[i]).collect();
        let slow: Vec<f64> = gathered.iter().map(|&ui| (-(1.0 - ui).ln() / ui).sqrt()).collect();
        for (&i, g) in tail.iter().zip(slow) {
            out[i] = g;
        }
    }
}

/// Max of `|sin| + |cos|` errors of the kernel against `f64::sin_cos` over
/// `points` equispaced `v = i / points` in `[0, 1)`.
pub fn sincos_grid_error(coeffs: &SinCos16Coeffs, points: usize) -> f64 {
    (0..points)
        .map(|i| {
            let v = i as f64 / points as f64;
            let (s, c) = coeffs.sin_cos(v);
            let (rs, rc) = (TAU * v - PI).sin_cos();
            (s - rs).abs().max((c - rc).abs())
        })
        .fold(0.0, f64::max)
}

/// Max `|h(v) - g(u(v))|` over `points` equispaced `v` in `[-1, 1]`.
pub fn h_grid_error(happ: &HApprox, points: usize) -> f64 {
    assert!(points >= 2);
    let step = 2.0 / (points - 1) as f64;
    (0..points)
        .map(|i| {
            let v = (-1.0 + i as f64 * step).min(1.0);
            (happ.eval(v) - g_reference(mobius_inverse(v, happ.rho))).abs()
        })
        .fold(0.0, f64::max)
}

/// Fits `h(v) = g(u(v))` by a truncated Chebyshev interpolant of the given
/// degree and certifies it on a dense grid.
///
/// Fails for the standard configuration (`rho = 1`, degree 15) if the
/// certified error is not below `2e-11`.
pub fn fit_h_coeffs(rho: f64, degree: usize) -> Result<HApprox, FitError> {
    if !(rho.is_finite() && rho > 0.0) {
        return Err(FitError::InvalidRho(rho));
    }
    if degree < 1 {
        return Err(FitError::InvalidDegree);
    }
    let nodes = 4 * (degree + 1);
    let mut cheb = chebyshev::interpolate(|v| g_reference(mobius_inverse(v, rho)), nodes);
    cheb.truncate(degree + 1);
    let mut happ = HApprox {
        h_coeffs: chebyshev::to_monomial(&cheb),
        rho,
        tau: tau_for(rho),
        certified_error: 0.0,
    };
    happ.certified_error = h_grid_error(&happ, CERTIFY_POINTS);
    if rho == DEFAULT_RHO
        && degree == H_DEGREE
        && (happ.certified_error.is_nan() || happ.certified_error >= H_ERROR_BOUND)
    {
        return Err(FitError::CertificationFailed {
            error: happ.certified_error,
            bound: H_ERROR_BOUND,
        });
    }
    Ok(happ)
}

/// Fits the odd degree-7 sine and even degree-6 cosine polynomials on
/// `|y| <= pi/16` and certifies the full 16x doubling kernel.
pub fn fit_sincos_coeffs() -> Result<SinCos16Coeffs, FitError> {
    let half_width = PI / 16.0;
    let nodes = 32;
    let mut sin_cheb = chebyshev::interpolate(|t| (half_width * t).sin(), nodes);
    sin_cheb.truncate(8);
    for (j, c) in sin_cheb.iter_mut().enumerate() {
        if j % 2 == 0 {
            *c = 0.0;
        }
    }
    let mut cos_cheb = chebyshev::interpolate(|t| (half_width * t).cos(), nodes);
    cos_cheb.truncate(7);
    for (j, c) in cos_cheb.iter_mut().enumerate() {
        if j % 2 == 1 {
            *c = 0.0;
        }
    }
    // rescale from t = y / half_width back to y
    let scale = |mono: Vec<f64>| -> Vec<f64> {
        mono.iter()
            .enumerate()
            .map(|(k, a)| a / half_width.powi(k as i32))
            .collect()
    };
    let s = scale(chebyshev::to_monomial(&sin_cheb));
    let c = scale(chebyshev::to_monomial(&cos_cheb));
    let mut coeffs = SinCos16Coeffs {
        s1: s[1],
        s3: s[3],
        s5: s[5],
        s7: s[7],
        c0: c[0],
        c2: c[2],
        c4: c[4],
        c6: c[6],
        certified_error: 0.0,
    };
    coeffs.certified_error = sincos_grid_error(&coeffs, CERTIFY_POINTS);
    if coeffs.certified_error.is_nan() || coeffs.certified_error >= SINCOS_ERROR_BOUND {
        return Err(FitError::CertificationFailed {
            error: coeffs.certified_error,
            bound: SINCOS_ERROR_BOUND,
        });
    }
    Ok(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn g_oracle(u: f64) -> f64 {
        if u == 0.0 {
            1.0
        } else {
            (-(1.0 - u).ln() / u).sqrt()
        }
    }

    #[test]
    fn embedded_sincos_matches_refit() {
        let fitted = fit_sincos_coeffs().unwrap();
        let standard = SinCos16Coeffs::default();
        for (a, b) in [
            (fitted.s1, standard.s1),
            (fitted.s3, standard.s3),
            (fitted.s5, standard.s5),
            (fitted.s7, standard.s7),
            (fitted.c0, standard.c0),
            (fitted.c2, standard.c2),
            (fitted.c4, standard.c4),
            (fitted.c6, standard.c6),
        ] {
            assert!((a - b).abs() <= 1e-15 * b.abs().max(1e-3), "{a} vs {b}");
        }
        assert!((fitted.s1 - 1.0).abs() < 1e-6);
        assert!((fitted.c0 - 1.0).abs() < 1e-6);
        assert!(fitted.certified_error < SINCOS_ERROR_BOUND);
    }

    #[test]
    fn embedded_h_matches_refit() {
        let fitted = fit_h_coeffs(1.0, 15).unwrap();
        let standard = HApprox::standard();
        for (a, b) in fitted.h_coeffs.iter().zip(&standard.h_coeffs) {
            assert!((a - b).abs() <= 1e-15, "{a} vs {b}");
        }
        assert!(fitted.certified_error < H_ERROR_BOUND);
        assert!(standard.certified_error < H_ERROR_BOUND);
        assert_eq!(standard.tau, 8.0 / 9.0);
    }

    #[test]
    fn refit_is_bit_reproducible() {
        assert_eq!(fit_h_coeffs(1.0, 15).unwrap(), fit_h_coeffs(1.0, 15).unwrap());
        assert_eq!(fit_sincos_coeffs().unwrap(), fit_sincos_coeffs().unwrap());
    }

    #[test]
    fn sincos_special_angles() {
        let c = SinCos16Coeffs::default();
        for (v, want) in [(0.5, (0.0, 1.0)), (0.75, (1.0, 0.0)), (0.0, (0.0, -1.0))] {
            let (s, co) = c.sin_cos(v);
            assert!((s - want.0).abs() < 1e-10, "v={v}: sin {s}");
            assert!((co - want.1).abs() < 1e-10, "v={v}: cos {co}");
        }
    }

    #[test]
    fn sincos_batch_grid_and_pythagoras() {
        let c = SinCos16Coeffs::default();
        let n = 1_000_000;
        let v: Vec<f64> = (0..n).map(|i| i as f64 / n as f64).collect();
        let mut s = vec![0.0; n];
        let mut co = vec![0.0; n];
        sincos16_batch(&c, &v, &mut s, &mut co);
        let mut worst: f64 = 0.0;
        for i in 0..n {
            let (rs, rc) = (2.0 * PI * v[i] - PI).sin_cos();
            worst = worst.max((s[i] - rs).abs()).max((co[i] - rc).abs());
            assert!((s[i] * s[i] + co[i] * co[i] - 1.0).abs() < 4e-10);
        }
        assert!(worst < 1e-10, "{worst:e}");
    }

    #[test]
    fn mobius_examples() {
        assert_eq!(mobius_map(0.0, 1.0), -1.0);
        assert!((mobius_map(8.0 / 9.0, 1.0) - 1.0).abs() < 4.0 * f64::EPSILON);
        let direct = (6.0 * 4.0 / 9.0 - 4.0) / (4.0 - 3.0 * 4.0 / 9.0);
        assert!((mobius_map(4.0 / 9.0, 1.0) - direct).abs() < 1e-15);
        assert!((mobius_map(4.0 / 9.0, 1.0) + 0.5).abs() < 1e-15);
        for rho in [0.5, 1.0, 2.0, 3.7] {
            let tau = tau_for(rho);
            assert_eq!(mobius_map(0.0, rho), -1.0);
            assert!((mobius_map(tau, rho) - 1.0).abs() < 4.0 * f64::EPSILON);
        }
        assert_eq!(tau_for(1.0), 8.0 / 9.0);
    }

    #[test]
    fn eval_h_examples() {
        let h = HApprox::standard();
        assert!((h.eval(-1.0) - 1.0).abs() < 2e-11);
        let half = (-(0.5f64).ln() / 0.5).sqrt();
        assert!((half - 1.177_410_022_515_474_7).abs() < 1e-15);
        assert!((h.eval(h.mobius(0.5)) - half).abs() < 2e-11);
        let top = (9f64.ln() * 9.0 / 8.0).sqrt();
        assert!((h.eval(1.0) - top).abs() < 2e-11);
    }

    #[test]
    fn composite_sqrt_identity() {
        let h = HApprox::standard();
        let n = 1_000_000;
        let tau = 8.0 / 9.0;
        let mut worst: f64 = 0.0;
        for i in 0..=n {
            let u = tau * i as f64 / n as f64;
            let f = (-(1.0 - u).ln()).sqrt();
            worst = worst.max((u.sqrt() * h.eval(h.mobius(u)) - f).abs());
        }
        assert!(worst < 1e-10, "{worst:e}");
    }

    #[test]
    fn g_fast_examples_and_grid() {
        let h = HApprox::standard();
        let mut out = [0.0; 2];
        h.g_fast(&[0.0, 0.999], &mut out);
        assert!((out[0] - 1.0).abs() < 2e-11);
        assert_eq!(out[1], (-(0.001f64).ln() / 0.999).sqrt());

        let n = 1_000_000;
        let top = 1.0 - 1e-6;
        let u: Vec<f64> = (0..n).map(|i| top * i as f64 / (n - 1) as f64).collect();
        let mut g = vec![0.0; n];
        h.g_fast(&u, &mut g);
        let worst = u
            .iter()
            .zip(&g)
            .map(|(&ui, gi)| (gi - g_oracle(ui)).abs())
            .fold(0.0, f64::max);
        assert!(worst <= 1e-10, "{worst:e}");
    }

    #[test]
    fn fit_degrees() {
        let d29 = fit_h_coeffs(1.0, 29).unwrap();
        assert!(d29.certified_error < H_ERROR_BOUND);
        let d3 = fit_h_coeffs(1.0, 3).unwrap();
        assert!(d3.certified_error > 1e3 * H_ERROR_BOUND, "{}", d3.certified_error);
        assert_eq!(d3.degree(), 3);
    }

    #[test]
    fn fit_rejects_bad_inputs() {
        assert_eq!(fit_h_coeffs(0.0, 15), Err(FitError::InvalidRho(0.0)));
        assert!(matches!(fit_h_coeffs(-1.0, 15), Err(FitError::InvalidRho(_))));
        assert_eq!(fit_h_coeffs(1.0, 0), Err(FitError::InvalidDegree));
    }

    #[test]
    fn other_rho_fits_its_own_interval() {
        let h = fit_h_coeffs(2.0, 15).unwrap();
        assert_eq!(h.tau, tau_for(2.0));
        assert!(h.certified_error < 1e-8);
    }

    proptest! {
        #[test]
        fn mobius_round_trip(u in 0.0f64..(8.0 / 9.0)) {
            let v = mobius_map(u, 1.0);
            prop_assert!((-1.0..=1.0).contains(&v));
            prop_assert!((mobius_inverse(v, 1.0) - u).abs() < 1e-14);
        }
    }
}
