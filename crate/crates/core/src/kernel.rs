//! Elementary-function hooks used inside the generator loops.
//!
//! Generators are generic over a [`MathKernel`]. [`StdMath`] is the real
//! thing; the other kernels replace one component with a trivial operation
//! so the benchmark harness can attribute time by substitution. Outputs of the
//! substituted kernels are not normal deviates.

use crate::fastfuncs::{HApprox, SinCos16Coeffs};

pub trait MathKernel {
    #[inline]
    fn ln(x: f64) -> f64 {
        x.ln()
    }

    #[inline]
    fn sqrt(x: f64) -> f64 {
        x.sqrt()
    }

    /// Library `sin`/`cos` of an angle.
    #[inline]
    fn sin_cos(x: f64) -> (f64, f64) {
        x.sin_cos()
    }

    /// Polynomial `sin`/`cos` of `2 pi v - pi`.
    #[inline]
    fn sincos16(coeffs: &SinCos16Coeffs, v: f64) -> (f64, f64) {
        coeffs.sin_cos(v)
    }

    /// Polynomial replacement for `ln` and `sqrt` on the bulk interval.
    #[inline]
    fn h(happ: &HApprox, v: f64) -> f64 {
        happ.eval(v)
    }
}

/// Standard library functions and the certified polynomials.
#[derive(Debug, Clone, Copy, Default)]
pub struct StdMath;
impl MathKernel for StdMath {}

/// `ln` (and the `h` polynomial standing in for it) replaced by `x - 1`.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoLn;
impl MathKernel for NoLn {
    #[inline]
    fn ln(x: f64) -> f64 {
        x - 1.0
    }

    #[inline]
    fn h(_happ: &HApprox, v: f64) -> f64 {
        v + 1.5
    }
}

/// `sqrt` replaced by the identity.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoSqrt;
impl MathKernel for NoSqrt {
    #[inline]
    fn sqrt(x: f64) -> f64 {
        x
    }
}

/// `sin`/`cos`, library or polynomial, replaced by `(x, 1 - x)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoSinCos;
impl MathKernel for NoSinCos {
    #[inline]
    fn sin_cos(x: f64) -> (f64, f64) {
        (x, 1.0 - x)
    }

    #[inline]
    fn sincos16(_coeffs: &SinCos16Coeffs, v: f64) -> (f64, f64) {
        (v, 1.0 - v)
    }
}
