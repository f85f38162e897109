//! Scalar abstraction shared by the evaluators.
//!
//! Everything that only does floating-point arithmetic is written against
//! [`Real`], so it runs unchanged over `f32` and `f64`. Certified error
//! bounds are expressed in units of `Real::epsilon()`, which keeps them honest
//! at either precision.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).unwrap_or_else(Self::infinity)
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// `n^{-s}` for a positive integer `n`, together with a bound on the absolute
/// rounding error of the computed value.
///
/// The phase `t log n` is the dominant source of error at large height, so the
/// bound scales with `|s| log n`.
#[inline]
pub fn int_pow_neg<R: Real>(n: R, s: Complex<R>) -> (Complex<R>, R) {
    let ln = n.ln();
    let modulus = (-s.re * ln).exp();
    let phase = -s.im * ln;
    let v = Complex::new(modulus * phase.cos(), modulus * phase.sin());
    let err = modulus * R::epsilon() * (R::lit(8.0) + R::lit(2.0) * s.norm() * ln);
    (v, err)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn int_pow_neg_matches_powc() {
        let s = Complex::new(1.5_f64, 20.0);
        let (v, e) = int_pow_neg(7.0, s);
        let w = Complex::new(7.0_f64, 0.0).powc(-s);
        assert!((v - w).norm() <= e + 1e-15);
        let (v32, _) = int_pow_neg(7.0_f32, Complex::new(1.5, 20.0));
        assert!((v32.re as f64 - w.re).abs() < 1e-4);
    }
}
