//! Balls in the complex plane: a center plus a rigorous radius.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;

use crate::scalar::Real;

/// A value known to lie within `error_bound` of `value`.
///
/// `flagged` is set when a requested tolerance could not be met and the
/// radius is the best bound that could be certified instead.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CertifiedValue<R: Real> {
    pub value: Complex<R>,
    pub error_bound: R,
    pub flagged: bool,
}

impl<R: Real> CertifiedValue<R> {
    pub fn new(value: Complex<R>, error_bound: R) -> Self {
        debug_assert!(error_bound >= R::zero());
        Self { value, error_bound, flagged: false }
    }

    pub fn exact(value: Complex<R>) -> Self {
        Self::new(value, R::zero())
    }

    pub fn real(x: R, error_bound: R) -> Self {
        Self::new(Complex::new(x, R::zero()), error_bound)
    }

    pub fn with_flag(mut self, flagged: bool) -> Self {
        self.flagged |= flagged;
        self
    }

    pub fn is_finite(&self) -> bool {
        self.value.re.is_finite() && self.value.im.is_finite() && self.error_bound.is_finite()
    }

    /// Certified lower bound on the modulus of every point in the ball.
    pub fn abs_lower(&self) -> R {
        (self.value.norm() - self.error_bound).max(R::zero())
    }

    /// Certified upper bound on the modulus of every point in the ball.
    pub fn abs_upper(&self) -> R {
        self.value.norm() * (R::one() + R::epsilon()) + self.error_bound
    }

    pub fn contains(&self, z: Complex<R>) -> bool {
        (self.value - z).norm() <= self.error_bound
    }

    /// Widen the radius by one ulp-scaled term for the rounding of one
    /// arithmetic operation on the center.
    fn rounded(value: Complex<R>, error_bound: R, flagged: bool) -> Self {
        let slack = value.norm() * R::epsilon() * R::lit(2.0);
        Self { value, error_bound: error_bound + slack, flagged }
    }

    pub fn scale(self, c: Complex<R>) -> Self {
        Self::rounded(self.value * c, self.error_bound * c.norm(), self.flagged)
    }

    /// Reciprocal; `None` when the ball touches zero.
    pub fn recip(self) -> Option<Self> {
        let m = self.value.norm();
        if m <= self.error_bound {
            return None;
        }
        let value = self.value.inv();
        let err = self.error_bound / (m * (m - self.error_bound));
        Some(Self::rounded(value, err, self.flagged))
    }

    pub fn div(self, other: Self) -> Option<Self> {
        other.recip().map(|r| self * r)
    }

    /// Principal logarithm; `None` when the ball touches zero or straddles the
    /// negative real axis closely enough to make the branch ambiguous.
    pub fn ln(self) -> Option<Self> {
        let m = self.value.norm();
        if m <= self.error_bound {
            return None;
        }
        let q = self.error_bound / m;
        // the ball must not reach across the branch cut
        if self.value.re < R::zero() && self.value.im.abs() <= self.error_bound {
            return None;
        }
        let err = -(R::one() - q).ln();
        Some(Self::rounded(self.value.ln(), err, self.flagged))
    }

    /// Logarithm on the branch `ln + 2 pi i k`.
    pub fn ln_branch(self, k: i64) -> Option<Self> {
        let base = self.ln()?;
        let shift = Complex::new(R::zero(), R::lit(2.0 * std::f64::consts::PI * k as f64));
        Some(Self { value: base.value + shift, ..base })
    }

    pub fn exp(self) -> Self {
        let v = self.value.exp();
        // |e^{w+d} - e^w| <= |e^w| (e^{|d|} - 1)
        let err = v.norm() * self.error_bound.exp_m1();
        Self::rounded(v, err, self.flagged)
    }

    pub fn powi(self, n: u32) -> Self {
        let mut acc = Self::exact(Complex::new(R::one(), R::zero()));
        for _ in 0..n {
            acc = acc * self;
        }
        acc
    }
}

impl<R: Real> Add for CertifiedValue<R> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::rounded(self.value + o.value, self.error_bound + o.error_bound, self.flagged || o.flagged)
    }
}

impl<R: Real> Sub for CertifiedValue<R> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl<R: Real> Neg for CertifiedValue<R> {
    type Output = Self;
    fn neg(self) -> Self {
        Self { value: -self.value, ..self }
    }
}

impl<R: Real> Mul for CertifiedValue<R> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let err = self.value.norm() * o.error_bound
            + o.value.norm() * self.error_bound
            + self.error_bound * o.error_bound;
        Self::rounded(self.value * o.value, err, self.flagged || o.flagged)
    }
}
