//! Euler–Maclaurin evaluation of the Hurwitz zeta function and its
//! derivative, with the remainder bounded through the sup norm of the
//! periodic Bernoulli function.
//!
//! For `X = N + a` and `m` correction terms
//!
//! ```text
//! zeta(s, a) = sum_{n<N} (n+a)^{-s} + X^{1-s}/(s-1) + X^{-s}/2
//!            + sum_{k=1}^m B_{2k}/(2k)! (s)_{2k-1} X^{1-s-2k} + R,
//! |R| <= 2 zeta(2m+1) |(s)_{2m+1}| / ((2 pi)^{2m+1} (sigma+2m) X^{sigma+2m})
//! ```
//!
//! with `(s)_j` the rising factorial. Corrections are computed in the scaled
//! form `B_{2k}/(2k)! = (-1)^{k+1} 2 zeta(2k) / (2 pi)^{2k}` so no tiny
//! Bernoulli quotients appear, which keeps `f32` usable.

use num_complex::Complex;

use crate::certified::CertifiedValue;
use crate::error::{Error, Result};
use crate::eval::sum_terms;
use crate::scalar::{int_pow_neg, Real};

/// `zeta(2k)` for `k = 1..=32`.
const ZETA_EVEN: [f64; 32] = [
    1.6449340668482264365, 1.0823232337111381915, 1.0173430619844491397, 1.0040773561979443394,
    1.0009945751278180853, 1.0002460865533080483, 1.0000612481350587048, 1.0000152822594086519,
    1.0000038172932649998, 1.0000009539620338728, 1.0000002384505027277, 1.0000000596081890513,
    1.0000000149015548284, 1.0000000037253340248, 1.0000000009313274324, 1.0000000002328311834,
    1.0000000000582077209, 1.0000000000145519219, 1.0000000000036379795, 1.0000000000009094948,
    1.0000000000002273737, 1.0000000000000568434, 1.0000000000000142109, 1.0000000000000035527,
    1.0000000000000008882, 1.000000000000000222, 1.0000000000000000555, 1.0000000000000000139,
    1.0000000000000000035, 1.0000000000000000009, 1.0000000000000000002, 1.0000000000000000001,
];

const CORRECTION_TERMS: usize = 24;
const MAX_TERMS: u64 = 200_000_000;
pub const MAX_HEIGHT: f64 = 1e7;

/// Which function the expansion produces.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Order {
    Value,
    Derivative,
}

struct Pieces<R: Real> {
    value: Complex<R>,
    err: R,
}

/// Rising-factorial ratios `w_j = (s)_j / (2 pi X)^j` and their
/// s-derivatives for `j = 0..=2m+1`.
fn scaled_rising<R: Real>(s: Complex<R>, x: R, m: usize) -> (Vec<Complex<R>>, Vec<Complex<R>>) {
    let two_pi_x = R::lit(2.0) * R::PI() * x;
    let mut w = Vec::with_capacity(2 * m + 2);
    let mut dw = Vec::with_capacity(2 * m + 2);
    let mut p = Complex::new(R::one(), R::zero());
    let mut dp = Complex::new(R::zero(), R::zero());
    w.push(p);
    dw.push(dp);
    for j in 0..=(2 * m) {
        let f = (s + R::lit(j as f64)) / two_pi_x;
        dp = dp * f + p / two_pi_x;
        p = p * f;
        w.push(p);
        dw.push(dp);
    }
    (w, dw)
}

fn zeta_odd_upper(q: f64) -> f64 {
    1.0 + 2f64.powf(-q) + 2f64.powf(1.0 - q) / (q - 1.0)
}

fn remainder_bound<R: Real>(s: Complex<R>, x: R, m: usize, order: Order) -> R {
    let (w, dw) = scaled_rising(s, x, m);
    let b = s.re + R::lit(2.0 * m as f64);
    let c = R::lit(2.0 * zeta_odd_upper(2.0 * m as f64 + 1.0)) * x.powf(R::one() - s.re);
    match order {
        Order::Value => c * w[2 * m + 1].norm() / b,
        Order::Derivative => {
            c * (dw[2 * m + 1].norm() / b + w[2 * m + 1].norm() * (x.ln() / b + R::one() / (b * b)))
        }
    }
}

fn tail_terms<R: Real>(s: Complex<R>, x: R, m: usize, order: Order) -> Pieces<R> {
    let one = Complex::new(R::one(), R::zero());
    let (xs, xs_err) = int_pow_neg(x, s); // X^{-s}
    let lnx = x.ln();
    let sm1 = s - one;
    let (w, dw) = scaled_rising(s, x, m);
    let inv_two_pi = R::one() / (R::lit(2.0) * R::PI());
    let mut corr = Complex::new(R::zero(), R::zero());
    let mut corr_mass = R::zero();
    for k in 1..=m {
        let sign = if k % 2 == 1 { R::one() } else { -R::one() };
        let coef = sign * R::lit(2.0 * ZETA_EVEN[k - 1]) * inv_two_pi;
        let t = match order {
            Order::Value => w[2 * k - 1] * coef,
            Order::Derivative => (dw[2 * k - 1] - w[2 * k - 1] * lnx) * coef,
        };
        corr = corr + t;
        corr_mass = corr_mass + t.norm();
    }
    let pole = match order {
        Order::Value => one * x / sm1,
        Order::Derivative => (-one * lnx / sm1 - one / (sm1 * sm1)) * x,
    };
    let half = match order {
        Order::Value => one / R::lit(2.0),
        Order::Derivative => -one * lnx / R::lit(2.0),
    };
    let bracket = pole + half + corr;
    let value = xs * bracket;
    let mass = pole.norm() + half.norm() + corr_mass;
    let err = xs_err * mass + xs.norm() * mass * R::epsilon() * R::lit(16.0 * (m as f64 + 4.0));
    Pieces { value, err }
}

/// Hurwitz zeta `zeta(s, a)` (or its s-derivative) for `0 < a <= 1`, with the
/// certified error driven below `tol` when the term cap allows.
pub fn hurwitz_em<R: Real>(s: Complex<R>, a: R, tol: R, order: Order) -> Result<CertifiedValue<R>> {
    if !(tol > R::zero()) {
        return Err(Error::Invalid("tolerance must be positive".into()));
    }
    if !(a > R::zero() && a <= R::one()) {
        return Err(Error::Invalid(format!("Hurwitz parameter {a} outside (0, 1]")));
    }
    if s.re == R::one() && s.im == R::zero() {
        return Err(Error::Pole("s = 1".into()));
    }
    if s.im.abs() > R::lit(MAX_HEIGHT) {
        return Err(Error::Domain(format!("|Im s| = {} above the Euler-Maclaurin cap", s.im.abs())));
    }
    let m = CORRECTION_TERMS;
    if s.re + R::lit(2.0 * m as f64) <= R::one() {
        return Err(Error::Domain(format!("Re s = {} too far left for the expansion", s.re)));
    }
    let plus = s + R::lit(2.0 * m as f64);
    let start = (plus.norm() / R::PI()).to_f64_lossy().ceil() as u64 + 2;
    let half = tol / R::lit(2.0);
    let mut n = start.min(MAX_TERMS);
    let mut flagged = false;
    loop {
        let x = R::lit(n as f64) + a;
        if remainder_bound(s, x, m, order) <= half {
            break;
        }
        if n >= MAX_TERMS {
            flagged = true;
            break;
        }
        n = (n * 2).min(MAX_TERMS);
    }
    let x = R::lit(n as f64) + a;
    let head = match order {
        Order::Value => sum_terms((0..n).map(|k| (R::lit(k as f64) + a, Complex::new(R::one(), R::zero()))), s),
        Order::Derivative => sum_terms(
            (0..n).map(|k| {
                let y = R::lit(k as f64) + a;
                (y, Complex::new(-y.ln(), R::zero()))
            }),
            s,
        ),
    };
    let tail = tail_terms(s, x, m, order);
    let rem = remainder_bound(s, x, m, order);
    let out = CertifiedValue::new(head.value + tail.value, head.error_bound + tail.err + rem);
    Ok(out.with_flag(flagged || out.error_bound > tol))
}

/// Riemann zeta by Euler–Maclaurin.
pub fn eval_zeta_em<R: Real>(s: Complex<R>, tol: R) -> Result<CertifiedValue<R>> {
    hurwitz_em(s, R::one(), tol, Order::Value)
}

/// `zeta'(s)` by Euler–Maclaurin.
pub fn eval_zeta_deriv_em<R: Real>(s: Complex<R>, tol: R) -> Result<CertifiedValue<R>> {
    hurwitz_em(s, R::one(), tol, Order::Derivative)
}

/// `L(s, chi_{-4}) = 4^{-s} (zeta(s, 1/4) - zeta(s, 3/4))`, or its derivative.
pub fn eval_chi4_em<R: Real>(s: Complex<R>, tol: R, order: Order) -> Result<CertifiedValue<R>> {
    let quarter = R::lit(0.25);
    let t = tol / R::lit(4.0);
    let h1 = hurwitz_em(s, quarter, t, Order::Value)?;
    let h3 = hurwitz_em(s, R::lit(0.75), t, Order::Value)?;
    let (four, four_err) = int_pow_neg(R::lit(4.0), s);
    let scale = CertifiedValue::new(four, four_err);
    let diff = h1 - h3;
    match order {
        Order::Value => Ok(scale * diff),
        Order::Derivative => {
            let d1 = hurwitz_em(s, quarter, t, Order::Derivative)?;
            let d3 = hurwitz_em(s, R::lit(0.75), t, Order::Derivative)?;
            let ln4 = Complex::new(-R::lit(4.0).ln(), R::zero());
            Ok(scale * ((d1 - d3) + diff.scale(ln4)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type C = Complex<f64>;

    #[test]
    fn classical_values() {
        let z2 = eval_zeta_em(C::new(2.0, 0.0), 1e-12).unwrap();
        assert!((z2.value.re - std::f64::consts::PI.powi(2) / 6.0).abs() <= z2.error_bound.max(1e-15));
        assert!(z2.error_bound <= 1e-12);
        let z0 = eval_zeta_em(C::new(0.0, 0.0), 1e-12).unwrap();
        assert!((z0.value.re + 0.5).abs() < 1e-12);
        let z3 = eval_zeta_em(C::new(3.0, 0.0), 1e-12).unwrap();
        assert!((z3.value.re - 1.202_056_903_159_594_3).abs() < 1e-12);
        assert!(matches!(eval_zeta_em(C::new(1.0, 0.0), 1e-8), Err(Error::Pole(_))));
    }

    #[test]
    fn first_zero_on_critical_line() {
        let z = eval_zeta_em(C::new(0.5, 14.134_725_141_734_693), 1e-10).unwrap();
        assert!(z.value.norm() < 1e-9);
    }

    #[test]
    fn derivative_matches_known_values() {
        // zeta'(2) = -0.93754825431584375370
        let d = eval_zeta_deriv_em(C::new(2.0, 0.0), 1e-12).unwrap();
        assert!((d.value.re + 0.937_548_254_315_843_8).abs() <= d.error_bound + 1e-14);
        // zeta'(0) = -log(2 pi)/2
        let d0 = eval_zeta_deriv_em(C::new(0.0, 0.0), 1e-12).unwrap();
        assert!((d0.value.re + (2.0 * std::f64::consts::PI).ln() / 2.0).abs() < 1e-11);
    }

    #[test]
    fn derivative_agrees_with_central_difference() {
        let s = C::new(1.3, 25.0);
        let h = 1e-5;
        let fp = eval_zeta_em(s + C::new(h, 0.0), 1e-13).unwrap().value;
        let fm = eval_zeta_em(s - C::new(h, 0.0), 1e-13).unwrap().value;
        let d = eval_zeta_deriv_em(s, 1e-12).unwrap();
        assert!(((fp - fm) / (2.0 * h) - d.value).norm() < 1e-6);
    }

    #[test]
    fn catalan_from_hurwitz() {
        let v = eval_chi4_em(C::new(2.0, 0.0), 1e-12, Order::Value).unwrap();
        assert!((v.value.re - 0.915_965_594_177_219).abs() < 1e-11);
        // L(1, chi_-4) = pi/4, approached from the right
        let v1 = eval_chi4_em(C::new(1.0 + 1e-9, 0.0), 1e-10, Order::Value).unwrap();
        assert!((v1.value.re - std::f64::consts::FRAC_PI_4).abs() < 1e-7);
    }

    #[test]
    fn near_one_against_high_truncation_raw_series() {
        // raw series with N = 10^7 terms and the integral tail bracket
        let s = 1.05f64;
        let n = 10_000_000u64;
        let mut head = 0.0f64;
        for k in (1..=n).rev() {
            head += (k as f64).powf(-s);
        }
        // sum_{k>N} k^{-s} lies in [ (N+1)^{1-s}/(s-1), N^{1-s}/(s-1) ]
        let lo = head + ((n + 1) as f64).powf(1.0 - s) / (s - 1.0);
        let hi = head + (n as f64).powf(1.0 - s) / (s - 1.0);
        let z = eval_zeta_em(C::new(s, 0.0), 1e-10).unwrap();
        assert!(z.value.re > lo - 1e-7 && z.value.re < hi + 1e-7, "{} not in [{lo}, {hi}]", z.value.re);
        assert!((z.value.re - 20.580_844_302_036_5).abs() < 1e-8);
    }

    #[test]
    fn works_at_large_height() {
        let z = eval_zeta_em(C::new(1.5, 1.0e5), 1e-8).unwrap();
        assert!(z.error_bound <= 1e-8);
        assert!(z.value.norm() > 0.0);
        assert!(eval_zeta_em(C::new(1.5, 2.0e7), 1e-8).is_err());
    }

    #[test]
    fn f32_is_honest() {
        let z = eval_zeta_em(Complex::new(2.0f32, 0.0), 1e-4).unwrap();
        let want = (std::f64::consts::PI.powi(2) / 6.0) as f32;
        assert!((z.value.re - want).abs() <= z.error_bound);
    }
}
