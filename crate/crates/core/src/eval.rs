//! Certified evaluation of `log L(s)` and of Dirichlet series in the
//! half-plane of absolute convergence.

use num_complex::Complex;

use crate::certified::CertifiedValue;
use crate::coeffs::{CoefficientSource, DirichletCoefficients, GrowthCertificate};
use crate::error::{Error, Result};
use crate::scalar::{int_pow_neg, Real};

/// Hard cap on on-the-fly truncation for closed-form sources.
pub const MAX_ON_THE_FLY: u64 = 20_000_000;

/// `sum_{m > y} m^{-alpha}` for integer `y >= 1` and `alpha > 1`, by the
/// integral comparison `int_y^inf x^{-alpha} dx`.
pub fn integer_tail<R: Real>(y: u64, alpha: R) -> R {
    debug_assert!(y >= 1);
    if alpha <= R::one() {
        return R::infinity();
    }
    R::lit(y as f64).powf(R::one() - alpha) / (alpha - R::one())
}

/// Upper bound on `sum_{p^k > x} |b(p^k)| p^{-k sigma}` from the growth
/// certificate alone.
pub fn log_series_tail_bound<R: Real>(growth: &GrowthCertificate<R>, sigma: R, x: u64) -> R {
    let a = growth.b_bound_const;
    let beta = sigma - growth.b_bound_exp;
    if beta <= R::one() {
        return R::infinity();
    }
    let x = x.max(1);
    // k = 1: primes above x
    let mut total = a * integer_tail(x, beta);
    // k >= 2
    let mut k = 2u32;
    loop {
        let y = (x as f64).powf(1.0 / k as f64).floor() as u64;
        // floating root may undershoot by one
        let y = if (y + 1).checked_pow(k).is_some_and(|v| v <= x) { y + 1 } else { y };
        let kb = R::lit(k as f64) * beta;
        if y < 2 {
            // all m >= 2 for every remaining k: sum_{m>=2} m^{-kb} <= 2^{-kb}(1 + 2/(kb-1)),
            // summed geometrically over k
            let two = R::lit(2.0);
            let first = two.powf(-kb) * (R::one() + two / (kb - R::one()));
            total = total + a * first / (R::one() - two.powf(-beta));
            break;
        }
        total = total + a * integer_tail(y, kb);
        k += 1;
    }
    total
}

/// Upper bound on `sum_{n > n} |a(n)| n^{-sigma}`.
pub fn dirichlet_tail_bound<R: Real>(growth: &GrowthCertificate<R>, sigma: R, n: u64) -> R {
    let alpha = sigma - growth.a_bound_exp;
    growth.a_bound_const * integer_tail(n.max(1), alpha)
}

/// Sum `sum c_j n_j^{-s}` over explicit terms with a rigorous rounding bound.
pub fn sum_terms<R: Real, I>(terms: I, s: Complex<R>) -> CertifiedValue<R>
where
    I: IntoIterator<Item = (R, Complex<R>)>,
{
    let mut acc = Complex::new(R::zero(), R::zero());
    let mut err = R::zero();
    let mut mass = R::zero();
    let mut count = 0usize;
    for (n, c) in terms {
        let (v, e) = int_pow_neg(n, s);
        let t = v * c;
        acc = acc + t;
        err = err + e * c.norm();
        mass = mass + t.norm();
        count += 1;
    }
    let rounding = R::epsilon() * R::lit(2.0) * R::from_usize_lossy(count + 1) * mass;
    CertifiedValue::new(acc, err + rounding)
}

fn check_tol<R: Real>(tol: R) -> Result<()> {
    if !(tol > R::zero()) {
        return Err(Error::Invalid(format!("tolerance must be positive, got {tol}")));
    }
    Ok(())
}

/// Smallest truncation in the doubling sequence `16, 32, ...` whose tail
/// bound is at most `target`, capped at `cap`.
fn choose_truncation<R: Real>(cap: u64, target: R, tail: impl Fn(u64) -> R) -> (u64, bool) {
    let mut x = 16u64.min(cap.max(1));
    loop {
        if tail(x) <= target {
            return (x, false);
        }
        if x >= cap {
            return (cap, true);
        }
        x = (x * 2).min(cap);
    }
}

/// `log L(s) = sum_p sum_k b(p^k) p^{-ks}` truncated at prime powers `<= X`,
/// where `X` is the first point at which the certified tail drops below
/// `tol / 2`.
///
/// When the source is zero beyond its table and `X` would exceed it, the
/// tabulated range is used and the larger tail is reported with the flag set.
pub fn eval_log_l<R: Real>(src: &CoefficientSource<R>, s: Complex<R>, tol: R) -> Result<CertifiedValue<R>> {
    check_tol(tol)?;
    if !(s.re > R::one()) {
        return Err(Error::Domain(format!("log L needs Re(s) > 1, got {}", s.re)));
    }
    let cap = if src.has_closed_form() { MAX_ON_THE_FLY.max(src.p_max()) } else { src.p_max() };
    let growth = *src.growth();
    let half = tol / R::lit(2.0);
    let (x, flagged) = choose_truncation(cap.max(2), half, |x| log_series_tail_bound(&growth, s.re, x));
    let tail = log_series_tail_bound(&growth, s.re, x);
    let terms = src.terms_upto(x);
    let head = sum_terms(terms.into_iter().map(|(p, k, b)| (R::lit((p as f64).powi(k as i32)), b)), s);
    let out = CertifiedValue::new(head.value, head.error_bound + tail);
    Ok(out.with_flag(flagged || out.error_bound > tol))
}

/// Truncated Dirichlet series `sum_{n <= N} a(n) n^{-s}` with the tail
/// `A0 N^{1 + e0 - sigma} / (sigma - 1 - e0)` charged to the error.
pub fn eval_dirichlet<R: Real>(coeffs: &DirichletCoefficients<R>, s: Complex<R>, tol: R) -> Result<CertifiedValue<R>> {
    check_tol(tol)?;
    let g = *coeffs.growth();
    if !(s.re > R::one() + g.a_bound_exp) {
        return Err(Error::Domain(format!("Dirichlet series needs Re(s) > {}, got {}", R::one() + g.a_bound_exp, s.re)));
    }
    let half = tol / R::lit(2.0);
    let (n, flagged) = choose_truncation(coeffs.n_max(), half, |n| dirichlet_tail_bound(&g, s.re, n));
    let head = sum_terms((1..=n).map(|k| (R::lit(k as f64), coeffs.a(k))), s);
    let out = CertifiedValue::new(head.value, head.error_bound + dirichlet_tail_bound(&g, s.re, n));
    Ok(out.with_flag(flagged || out.error_bound > tol))
}

/// Certified bound on `sum_p sum_k |b(p^k)| p^{-k sigma}` from above, using
/// terms up to `x` plus the certificate tail.
pub fn abs_log_series_upper<R: Real>(src: &CoefficientSource<R>, sigma: R, x: u64) -> R {
    let x = if src.has_closed_form() { x } else { x.min(src.p_max()) };
    let head: R = src
        .terms_upto(x)
        .into_iter()
        .fold(R::zero(), |acc, (p, k, b)| acc + b.norm() * R::lit(p as f64).powf(-sigma * R::lit(k as f64)));
    head * (R::one() + R::lit(64.0) * R::epsilon()) + log_series_tail_bound(src.growth(), sigma, x)
}
