//! Selberg-type statistics over primes.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::primes::prime_sieve;
use crate::Source;

#[derive(Clone, Debug, PartialEq)]
pub struct KappaReport {
    pub x: u64,
    pub pi_x: usize,
    pub kappa: f64,
    /// `(x_i, pi(x_i), kappa_hat(x_i))` at log-spaced checkpoints.
    pub checkpoints: Vec<(u64, usize, f64)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairKappaReport {
    pub difference: KappaReport,
    pub sum_sq_first: f64,
    pub sum_sq_second: f64,
    /// `sum_p Re a1(p) conj(a2(p))`
    pub cross: f64,
}

fn primes_for(src: &Source, x: u64) -> Result<Vec<u64>> {
    if x > src.p_max() && !src.has_closed_form() {
        return Err(Error::Range(format!("x = {x} beyond the tabulated range {}", src.p_max())));
    }
    prime_sieve(x)
}

/// Checkpoints `10^{j/4}` up to `x`, plus `x` itself.
pub fn log_checkpoints(x: u64) -> Vec<u64> {
    let mut out: Vec<u64> = (4..)
        .map(|j| 10f64.powf(j as f64 / 4.0).round() as u64)
        .take_while(|&c| c < x)
        .collect();
    out.dedup();
    out.push(x);
    out
}

fn running<F: Fn(u64) -> f64>(primes: &[u64], x: u64, f: F) -> KappaReport {
    let marks = log_checkpoints(x);
    let mut checkpoints = Vec::with_capacity(marks.len());
    let mut acc = 0.0;
    let mut count = 0usize;
    let mut mi = 0;
    for &p in primes {
        while mi < marks.len() && p > marks[mi] {
            checkpoints.push((marks[mi], count, if count > 0 { acc / count as f64 } else { 0.0 }));
            mi += 1;
        }
        acc += f(p);
        count += 1;
    }
    while mi < marks.len() {
        checkpoints.push((marks[mi], count, if count > 0 { acc / count as f64 } else { 0.0 }));
        mi += 1;
    }
    let kappa = if count > 0 { acc / count as f64 } else { 0.0 };
    KappaReport { x, pi_x: count, kappa, checkpoints }
}

/// `(1/pi(x)) sum_{p <= x} |a(p)|^2`, using `a(p) = b(p)`.
pub fn kappa_estimate(src: &Source, x: u64) -> Result<KappaReport> {
    let primes = primes_for(src, x)?;
    Ok(running(&primes, x, |p| src.b(p, 1).norm_sqr()))
}

/// The estimator for `|a1(p) - a2(p)|^2` with its three-term decomposition.
pub fn pair_kappa_estimate(first: &Source, second: &Source, x: u64) -> Result<PairKappaReport> {
    let primes = primes_for(first, x)?;
    primes_for(second, x)?;
    let difference = running(&primes, x, |p| (first.b(p, 1) - second.b(p, 1)).norm_sqr());
    let (mut s1, mut s2, mut cross) = (0.0, 0.0, 0.0);
    for &p in &primes {
        let (a1, a2): (Complex<f64>, Complex<f64>) = (first.b(p, 1), second.b(p, 1));
        s1 += a1.norm_sqr();
        s2 += a2.norm_sqr();
        cross += (a1 * a2.conj()).re;
    }
    Ok(PairKappaReport { difference, sum_sq_first: s1, sum_sq_second: s2, cross })
}

/// Number of primes `p` in `(x, cx]` with `|b(p)| > p^{-eta}`.
pub fn count_large_coeff_primes(src: &Source, x: u64, c: f64, eta: f64) -> Result<usize> {
    if !(c > 1.0) || !(eta > 0.0) {
        return Err(Error::Invalid(format!("need c > 1 and eta > 0, got c = {c}, eta = {eta}")));
    }
    let hi = (c * x as f64).floor() as u64;
    let primes = primes_for(src, hi)?;
    Ok(primes
        .iter()
        .filter(|&&p| p > x && src.b(p, 1).norm() > (p as f64).powf(-eta))
        .count())
}

/// `1 + (m/2)(1 + sqrt(1 + 4k^2 / (m log m)))` with `m` the least prime not
/// dividing `q`.
pub fn yildirim_bound(q: u64, k: u64) -> Result<f64> {
    if q < 1 || k < 1 {
        return Err(Error::Invalid(format!("need q >= 1 and k >= 1, got q = {q}, k = {k}")));
    }
    let m = least_prime_non_divisor(q) as f64;
    let k = k as f64;
    Ok(1.0 + (m / 2.0) * (1.0 + (1.0 + 4.0 * k * k / (m * m.ln())).sqrt()))
}

pub fn least_prime_non_divisor(q: u64) -> u64 {
    let mut p = 2u64;
    loop {
        if (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0) && q % p != 0 {
            return p;
        }
        p += 1;
    }
}
