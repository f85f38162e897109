//! Prime generation.

use crate::error::{Error, Result};

const SEGMENT: usize = 1 << 20;
const SEGMENTED_ABOVE: u64 = 10_000_000;
pub const SIEVE_LIMIT: u64 = 1_000_000_000;

/// All primes `<= limit`, in increasing order.
///
/// Uses a plain sieve for small limits and a segmented sieve of Eratosthenes
/// (2^20-entry segments over odd numbers) above 10^7.
pub fn prime_sieve(limit: u64) -> Result<Vec<u64>> {
    if limit < 2 {
        return Err(Error::EmptyDomain(format!("no primes below {limit}")));
    }
    if limit > SIEVE_LIMIT {
        return Err(Error::Range(format!("sieve limit {limit} exceeds {SIEVE_LIMIT}")));
    }
    if limit <= SEGMENTED_ABOVE {
        Ok(simple_sieve(limit))
    } else {
        Ok(segmented_sieve(limit))
    }
}

/// Classic sieve over all integers up to `limit`.
pub fn simple_sieve(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::with_capacity(estimate_count(limit));
    let mut i = 2;
    while i * i <= n {
        if !composite[i] {
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
        i += 1;
    }
    for (k, &c) in composite.iter().enumerate().skip(2) {
        if !c {
            out.push(k as u64);
        }
    }
    out
}

/// Segmented sieve over odd numbers. Each segment holds `SEGMENT` odd
/// candidates; base primes come from a small sieve up to `sqrt(limit)`.
pub fn segmented_sieve(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let root = (limit as f64).sqrt() as u64 + 1;
    let base: Vec<u64> = simple_sieve(root).into_iter().filter(|&p| p > 2).collect();
    let mut out = Vec::with_capacity(estimate_count(limit));
    out.push(2);
    // odd numbers 2i+1 for i in [lo, hi)
    let total = (limit + 1) / 2; // count of odd numbers <= limit
    let mut flags = vec![false; SEGMENT];
    let mut lo = 1u64; // skip 1
    while lo < total {
        let hi = (lo + SEGMENT as u64).min(total);
        let len = (hi - lo) as usize;
        flags[..len].iter_mut().for_each(|f| *f = false);
        let seg_start = 2 * lo + 1;
        let seg_end = 2 * (hi - 1) + 1;
        for &p in &base {
            if p * p > seg_end {
                break;
            }
            let mut m = (seg_start + p - 1) / p * p;
            if m < p * p {
                m = p * p;
            }
            if m % 2 == 0 {
                m += p;
            }
            while m <= seg_end {
                flags[((m - 1) / 2 - lo) as usize] = true;
                m += 2 * p;
            }
        }
        for (k, &c) in flags[..len].iter().enumerate() {
            if !c {
                out.push(2 * (lo + k as u64) + 1);
            }
        }
        lo = hi;
    }
    out
}

fn estimate_count(limit: u64) -> usize {
    let x = limit as f64;
    if x < 17.0 {
        8
    } else {
        (1.26 * x / x.ln()) as usize + 8
    }
}

/// Number of primes `<= x` in a sorted prime list.
pub fn prime_pi(primes: &[u64], x: u64) -> usize {
    primes.partition_point(|&p| p <= x)
}
