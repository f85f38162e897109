//! Almost periods in the half-plane of absolute convergence and the
//! nonvanishing bounds they feed.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::catalog::{eval_entry, Backend, EmKind, LFunctionEntry};
use crate::error::{Error, Result};
use crate::eval::{abs_log_series_upper, dirichlet_tail_bound};
use crate::kronecker::{cluster_hits, find_tau_grid_range, refine, ShiftTarget};
use crate::zeta_em::eval_zeta_em;

/// Primes forced to `p^{-i theta} ~ 1` during the search.
pub const CONTROLLED_PRIMES: usize = 6;
/// Grid window in `theta`.
pub const WINDOW: f64 = 1.0e4;
pub const DEFAULT_THETA_CAP: f64 = 1.0e6;

#[derive(Clone, Debug, PartialEq)]
pub struct AlmostPeriod {
    pub theta: f64,
    /// Certified `sup_{Re s >= 1 + delta} |L(s) - L(s + i theta)|`.
    pub bound: f64,
    pub head: f64,
    pub tail: f64,
    pub n_terms: u64,
    pub primes: Vec<u64>,
}

#[derive(Clone, Copy, Debug)]
pub struct AlmostOptions {
    /// Returned shifts satisfy `theta > theta_min`.
    pub theta_min: f64,
    pub theta_cap: f64,
}

impl Default for AlmostOptions {
    fn default() -> Self {
        Self { theta_min: 0.0, theta_cap: DEFAULT_THETA_CAP }
    }
}

fn upper_ln_real(kind: EmKind, w: f64) -> Result<f64> {
    if !(w > 1.0) {
        return Err(Error::Domain(format!("factor argument {w} not right of 1")));
    }
    let z = eval_zeta_em(Complex64::new(w, 0.0), 1e-13)?;
    let up = z.value.re + z.error_bound;
    Ok(match kind {
        EmKind::Zeta => up.ln(),
        EmKind::Chi4 => (up * (1.0 - 2f64.powf(-w))).ln(),
    })
}

/// Upper bound on `sum_{p,k} |b(p^k)| p^{-k sigma}`.
pub fn abs_log_mass(entry: &LFunctionEntry, sigma: f64) -> Result<f64> {
    if !(sigma > entry.abscissa_abs) {
        return Err(Error::Domain(format!("sigma = {sigma} not right of the abscissa {}", entry.abscissa_abs)));
    }
    match &entry.backend {
        Backend::EulerMaclaurin(factors) => {
            let mut total = 0.0;
            for f in factors {
                total += f.power.unsigned_abs() as f64 * upper_ln_real(f.kind, f.scale * sigma + f.offset)?;
            }
            Ok(total * (1.0 + 1e-13))
        }
        Backend::RawSeries => {
            let x = entry.source.p_max().min(1_000_000);
            Ok(abs_log_series_upper(&entry.source, sigma, x))
        }
    }
}

/// Certified lower bound `2 prod_p exp(-sum_k |b(p^k)| p^{-k(1+delta)})` for
/// `|2 L(s)|` on `Re s >= 1 + delta`.
pub fn nonvanishing_margin(entry: &LFunctionEntry, delta: f64) -> Result<f64> {
    if !(delta > 0.0) {
        return Err(Error::Invalid(format!("delta must be positive, got {delta}")));
    }
    let sigma = entry.abscissa_abs + delta;
    Ok(2.0 * (-abs_log_mass(entry, sigma)?).exp() * (1.0 - 1e-13))
}

/// Certified `sup |L(s) - L(s + i theta)|` over `Re s >= 1 + delta`, with the
/// head split at the tabulated range.
pub fn shift_bound(entry: &LFunctionEntry, delta: f64, theta: f64) -> Result<AlmostPeriod> {
    if !(delta > 0.0) {
        return Err(Error::Invalid(format!("delta must be positive, got {delta}")));
    }
    let sigma = entry.abscissa_abs + delta;
    let n_terms = entry.coeffs.n_max();
    let mut head = 0.0;
    for n in 1..=n_terms {
        let a = entry.coeffs.a(n).norm();
        if a == 0.0 {
            continue;
        }
        let phase = theta * (n as f64).ln();
        let chord = 2.0 * (phase / 2.0).sin().abs();
        head += a * (n as f64).powf(-sigma) * chord;
    }
    head *= 1.0 + 1e-12;
    let tail = 2.0 * dirichlet_tail_bound(entry.coeffs.growth(), sigma, n_terms);
    Ok(AlmostPeriod { theta, bound: head + tail, head, tail, n_terms, primes: Vec::new() })
}

/// First `theta > theta_min` whose certified shift bound is below `eps`,
/// searched among Kronecker solutions of `p^{-i theta} ~ 1` for the first
/// few primes in increasing order; near the origin, by halving the grid step.
pub fn almost_period_find(entry: &LFunctionEntry, delta: f64, eps: f64, opts: AlmostOptions) -> Result<AlmostPeriod> {
    if !(eps > 0.0) {
        return Err(Error::Invalid(format!("eps must be positive, got {eps}")));
    }
    if !(opts.theta_min >= 0.0) || !(opts.theta_cap > opts.theta_min) {
        return Err(Error::Invalid(format!("bad theta range ({}, {}]", opts.theta_min, opts.theta_cap)));
    }
    let primes: Vec<u64> = entry.source.primes().iter().copied().take(CONTROLLED_PRIMES).collect();
    let floor = shift_bound(entry, delta, 0.0)?;
    if floor.tail >= eps {
        return Err(Error::NoShift(format!(
            "tail beyond n = {} alone is {:.3e}, not below eps = {eps}",
            floor.n_terms, floor.tail
        )));
    }
    let epsilon1 = (eps / 2.0).min(0.5);
    let target = ShiftTarget::new(primes.clone(), vec![Complex64::new(1.0, 0.0); primes.len()], epsilon1)?;
    let step = target.default_step();
    let mut lo = opts.theta_min;
    while lo < opts.theta_cap {
        let hi = (lo + WINDOW).min(opts.theta_cap);
        let hits = find_tau_grid_range(&target, lo, hi, step)?;
        let mut candidates: Vec<f64> = Vec::new();
        for c in cluster_hits(&target, &hits, step) {
            let t = refine(&target, c.tau, step).tau;
            candidates.push(if t > opts.theta_min { t } else { c.tau });
        }
        candidates.extend(hits.iter().map(|h| h.tau).find(|&t| t > opts.theta_min));
        candidates.retain(|&t| t > opts.theta_min && t > 0.0);
        candidates.sort_by(f64::total_cmp);
        candidates.dedup();
        if lo == 0.0 {
            // the cluster at the origin, largest first
            let near: Vec<f64> = (0..53).map(|j| step * 0.5f64.powi(j)).collect();
            candidates.retain(|&t| t > step);
            candidates.splice(0..0, near);
        }
        for t in candidates {
            let mut ap = shift_bound(entry, delta, t)?;
            if ap.bound < eps {
                ap.primes = primes;
                return Ok(ap);
            }
        }
        lo = hi;
    }
    Err(Error::NoShift(format!(
        "no theta in ({}, {}] with certified shift bound below {eps}",
        opts.theta_min, opts.theta_cap
    )))
}

/// Largest observed `|L(s) - L(s + i theta)|` plus evaluation error on
/// `s = 1 + delta + i t`, `t` uniform on `[0, t_max]`.
pub fn spot_check(entry: &LFunctionEntry, delta: f64, theta: f64, t_max: f64, points: usize, tol: f64) -> Result<f64> {
    let sigma = entry.abscissa_abs + delta;
    let mut worst: f64 = 0.0;
    for i in 0..points {
        let t = t_max * i as f64 / (points.max(2) - 1) as f64;
        let a = eval_entry(entry, Complex64::new(sigma, t), tol)?;
        let b = eval_entry(entry, Complex64::new(sigma, t + theta), tol)?;
        worst = worst.max((a.value - b.value).norm() + a.error_bound + b.error_bound);
    }
    Ok(worst)
}

/// Certified lower bound on `|L(s) + L(s + i theta)|` for `Re s >= 1 + delta`.
pub fn composite_lower_bound(margin: f64, period: &AlmostPeriod) -> f64 {
    margin - period.bound
}

/// Smallest observed lower end of `|L(s) + L(s + i theta)|` over `points`
/// seeded random `s` with `1 + delta <= sigma <= 3 + delta`, `0 <= t <= t_max`.
pub fn composite_spot_check(
    entry: &LFunctionEntry,
    delta: f64,
    theta: f64,
    t_max: f64,
    points: usize,
    seed: u64,
    tol: f64,
) -> Result<f64> {
    let sigma = entry.abscissa_abs + delta;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = f64::INFINITY;
    for _ in 0..points {
        let s = Complex64::new(sigma + rng.gen_range(0.0..2.0), rng.gen_range(0.0..t_max));
        let a = eval_entry(entry, s, tol)?;
        let b = eval_entry(entry, s + Complex64::new(0.0, theta), tol)?;
        worst = worst.min((a.value + b.value).norm() - a.error_bound - b.error_bound);
    }
    Ok(worst)
}
