//! Real shifts `tau` with `max_p |p^{-i tau} - chi(p)| < eps1` over a finite
//! set of primes.

pub mod lll;

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::Complex64;

/// Default cap on `|tau|`.
pub const DEFAULT_TAU_CAP: f64 = 1e12;
const UNIMODULAR_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct ShiftTarget {
    pub primes: Vec<u64>,
    pub targets: Vec<Complex64>,
    pub epsilon1: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Grid,
    Lattice,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShiftSolution {
    pub tau: f64,
    pub quality: f64,
    pub method: Method,
}

impl ShiftTarget {
    pub fn new(primes: Vec<u64>, targets: Vec<Complex64>, epsilon1: f64) -> Result<Self> {
        if primes.is_empty() || primes.len() != targets.len() {
            return Err(Error::Invalid("need one target per prime".into()));
        }
        if !(epsilon1 > 0.0) {
            return Err(Error::Invalid(format!("epsilon1 must be positive, got {epsilon1}")));
        }
        let mut sorted = primes.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != primes.len() || primes.iter().any(|&p| p < 2) {
            return Err(Error::Invalid("primes must be distinct and at least 2".into()));
        }
        if let Some(t) = targets.iter().find(|t| (t.norm() - 1.0).abs() > UNIMODULAR_TOL) {
            return Err(Error::Invalid(format!("target {t} not unimodular")));
        }
        Ok(Self { primes, targets, epsilon1 })
    }

    pub fn max_log(&self) -> f64 {
        self.primes.iter().map(|&p| (p as f64).ln()).fold(0.0, f64::max)
    }

    /// `max_p |p^{-i tau} - chi(p)|`.
    pub fn quality(&self, tau: f64) -> f64 {
        self.primes
            .iter()
            .zip(&self.targets)
            .map(|(&p, &c)| (Complex64::from_polar(1.0, -tau * (p as f64).ln()) - c).norm())
            .fold(0.0, f64::max)
    }

    pub fn conj(&self) -> Self {
        Self { primes: self.primes.clone(), targets: self.targets.iter().map(|c| c.conj()).collect(), epsilon1: self.epsilon1 }
    }

    /// Default Lipschitz-safe grid step `eps1 / (4 max log p)`.
    pub fn default_step(&self) -> f64 {
        self.epsilon1 / (4.0 * self.max_log())
    }

    fn solution(&self, tau: f64, method: Method) -> Option<ShiftSolution> {
        let quality = self.quality(tau);
        (quality < self.epsilon1).then_some(ShiftSolution { tau, quality, method })
    }
}

/// Every grid point `i * step` in `[lo, hi]` meeting the target.
pub fn find_tau_grid_range(target: &ShiftTarget, lo: f64, hi: f64, step: f64) -> Result<Vec<ShiftSolution>> {
    if !(step > 0.0) || step > target.epsilon1 / target.max_log() {
        return Err(Error::Invalid(format!(
            "grid step {step} exceeds the Lipschitz-safe bound eps1 / max log p = {}",
            target.epsilon1 / target.max_log()
        )));
    }
    if !(hi >= lo) {
        return Err(Error::Invalid("empty grid range".into()));
    }
    let i0 = (lo / step).ceil() as i64;
    let i1 = (hi / step).floor() as i64;
    let chunk = 4096i64;
    let starts: Vec<i64> = (i0..=i1).step_by(chunk as usize).collect();
    let hits: Vec<Vec<ShiftSolution>> = starts
        .par_iter()
        .map(|&s| (s..(s + chunk).min(i1 + 1)).filter_map(|i| target.solution(i as f64 * step, Method::Grid)).collect())
        .collect();
    Ok(hits.into_iter().flatten().collect())
}

pub fn find_tau_grid(target: &ShiftTarget, t_max: f64, step: f64) -> Result<Vec<ShiftSolution>> {
    find_tau_grid_range(target, 0.0, t_max, step)
}

/// One representative per run of consecutive grid hits: the best point of
/// the run after local refinement.
pub fn cluster_hits(target: &ShiftTarget, hits: &[ShiftSolution], step: f64) -> Vec<ShiftSolution> {
    let mut out: Vec<ShiftSolution> = Vec::new();
    let mut run: Vec<ShiftSolution> = Vec::new();
    let flush = |run: &mut Vec<ShiftSolution>, out: &mut Vec<ShiftSolution>| {
        if let Some(best) = run.iter().min_by(|a, b| a.quality.total_cmp(&b.quality)) {
            let r = refine(target, best.tau, step);
            out.push(ShiftSolution { method: best.method, ..r });
        }
        run.clear();
    };
    for h in hits {
        if let Some(last) = run.last() {
            if h.tau - last.tau > 1.5 * step {
                flush(&mut run, &mut out);
            }
        }
        run.push(*h);
    }
    flush(&mut run, &mut out);
    out
}

/// Golden-section polish of `quality` on `[tau - w, tau + w]`; never worse
/// than the starting point.
pub fn refine(target: &ShiftTarget, tau: f64, w: f64) -> ShiftSolution {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (tau - w, tau + w);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (target.quality(c), target.quality(d));
    for _ in 0..200 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = target.quality(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = target.quality(d);
        }
        if (b - a).abs() < 1e-13 * (1.0 + tau.abs()) {
            break;
        }
    }
    let mid = 0.5 * (a + b);
    let (q0, q1) = (target.quality(tau), target.quality(mid));
    if q1 < q0 {
        ShiftSolution { tau: mid, quality: q1, method: Method::Grid }
    } else {
        ShiftSolution { tau, quality: q0, method: Method::Grid }
    }
}

fn frac_phase(c: Complex64) -> f64 {
    c.im.atan2(c.re) / (2.0 * PI)
}

/// Best shift in `[0, max_height]` among candidates
/// `tau = (2 pi k - theta_a) / log p_a`, each matching one anchor prime
/// exactly, with `k` from reduced lattices or, for small heights, from
/// direct enumeration; every candidate is polished and re-verified.
pub fn find_tau_lattice(target: &ShiftTarget, max_height: f64) -> Result<ShiftSolution> {
    if target.primes.len() > 40 {
        return Err(Error::Invalid(format!("lattice search supports at most 40 primes, got {}", target.primes.len())));
    }
    if !(max_height > 0.0) {
        return Err(Error::Invalid("max_height must be positive".into()));
    }
    let mut taus: Vec<f64> = Vec::new();
    for anchor in 0..target.primes.len() {
        taus.extend(anchored_candidates(target, anchor, max_height));
    }
    let w = target.default_step();
    let best = taus
        .par_iter()
        .map(|&tau| {
            let r = refine(target, tau, w);
            (r.tau >= 0.0 && r.tau <= max_height).then_some(r)
        })
        .flatten()
        .min_by(|a, b| a.quality.total_cmp(&b.quality).then(a.tau.total_cmp(&b.tau)));
    match best {
        Some(s) if s.quality < target.epsilon1 => Ok(ShiftSolution { tau: s.tau, quality: target.quality(s.tau), method: Method::Lattice }),
        Some(s) => Err(Error::NoShift(format!("best quality {} not below eps1 = {}", s.quality, target.epsilon1))),
        None => Err(Error::NoShift("no candidate within the height cap".into())),
    }
}

fn anchored_candidates(target: &ShiftTarget, anchor: usize, max_height: f64) -> Vec<f64> {
    let l1 = (target.primes[anchor] as f64).ln();
    // p_a^{-i tau} = chi_a  <=>  tau log p_a = -theta_a + 2 pi k
    let theta1 = frac_phase(target.targets[anchor]);
    let tau_of = |k: f64| (k - theta1) * 2.0 * PI / l1;
    let k_max = (max_height * l1 / (2.0 * PI) + theta1).floor();
    let mut ks: Vec<f64> = vec![0.0, 1.0];
    if k_max <= 200_000.0 {
        ks.extend((2..=k_max as i64).map(|k| k as f64));
    }
    let others: Vec<usize> = (0..target.primes.len()).filter(|&j| j != anchor).collect();
    let m = others.len();
    if m >= 1 {
        // ||k a_j + b_j|| small for j != anchor
        let alpha: Vec<f64> = others.iter().map(|&j| (target.primes[j] as f64).ln() / l1).collect();
        let beta: Vec<f64> = others
            .iter()
            .map(|&j| -theta1 * (target.primes[j] as f64).ln() / l1 + frac_phase(target.targets[j]))
            .collect();
        for e in 1..=40 {
            let scale = 2f64.powi(e);
            let mut basis: Vec<Vec<f64>> = Vec::with_capacity(m + 2);
            for j in 0..m {
                let mut row = vec![0.0; m + 2];
                row[j] = scale;
                basis.push(row);
            }
            let mut krow: Vec<f64> = alpha.iter().map(|a| scale * a).collect();
            krow.push(1.0 / k_max.max(1.0));
            krow.push(0.0);
            basis.push(krow);
            let mut trow: Vec<f64> = beta.iter().map(|b| scale * b).collect();
            trow.push(0.0);
            trow.push(1.0);
            basis.push(trow);
            lll::lll_reduce(&mut basis, 0.99);
            for row in &basis {
                let t = row[m + 1];
                if (t.abs() - 1.0).abs() > 1e-6 {
                    continue;
                }
                let k = (row[m] * k_max.max(1.0) * t.signum()).round();
                if k.abs() <= k_max {
                    ks.push(k);
                }
            }
        }
    }
    ks.sort_by(f64::total_cmp);
    ks.dedup();
    ks.into_iter().map(tau_of).collect()
}

/// `k eps1`, the bound on `|p^{-ik tau} - chi(p)^k|` given
/// `|p^{-i tau} - chi(p)| < eps1`.
pub fn power_error_bound(epsilon1: f64, k: u32, m: u32) -> Result<f64> {
    if k < 1 || k > m {
        return Err(Error::Invalid(format!("need 1 <= k <= M, got k = {k}, M = {m}")));
    }
    Ok(k as f64 * epsilon1)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityEstimate {
    pub empirical: f64,
    /// 95% Wilson interval
    pub ci_low: f64,
    pub ci_high: f64,
    /// `prod_p (arc measure)/(2 pi)`
    pub predicted: f64,
    pub samples: usize,
}

/// Measure of `{u : |u| = 1, |u - chi| < eps}` over `2 pi`.
pub fn arc_fraction(eps: f64) -> f64 {
    if eps >= 2.0 {
        1.0
    } else {
        4.0 * (eps / 2.0).asin() / (2.0 * PI)
    }
}

pub fn density_estimate(target: &ShiftTarget, t_max: f64, samples: usize, seed: u64) -> Result<DensityEstimate> {
    if samples < 1000 {
        return Err(Error::Invalid(format!("need at least 1000 samples, got {samples}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let taus: Vec<f64> = (0..samples).map(|_| rng.gen_range(0.0..t_max)).collect();
    let hits = taus.iter().filter(|&&t| target.quality(t) < target.epsilon1).count();
    let n = samples as f64;
    let p = hits as f64 / n;
    let z = 1.96f64;
    let denom = 1.0 + z * z / n;
    let centre = (p + z * z / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z * z / (4.0 * n * n)).sqrt() / denom;
    let predicted = arc_fraction(target.epsilon1).powi(target.primes.len() as i32);
    Ok(DensityEstimate { empirical: p, ci_low: (centre - half).max(0.0), ci_high: (centre + half).min(1.0), predicted, samples })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(theta: f64) -> Complex64 {
        Complex64::from_polar(1.0, theta)
    }

    #[test]
    fn identity_targets() {
        let t = ShiftTarget::new(vec![2, 3, 5], vec![unit(0.0); 3], 0.1).unwrap();
        let hits = find_tau_grid(&t, 10.0, t.default_step()).unwrap();
        assert_eq!(hits[0].tau, 0.0);
        assert_eq!(find_tau_lattice(&t, 100.0).unwrap().tau, 0.0);
    }

    #[test]
    fn single_prime_closed_form() {
        let t = ShiftTarget::new(vec![2], vec![unit(PI)], 0.3).unwrap();
        let step = t.default_step();
        let hits = find_tau_grid(&t, 20.0, step).unwrap();
        let first = cluster_hits(&t, &hits, step)[0];
        assert!((first.tau - PI / 2f64.ln()).abs() < 1e-9, "{first:?}");
        let lat = find_tau_lattice(&t, 6.0).unwrap();
        assert!((lat.tau - PI / 2f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn coarse_step_rejected() {
        let t = ShiftTarget::new(vec![2, 3], vec![unit(0.0); 2], 0.3).unwrap();
        assert!(find_tau_grid(&t, 10.0, 1.0).is_err());
        assert!(ShiftTarget::new(vec![2, 2], vec![unit(0.0); 2], 0.3).is_err());
        assert!(ShiftTarget::new(vec![2], vec![Complex64::new(2.0, 0.0)], 0.3).is_err());
    }

    #[test]
    fn conjugation_symmetry() {
        let t = ShiftTarget::new(vec![2, 3], vec![unit(1.0), unit(-2.2)], 0.3).unwrap();
        let step = t.default_step();
        let a = find_tau_grid_range(&t, 0.0, 2000.0, step).unwrap();
        let b = find_tau_grid_range(&t.conj(), -2000.0, 0.0, step).unwrap();
        let mut bt: Vec<f64> = b.iter().map(|s| -s.tau).collect();
        bt.sort_by(f64::total_cmp);
        let at: Vec<f64> = a.iter().map(|s| s.tau).collect();
        assert_eq!(at, bt);
    }

    #[test]
    fn power_bound_holds_on_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let eps = 0.3;
        let mut checked = 0;
        while checked < 1000 {
            let p = [2u64, 3, 5, 7, 11][rng.gen_range(0..5)];
            let tau: f64 = rng.gen_range(0.0..1e4);
            let chi = unit(rng.gen_range(-PI..PI));
            let u = Complex64::from_polar(1.0, -tau * (p as f64).ln());
            if (u - chi).norm() >= eps {
                continue;
            }
            checked += 1;
            assert!((u * u - chi * chi).norm() < power_error_bound(eps, 2, 2).unwrap());
        }
        assert_eq!(power_error_bound(0.1, 1, 5).unwrap(), 0.1);
        assert!(power_error_bound(0.1, 6, 5).is_err());
    }

    #[test]
    fn density_single_prime_and_vacuous() {
        let t = ShiftTarget::new(vec![3], vec![unit(0.4)], 0.3).unwrap();
        let d = density_estimate(&t, 1e5, 20_000, 0).unwrap();
        assert!((d.predicted - 2.0 * 0.15f64.asin() / PI).abs() < 1e-15);
        assert!(d.ci_low <= d.predicted && d.predicted <= d.ci_high, "{d:?}");
        let v = ShiftTarget::new(vec![3, 5], vec![unit(0.4); 2], 2.5).unwrap();
        assert_eq!(density_estimate(&v, 1e5, 1000, 0).unwrap().empirical, 1.0);
    }

    #[test]
    fn density_monotone_in_eps() {
        let mut last = 0.0;
        for eps in [0.2, 0.4, 0.8, 1.6] {
            let t = ShiftTarget::new(vec![2, 3, 5], vec![unit(1.0), unit(2.0), unit(3.0)], eps).unwrap();
            let d = density_estimate(&t, 1e4, 5000, 3).unwrap().empirical;
            assert!(d >= last);
            last = d;
        }
    }

    #[test]
    fn lattice_not_worse_than_grid() {
        let t = ShiftTarget::new(vec![2, 3, 5], vec![unit(2.0), unit(-1.0), unit(0.5)], 0.2).unwrap();
        let h = 2000.0;
        let grid = find_tau_grid(&t, h, t.default_step()).unwrap();
        let best = grid.iter().map(|s| s.quality).fold(f64::INFINITY, f64::min);
        let lat = find_tau_lattice(&t, h).unwrap();
        assert!(lat.quality <= best, "{} > {best}", lat.quality);
        assert!(t.quality(lat.tau) < 0.2);
    }

    #[test]
    fn lattice_reaches_large_heights() {
        let primes = vec![2, 3, 5, 7, 11, 13, 17, 19];
        let targets: Vec<Complex64> = (0..8).map(|j| unit(0.7 * j as f64 + 0.3)).collect();
        let t = ShiftTarget::new(primes, targets, 0.5).unwrap();
        let s = find_tau_lattice(&t, 1e11).unwrap();
        assert!(s.tau > 0.0 && s.tau <= 1e11 && t.quality(s.tau) < 0.5, "{s:?}");
    }
}
