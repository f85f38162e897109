//! Block-by-block choice of unimodular twists `chi(p)` so that
//! `sum_p sum_k chi(p)^k b(p^k) p^{-k sigma}` hits a prescribed target.
//!
//! Primes split into "large-coefficient" primes, `|b(p)| > p^{-eps}`, which are
//! twisted, and the rest, which keep `chi(p) = 1` and enter as a fixed offset.
//! After an initial block `p <= N_1`, block `j` assigns the primes in
//! `(N_j, N_{j+1}]` through [`crate::annulus::decompose`] and records the
//! inequality
//!
//! ```text
//! | sum*_{p^k <= N_j} chi^k b p^{-k sigma} - z + offset |
//!     <= c * sum*_{p^k > N_j} |b| p^{-k sigma}
//! ```
//!
//! as a [`BlockCertificate`] comparing certified intervals.

use std::collections::BTreeMap;

use num_complex::Complex;

use crate::annulus::{decompose, reachable_interval, RadiiSet};
use crate::error::{Error, Result};
use crate::eval::{integer_tail, log_series_tail_bound};
use crate::{Complex64, Source};

pub const DEFAULT_CONSTANT: f64 = 1e-2;
const SIGMA_FLOOR: f64 = 1e-4;
const REACH_SLACK: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SigmaRule {
    /// Largest sigma in `(1, 1 + delta)` at which the initial block reaches
    /// the target with slack.
    Reachability,
    /// Base-case display: head + |z| + S_0 <= c * tail, by bisection.
    BaseInequality,
    Fixed(f64),
}

#[derive(Clone, Debug)]
pub struct CasselsConfig {
    pub target: Complex64,
    pub delta: f64,
    pub n1: u64,
    pub c0: f64,
    pub epsilon: f64,
    /// Stop after this many blocks after the initial one...
    pub max_blocks: usize,
    /// ...or as soon as `N_J` reaches this, whichever comes first.
    pub n_final: Option<u64>,
    /// The constant in the block inequality.
    pub constant: f64,
    pub sigma_rule: SigmaRule,
    /// Prime powers up to here are summed explicitly; beyond it the growth
    /// certificate bounds the tail.
    pub horizon: u64,
    pub source: Source,
}

impl CasselsConfig {
    pub fn new(source: Source, target: Complex64) -> Self {
        Self {
            target,
            delta: 1.0,
            n1: 50,
            c0: 1.0,
            epsilon: 0.05,
            max_blocks: 10,
            n_final: None,
            constant: DEFAULT_CONSTANT,
            sigma_rule: SigmaRule::Reachability,
            horizon: 1_000_000,
            source,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Invalid(m));
        if !(self.delta > 0.0) {
            return bad(format!("delta must be positive, got {}", self.delta));
        }
        if !(self.c0 > 0.0) {
            return bad(format!("c0 must be positive, got {}", self.c0));
        }
        if (self.n1 as f64) <= (1.0 + self.c0).powi(2) {
            return bad(format!("N1 = {} must exceed (1 + c0)^2 = {}", self.n1, (1.0 + self.c0).powi(2)));
        }
        let theta = self.source.growth().b_bound_exp;
        if !(self.epsilon > 0.0 && self.epsilon < 0.5 - theta) {
            return bad(format!("epsilon must lie in (0, 1/2 - theta) = (0, {})", 0.5 - theta));
        }
        if !(self.constant > 0.0 && self.constant < 1.0) {
            return bad(format!("constant must lie in (0, 1), got {}", self.constant));
        }
        if let SigmaRule::Fixed(s) = self.sigma_rule {
            if !(s > 1.0 && s < 1.0 + self.delta) {
                return bad(format!("fixed sigma {s} outside (1, 1 + delta)"));
            }
        }
        if self.horizon <= self.n1 {
            return bad("horizon must exceed N1".into());
        }
        Ok(())
    }

    /// `(1 + c)/(1 - c)`, the required block ratio `S_3/S_2`.
    pub fn ratio_threshold(&self) -> f64 {
        (1.0 + self.constant) / (1.0 - self.constant)
    }
}

#[derive(Clone, Copy, Debug)]
struct Term {
    p: u64,
    k: u32,
    pk: u64,
    b: Complex64,
    star: bool,
}

/// Prime powers up to the horizon with their coefficients, sorted by `p^k`.
#[derive(Clone, Debug)]
struct Terms {
    items: Vec<Term>,
    horizon: u64,
    /// no non-starred primes exist beyond the horizon
    beyond_all_star: bool,
}

impl Terms {
    fn new(src: &Source, horizon: u64, eps: f64) -> Self {
        let horizon = if src.has_closed_form() { horizon } else { horizon.min(src.p_max()) };
        let mut star_of = BTreeMap::new();
        let mut items: Vec<Term> = src
            .terms_upto(horizon)
            .into_iter()
            .map(|(p, k, b)| {
                let star = *star_of.entry(p).or_insert_with(|| src.b(p, 1).norm() > (p as f64).powf(-eps));
                Term { p, k, pk: p.pow(k), b, star }
            })
            .collect();
        items.sort_by_key(|t| (t.pk, t.p));
        let beyond_all_star = src.large_prime_floor().is_some_and(|f| f > (horizon as f64).powf(-eps));
        Self { items, horizon, beyond_all_star }
    }

    fn range(&self, lo: u64, hi: u64) -> &[Term] {
        let a = self.items.partition_point(|t| t.pk <= lo);
        let b = self.items.partition_point(|t| t.pk <= hi);
        &self.items[a..b]
    }
}

fn weight(t: &Term, sigma: f64) -> f64 {
    (t.pk as f64).powf(-sigma)
}

/// Rounding allowance for a floating sum of `n` terms of total mass `mass`.
fn rounding(n: usize, mass: f64) -> f64 {
    let u = f64::EPSILON;
    let g = (n as f64 + 8.0) * u;
    mass * g / (1.0 - g)
}

#[derive(Clone, Debug)]
pub struct BlockCertificate {
    pub j: usize,
    pub n_j: u64,
    /// Certified upper end of the left side.
    pub lhs: f64,
    pub lhs_error: f64,
    /// Certified lower end of `c * sum*_{p^k > N_j} |b| p^{-k sigma}`.
    pub rhs: f64,
    pub rhs_error: f64,
    pub holds: bool,
    pub margin: f64,
    /// `S_3 / S_2` of the step that produced this block, if any.
    pub ratio: Option<f64>,
    pub ratio_ok: bool,
}

#[derive(Clone, Debug, Default)]
pub struct BlockQuantities {
    pub s0: f64,
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
    pub s4: f64,
    pub lambda: Complex64,
    pub z0: Complex64,
}

#[derive(Clone, Debug)]
pub struct CasselsState {
    pub j: usize,
    pub n_j: u64,
    pub m_j: u64,
    pub sigma: f64,
    pub chi: BTreeMap<u64, Complex64>,
    /// `sum*_{p^k <= N_j} chi^k b p^{-k sigma}`
    pub partial: Complex64,
    pub partial_error: f64,
    pub quantities: BlockQuantities,
    pub set_a: Vec<(u64, u32)>,
    pub set_b: Vec<(u64, u32)>,
}

#[derive(Clone, Debug)]
pub struct CasselsRun {
    pub state: CasselsState,
    pub certificates: Vec<BlockCertificate>,
    pub records: Vec<BlockRecord>,
    /// `|sum*_{p^k <= N_J} chi^k b p^{-k sigma} - z + offset|`, upper end
    pub residual: f64,
    /// `c * sum*_{p^k > N_J} |b| p^{-k sigma}`, upper end
    pub residual_bound: f64,
    /// `sum*_{p^k > N_J} |b| p^{-k sigma}`, upper end: the most any choice of
    /// the remaining twists can move the series
    pub tail_bound: f64,
    /// `sum_{non-starred} b p^{-k sigma}` with its certified error
    pub offset: Complex64,
    pub offset_error: f64,
}

/// Transcript line for one block.
#[derive(Clone, Debug)]
pub struct BlockRecord {
    pub j: usize,
    pub n_j: u64,
    pub sigma: f64,
    pub size_a: usize,
    pub size_b: usize,
    pub quantities: BlockQuantities,
    pub margin: f64,
}

/// `S_0 = sum_{|b(p)| <= p^{-eps}} p^{-1-eps} + sum_p sum_{k >= 2} |b(p^k)| p^{-k}`,
/// certified from above.
pub fn s0_bound(src: &Source, epsilon: f64, horizon: u64) -> f64 {
    let terms = Terms::new(src, horizon, epsilon);
    let mut head = 0.0;
    let mut n = 0;
    for t in &terms.items {
        if t.k == 1 && !t.star {
            head += (t.p as f64).powf(-1.0 - epsilon);
            n += 1;
        }
        if t.k >= 2 {
            head += t.b.norm() * (t.pk as f64).powi(-1);
            n += 1;
        }
    }
    let g = src.growth();
    let x = terms.horizon;
    let theta = g.b_bound_exp;
    let a = g.b_bound_const;
    // k >= 2 with p <= x < p^k, from the first exponent past the horizon on
    let mut powers = 0.0;
    for t in terms.items.iter().filter(|t| t.k == 1) {
        let k0 = crate::coeffs::max_exponent(t.p, x) + 1;
        let k0 = k0.max(2);
        let pf = t.p as f64;
        powers += a * pf.powf(-(k0 as f64) * (1.0 - theta)) / (1.0 - pf.powf(theta - 1.0));
    }
    // p > x, all k >= 2
    powers += a * integer_tail(x, 2.0 * (1.0 - theta)) / (1.0 - (x as f64).powf(theta - 1.0));
    let smalls = if terms.beyond_all_star { 0.0 } else { integer_tail(x, 1.0 + epsilon) };
    head + rounding(n, head) + powers + smalls
}

struct Ctx<'a> {
    cfg: &'a CasselsConfig,
    terms: Terms,
    sigma: f64,
}

impl<'a> Ctx<'a> {
    fn tail_star_bounds(&self, n: u64) -> (f64, f64) {
        let mut mass = 0.0;
        let mut count = 0;
        for t in self.terms.range(n, self.terms.horizon) {
            if t.star {
                mass += t.b.norm() * weight(t, self.sigma);
                count += 1;
            }
        }
        let r = rounding(count, mass);
        let beyond = log_series_tail_bound(self.cfg.source.growth(), self.sigma, self.terms.horizon);
        ((mass - r).max(0.0), mass + r + beyond)
    }

    /// Sum over non-starred terms: value, error.
    fn offset(&self) -> (Complex64, f64) {
        let mut acc = Complex::new(0.0, 0.0);
        let mut mass = 0.0;
        let mut count = 0;
        for t in &self.terms.items {
            if !t.star {
                let v = t.b * weight(t, self.sigma);
                acc += v;
                mass += v.norm();
                count += 1;
            }
        }
        let beyond = if self.terms.beyond_all_star {
            // non-starred primes all lie below the horizon; bound their higher powers
            let g = self.cfg.source.growth();
            let mut primes: Vec<u64> = self.terms.items.iter().filter(|t| !t.star).map(|t| t.p).collect();
            primes.sort_unstable();
            primes.dedup();
            let mut tail = 0.0;
            for p in primes {
                let k0 = crate::coeffs::max_exponent(p, self.terms.horizon) + 1;
                let q = (p as f64).powf(g.b_bound_exp - self.sigma);
                tail += g.b_bound(p, k0) * (p as f64).powf(-(k0 as f64) * self.sigma) / (1.0 - q);
            }
            tail * (1.0 + 1e-12)
        } else {
            log_series_tail_bound(self.cfg.source.growth(), self.sigma, self.terms.horizon)
        };
        (acc, rounding(count, mass) + beyond)
    }

    /// Twisted sum over starred terms in `(lo, hi]` accepted by `keep`.
    fn twisted_by<F: Fn(&Term) -> bool>(
        &self,
        chi: &BTreeMap<u64, Complex64>,
        lo: u64,
        hi: u64,
        keep: F,
    ) -> Result<(Complex64, f64, usize)> {
        let mut acc = Complex::new(0.0, 0.0);
        let mut mass = 0.0;
        let mut n = 0;
        for t in self.terms.range(lo, hi) {
            if !t.star || !keep(t) {
                continue;
            }
            let c = chi.get(&t.p).ok_or_else(|| Error::Construction {
                block: 0,
                reason: format!("chi({}) needed for {}^{} but unassigned", t.p, t.p, t.k),
            })?;
            let v = c.powu(t.k) * t.b * weight(t, self.sigma);
            acc += v;
            mass += v.norm();
            n += 1;
        }
        Ok((acc, rounding(n, mass), n))
    }

    fn twisted(&self, chi: &BTreeMap<u64, Complex64>, lo: u64, hi: u64) -> Result<(Complex64, f64, usize)> {
        self.twisted_by(chi, lo, hi, |_| true)
    }

    /// Twists for the starred primes `p <= N1` so that the block sum plus the
    /// offset equals the target. Primes with `p^2 <= N1` aim at a share of the
    /// target (iterated to absorb their own higher powers); the remaining
    /// primes in the block absorb what is left exactly.
    fn initial_block(&self) -> Result<(BTreeMap<u64, Complex64>, f64)> {
        let n1 = self.cfg.n1;
        let (offset, _) = self.offset();
        let w = self.cfg.target - offset;
        let block: Vec<&Term> = self.terms.range(0, n1).iter().filter(|t| t.star && t.k == 1).collect();
        let small: Vec<&Term> = block.iter().copied().filter(|t| t.p * t.p <= n1).collect();
        let big: Vec<&Term> = block.iter().copied().filter(|t| t.p * t.p > n1).collect();
        if big.is_empty() {
            return Err(Error::Construction { block: 1, reason: "no large-coefficient primes in (sqrt N1, N1]".into() });
        }
        let radii = |ts: &[&Term]| -> Vec<Complex64> { ts.iter().map(|t| t.b * weight(t, self.sigma)).collect() };
        let big_radii = radii(&big);
        let big_set = RadiiSet::new(&big_radii)?;
        let big_int = reachable_interval(&big_set);
        let mut chi = BTreeMap::new();
        if !small.is_empty() {
            let small_radii = radii(&small);
            let small_set = RadiiSet::new(&small_radii)?;
            let si = reachable_interval(&small_set);
            let total = si.outer + big_int.outer;
            let dir = if w.norm() > 0.0 { w / w.norm() } else { Complex::new(1.0, 0.0) };
            let share = (w.norm() * si.outer / total).clamp(si.inner, si.outer);
            let aim = dir * share;
            let mut t = aim;
            for _ in 0..40 {
                let tm = t.norm().clamp(si.inner, si.outer);
                let t_in = if t.norm() > 0.0 { t * (tm / t.norm()) } else { Complex::new(tm, 0.0) };
                let c = decompose(&small_set, t_in, 1e-13)?;
                for (tm, cj) in small.iter().zip(&c) {
                    chi.insert(tm.p, *cj);
                }
                let mut tot = Complex::new(0.0, 0.0);
                for s in &small {
                    for q in self.terms.range(0, n1).iter().filter(|q| q.p == s.p) {
                        tot += chi[&s.p].powu(q.k) * q.b * weight(q, self.sigma);
                    }
                }
                let miss = aim - tot;
                if miss.norm() < 1e-15 * (1.0 + aim.norm()) {
                    break;
                }
                t += miss;
            }
        }
        let (small_sum, _, _) = self.twisted_by(&chi, 0, n1, |t| t.p * t.p <= n1)?;
        let rem = w - small_sum;
        let slack = (rem.norm() - big_int.inner).min(big_int.outer - rem.norm()) / big_int.outer;
        let c = decompose(&big_set, rem, 1e-13 * (1.0 + big_int.outer))?;
        for (t, cj) in big.iter().zip(&c) {
            chi.insert(t.p, *cj);
        }
        Ok((chi, slack))
    }
}

fn sigma_domain(cfg: &CasselsConfig) -> (f64, f64) {
    (1.0 + SIGMA_FLOOR, 1.0 + cfg.delta * 0.999)
}

/// Head, left side and right side of the base-case display at sigma.
fn base_sides(cfg: &CasselsConfig, sigma: f64, s0: f64) -> (f64, f64) {
    let ctx = Ctx { cfg, terms: Terms::new(&cfg.source, cfg.horizon, cfg.epsilon), sigma };
    let head: f64 = ctx.terms.range(0, cfg.n1).iter().filter(|t| t.star).map(|t| t.b.norm() * weight(t, sigma)).sum();
    let (tail_lo, _) = ctx.tail_star_bounds(cfg.n1);
    (head * (1.0 + 1e-12) + cfg.target.norm() + s0, cfg.constant * tail_lo)
}

/// Pick sigma per the configured rule.
pub fn choose_sigma(cfg: &CasselsConfig) -> Result<f64> {
    cfg.validate()?;
    let (lo, hi) = sigma_domain(cfg);
    match cfg.sigma_rule {
        SigmaRule::Fixed(s) => {
            let ctx = Ctx { cfg, terms: Terms::new(&cfg.source, cfg.horizon, cfg.epsilon), sigma: s };
            match ctx.initial_block() {
                Ok((_, slack)) if slack >= 0.0 => Ok(s),
                Ok(_) | Err(Error::Unreachable { .. }) => {
                    Err(Error::SigmaInfeasible(format!("target {} not reachable by the first block at sigma {s}", cfg.target)))
                }
                Err(e) => Err(e),
            }
        }
        SigmaRule::Reachability => {
            let terms = Terms::new(&cfg.source, cfg.horizon, cfg.epsilon);
            let ok = |s: f64| {
                let ctx = Ctx { cfg, terms: terms.clone(), sigma: s };
                matches!(ctx.initial_block(), Ok((_, slack)) if slack >= REACH_SLACK)
            };
            if ok(hi) {
                return Ok(hi);
            }
            if !ok(lo) {
                let head: f64 = terms.range(0, cfg.n1).iter().filter(|t| t.star && t.k == 1).map(|t| t.b.norm() * weight(t, lo)).sum();
                return Err(Error::SigmaInfeasible(format!(
                    "first block spans at most {head:.6} at sigma - 1 = {SIGMA_FLOOR}, target modulus {:.6}",
                    cfg.target.norm()
                )));
            }
            let (mut a, mut b) = (lo, hi);
            for _ in 0..60 {
                let m = 0.5 * (a + b);
                if ok(m) {
                    a = m;
                } else {
                    b = m;
                }
            }
            Ok(a)
        }
        SigmaRule::BaseInequality => {
            let s0 = s0_bound(&cfg.source, cfg.epsilon, cfg.horizon);
            let holds = |s: f64| {
                let (l, r) = base_sides(cfg, s, s0);
                l <= r
            };
            if !holds(lo) {
                let (l, r) = base_sides(cfg, lo, s0);
                return Err(Error::SigmaInfeasible(format!(
                    "at sigma - 1 = {SIGMA_FLOOR}: head + |z| + S0 = {l:.6} but c * tail(N1) >= {r:.6} only (tail summed to {})",
                    cfg.horizon
                )));
            }
            if holds(hi) {
                return Ok(hi);
            }
            let (mut a, mut b) = (lo, hi);
            for _ in 0..60 {
                let m = 0.5 * (a + b);
                if holds(m) {
                    a = m;
                } else {
                    b = m;
                }
            }
            Ok(a)
        }
    }
}

fn certificate(ctx: &Ctx, st: &CasselsState, offset: (Complex64, f64), ratio: Option<f64>) -> BlockCertificate {
    let dev = st.partial - ctx.cfg.target + offset.0;
    let lhs_error = st.partial_error + offset.1;
    let lhs = dev.norm() + lhs_error;
    let (tail_lo, tail_hi) = ctx.tail_star_bounds(st.n_j);
    let rhs = ctx.cfg.constant * tail_lo;
    let margin = rhs - lhs;
    let ratio_ok = ratio.is_none_or(|r| r >= ctx.cfg.ratio_threshold());
    BlockCertificate {
        j: st.j,
        n_j: st.n_j,
        lhs,
        lhs_error,
        rhs,
        rhs_error: ctx.cfg.constant * (tail_hi - tail_lo),
        holds: margin > 0.0,
        margin,
        ratio,
        ratio_ok,
    }
}

/// One inductive step: assign the twists of the primes in `(N_j, N_{j+1}]`.
fn block_step_ctx(ctx: &Ctx, st: &CasselsState) -> Result<(CasselsState, BlockCertificate)> {
    let cfg = ctx.cfg;
    let j = st.j;
    let m = (cfg.c0 * st.n_j as f64).floor() as u64;
    let next = st.n_j + m;
    if next > ctx.terms.horizon {
        return Err(Error::Construction { block: j, reason: format!("N_{} = {next} beyond the summation horizon {}", j + 1, ctx.terms.horizon) });
    }
    let block = ctx.terms.range(st.n_j, next);
    let set_a: Vec<&Term> = block.iter().filter(|t| t.star && t.k == 1).collect();
    let set_b: Vec<&Term> = block.iter().filter(|t| t.star && t.k >= 2).collect();
    if set_a.is_empty() {
        return Err(Error::Construction { block: j, reason: format!("no large-coefficient primes in ({}, {next}]", st.n_j) });
    }
    let offset = ctx.offset();
    let s1 = (st.partial - cfg.target + offset.0).norm();
    let (b_sum, b_err, _) = ctx.twisted_by(&st.chi, st.n_j, next, |t| t.k >= 2).map_err(|e| match e {
        Error::Construction { reason, .. } => Error::Construction { block: j, reason },
        e => e,
    })?;
    let s2: f64 = set_b.iter().map(|t| t.b.norm() * weight(t, ctx.sigma)).sum();
    let s3: f64 = set_a.iter().map(|t| t.b.norm() * weight(t, ctx.sigma)).sum();
    let (s4, _) = ctx.tail_star_bounds(next);
    let lambda = st.partial - cfg.target + offset.0 + b_sum;
    let z0 = if lambda.norm() == 0.0 {
        Complex::new(0.0, 0.0)
    } else if lambda.norm() <= s3 {
        -lambda
    } else {
        -lambda * (s3 / lambda.norm())
    };
    let ratio = if s2 > 0.0 { s3 / s2 } else { f64::INFINITY };
    if ratio < cfg.ratio_threshold() {
        return Err(Error::BlockTooSmall { block: j, ratio, threshold: cfg.ratio_threshold() });
    }
    let radii: Vec<Complex64> = set_a.iter().map(|t| t.b * weight(t, ctx.sigma)).collect();
    let rs = RadiiSet::new(&radii)?;
    let inner = reachable_interval(&rs).inner;
    if inner > 0.0 {
        return Err(Error::Construction { block: j, reason: format!("inner radius {inner} of the block annulus is positive") });
    }
    let c = decompose(&rs, z0, 1e-13 * (1.0 + s3)).map_err(|e| Error::Construction { block: j, reason: e.to_string() })?;
    let mut chi = st.chi.clone();
    let mut a_sum = Complex::new(0.0, 0.0);
    for (t, cj) in set_a.iter().zip(&c) {
        chi.insert(t.p, *cj);
        a_sum += cj * radii[set_a.iter().position(|q| q.p == t.p).unwrap()];
    }
    let a_err = rounding(set_a.len(), s3) + 4.0 * f64::EPSILON * s3;
    let state = CasselsState {
        j: j + 1,
        n_j: next,
        m_j: m,
        sigma: ctx.sigma,
        chi,
        partial: st.partial + b_sum + a_sum,
        partial_error: st.partial_error + b_err + a_err,
        quantities: BlockQuantities { s0: st.quantities.s0, s1, s2, s3, s4, lambda, z0 },
        set_a: set_a.iter().map(|t| (t.p, 1)).collect(),
        set_b: set_b.iter().map(|t| (t.p, t.k)).collect(),
    };
    let cert = certificate(ctx, &state, offset, Some(ratio));
    Ok((state, cert))
}

/// Initial state after the first block, with its certificate.
pub fn initial_state(cfg: &CasselsConfig, sigma: f64) -> Result<(CasselsState, BlockCertificate)> {
    let ctx = Ctx { cfg, terms: Terms::new(&cfg.source, cfg.horizon, cfg.epsilon), sigma };
    initial_state_ctx(&ctx)
}

fn initial_state_ctx(ctx: &Ctx) -> Result<(CasselsState, BlockCertificate)> {
    let cfg = ctx.cfg;
    let (chi, _) = ctx.initial_block().map_err(|e| match e {
        Error::Unreachable { .. } => Error::SigmaInfeasible(format!("first block cannot reach {} at sigma {}", cfg.target, ctx.sigma)),
        e => e,
    })?;
    let (partial, partial_error, _) = ctx.twisted(&chi, 0, cfg.n1)?;
    let s0 = s0_bound(&cfg.source, cfg.epsilon, cfg.horizon);
    let st = CasselsState {
        j: 1,
        n_j: cfg.n1,
        m_j: (cfg.c0 * cfg.n1 as f64).floor() as u64,
        sigma: ctx.sigma,
        set_a: ctx.terms.range(0, cfg.n1).iter().filter(|t| t.star && t.k == 1).map(|t| (t.p, 1)).collect(),
        set_b: ctx.terms.range(0, cfg.n1).iter().filter(|t| t.star && t.k >= 2).map(|t| (t.p, t.k)).collect(),
        chi,
        partial,
        partial_error,
        quantities: BlockQuantities { s0, ..Default::default() },
    };
    let cert = certificate(ctx, &st, ctx.offset(), None);
    Ok((st, cert))
}

/// One block step from an existing state.
pub fn block_step(st: &CasselsState, cfg: &CasselsConfig) -> Result<(CasselsState, BlockCertificate)> {
    let ctx = Ctx { cfg, terms: Terms::new(&cfg.source, cfg.horizon, cfg.epsilon), sigma: st.sigma };
    block_step_ctx(&ctx, st)
}

pub fn run(cfg: &CasselsConfig) -> Result<CasselsRun> {
    let sigma = choose_sigma(cfg)?;
    run_at(cfg, sigma)
}

/// Run with sigma already chosen.
pub fn run_at(cfg: &CasselsConfig, sigma: f64) -> Result<CasselsRun> {
    cfg.validate()?;
    let ctx = Ctx { cfg, terms: Terms::new(&cfg.source, cfg.horizon, cfg.epsilon), sigma };
    let (mut st, cert) = initial_state_ctx(&ctx)?;
    let mut certificates = vec![cert];
    let mut records = vec![record(&st, certificates[0].margin)];
    let mut blocks = 0;
    while blocks < cfg.max_blocks && cfg.n_final.is_none_or(|n| st.n_j < n) {
        let (next, cert) = block_step_ctx(&ctx, &st)?;
        st = next;
        records.push(record(&st, cert.margin));
        certificates.push(cert);
        blocks += 1;
    }
    let offset = ctx.offset();
    let residual = (st.partial - cfg.target + offset.0).norm() + st.partial_error + offset.1;
    let (_, tail_hi) = ctx.tail_star_bounds(st.n_j);
    Ok(CasselsRun {
        residual,
        residual_bound: cfg.constant * tail_hi,
        tail_bound: tail_hi,
        offset: offset.0,
        offset_error: offset.1,
        state: st,
        certificates,
        records,
    })
}

fn record(st: &CasselsState, margin: f64) -> BlockRecord {
    BlockRecord {
        j: st.j,
        n_j: st.n_j,
        sigma: st.sigma,
        size_a: st.set_a.len(),
        size_b: st.set_b.len(),
        quantities: st.quantities.clone(),
        margin,
    }
}

impl CasselsRun {
    /// The finite twisted series `sum_{p^k <= N_J} chi(p)^k b(p^k) p^{-ks}`
    /// over the assigned primes, evaluated at arbitrary `s`.
    pub fn twisted_terms(&self, src: &Source) -> Vec<(u64, Complex64)> {
        let mut out = Vec::new();
        for (p, k, b) in src.terms_upto(self.state.n_j) {
            if let Some(c) = self.state.chi.get(&p) {
                out.push((p.pow(k), c.powu(k) * b));
            } else {
                out.push((p.pow(k), b));
            }
        }
        out
    }
}
