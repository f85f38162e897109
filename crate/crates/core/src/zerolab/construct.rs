//! Block construction, then a Kronecker shift, then a Rouché certificate.

use super::rouche::rouche_certify;
use super::{Comparator, DirichletPoly, EntryLogDeriv, Evaluable, LinearModel, ZeroCertificate};
use crate::cassels::{run, CasselsConfig, SigmaRule};
use crate::catalog::LFunctionEntry;
use crate::coeffs::log_derivative_source;
use crate::error::{Error, Result};
use crate::kronecker::{find_tau_grid, ShiftTarget};
use crate::Complex64;

const TAYLOR_RADII: [f64; 6] = [0.05, 0.02, 0.01, 0.005, 0.002, 0.001];
const NEWTON_STEP: f64 = 1e-6;
const RANKING_PRIMES: usize = 15;
const FIRST_BLOCKS: [u64; 4] = [50, 200, 800, 3200];

#[derive(Clone, Debug, PartialEq)]
pub struct ConstructConfig {
    pub m: u32,
    /// `L(s) = z` for `m = 0`, `(log L)^{(m)}(s) = z` otherwise.
    pub z: Complex64,
    pub delta: f64,
    pub sigma: Option<f64>,
    pub radius: Option<f64>,
    pub kronecker_primes: usize,
    pub epsilon1: f64,
    pub t_max: f64,
    pub candidates: usize,
    pub n_final: u64,
    pub tol: f64,
    pub allow_taylor: bool,
}

impl ConstructConfig {
    pub fn new(m: u32, z: Complex64, delta: f64) -> Self {
        Self {
            m,
            z,
            delta,
            sigma: None,
            radius: None,
            kronecker_primes: 4,
            epsilon1: 0.5,
            t_max: 2e5,
            candidates: 20,
            n_final: 2000,
            tol: 1e-10,
            allow_taylor: true,
        }
    }

    /// `1.4` for values, `1.95` for derivatives, kept inside `(a, a + 0.9 delta]`.
    pub fn sigma_for(&self, abscissa: f64) -> f64 {
        let base = self.sigma.unwrap_or(if self.m == 0 { 1.4 } else { 1.95 });
        base.min(abscissa + 0.9 * self.delta)
    }

    pub fn radius_for(&self, sigma: f64, abscissa: f64) -> f64 {
        self.radius.unwrap_or(0.15).min(0.5 * (sigma - abscissa))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConstructOutcome {
    /// Region in absolute coordinates.
    pub certificate: ZeroCertificate,
    pub tau: f64,
    pub sigma: f64,
    /// Target for `(log L)^{(m)}`.
    pub log_target: Complex64,
    pub kronecker_quality: f64,
    pub cassels_residual: f64,
    pub cassels_residual_bound: f64,
    /// Every block inequality and ratio check held.
    pub cassels_all_hold: bool,
    pub n_final: u64,
    pub attempts: usize,
    /// Refined solution when the local linear comparator was used.
    pub located: Option<Complex64>,
}

/// Fixed sigma first, then the reachability rule, for growing first blocks.
fn cassels_stage(src: &crate::Source, w: Complex64, cfg: &ConstructConfig, sigma0: f64) -> Result<crate::cassels::CasselsRun> {
    let mut last = None;
    for n1 in FIRST_BLOCKS {
        let mut ccfg = CasselsConfig::new(src.clone(), w);
        ccfg.delta = cfg.delta;
        ccfg.n1 = n1;
        ccfg.n_final = Some(cfg.n_final.max(4 * n1));
        ccfg.max_blocks = 64;
        ccfg.sigma_rule = SigmaRule::Fixed(sigma0);
        let mut rules = vec![SigmaRule::Fixed(sigma0)];
        if cfg.sigma.is_none() {
            rules.push(SigmaRule::Reachability);
        }
        for rule in rules {
            ccfg.sigma_rule = rule;
            match run(&ccfg) {
                Ok(r) => return Ok(r),
                Err(e @ (Error::Unreachable { .. } | Error::SigmaInfeasible(_))) => last = Some(e),
                Err(e) => return Err(stage_cassels(e)),
            }
        }
    }
    Err(stage_cassels(last.unwrap_or_else(|| Error::SigmaInfeasible("no first block".into()))))
}

fn stage_cassels(e: Error) -> Error {
    match e {
        Error::Unreachable { .. } | Error::BlockTooSmall { .. } | Error::Construction { .. } | Error::SigmaInfeasible(_) => {
            Error::SigmaInfeasible(e.to_string())
        }
        other => other,
    }
}

pub fn log_target(m: u32, z: Complex64) -> Result<Complex64> {
    if m > 0 {
        return Ok(z);
    }
    if z.norm() == 0.0 {
        return Err(Error::SigmaInfeasible("log L is finite where the Euler product converges, so L = 0 is unreachable".into()));
    }
    Ok(z.ln())
}

pub fn construct(entry: &LFunctionEntry, cfg: &ConstructConfig) -> Result<ConstructOutcome> {
    let mut all = construct_many(entry, cfg, 1)?;
    Ok(all.remove(0))
}

/// Up to `limit` certificates with pairwise disjoint regions, one per
/// candidate shift.
pub fn construct_many(entry: &LFunctionEntry, cfg: &ConstructConfig, limit: usize) -> Result<Vec<ConstructOutcome>> {
    let a = entry.abscissa_abs;
    let w = log_target(cfg.m, cfg.z)?;
    let src = log_derivative_source(&entry.source, cfg.m)?;
    let sigma0 = cfg.sigma_for(a);
    if !(sigma0 > a && sigma0 < a + cfg.delta) {
        return Err(Error::SigmaInfeasible(format!("no sigma in ({a}, {})", a + cfg.delta)));
    }
    let runout = cassels_stage(&src, w, cfg, sigma0)?;
    let sigma = runout.state.sigma;
    let r = cfg.radius_for(sigma, a);
    let f = DirichletPoly::new(runout.twisted_terms(&src));

    let starred: Vec<(u64, Complex64)> = runout.state.chi.iter().map(|(&p, &c)| (p, c)).collect();
    if starred.len() < cfg.kronecker_primes {
        return Err(Error::SigmaInfeasible("too few twisted primes for the shift".into()));
    }
    let kp = &starred[..cfg.kronecker_primes];
    let target = ShiftTarget::new(kp.iter().map(|x| x.0).collect(), kp.iter().map(|x| x.1).collect(), cfg.epsilon1)?;
    let hits = find_tau_grid(&target, cfg.t_max, target.default_step())?;
    if hits.is_empty() {
        return Err(Error::NoShift(format!("no tau in [0, {}] meets eps1 = {}", cfg.t_max, cfg.epsilon1)));
    }
    // rank by weighted discrepancy over the first few twisted primes
    let rank: Vec<(u64, Complex64, f64)> = starred
        .iter()
        .take(RANKING_PRIMES)
        .map(|&(p, c)| (p, c, src.b(p, 1).norm() * (p as f64).powf(-sigma + r)))
        .collect();
    let disc = |tau: f64| -> f64 {
        rank.iter().map(|&(p, c, wt)| wt * (Complex64::from_polar(1.0, -tau * (p as f64).ln()) - c).norm()).sum()
    };
    let mut scored: Vec<(f64, f64, f64)> = hits.iter().map(|h| (disc(h.tau), h.tau, h.quality)).collect();
    scored.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)));
    let mut picks: Vec<(f64, f64)> = Vec::new();
    for &(_, tau, q) in &scored {
        if tau > 0.0 && picks.iter().all(|&(t, _)| (t - tau).abs() > 1.0) {
            picks.push((tau, q));
            if picks.len() >= cfg.candidates {
                break;
            }
        }
    }
    let outcome = |cert: ZeroCertificate, tau: f64, q: f64, attempts: usize, located: Option<Complex64>| ConstructOutcome {
        certificate: cert,
        tau,
        sigma,
        log_target: w,
        kronecker_quality: q,
        cassels_residual: runout.residual,
        cassels_residual_bound: runout.residual_bound,
        cassels_all_hold: runout.certificates.iter().all(|c| c.holds && c.ratio_ok),
        n_final: runout.state.n_j,
        attempts,
        located,
    };
    let center = Complex64::new(sigma, 0.0);
    let mut found: Vec<ConstructOutcome> = Vec::new();
    let fresh = |found: &[ConstructOutcome], cert: &ZeroCertificate| found.iter().all(|o| o.certificate.region.disjoint(&cert.region));
    let mut attempts = 0;
    for &(tau, q) in &picks {
        if found.len() >= limit {
            break;
        }
        attempts += 1;
        let shift = Complex64::new(0.0, tau);
        let g = EntryLogDeriv { entry, m: cfg.m, shift, minus: Complex64::new(0.0, 0.0), tol: cfg.tol };
        match rouche_certify(&g, &f, center, r, w, a, Comparator::Cassels) {
            Ok((mut cert, _)) => {
                cert.region = cert.region.translated(shift);
                if fresh(&found, &cert) {
                    found.push(outcome(cert, tau, q, attempts, None));
                }
            }
            Err(Error::NoCertificate(_)) | Err(Error::Domain(_)) => {}
            Err(e) => return Err(e),
        }
    }
    if cfg.allow_taylor && found.len() < limit {
        for &(tau, q) in &picks {
            if found.len() >= limit {
                break;
            }
            if found.iter().any(|o| o.tau == tau) {
                continue;
            }
            attempts += 1;
            let shift = Complex64::new(0.0, tau);
            let g = EntryLogDeriv { entry, m: cfg.m, shift, minus: Complex64::new(0.0, 0.0), tol: cfg.tol };
            if let Some((mut cert, root)) = taylor_certify(&g, center, w, a, a + cfg.delta)? {
                cert.region = cert.region.translated(shift);
                if fresh(&found, &cert) {
                    found.push(outcome(cert, tau, q, attempts, Some(root + shift)));
                }
            }
        }
    }
    if found.is_empty() {
        return Err(Error::NoCertificate(format!("no Rouché margin for {} candidate shifts", picks.len())));
    }
    Ok(found)
}

fn central_difference(g: &dyn Evaluable, s: Complex64) -> Result<Complex64> {
    let h = NEWTON_STEP;
    Ok((g.eval(s + h)?.value - g.eval(s - h)?.value) / (2.0 * h))
}

/// Newton from `seed` on `g = w`, then Rouché against the tangent line at
/// the refined root. `None` when Newton leaves the strip or no radius works.
pub fn taylor_certify(
    g: &dyn Evaluable,
    seed: Complex64,
    w: Complex64,
    sigma_lo: f64,
    sigma_hi: f64,
) -> Result<Option<(ZeroCertificate, Complex64)>> {
    let mut s = seed;
    let mut converged = false;
    for _ in 0..40 {
        let v = match g.eval(s) {
            Ok(v) => v.value - w,
            Err(Error::Domain(_)) => return Ok(None),
            Err(e) => return Err(e),
        };
        let d = match central_difference(g, s) {
            Ok(d) => d,
            Err(Error::Domain(_)) => return Ok(None),
            Err(e) => return Err(e),
        };
        if d.norm() == 0.0 {
            return Ok(None);
        }
        let step = v / d;
        s -= step;
        if !(s.re > sigma_lo + 0.002 && s.re < sigma_hi) || (s - seed).norm() > 0.5 {
            return Ok(None);
        }
        if step.norm() < 1e-13 {
            converged = true;
            break;
        }
    }
    if !converged {
        return Ok(None);
    }
    let slope = central_difference(g, s)?;
    let lin = LinearModel { s0: s, slope, value: w };
    for r in TAYLOR_RADII {
        if !(r < s.re - sigma_lo && s.re + r < sigma_hi) {
            continue;
        }
        match rouche_certify(g, &lin, s, r, w, sigma_lo, Comparator::Taylor) {
            Ok((cert, _)) => return Ok(Some((cert, s))),
            Err(Error::NoCertificate(_)) | Err(Error::Domain(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(None)
}
