//! Concrete L-functions and their linear combinations.

pub mod selberg;
pub mod tau;

use std::path::PathBuf;

use num_complex::Complex;

use crate::certified::CertifiedValue;
use crate::coeffs::{b_to_a, log_derivative_source, CoefficientSource, DirichletCoefficients, ExtensionRule, GrowthCertificate};
use crate::error::{Error, Result};
use crate::eval::{abs_log_series_upper, eval_log_l};
use crate::primes::simple_sieve;
use crate::zeta_em::{eval_chi4_em, eval_zeta_deriv_em, eval_zeta_em, Order};
use crate::{Ball, Coefficients, Complex64, Growth, Source};

/// Sup of `d(n) / n^{1/3}`, attained at `n = 2520`.
pub const DIVISOR_CUBE_ROOT_CONST: f64 = 3.53;

pub const BUILTIN_NAMES: [&str; 7] =
    ["zeta", "chi4", "delta_norm", "zeta_over_zeta2s", "euler_zagier_diag", "epstein_I6", "epstein_L24"];

/// `chi_{-4}(n)`.
pub fn chi4(n: u64) -> f64 {
    match n % 4 {
        1 => 1.0,
        3 => -1.0,
        _ => 0.0,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EmKind {
    Zeta,
    Chi4,
}

/// `F(scale * s + offset)^power` with `F` one of the Euler–Maclaurin
/// backends.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EmFactor {
    pub kind: EmKind,
    pub scale: f64,
    pub offset: f64,
    pub power: i32,
}

impl EmFactor {
    pub const fn new(kind: EmKind, scale: f64, offset: f64, power: i32) -> Self {
        Self { kind, scale, offset, power }
    }

    fn arg(&self, s: Complex64) -> Complex64 {
        s * self.scale + self.offset
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Backend {
    RawSeries,
    /// Product of Euler–Maclaurin factors.
    EulerMaclaurin(Vec<EmFactor>),
}

#[derive(Clone, Debug)]
pub struct LFunctionEntry {
    pub name: String,
    pub source: Source,
    pub coeffs: Coefficients,
    pub backend: Backend,
    pub expected_kappa: Option<f64>,
    pub abscissa_abs: f64,
}

#[derive(Clone, Debug)]
pub struct ComboPart {
    pub coefficient: Complex64,
    pub entry: LFunctionEntry,
    pub shift: Complex64,
}

/// `sum_j c_j L_j(s + eta_j)`.
#[derive(Clone, Debug)]
pub struct ComboEntry {
    pub name: String,
    pub parts: Vec<ComboPart>,
}

#[derive(Clone, Debug)]
pub enum Builtin {
    Entry(LFunctionEntry),
    Combo(ComboEntry),
}

impl Builtin {
    pub fn name(&self) -> &str {
        match self {
            Builtin::Entry(e) => &e.name,
            Builtin::Combo(c) => &c.name,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CatalogConfig {
    /// Primes and prime powers tabulated up to here.
    pub p_max: u64,
    /// Dirichlet coefficients materialized up to here (at most `p_max`).
    pub n_max: u64,
    /// Where to keep the tau table between runs.
    pub tau_cache: Option<PathBuf>,
}

impl Default for CatalogConfig {
    fn default() -> Self {
        Self { p_max: 100_000, n_max: 10_000, tau_cache: None }
    }
}

impl CatalogConfig {
    fn validate(&self) -> Result<()> {
        if self.p_max < 2 || self.n_max < 1 || self.n_max > self.p_max {
            return Err(Error::Invalid(format!("need 1 <= n_max <= p_max, got n_max {} p_max {}", self.n_max, self.p_max)));
        }
        Ok(())
    }
}

fn growth(a0: f64, e0: f64, b0: f64, theta: f64) -> Growth {
    GrowthCertificate::new(a0, e0, b0, theta).expect("catalog constants valid")
}

fn c(re: f64) -> Complex64 {
    Complex::new(re, 0.0)
}

fn entry_from_fn<F>(name: &str, cfg: &CatalogConfig, g: Growth, backend: Backend, kappa: Option<f64>, f: F) -> Result<LFunctionEntry>
where
    F: Fn(u64, u32) -> Complex64 + Send + Sync + 'static,
{
    let source = CoefficientSource::from_fn(cfg.p_max, g, true, f)?;
    let coeffs = b_to_a(&source, cfg.n_max)?;
    Ok(LFunctionEntry { name: name.into(), source, coeffs, backend, expected_kappa: kappa, abscissa_abs: 1.0 })
}

impl LFunctionEntry {
    fn floored(mut self, floor: f64) -> Self {
        self.source = self.source.with_large_prime_floor(floor);
        self
    }
}

use EmKind::{Chi4, Zeta};

pub fn zeta(cfg: &CatalogConfig) -> Result<LFunctionEntry> {
    let b = Backend::EulerMaclaurin(vec![EmFactor::new(Zeta, 1.0, 0.0, 1)]);
    entry_from_fn("zeta", cfg, Growth::unit(), b, Some(1.0), |_, k| c(1.0 / k as f64)).map(|e| e.floored(1.0))
}

pub fn chi4_entry(cfg: &CatalogConfig) -> Result<LFunctionEntry> {
    let b = Backend::EulerMaclaurin(vec![EmFactor::new(Chi4, 1.0, 0.0, 1)]);
    entry_from_fn("chi4", cfg, Growth::unit(), b, Some(1.0), |p, k| c(chi4(p).powi(k as i32) / k as f64)).map(|e| e.floored(1.0))
}

pub fn zeta_over_zeta2s(cfg: &CatalogConfig) -> Result<LFunctionEntry> {
    let b = Backend::EulerMaclaurin(vec![EmFactor::new(Zeta, 1.0, 0.0, 1), EmFactor::new(Zeta, 2.0, 0.0, -1)]);
    entry_from_fn("zeta_over_zeta2s", cfg, Growth::unit(), b, Some(1.0), |_, k| {
        c(if k % 2 == 1 { 1.0 } else { -1.0 } / k as f64)
    })
    .map(|e| e.floored(1.0))
}

/// `zeta(s)^2`, coefficients `d(n)`.
pub fn zeta_sq(cfg: &CatalogConfig) -> Result<LFunctionEntry> {
    let b = Backend::EulerMaclaurin(vec![EmFactor::new(Zeta, 1.0, 0.0, 1), EmFactor::new(Zeta, 1.0, 0.0, 1)]);
    let g = growth(DIVISOR_CUBE_ROOT_CONST, 1.0 / 3.0, 2.0, 0.0);
    entry_from_fn("zeta_sq", cfg, g, b, Some(4.0), |_, k| c(2.0 / k as f64)).map(|e| e.floored(2.0))
}

/// `zeta(2s)`, supported on squares.
pub fn zeta_2s(cfg: &CatalogConfig) -> Result<LFunctionEntry> {
    let b = Backend::EulerMaclaurin(vec![EmFactor::new(Zeta, 2.0, 0.0, 1)]);
    let mut e = entry_from_fn("zeta_2s", cfg, Growth::unit(), b, Some(0.0), |_, k| {
        c(if k % 2 == 0 { 2.0 / k as f64 } else { 0.0 })
    })?;
    e.abscissa_abs = 0.5;
    Ok(e)
}

/// `zeta(s + u) L(s + v, chi_{-4})`.
fn zeta_chi4_product(name: &str, cfg: &CatalogConfig, u: f64, v: f64) -> Result<LFunctionEntry> {
    let b = Backend::EulerMaclaurin(vec![EmFactor::new(Zeta, 1.0, u, 1), EmFactor::new(Chi4, 1.0, v, 1)]);
    // a(n) = sum_{d | n} chi(d) d^{-v} (n/d)^{-u}, bounded by zeta(2) when u or v is 2
    let g = growth(1.65, 0.0, 2.0, 0.0);
    let mut e = entry_from_fn(name, cfg, g, b, None, move |p, k| {
        let pf = p as f64;
        c((pf.powf(-u * k as f64) + chi4(p).powi(k as i32) * pf.powf(-v * k as f64)) / k as f64)
    })?;
    e.abscissa_abs = 1.0 - u.max(v);
    Ok(e)
}

/// `zeta(s) zeta(s + 11)`.
fn zeta_zeta11(cfg: &CatalogConfig) -> Result<LFunctionEntry> {
    let b = Backend::EulerMaclaurin(vec![EmFactor::new(Zeta, 1.0, 0.0, 1), EmFactor::new(Zeta, 1.0, 11.0, 1)]);
    let g = growth(1.001, 0.0, 2.0, 0.0);
    entry_from_fn("zeta_zeta11", cfg, g, b, Some(1.0), |p, k| c((1.0 + (p as f64).powf(-11.0 * k as f64)) / k as f64))
}

/// `sum tau(n) n^{-11/2} n^{-s}`: `b(p^k) = (alpha^k + beta^k)/k` with
/// `alpha + beta = tau(p) p^{-11/2}`, `alpha beta = 1`.
pub fn delta_norm(cfg: &CatalogConfig) -> Result<LFunctionEntry> {
    let n = cfg.p_max as usize;
    let tau = match &cfg.tau_cache {
        Some(path) => tau::load_or_build(path, n)?,
        None => tau::ramanujan_tau(n)?,
    };
    let primes = simple_sieve(cfg.p_max);
    let table: Vec<Vec<Complex64>> = primes
        .iter()
        .map(|&p| {
            let lambda = tau::normalized(&tau[p as usize - 1], p);
            let kmax = crate::coeffs::max_exponent(p, cfg.p_max);
            let (mut prev, mut cur) = (2.0, lambda);
            let mut row = Vec::with_capacity(kmax as usize);
            for k in 1..=kmax {
                row.push(c(cur / k as f64));
                let next = lambda * cur - prev;
                prev = cur;
                cur = next;
            }
            row
        })
        .collect();
    let g = growth(DIVISOR_CUBE_ROOT_CONST, 1.0 / 3.0, 2.0, 0.0);
    let source = CoefficientSource::from_table(cfg.p_max, primes, table, ExtensionRule::ZeroBeyondCutoff, g)?;
    let a: Vec<Complex64> =
        (1..=cfg.n_max as usize).map(|m| c(tau::normalized(&tau[m - 1], m as u64))).collect();
    let coeffs = DirichletCoefficients::from_slice(&a, g)?;
    Ok(LFunctionEntry {
        name: "delta_norm".into(),
        source,
        coeffs,
        backend: Backend::RawSeries,
        expected_kappa: Some(1.0),
        abscissa_abs: 1.0,
    })
}

/// Printed normalized form of the coefficient difference behind the
/// Epstein zeta function of `I_6`: `b(p) = (1 + p^{-2})(1 - chi(p))`.
pub fn chi4diff_source(p_max: u64) -> Result<Source> {
    let g = growth(3.0, 1.0 / 3.0, 2.5, 0.0);
    CoefficientSource::from_fn(p_max, g, true, |p, k| {
        if k == 1 {
            c((1.0 + (p as f64).powi(-2)) * (1.0 - chi4(p)))
        } else {
            c(0.0)
        }
    })
}

fn part(coefficient: f64, entry: LFunctionEntry, shift: f64) -> ComboPart {
    ComboPart { coefficient: c(coefficient), entry, shift: c(shift) }
}

pub fn euler_zagier_diag(cfg: &CatalogConfig) -> Result<ComboEntry> {
    Ok(ComboEntry {
        name: "euler_zagier_diag".into(),
        parts: vec![part(0.5, zeta_sq(cfg)?, 0.0), part(-0.5, zeta_2s(cfg)?, 0.0)],
    })
}

/// `-4 (zeta(s) L(s-2) - 4 zeta(s-2) L(s))`, as
/// `-4 [zeta(.+2) L](s-2) + 16 [zeta L(.+2)](s-2)`.
pub fn epstein_i6(cfg: &CatalogConfig) -> Result<ComboEntry> {
    Ok(ComboEntry {
        name: "epstein_I6".into(),
        parts: vec![
            part(-4.0, zeta_chi4_product("zeta_s2_chi4", cfg, 2.0, 0.0)?, -2.0),
            part(16.0, zeta_chi4_product("zeta_chi4_s2", cfg, 0.0, 2.0)?, -2.0),
        ],
    })
}

/// `(65520/691)(zeta(s) zeta(s-11) - L(s; Delta))`.
pub fn epstein_l24(cfg: &CatalogConfig) -> Result<ComboEntry> {
    let k = 65520.0 / 691.0;
    Ok(ComboEntry {
        name: "epstein_L24".into(),
        parts: vec![part(k, zeta_zeta11(cfg)?, -11.0), part(-k, delta_norm(cfg)?, -5.5)],
    })
}

pub fn builtin(name: &str) -> Result<Builtin> {
    builtin_with(name, &CatalogConfig::default())
}

pub fn builtin_with(name: &str, cfg: &CatalogConfig) -> Result<Builtin> {
    cfg.validate()?;
    Ok(match name {
        "zeta" => Builtin::Entry(zeta(cfg)?),
        "chi4" => Builtin::Entry(chi4_entry(cfg)?),
        "delta_norm" => Builtin::Entry(delta_norm(cfg)?),
        "zeta_over_zeta2s" => Builtin::Entry(zeta_over_zeta2s(cfg)?),
        "zeta_sq" => Builtin::Entry(zeta_sq(cfg)?),
        "zeta_2s" => Builtin::Entry(zeta_2s(cfg)?),
        "euler_zagier_diag" => Builtin::Combo(euler_zagier_diag(cfg)?),
        "epstein_I6" => Builtin::Combo(epstein_i6(cfg)?),
        "epstein_L24" => Builtin::Combo(epstein_l24(cfg)?),
        other => return Err(Error::UnknownEntry(other.into())),
    })
}

// ---------------------------------------------------------------------------
// evaluation

/// Upper bounds `zeta(sigma)` and `-zeta'(sigma)` for real `sigma > 1`.
fn zeta_real_upper(sigma: f64) -> Result<(f64, f64)> {
    let s = c(sigma);
    let z = eval_zeta_em(s, 1e-12)?;
    let d = eval_zeta_deriv_em(s, 1e-12)?;
    Ok((z.value.re + z.error_bound, -d.value.re + d.error_bound))
}

/// Upper bound on `sum_n (log n)^j n^{-sigma}` for `sigma > 1`.
pub fn log_moment_upper(j: u32, sigma: f64) -> Result<f64> {
    if !(sigma > 1.0) {
        return Err(Error::Domain(format!("log moments need sigma > 1, got {sigma}")));
    }
    match j {
        0 => Ok(zeta_real_upper(sigma)?.0),
        1 => Ok(zeta_real_upper(sigma)?.1),
        _ => {
            // (log n)^{j-1} <= ((j-1)/(e h))^{j-1} n^h
            let h = (sigma - 1.0) / 2.0;
            let c = ((j - 1) as f64 / (std::f64::consts::E * h)).powi(j as i32 - 1);
            Ok(c * zeta_real_upper(sigma - h)?.1)
        }
    }
}

/// Upper bound on `sum_n Lambda(n) (log n)^{j-1} n^{-sigma}`, `j >= 1`.
pub fn lambda_moment_upper(j: u32, sigma: f64) -> Result<f64> {
    if !(sigma > 1.0) || j == 0 {
        return Err(Error::Domain(format!("von Mangoldt moments need sigma > 1 and j >= 1, got j = {j}, sigma = {sigma}")));
    }
    let ratio = |x: f64| -> Result<f64> {
        let z = eval_zeta_em(c(x), 1e-12)?;
        let d = eval_zeta_deriv_em(c(x), 1e-12)?;
        Ok((-d.value.re + d.error_bound) / (z.value.re - z.error_bound))
    };
    if j == 1 {
        return ratio(sigma);
    }
    let h = (sigma - 1.0) / 2.0;
    let c = ((j - 1) as f64 / (std::f64::consts::E * h)).powi(j as i32 - 1);
    Ok(c * ratio(sigma - h)?)
}

fn em_factor_value(f: &EmFactor, s: Complex64, tol: f64, order: Order) -> Result<Ball> {
    let w = f.arg(s);
    match (f.kind, order) {
        (EmKind::Zeta, Order::Value) => eval_zeta_em(w, tol),
        (EmKind::Zeta, Order::Derivative) => eval_zeta_deriv_em(w, tol),
        (EmKind::Chi4, o) => eval_chi4_em(w, tol, o),
    }
}

fn raw_tolerance(entry: &LFunctionEntry, sigma: f64, tol: f64) -> f64 {
    let x = entry.source.p_max().min(1_000_000);
    let mass = abs_log_series_upper(&entry.source, sigma, x);
    (tol / (4.0 * mass.exp())).min(0.25)
}

/// `L(s)` for an entry, using its backend.
pub fn eval_entry(entry: &LFunctionEntry, s: Complex64, tol: f64) -> Result<Ball> {
    check_abscissa(entry, s)?;
    match &entry.backend {
        Backend::EulerMaclaurin(factors) => {
            let per = tol / (4.0 * factors.len() as f64 * em_product_scale(factors, s.re)?);
            let mut acc = CertifiedValue::exact(c(1.0));
            for f in factors {
                let v = em_factor_value(f, s, per, Order::Value)?;
                acc = acc * power(v, f.power)?;
            }
            Ok(acc)
        }
        Backend::RawSeries => {
            let t = raw_tolerance(entry, s.re, tol);
            Ok(eval_log_l(&entry.source, s, t)?.exp())
        }
    }
}

/// `L'(s)` for an entry.
pub fn eval_entry_deriv(entry: &LFunctionEntry, s: Complex64, tol: f64) -> Result<Ball> {
    check_abscissa(entry, s)?;
    let l = eval_entry(entry, s, tol / 4.0)?;
    let ld = eval_entry_log_deriv(entry, 1, s, tol / (4.0 * l.abs_upper().max(1.0)))?;
    Ok(l * ld)
}

/// `(log L)^{(m)}(s)`, on the branch given by the log-series for `m = 0`.
pub fn eval_entry_log_deriv(entry: &LFunctionEntry, m: u32, s: Complex64, tol: f64) -> Result<Ball> {
    check_abscissa(entry, s)?;
    match (&entry.backend, m) {
        (Backend::EulerMaclaurin(factors), 0) => {
            let mut acc = CertifiedValue::exact(c(0.0));
            let per = tol / factors.len() as f64;
            for f in factors {
                let w = f.arg(s);
                if !(w.re > 1.0) {
                    return Err(Error::Domain(format!("log of a factor at Re {} <= 1", w.re)));
                }
                // |log F(w)| <= log zeta(Re w) < pi fixes the principal branch
                let (zu, _) = zeta_real_upper(w.re)?;
                if zu.ln() >= std::f64::consts::PI - 0.1 {
                    return Err(Error::Domain(format!("branch of log undetermined at Re {}", w.re)));
                }
                let v = em_factor_value(f, s, per / (4.0 * zu), Order::Value)?;
                let lv = v.ln().ok_or_else(|| Error::Domain("log near zero or branch cut".into()))?;
                acc = acc + lv.scale(c(f.power as f64));
            }
            Ok(acc)
        }
        (Backend::EulerMaclaurin(factors), 1) => {
            let mut acc = CertifiedValue::exact(c(0.0));
            for f in factors {
                let (zu, _) = zeta_real_upper(f.arg(s).re)?;
                let t = tol / (8.0 * factors.len() as f64 * zu * zu * f.scale.abs().max(1.0));
                let v = em_factor_value(f, s, t, Order::Value)?;
                let d = em_factor_value(f, s, t, Order::Derivative)?;
                let q = d.div(v).ok_or_else(|| Error::Domain("factor vanishes".into()))?;
                acc = acc + q.scale(c(f.scale * f.power as f64));
            }
            Ok(acc)
        }
        _ => {
            let src = log_derivative_source(&entry.source, m)?;
            eval_log_l(&src, s, tol)
        }
    }
}

fn check_abscissa(entry: &LFunctionEntry, s: Complex64) -> Result<()> {
    if !(s.re > entry.abscissa_abs) {
        return Err(Error::Domain(format!("{} needs Re(s) > {}, got {}", entry.name, entry.abscissa_abs, s.re)));
    }
    Ok(())
}

fn power(v: Ball, p: i32) -> Result<Ball> {
    if p >= 0 {
        Ok(v.powi(p as u32))
    } else {
        v.powi((-p) as u32).recip().ok_or_else(|| Error::Domain("division by a ball containing 0".into()))
    }
}

/// Bound on the product of factor moduli, used to split tolerances.
fn em_product_scale(factors: &[EmFactor], sigma: f64) -> Result<f64> {
    let mut acc = 1.0;
    for f in factors {
        let w = f.scale * sigma + f.offset;
        if w > 1.0 {
            acc *= zeta_real_upper(w)?.0.powi(f.power.abs());
        } else {
            acc *= 8.0;
        }
    }
    Ok(acc.max(1.0))
}

/// Upper bound on `|(log L)^{(j)}(s)|` over `Re s >= sigma`, `j >= 1`.
pub fn log_deriv_abs_bound(entry: &LFunctionEntry, j: u32, sigma: f64) -> Result<f64> {
    match &entry.backend {
        Backend::EulerMaclaurin(factors) => {
            let mut acc = 0.0;
            for f in factors {
                // |(log F)^{(j)}(w)| <= sum Lambda(n) (log n)^{j-1} n^{-Re w}
                acc += (f.power.abs() as f64) * f.scale.abs().powi(j as i32) * lambda_moment_upper(j, f.scale * sigma + f.offset)?;
            }
            Ok(acc)
        }
        Backend::RawSeries => {
            let src = log_derivative_source(&entry.source, j)?;
            Ok(abs_log_series_upper(&src, sigma, src.p_max().min(1_000_000)))
        }
    }
}

/// Upper bound on `|L(s)|` over `Re s >= sigma`.
pub fn abs_bound(entry: &LFunctionEntry, sigma: f64) -> Result<f64> {
    match &entry.backend {
        Backend::EulerMaclaurin(factors) => {
            let mut acc = 1.0;
            for f in factors {
                let w = f.scale * sigma + f.offset;
                if !(w > 1.0) {
                    return Err(Error::Domain(format!("no modulus bound at Re {w}")));
                }
                // |F(w)^{+-1}| <= zeta(Re w)
                acc *= zeta_real_upper(w)?.0.powi(f.power.abs());
            }
            Ok(acc)
        }
        Backend::RawSeries => {
            let x = entry.source.p_max().min(1_000_000);
            Ok(abs_log_series_upper(&entry.source, sigma, x).exp())
        }
    }
}

/// Upper bound on `|L'(s)|` over `Re s >= sigma`.
pub fn deriv_abs_bound(entry: &LFunctionEntry, sigma: f64) -> Result<f64> {
    Ok(abs_bound(entry, sigma)? * log_deriv_abs_bound(entry, 1, sigma)?)
}

/// Upper bound on `|L''(s)|` over `Re s >= sigma`, from
/// `L'' = L ((log L)'' + (log L)'^2)`.
pub fn second_deriv_abs_bound(entry: &LFunctionEntry, sigma: f64) -> Result<f64> {
    let b1 = log_deriv_abs_bound(entry, 1, sigma)?;
    Ok(abs_bound(entry, sigma)? * (log_deriv_abs_bound(entry, 2, sigma)? + b1 * b1))
}

impl ComboEntry {
    /// Half-plane on which every part is evaluable.
    pub fn abscissa(&self) -> f64 {
        self.parts.iter().map(|p| p.entry.abscissa_abs - p.shift.re).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn eval(&self, s: Complex64, tol: f64) -> Result<Ball> {
        let per = tol / self.parts.len() as f64;
        let mut acc = CertifiedValue::exact(c(0.0));
        for p in &self.parts {
            let v = eval_entry(&p.entry, s + p.shift, per / p.coefficient.norm())?;
            acc = acc + v.scale(p.coefficient);
        }
        Ok(acc)
    }

    pub fn eval_deriv(&self, s: Complex64, tol: f64) -> Result<Ball> {
        let per = tol / self.parts.len() as f64;
        let mut acc = CertifiedValue::exact(c(0.0));
        for p in &self.parts {
            let v = eval_entry_deriv(&p.entry, s + p.shift, per / p.coefficient.norm())?;
            acc = acc + v.scale(p.coefficient);
        }
        Ok(acc)
    }

    pub fn second_deriv_abs_bound(&self, sigma: f64) -> Result<f64> {
        let mut acc = 0.0;
        for p in &self.parts {
            acc += p.coefficient.norm() * second_deriv_abs_bound(&p.entry, sigma + p.shift.re)?;
        }
        Ok(acc)
    }

    /// Upper bound on `|d/ds combo|` over `Re s >= sigma`.
    pub fn deriv_abs_bound(&self, sigma: f64) -> Result<f64> {
        let mut acc = 0.0;
        for p in &self.parts {
            acc += p.coefficient.norm() * deriv_abs_bound(&p.entry, sigma + p.shift.re)?;
        }
        Ok(acc)
    }
}
