//! Logarithmic coefficients `b(p^k)`, Dirichlet coefficients `a(n)`, and the
//! transforms between them.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::primes::simple_sieve;
use crate::scalar::Real;

/// Explicit constants for `|a(n)| <= A0 n^e0` and `|b(p^k)| <= A p^{k theta}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GrowthCertificate<R: Real> {
    pub a_bound_const: R,
    pub a_bound_exp: R,
    pub b_bound_const: R,
    pub b_bound_exp: R,
}

impl<R: Real> GrowthCertificate<R> {
    pub fn new(a_bound_const: R, a_bound_exp: R, b_bound_const: R, b_bound_exp: R) -> Result<Self> {
        if !(a_bound_const > R::zero()) || !(b_bound_const > R::zero()) {
            return Err(Error::Growth("bound constants must be positive".into()));
        }
        if !(a_bound_exp >= R::zero()) {
            return Err(Error::Growth("a_bound_exp must be non-negative".into()));
        }
        if !(b_bound_exp >= R::zero() && b_bound_exp < R::lit(0.5)) {
            return Err(Error::Growth(format!("b_bound_exp {b_bound_exp} not in [0, 1/2)")));
        }
        Ok(Self { a_bound_const, a_bound_exp, b_bound_const, b_bound_exp })
    }

    /// `|a(n)| <= 1`, `|b(p^k)| <= 1`.
    pub fn unit() -> Self {
        Self { a_bound_const: R::one(), a_bound_exp: R::zero(), b_bound_const: R::one(), b_bound_exp: R::zero() }
    }

    pub fn b_bound(&self, p: u64, k: u32) -> R {
        self.b_bound_const * R::lit(p as f64).powf(self.b_bound_exp * R::lit(k as f64))
    }

    pub fn a_bound(&self, n: u64) -> R {
        self.a_bound_const * R::lit(n as f64).powf(self.a_bound_exp)
    }
}

/// Closed-form rule `(p, k) -> b(p^k)` used beyond the tabulated range.
pub type CoefficientFn<R> = Arc<dyn Fn(u64, u32) -> Complex<R> + Send + Sync>;

#[derive(Clone)]
pub enum ExtensionRule<R: Real> {
    ZeroBeyondCutoff,
    ClosedForm(CoefficientFn<R>),
}

impl<R: Real> fmt::Debug for ExtensionRule<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::ZeroBeyondCutoff => f.write_str("ZeroBeyondCutoff"),
            Self::ClosedForm(_) => f.write_str("ClosedForm(..)"),
        }
    }
}

/// Tabulated `b(p^k)` for `p <= p_max` and every `k` with `p^k <= p_max`
/// (at least `k = 1`), plus a rule for what lies beyond.
#[derive(Clone, Debug)]
pub struct CoefficientSource<R: Real> {
    p_max: u64,
    primes: Vec<u64>,
    /// `table[i][k-1] = b(primes[i]^k)`
    table: Vec<Vec<Complex<R>>>,
    extension: ExtensionRule<R>,
    growth: GrowthCertificate<R>,
    /// Certified lower bound on `|b(p)|` for primes beyond `p_max`, if known.
    large_prime_floor: Option<R>,
}

/// Largest `k` with `p^k <= limit`, at least 1.
pub fn max_exponent(p: u64, limit: u64) -> u32 {
    let mut k = 1;
    let mut pk = p as u128;
    while pk * (p as u128) <= limit as u128 {
        pk *= p as u128;
        k += 1;
    }
    k
}

impl<R: Real> CoefficientSource<R> {
    /// Tabulate `f` for all prime powers up to `p_max`. With `closed_form`
    /// set, `f` also serves as the extension rule beyond `p_max`.
    pub fn from_fn<F>(p_max: u64, growth: GrowthCertificate<R>, closed_form: bool, f: F) -> Result<Self>
    where
        F: Fn(u64, u32) -> Complex<R> + Send + Sync + 'static,
    {
        let primes = if p_max >= 2 { simple_sieve(p_max) } else { Vec::new() };
        let table = primes
            .iter()
            .map(|&p| (1..=max_exponent(p, p_max)).map(|k| f(p, k)).collect())
            .collect();
        let extension = if closed_form { ExtensionRule::ClosedForm(Arc::new(f)) } else { ExtensionRule::ZeroBeyondCutoff };
        Self::from_table(p_max, primes, table, extension, growth)
    }

    pub fn from_table(
        p_max: u64,
        primes: Vec<u64>,
        table: Vec<Vec<Complex<R>>>,
        extension: ExtensionRule<R>,
        growth: GrowthCertificate<R>,
    ) -> Result<Self> {
        if primes.len() != table.len() {
            return Err(Error::Invalid("prime list and table lengths differ".into()));
        }
        let slack = R::one() + R::lit(1e-9);
        for (&p, row) in primes.iter().zip(&table) {
            let needed = max_exponent(p, p_max) as usize;
            if row.len() < needed {
                return Err(Error::Invalid(format!("prime {p}: {} exponents tabulated, {needed} required", row.len())));
            }
            for (i, b) in row.iter().enumerate() {
                let k = i as u32 + 1;
                if !(b.norm() <= growth.b_bound(p, k) * slack) {
                    return Err(Error::Growth(format!("|b({p}^{k})| = {} exceeds the certificate", b.norm())));
                }
            }
        }
        Ok(Self { p_max, primes, table, extension, growth, large_prime_floor: None })
    }

    pub fn with_large_prime_floor(mut self, floor: R) -> Self {
        self.large_prime_floor = Some(floor);
        self
    }

    pub fn p_max(&self) -> u64 {
        self.p_max
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn growth(&self) -> &GrowthCertificate<R> {
        &self.growth
    }

    pub fn extension(&self) -> &ExtensionRule<R> {
        &self.extension
    }

    pub fn large_prime_floor(&self) -> Option<R> {
        self.large_prime_floor
    }

    pub fn has_closed_form(&self) -> bool {
        matches!(self.extension, ExtensionRule::ClosedForm(_))
    }

    /// Tabulated exponents for the `i`-th prime.
    pub fn row(&self, i: usize) -> &[Complex<R>] {
        &self.table[i]
    }

    /// `b(p^k)`, from the table, the closed form, or zero.
    pub fn b(&self, p: u64, k: u32) -> Complex<R> {
        if k == 0 {
            return Complex::new(R::zero(), R::zero());
        }
        if p <= self.p_max {
            if let Ok(i) = self.primes.binary_search(&p) {
                if let Some(v) = self.table[i].get(k as usize - 1) {
                    return *v;
                }
            } else {
                return Complex::new(R::zero(), R::zero());
            }
        }
        match &self.extension {
            ExtensionRule::ClosedForm(f) => f(p, k),
            ExtensionRule::ZeroBeyondCutoff => Complex::new(R::zero(), R::zero()),
        }
    }

    /// All `(p, k, b(p^k))` with `p^k <= x`. Beyond `p_max` the closed form is
    /// used when present; otherwise the enumeration stops at `p_max`.
    pub fn terms_upto(&self, x: u64) -> Vec<(u64, u32, Complex<R>)> {
        let mut out = Vec::new();
        let limit = if self.has_closed_form() { x } else { x.min(self.p_max) };
        if limit < 2 {
            return out;
        }
        let primes: std::borrow::Cow<[u64]> =
            if limit <= self.p_max { std::borrow::Cow::Borrowed(&self.primes) } else { std::borrow::Cow::Owned(simple_sieve(limit)) };
        for &p in primes.iter() {
            if p > limit {
                break;
            }
            let kmax = max_exponent(p, limit);
            for k in 1..=kmax {
                out.push((p, k, self.b(p, k)));
            }
        }
        out
    }

    /// Map every coefficient through `f(p, k, b)`; the growth certificate is
    /// replaced by `growth`.
    pub fn map<F>(&self, growth: GrowthCertificate<R>, f: F) -> Result<Self>
    where
        F: Fn(u64, u32, Complex<R>) -> Complex<R> + Send + Sync + Clone + 'static,
    {
        let table = self
            .primes
            .iter()
            .zip(&self.table)
            .map(|(&p, row)| row.iter().enumerate().map(|(i, &b)| f(p, i as u32 + 1, b)).collect())
            .collect();
        let extension = match &self.extension {
            ExtensionRule::ZeroBeyondCutoff => ExtensionRule::ZeroBeyondCutoff,
            ExtensionRule::ClosedForm(g) => {
                let g = g.clone();
                ExtensionRule::ClosedForm(Arc::new(move |p, k| f(p, k, g(p, k))))
            }
        };
        Self::from_table(self.p_max, self.primes.clone(), table, extension, growth)
    }

    /// Coefficients of `log L(s + shift)` for real `shift >= 0`.
    pub fn shifted(&self, shift: R) -> Result<Self> {
        if shift < R::zero() {
            return Err(Error::Invalid("source shifts must be non-negative".into()));
        }
        let g = self.growth;
        self.map(g, move |p, k, b| b * R::lit(p as f64).powf(-shift * R::lit(k as f64)))
            .map(|s| s.with_floor_opt(None))
    }

    /// Coefficients of `log L1 + log L2`, i.e. of the product `L1 L2`.
    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.combine(other, R::one())
    }

    /// Coefficients of `log L1 - log L2`, i.e. of the quotient `L1 / L2`.
    pub fn difference(&self, other: &Self) -> Result<Self> {
        self.combine(other, -R::one())
    }

    fn combine(&self, other: &Self, sign: R) -> Result<Self> {
        if self.p_max != other.p_max {
            return Err(Error::Invalid("sources must share a tabulation range".into()));
        }
        let growth = GrowthCertificate {
            a_bound_const: self.growth.a_bound_const * other.growth.a_bound_const,
            a_bound_exp: self.growth.a_bound_exp + other.growth.a_bound_exp,
            b_bound_const: self.growth.b_bound_const + other.growth.b_bound_const,
            b_bound_exp: self.growth.b_bound_exp.max(other.growth.b_bound_exp),
        };
        let table = self
            .table
            .iter()
            .zip(&other.table)
            .map(|(r1, r2)| r1.iter().zip(r2).map(|(&x, &y)| x + y * sign).collect())
            .collect();
        let extension = match (&self.extension, &other.extension) {
            (ExtensionRule::ClosedForm(f), ExtensionRule::ClosedForm(g)) => {
                let (f, g) = (f.clone(), g.clone());
                ExtensionRule::ClosedForm(Arc::new(move |p, k| f(p, k) + g(p, k) * sign))
            }
            _ => ExtensionRule::ZeroBeyondCutoff,
        };
        Self::from_table(self.p_max, self.primes.clone(), table, extension, growth)
    }

    fn with_floor_opt(mut self, floor: Option<R>) -> Self {
        self.large_prime_floor = floor;
        self
    }
}

/// Dirichlet coefficients `a(1..=n_max)` with their growth certificate.
#[derive(Clone, Debug)]
pub struct DirichletCoefficients<R: Real> {
    /// index 0 is unused
    values: Vec<Complex<R>>,
    growth: GrowthCertificate<R>,
}

impl<R: Real> DirichletCoefficients<R> {
    pub fn new(values: Vec<Complex<R>>, growth: GrowthCertificate<R>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::EmptyDomain("need at least a(1)".into()));
        }
        let one = Complex::new(R::one(), R::zero());
        if (values[1] - one).norm() > R::lit(1e-12) {
            return Err(Error::Invalid("a(1) must equal 1".into()));
        }
        let slack = R::one() + R::lit(1e-9);
        for (n, a) in values.iter().enumerate().skip(1) {
            if !(a.norm() <= growth.a_bound(n as u64) * slack) {
                return Err(Error::Growth(format!("|a({n})| = {} exceeds the certificate", a.norm())));
            }
        }
        Ok(Self { values, growth })
    }

    /// Build from `a(1..=n_max)` given as a slice starting at `n = 1`.
    pub fn from_slice(a: &[Complex<R>], growth: GrowthCertificate<R>) -> Result<Self> {
        let mut values = Vec::with_capacity(a.len() + 1);
        values.push(Complex::new(R::zero(), R::zero()));
        values.extend_from_slice(a);
        Self::new(values, growth)
    }

    pub fn n_max(&self) -> u64 {
        (self.values.len() - 1) as u64
    }

    pub fn a(&self, n: u64) -> Complex<R> {
        self.values[n as usize]
    }

    pub fn values(&self) -> &[Complex<R>] {
        &self.values[1..]
    }

    pub fn growth(&self) -> &GrowthCertificate<R> {
        &self.growth
    }
}

/// Smallest prime factor table up to `n`.
fn spf_table(n: usize) -> Vec<u32> {
    let mut spf = vec![0u32; n + 1];
    for i in 2..=n {
        if spf[i] == 0 {
            let mut j = i;
            while j <= n {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    spf
}

/// Coefficients of `exp(sum_k b_k x^k)` up to degree `b.len()` (`b[0]` is
/// `b_1`).
fn exp_series<R: Real>(b: &[Complex<R>]) -> Vec<Complex<R>> {
    let n = b.len();
    let mut e = vec![Complex::new(R::zero(), R::zero()); n + 1];
    e[0] = Complex::new(R::one(), R::zero());
    for j in 1..=n {
        let mut acc = Complex::new(R::zero(), R::zero());
        for k in 1..=j {
            acc = acc + b[k - 1] * e[j - k] * R::lit(k as f64);
        }
        e[j] = acc / R::lit(j as f64);
    }
    e
}

/// Coefficients `b_1..b_n` of `log(sum_j e_j x^j)` with `e_0 = 1`.
fn log_series<R: Real>(e: &[Complex<R>]) -> Vec<Complex<R>> {
    let n = e.len() - 1;
    let mut b = vec![Complex::new(R::zero(), R::zero()); n];
    for j in 1..=n {
        let mut acc = e[j] * R::lit(j as f64);
        for k in 1..j {
            acc = acc - b[k - 1] * e[j - k] * R::lit(k as f64);
        }
        b[j - 1] = acc / R::lit(j as f64);
    }
    b
}

/// Exponentiate the per-prime log-series and multiply out: the Dirichlet
/// coefficients `a(1..=n_max)` of the Euler product.
pub fn b_to_a<R: Real>(src: &CoefficientSource<R>, n_max: u64) -> Result<DirichletCoefficients<R>> {
    if n_max > src.p_max() {
        return Err(Error::Range(format!("n_max {n_max} exceeds tabulated p_max {}", src.p_max())));
    }
    if n_max < 1 {
        return Err(Error::EmptyDomain("n_max must be at least 1".into()));
    }
    let n = n_max as usize;
    let zero = Complex::new(R::zero(), R::zero());
    let locals: Vec<(u64, Vec<Complex<R>>)> = src
        .primes()
        .iter()
        .take_while(|&&p| p <= n_max)
        .enumerate()
        .map(|(i, &p)| {
            let kmax = max_exponent(p, n_max) as usize;
            (p, exp_series(&src.row(i)[..kmax]))
        })
        .collect();
    let local_index = |p: u64| locals.binary_search_by_key(&p, |(q, _)| *q).expect("prime in table");
    let spf = spf_table(n);
    let mut a = vec![zero; n + 1];
    a[1] = Complex::new(R::one(), R::zero());
    for m in 2..=n {
        let p = spf[m] as usize;
        let mut rest = m;
        let mut v = 0;
        while rest % p == 0 {
            rest /= p;
            v += 1;
        }
        a[m] = locals[local_index(p as u64)].1[v] * a[rest];
    }
    DirichletCoefficients::new(a, dirichlet_growth(src, n_max))
}

fn dirichlet_growth<R: Real>(src: &CoefficientSource<R>, _n_max: u64) -> GrowthCertificate<R> {
    *src.growth()
}

/// Formal logarithm: recover `b(p^k)` for `p^k <= n_max` from multiplicative
/// `a(n)`. Used to check `b_to_a` round trips.
pub fn a_to_b<R: Real>(coeffs: &DirichletCoefficients<R>) -> Vec<(u64, u32, Complex<R>)> {
    let n_max = coeffs.n_max();
    let mut out = Vec::new();
    if n_max < 2 {
        return out;
    }
    for p in simple_sieve(n_max) {
        let kmax = max_exponent(p, n_max);
        let mut e = Vec::with_capacity(kmax as usize + 1);
        let mut pk = 1u64;
        e.push(Complex::new(R::one(), R::zero()));
        for _ in 0..kmax {
            pk *= p;
            e.push(coeffs.a(pk));
        }
        for (i, b) in log_series(&e).into_iter().enumerate() {
            out.push((p, i as u32 + 1, b));
        }
    }
    out
}

/// `sup_{x >= ln 2} x^m e^{-x d}`: the constant absorbed into the growth
/// certificate when `(k log p)^m` is bounded by `p^{k d}`.
fn log_power_constant(m: u32, d: f64) -> f64 {
    if m == 0 {
        return 1.0;
    }
    let x_star = (m as f64 / d).max(std::f64::consts::LN_2);
    x_star.powi(m as i32) * (-x_star * d).exp()
}

/// Coefficients of `(log L)^{(m)}`: `(-1)^m b(p^k) (k log p)^m`.
pub fn log_derivative_source<R: Real>(src: &CoefficientSource<R>, m: u32) -> Result<CoefficientSource<R>> {
    if m == 0 {
        return Ok(src.clone());
    }
    let g = src.growth();
    let theta = g.b_bound_exp;
    let theta1 = (theta + R::lit(0.5)) / R::lit(2.0);
    let c = R::lit(log_power_constant(m, (theta1 - theta).to_f64_lossy()) * (1.0 + 1e-12));
    let growth = GrowthCertificate {
        a_bound_const: g.b_bound_const * c,
        a_bound_exp: theta1,
        b_bound_const: g.b_bound_const * c,
        b_bound_exp: theta1,
    };
    let sign = if m % 2 == 0 { R::one() } else { -R::one() };
    let mut out = src.map(growth, move |p, k, b| {
        let w = R::lit(k as f64) * R::lit(p as f64).ln();
        b * (sign * w.powi(m as i32))
    })?;
    if let Some(floor) = src.large_prime_floor() {
        out.large_prime_floor = Some(floor * R::lit(src.p_max() as f64).ln().powi(m as i32));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    type C = Complex<f64>;

    fn zeta_source(p_max: u64) -> CoefficientSource<f64> {
        CoefficientSource::from_fn(p_max, GrowthCertificate::unit(), true, |_, k| C::new(1.0 / k as f64, 0.0)).unwrap()
    }

    #[test]
    fn growth_exponent_must_stay_below_half() {
        assert!(GrowthCertificate::<f64>::new(1.0, 0.0, 1.0, 0.5).is_err());
        assert!(GrowthCertificate::<f64>::new(1.0, 0.0, 1.0, 0.49).is_ok());
        assert!(GrowthCertificate::<f64>::new(0.0, 0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn table_violating_certificate_is_rejected() {
        let r = CoefficientSource::<f64>::from_fn(100, GrowthCertificate::unit(), false, |_, _| C::new(2.0, 0.0));
        assert!(matches!(r, Err(Error::Growth(_))));
    }

    #[test]
    fn every_prime_power_is_tabulated() {
        let src = zeta_source(1000);
        for (i, &p) in src.primes().iter().enumerate() {
            let k = src.row(i).len() as u32;
            assert!(p.pow(k) <= 1000);
            assert!((p as u128).pow(k + 1) > 1000);
        }
    }

    #[test]
    fn zeta_exponentiates_to_ones() {
        let a = b_to_a(&zeta_source(2000), 2000).unwrap();
        for n in 1..=2000 {
            assert!((a.a(n) - C::new(1.0, 0.0)).norm() < 1e-12, "a({n})");
        }
    }

    #[test]
    fn single_prime_term_gives_half_square() {
        let c = C::new(0.3, -0.4);
        let growth = GrowthCertificate::unit();
        let src = CoefficientSource::from_fn(100, growth, false, move |_, k| if k == 1 { c } else { C::new(0.0, 0.0) }).unwrap();
        let a = b_to_a(&src, 100).unwrap();
        assert!((a.a(9) - c * c / 2.0).norm() < 1e-15);
        assert!((a.a(7) - c).norm() < 1e-15);
        assert!((a.a(8) - c * c * c / 6.0).norm() < 1e-15);
    }

    #[test]
    fn zeta_over_zeta_2s_is_squarefree_indicator() {
        let src = CoefficientSource::from_fn(5000, GrowthCertificate::unit(), false, |_, k| {
            C::new(if k % 2 == 1 { 1.0 } else { -1.0 } / k as f64, 0.0)
        })
        .unwrap();
        let a = b_to_a(&src, 5000).unwrap();
        let squarefree = |n: u64| (2..).take_while(|d| d * d <= n).all(|d| n % (d * d) != 0);
        for n in 1..=5000 {
            let want = if squarefree(n) { 1.0 } else { 0.0 };
            assert!((a.a(n) - C::new(want, 0.0)).norm() < 1e-12, "n = {n}");
        }
    }

    #[test]
    fn range_error_beyond_table() {
        assert!(matches!(b_to_a(&zeta_source(100), 101), Err(Error::Range(_))));
    }

    #[test]
    fn log_derivative_identities() {
        let src = zeta_source(1000);
        let same = log_derivative_source(&src, 0).unwrap();
        assert_eq!(same.b(7, 2), src.b(7, 2));
        let d1 = log_derivative_source(&src, 1).unwrap();
        for &(p, k) in &[(2u64, 1u32), (2, 5), (31, 2), (997, 1)] {
            assert!((d1.b(p, k) + C::new((p as f64).ln(), 0.0)).norm() < 1e-12);
        }
        // hand value (3 log 2)^2 / 3
        let d2 = log_derivative_source(&src, 2).unwrap();
        assert!((d2.b(2, 3).re - 1.441359).abs() < 1e-6);
        assert!((d2.b(2, 3).re - (3.0 * 2f64.ln()).powi(2) / 3.0).abs() < 1e-13);
        // closed form extension carries over
        assert!((d1.b(1_000_003, 1).re + (1_000_003f64).ln()).abs() < 1e-9);
    }

    #[test]
    fn log_derivative_certificate_covers_coefficients() {
        let src = zeta_source(100_000);
        for m in 1..=3 {
            let d = log_derivative_source(&src, m).unwrap();
            let g = d.growth();
            assert!(g.b_bound_exp > 0.0 && g.b_bound_exp < 0.5);
            assert!((g.b_bound_exp - 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn exp_and_log_series_are_inverse() {
        let b = vec![C::new(0.5, 0.1), C::new(-0.2, 0.3), C::new(0.05, 0.0), C::new(0.0, -0.07)];
        let e = exp_series(&b);
        let back = log_series(&e);
        for (x, y) in b.iter().zip(&back) {
            assert!((x - y).norm() < 1e-15);
        }
    }
}
