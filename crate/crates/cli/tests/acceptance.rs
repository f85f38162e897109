//! End-to-end acceptance criteria. Prints one PASS/FAIL line per criterion
//! and fails when any criterion fails.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use valdist::annulus::{decompose, reachable_interval, recombine, RadiiSet};
use valdist::cassels::{run, CasselsConfig, SigmaRule};
use valdist::catalog::selberg::kappa_estimate;
use valdist::catalog::{
    chi4_entry, chi4diff_source, delta_norm, euler_zagier_diag, second_deriv_abs_bound, tau, zeta, Builtin,
    CatalogConfig,
};
use valdist::coeffs::{a_to_b, b_to_a, log_derivative_source};
use valdist::eval::eval_log_l;
use valdist::kronecker::{cluster_hits, density_estimate, find_tau_grid, find_tau_lattice, ShiftTarget};
use valdist::primes::simple_sieve;
use valdist::zerolab::almost::{
    almost_period_find, composite_lower_bound, composite_spot_check, nonvanishing_margin, spot_check, AlmostOptions,
};
use valdist::zerolab::rouche::revalidate;
use valdist::zerolab::scan::{cvalue_scan, raster_scan, Strategy};
use valdist::zerolab::{ComboValue, EntryLogDeriv, EntryValue, Rectangle, Region, ZeroCertificate};
use valdist::zeta_em::eval_zeta_em;
use valdist::Complex64;
use valdist_cli::record::RunRecord;

const SEED: u64 = 0;

const ANNULUS_INSTANCES: usize = 10_000;
const ANNULUS_MAX_N: usize = 12;
const ANNULUS_RECONSTRUCTION_TOL: f64 = 1e-9;
const ANNULUS_ENDPOINT_TOL: f64 = 1e-6;
const PHASE_GRID: usize = 4096;

const TAU_ORACLE_N: usize = 1000;
const TAU_PAIR_MAX: usize = 1000;
const DELIGNE_P_MAX: u64 = 10_000;

const CASSELS_Z: Complex64 = Complex64::new(0.4, 0.3);
const CASSELS_N_FINAL: u64 = 10_000;
const CASSELS_RESUM_TOL: f64 = 1e-9;

const DENSITY_PRIMES: [u64; 4] = [2, 3, 5, 7];
const DENSITY_EPS1: f64 = 0.5;
const DENSITY_T: f64 = 1e5;
const DENSITY_SAMPLES: usize = 10_000;
const DENSITY_FACTOR: f64 = 2.0;
const SINGLE_PRIME_TOL: f64 = 1e-9;

const MARGIN_TOL: f64 = 1e-9;
const ALMOST_DELTA: f64 = 0.5;
const ALMOST_POINTS: usize = 1000;
const ALMOST_T: f64 = 1000.0;

/// Lowest zero of `(zeta^2(s) - zeta(2s))/2` with `sigma > 1` (mpmath findroot).
const EZ_ZERO: Complex64 = Complex64::new(1.107_786, 23.797_087);
const EZ_T: f64 = 30.0;
const EZ_DELTA: f64 = 0.5;

const FD_STEP: f64 = 1e-5;
const FD_TOL: f64 = 1e-6;
const ROUND_TRIP_TOL: f64 = 1e-12;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_valdist")
}

fn cli(args: &[&str]) -> Result<std::process::Output, String> {
    Command::new(bin()).args(args).output().map_err(|e| e.to_string())
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn golden_min<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let (mut x1, mut x2) = (b - g * (b - a), a + g * (b - a));
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..80 {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        }
    }
    f1.min(f2)
}

/// Extremes of `g` over a phase grid, each polished on its grid cell.
fn phase_extremes<F: Fn(f64) -> f64>(g: F) -> (f64, f64) {
    let h = 2.0 * PI / PHASE_GRID as f64;
    let vals: Vec<f64> = (0..PHASE_GRID).map(|i| g(i as f64 * h)).collect();
    let argmin = (0..PHASE_GRID).min_by(|&i, &j| vals[i].total_cmp(&vals[j])).unwrap();
    let argmax = (0..PHASE_GRID).max_by(|&i, &j| vals[i].total_cmp(&vals[j])).unwrap();
    let lo = golden_min(&g, (argmin as f64 - 1.0) * h, (argmin as f64 + 1.0) * h).min(vals[argmin]);
    let hi = -golden_min(|x| -g(x), (argmax as f64 - 1.0) * h, (argmax as f64 + 1.0) * h);
    (lo, hi.max(vals[argmax]))
}

/// Reachable moduli of `sum c_j r_j` for `n <= 3` by brute force over phases
/// (the first phase fixed by rotation, the last eliminated exactly).
fn brute_force_interval(r: &[Complex64]) -> (f64, f64) {
    let a: Vec<f64> = r.iter().map(|z| z.norm()).collect();
    match a.len() {
        1 => (a[0], a[0]),
        2 => phase_extremes(|phi| (a[0] + a[1] * Complex64::from_polar(1.0, phi)).norm()),
        3 => {
            let rho = |phi: f64| (a[0] + a[1] * Complex64::from_polar(1.0, phi)).norm();
            let (lo, _) = phase_extremes(|phi| (rho(phi) - a[2]).abs());
            let (_, hi) = phase_extremes(|phi| rho(phi) + a[2]);
            (lo, hi)
        }
        _ => unreachable!(),
    }
}

fn criterion_1() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst: f64 = 0.0;
    let mut brute = 0;
    let mut reach_checks = 0;
    for _ in 0..ANNULUS_INSTANCES {
        let n = rng.gen_range(1..=ANNULUS_MAX_N);
        let radii: Vec<Complex64> =
            (0..n).map(|_| Complex64::from_polar(rng.gen_range(0.05..2.0), rng.gen_range(0.0..2.0 * PI))).collect();
        let set = RadiiSet::new(&radii).map_err(|e| e.to_string())?;
        let iv = reachable_interval(&set);
        let z = Complex64::from_polar(rng.gen_range(iv.inner..=iv.outer), rng.gen_range(0.0..2.0 * PI));
        let cs = decompose(&set, z, 1e-12).map_err(|e| format!("n = {n}: {e}"))?;
        ensure(cs.iter().all(|u| (u.norm() - 1.0).abs() < 1e-12), || "non-unimodular coefficient".into())?;
        worst = worst.max((recombine(&radii, &cs) - z).norm());
        if n <= 3 {
            brute += 1;
            let (lo, hi) = brute_force_interval(&radii);
            ensure((lo - iv.inner).abs() < ANNULUS_ENDPOINT_TOL && (hi - iv.outer).abs() < ANNULUS_ENDPOINT_TOL, || {
                format!("radii {radii:?}: interval [{}, {}] vs brute force [{lo}, {hi}]", iv.inner, iv.outer)
            })?;
            for _ in 0..4 {
                let m = rng.gen_range(0.0..hi + 0.5);
                if (m - lo).abs() < ANNULUS_ENDPOINT_TOL || (m - hi).abs() < ANNULUS_ENDPOINT_TOL {
                    continue;
                }
                reach_checks += 1;
                let reachable = decompose(&set, Complex64::from_polar(m, rng.gen_range(0.0..2.0 * PI)), 1e-12).is_ok();
                ensure(reachable == (lo <= m && m <= hi), || format!("radii {radii:?}: modulus {m} misclassified"))?;
            }
        }
    }
    ensure(worst < ANNULUS_RECONSTRUCTION_TOL, || format!("reconstruction error {worst:e}"))?;
    Ok(format!(
        "{ANNULUS_INSTANCES} instances, max reconstruction error {worst:.2e}; {brute} brute-force intervals, {reach_checks} reachability checks"
    ))
}

fn criterion_2() -> Result<String, String> {
    let text = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/kappa.toml"))
        .map_err(|e| e.to_string())?;
    #[derive(serde::Deserialize)]
    struct Fixture {
        cases: Vec<(String, u64, f64, f64)>,
    }
    let fx: Fixture = toml::from_str(&text).map_err(|e| e.to_string())?;
    let mut out = Vec::new();
    for (name, x, expected, tol) in fx.cases {
        let src = match name.as_str() {
            "zeta" => zeta(&CatalogConfig { p_max: 1000, n_max: 100, tau_cache: None }).map_err(|e| e.to_string())?.source,
            "chi4diff" => chi4diff_source(x).map_err(|e| e.to_string())?,
            "delta_norm" => {
                delta_norm(&CatalogConfig { p_max: x, n_max: 100, tau_cache: None }).map_err(|e| e.to_string())?.source
            }
            other => return Err(format!("unknown fixture source {other}")),
        };
        let rep = kappa_estimate(&src, x).map_err(|e| e.to_string())?;
        if tol == 0.0 {
            ensure(rep.checkpoints.iter().all(|&(_, _, k)| k == expected), || format!("{name}: not exactly {expected}"))?;
        }
        ensure((rep.kappa - expected).abs() <= tol, || format!("{name}: kappa_hat({x}) = {} not within {tol} of {expected}", rep.kappa))?;
        out.push(format!("{name} {:.4}", rep.kappa));
    }
    Ok(out.join(", "))
}

/// `q prod_{n >= 1} (1 - q^n)^24` multiplied out term by term.
fn tau_naive(n_max: usize) -> Vec<BigInt> {
    let mut poly = vec![BigInt::from(0); n_max];
    poly[0] = BigInt::from(1);
    for n in 1..n_max {
        for _ in 0..24 {
            for d in (n..n_max).rev() {
                let t = poly[d - n].clone();
                poly[d] -= t;
            }
        }
    }
    poly
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn criterion_3() -> Result<String, String> {
    let need = TAU_PAIR_MAX * TAU_PAIR_MAX;
    let t = tau::ramanujan_tau(need).map_err(|e| e.to_string())?;
    let naive = tau_naive(TAU_ORACLE_N);
    ensure(t[0] == BigInt::from(1) && t[1] == BigInt::from(-24) && t[2] == BigInt::from(252), || "tau(1..3)".into())?;
    ensure(naive[..TAU_ORACLE_N] == t[..TAU_ORACLE_N], || "table differs from the naive expansion".into())?;
    let mut pairs = 0usize;
    for m in 1..=TAU_PAIR_MAX {
        for n in m + 1..=TAU_PAIR_MAX {
            if gcd(m, n) == 1 {
                pairs += 1;
                ensure(&t[m - 1] * &t[n - 1] == t[m * n - 1], || format!("tau({m}) tau({n}) != tau({})", m * n))?;
            }
        }
    }
    let primes = simple_sieve(DELIGNE_P_MAX);
    for &p in &primes {
        let tp = &t[p as usize - 1];
        ensure(tp * tp < BigInt::from(4) * BigInt::from(p).pow(11), || format!("Deligne bound fails at {p}"))?;
    }
    Ok(format!(
        "naive oracle to {TAU_ORACLE_N}, {pairs} coprime pairs, Deligne for {} primes <= {DELIGNE_P_MAX}",
        primes.len()
    ))
}

fn criterion_4() -> Result<String, String> {
    let e = zeta(&CatalogConfig::default()).map_err(|e| e.to_string())?;
    let mut cfg = CasselsConfig::new(e.source.clone(), CASSELS_Z);
    cfg.n1 = 50;
    cfg.c0 = 1.0;
    cfg.epsilon = 0.05;
    cfg.n_final = Some(CASSELS_N_FINAL);
    cfg.max_blocks = 64;
    cfg.sigma_rule = SigmaRule::Reachability;
    let r = run(&cfg).map_err(|e| e.to_string())?;
    ensure(r.state.n_j >= CASSELS_N_FINAL, || format!("stopped at N_J = {}", r.state.n_j))?;
    ensure(r.certificates.iter().all(|b| b.holds), || "a block inequality failed".into())?;
    let threshold = 101.0 / 99.0;
    ensure(r.certificates.iter().all(|b| b.ratio_ok && b.ratio.map_or(true, |q| q >= threshold)), || {
        "a ratio check failed".into()
    })?;
    ensure(r.residual < r.residual_bound, || format!("residual {:e} >= {:e}", r.residual, r.residual_bound))?;
    // every prime of zeta is starred, so the untwisted offset is empty
    let sigma = r.state.sigma;
    let mut sum = c(0.0, 0.0);
    for p in simple_sieve(r.state.n_j) {
        let chi = *r.state.chi.get(&p).ok_or_else(|| format!("prime {p} has no twist"))?;
        let mut pk = p;
        let mut k = 1;
        while pk <= r.state.n_j {
            sum += chi.powu(k) * (pk as f64).powf(-sigma) / k as f64;
            k += 1;
            pk = match pk.checked_mul(p) {
                Some(v) => v,
                None => break,
            };
        }
    }
    let resummed = (sum - CASSELS_Z).norm();
    ensure(resummed < r.residual_bound, || format!("resummed residual {resummed:e} >= bound"))?;
    ensure((resummed - r.residual).abs() < CASSELS_RESUM_TOL, || format!("resummed {resummed:e} vs reported {:e}", r.residual))?;
    Ok(format!(
        "{} blocks to N_J = {}, sigma = {sigma:.6}, residual {:.2e} < bound {:.2e}",
        r.certificates.len(),
        r.state.n_j,
        r.residual,
        r.residual_bound
    ))
}

fn construct_record(dir: &Path, args: &[&str]) -> Result<(RunRecord, ZeroCertificate), String> {
    let path = dir.join("run.toml");
    let mut all: Vec<&str> = args.to_vec();
    let p = path.to_str().unwrap().to_string();
    all.extend(["--out", &p]);
    let out = cli(&all)?;
    ensure(out.status.success(), || format!("exit {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr)))?;
    let rec = RunRecord::load(&path).map_err(|e| e.to_string())?;
    let cert = rec.certificates.first().ok_or("no certificate")?.to_certificate().map_err(|e| e.to_string())?;
    Ok((rec, cert))
}

fn disk(cert: &ZeroCertificate) -> Result<(Complex64, f64), String> {
    match cert.region {
        Region::Disk { center, radius } => Ok((center, radius)),
        Region::Rect(_) => Err("expected a disk".into()),
    }
}

fn criterion_5() -> Result<String, String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let (_, cert) = construct_record(dir.path(), &["construct", "zeta", "--m", "0", "--z", "2", "--delta", "1"])?;
    let (center, radius) = disk(&cert)?;
    ensure(cert.margin > 0.0 && cert.winding >= 1, || format!("margin {} winding {}", cert.margin, cert.winding))?;
    ensure(center.re > 1.0 + radius, || format!("centre {center} not right of 1"))?;
    let e = zeta(&CatalogConfig::default()).map_err(|e| e.to_string())?;
    let f = EntryValue { entry: &e, shift: c(0.0, 0.0), minus: c(2.0, 0.0), tol: 1e-12 };
    ensure(revalidate(&f, &cert).map_err(|e| e.to_string())?, || "doubled-resolution winding disagrees".into())?;
    // Newton on zeta(s) - 2 with direct Euler-Maclaurin values
    let g = |s: Complex64| eval_zeta_em(s, 1e-13).map(|b| b.value - 2.0).map_err(|e| e.to_string());
    let mut s = center;
    for _ in 0..40 {
        let h = 1e-6;
        let d = (g(s + h)? - g(s - h)?) / (2.0 * h);
        s -= g(s)? / d;
    }
    ensure((s - center).norm() < radius && g(s)?.norm() < 1e-9, || format!("Newton root {s} outside the disk"))?;
    Ok(format!("disk centre {center:.6}, r = {radius}, margin {:.3e}; root {s:.8}", cert.margin))
}

fn criterion_6() -> Result<String, String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let (_, cert) = construct_record(dir.path(), &["construct", "zeta", "--m", "1", "--z", "0", "--delta", "1"])?;
    let (center, radius) = disk(&cert)?;
    ensure(cert.margin > 0.0 && center.re - radius > 1.0, || format!("centre {center}, r = {radius}"))?;
    let e = zeta(&CatalogConfig::default()).map_err(|e| e.to_string())?;
    let f = EntryLogDeriv { entry: &e, m: 1, shift: c(0.0, 0.0), minus: c(0.0, 0.0), tol: 1e-12 };
    ensure(revalidate(&f, &cert).map_err(|e| e.to_string())?, || "doubled-resolution winding disagrees".into())?;
    let h = FD_STEP;
    let zf = |s: Complex64| eval_zeta_em(s, 1e-14).map(|b| b.value).map_err(|e| e.to_string());
    let fd = (zf(center + h)? - zf(center - h)?) / (2.0 * h);
    let m2 = second_deriv_abs_bound(&e, center.re - radius).map_err(|e| e.to_string())?;
    let bound = radius * m2 + 1e-8;
    ensure(fd.norm() < bound, || format!("|zeta'(centre)| ~ {} exceeds r sup|zeta''| = {bound}", fd.norm()))?;
    Ok(format!("disk centre {center:.6}, r = {radius}; |zeta'(centre)| ~ {:.3e} < {bound:.3e}", fd.norm()))
}

fn criterion_7() -> Result<String, String> {
    let cfg = CatalogConfig { p_max: 20_000, n_max: 2_000, tau_cache: None };
    let combo = euler_zagier_diag(&cfg).map_err(|e| e.to_string())?;
    let b = Builtin::Combo(combo.clone());
    let rep = cvalue_scan(&b, 0, c(0.0, 0.0), EZ_DELTA, EZ_T, &Strategy::raster(), 1e-10).map_err(|e| e.to_string())?;
    let f = ComboValue { combo: &combo, shift: c(0.0, 0.0), minus: c(0.0, 0.0), tol: 1e-10 };
    for h in &rep.hits {
        ensure(revalidate(&f, h).map_err(|e| e.to_string())?, || format!("hit {:?} does not revalidate", h.region))?;
        ensure(h.region.bbox().sigma_min > 1.0, || "hit not right of 1".into())?;
    }
    ensure(rep.pairwise_disjoint(), || "overlapping hit regions".into())?;
    let strip = rep.certified_strip.ok_or("no certified strip")?;
    if rep.hits.is_empty() {
        ensure(rep.exhaustive(), || "no hit and not exhaustive".into())?;
        return Ok(format!("no zero in [{}, {}] x [0, {EZ_T}], certified exhaustive", strip.sigma_min, strip.sigma_max));
    }
    ensure(rep.hits.iter().any(|h| h.region.bbox().contains(EZ_ZERO)), || "oracle zero not enclosed".into())?;
    Ok(format!(
        "{} certified zero(s) in [{}, {}] x [0, {EZ_T}], exhaustive = {}",
        rep.hits.len(),
        strip.sigma_min,
        strip.sigma_max,
        rep.exhaustive()
    ))
}

fn criterion_8() -> Result<String, String> {
    let chi: Vec<Complex64> = (1..=4).map(|j| Complex64::from_polar(1.0, j as f64)).collect();
    let target = ShiftTarget::new(DENSITY_PRIMES.to_vec(), chi, DENSITY_EPS1).map_err(|e| e.to_string())?;
    let d = density_estimate(&target, DENSITY_T, DENSITY_SAMPLES, SEED).map_err(|e| e.to_string())?;
    let ratio = d.empirical / d.predicted;
    ensure((1.0 / DENSITY_FACTOR..=DENSITY_FACTOR).contains(&ratio), || {
        format!("empirical {} vs predicted {}", d.empirical, d.predicted)
    })?;
    let one = ShiftTarget::new(vec![2], vec![c(-1.0, 0.0)], 0.1).map_err(|e| e.to_string())?;
    let expect = PI / 2f64.ln();
    let step = one.default_step();
    let hits = find_tau_grid(&one, 10.0, step).map_err(|e| e.to_string())?;
    let grid = cluster_hits(&one, &hits, step).first().map(|h| h.tau).ok_or("no grid hit")?;
    let lattice = find_tau_lattice(&one, 10.0).map_err(|e| e.to_string())?.tau;
    ensure((grid - expect).abs() < SINGLE_PRIME_TOL && (lattice - expect).abs() < SINGLE_PRIME_TOL, || {
        format!("grid {grid}, lattice {lattice}, expected {expect}")
    })?;
    Ok(format!(
        "density {:.2e} vs product {:.2e} (ratio {ratio:.2}); pi/log 2 to {:.1e}",
        d.empirical,
        d.predicted,
        (grid - expect).abs().max((lattice - expect).abs())
    ))
}

fn criterion_9() -> Result<String, String> {
    let e = zeta(&CatalogConfig::default()).map_err(|e| e.to_string())?;
    let margin = nonvanishing_margin(&e, ALMOST_DELTA).map_err(|e| e.to_string())?;
    let z15 = eval_zeta_em(c(1.0 + ALMOST_DELTA, 0.0), 1e-14).map_err(|e| e.to_string())?;
    let oracle = 2.0 / z15.value.re;
    ensure((margin - oracle).abs() < MARGIN_TOL, || format!("margin {margin} vs 2/zeta(1.5) = {oracle}"))?;
    let ap = almost_period_find(&e, ALMOST_DELTA, margin / 2.0, AlmostOptions::default()).map_err(|e| e.to_string())?;
    let seen = spot_check(&e, ALMOST_DELTA, ap.theta, ALMOST_T, ALMOST_POINTS, 1e-12).map_err(|e| e.to_string())?;
    ensure(seen < margin / 2.0 && seen <= ap.bound, || format!("grid discrepancy {seen}, bound {}", ap.bound))?;
    let lower = composite_lower_bound(margin, &ap);
    ensure(lower > 0.0, || format!("composite lower bound {lower}"))?;
    let low = composite_spot_check(&e, ALMOST_DELTA, ap.theta, ALMOST_T, ALMOST_POINTS, SEED, 1e-12).map_err(|e| e.to_string())?;
    ensure(low >= lower, || format!("|zeta(s) + zeta(s + i theta)| = {low} below {lower}"))?;
    Ok(format!(
        "margin {margin:.12}, theta = {:.6}, sup bound {:.4}, grid {seen:.4}, composite >= {lower:.4} (min seen {low:.4})",
        ap.theta, ap.bound
    ))
}

fn criterion_10() -> Result<String, String> {
    let small = CatalogConfig { p_max: 3000, n_max: 3000, tau_cache: None };
    // coefficient round trip
    for e in [zeta(&small), chi4_entry(&small), delta_norm(&small)] {
        let e = e.map_err(|e| e.to_string())?;
        let a = b_to_a(&e.source, small.n_max).map_err(|e| e.to_string())?;
        let back = a_to_b(&a);
        let orig = e.source.terms_upto(small.n_max);
        ensure(back.len() == orig.len(), || format!("{}: {} vs {} terms", e.name, back.len(), orig.len()))?;
        for (x, y) in back.iter().zip(&orig) {
            ensure(x.0 == y.0 && x.1 == y.1 && (x.2 - y.2).norm() <= ROUND_TRIP_TOL * (1.0 + y.2.norm()), || {
                format!("{}: b({}^{}) {} vs {}", e.name, y.0, y.1, x.2, y.2)
            })?;
        }
    }
    // finite differences against the log-derivative source
    let src = zeta(&CatalogConfig::default()).map_err(|e| e.to_string())?.source;
    let d1 = log_derivative_source(&src, 1).map_err(|e| e.to_string())?;
    for s in [c(1.8, 0.0), c(2.0, 7.5), c(2.5, -40.0), c(3.0, 1000.0)] {
        let l = |w: Complex64| eval_log_l(&src, w, 1e-13).map(|b| b.value).map_err(|e| e.to_string());
        let fd = (l(s + FD_STEP)? - l(s - FD_STEP)?) / (2.0 * FD_STEP);
        let direct = eval_log_l(&d1, s, 1e-12).map_err(|e| e.to_string())?.value;
        ensure((fd - direct).norm() < FD_TOL, || format!("at {s}: {fd} vs {direct}"))?;
    }
    // certificates re-validate at doubled resolution
    let e = zeta(&CatalogConfig { p_max: 20_000, n_max: 2_000, tau_cache: None }).map_err(|e| e.to_string())?;
    let f = EntryValue { entry: &e, shift: c(0.0, 0.0), minus: c(2.0, 0.0), tol: 1e-12 };
    let rect = Rectangle::new(1.5, 2.0, -0.5, 0.5).map_err(|e| e.to_string())?;
    let rep = raster_scan(&f, rect, 0.1, 0.4, 3).map_err(|e| e.to_string())?;
    ensure(rep.hits.len() == 1, || format!("{} hits", rep.hits.len()))?;
    for h in &rep.hits {
        ensure(revalidate(&f, h).map_err(|e| e.to_string())?, || "raster hit does not revalidate".into())?;
    }
    // replay determinism
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let (rec, _) = construct_record(dir.path(), &["construct", "zeta", "--m", "0", "--z", "1.5+0.5i", "--delta", "1"])?;
    let out = cli(&["certify", dir.path().join("run.toml").to_str().unwrap(), "--replay"])?;
    ensure(out.status.success(), || String::from_utf8_lossy(&out.stderr).into_owned())?;
    let a = cli(&["kronecker", "--primes", "2,3,5,7", "--method", "density", "--seed", "3"])?;
    let b = cli(&["kronecker", "--primes", "2,3,5,7", "--method", "density", "--seed", "3"])?;
    ensure(a.stdout == b.stdout, || "seeded density differs between runs".into())?;
    Ok(format!("round trips, finite differences, raster re-validation, replay of {} certificate(s)", rec.certificates.len()))
}

fn main() {
    let criteria: [(u32, &str, f64, fn() -> Result<String, String>); 10] = [
        (1, "annulus suite", 60.0, criterion_1),
        (2, "kappa regressions", 300.0, criterion_2),
        (3, "Ramanujan tau", f64::INFINITY, criterion_3),
        (4, "block certificate chain", 120.0, criterion_4),
        (5, "constructive c-value", 600.0, criterion_5),
        (6, "zero of zeta'", 900.0, criterion_6),
        (7, "Euler-Zagier zeros", 1800.0, criterion_7),
        (8, "Kronecker density", f64::INFINITY, criterion_8),
        (9, "almost-period composite", f64::INFINITY, criterion_9),
        (10, "property suites", 600.0, criterion_10),
    ];
    let mut failed = 0;
    for (n, name, budget, f) in criteria {
        let t0 = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t0.elapsed().as_secs_f64();
        let res = res.and_then(|d| if secs <= budget { Ok(d) } else { Err(format!("{d}; over budget {budget}s")) });
        match res {
            Ok(d) => println!("criterion {n:>2} PASS [{name}] ({secs:.1}s) {d}"),
            Err(d) => {
                failed += 1;
                println!("criterion {n:>2} FAIL [{name}] ({secs:.1}s) {d}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
