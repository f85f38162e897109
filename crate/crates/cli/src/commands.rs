use std::fmt::Write as _;
use std::path::Path;

use valdist::annulus::{decompose, reachable_interval, recombine, RadiiSet};
use valdist::cassels::{self, CasselsConfig, SigmaRule};
use valdist::catalog::selberg::{kappa_estimate, log_checkpoints, pair_kappa_estimate};
use valdist::catalog::{builtin_with, chi4diff_source, tau, Builtin, CatalogConfig, LFunctionEntry};
use valdist::coeffs::log_derivative_source;
use valdist::kronecker::{cluster_hits, density_estimate, find_tau_grid, find_tau_lattice, ShiftTarget};
use valdist::primes::prime_sieve;
use valdist::zerolab::almost::{
    almost_period_find, composite_lower_bound, composite_spot_check, nonvanishing_margin, spot_check, AlmostOptions,
};
use valdist::zerolab::construct::{construct_many, log_target, ConstructConfig};
use valdist::zerolab::rouche::revalidate;
use valdist::zerolab::scan::{combo_zero_search, cvalue_scan, Strategy};
use valdist::zerolab::{ComboValue, EntryLogDeriv, EntryValue, Evaluable, ZeroCertificate};
use valdist::{Complex64, Error, Source};

use crate::error::CliError;
use crate::parse::fmt_complex;
use crate::plot;
use crate::record::{now, CertificateRecord, RunRecord};
use crate::spec::LFunctionSpecFile;
use crate::{CatalogArgs, Cli, Command, KroneckerMethod, PipelineArgs, ScanStrategy, SigmaChoice};

/// What a command produced.
#[derive(Clone, Debug)]
pub struct Output {
    /// Table or plot; goes to `--out` or stdout.
    pub artifact: Option<String>,
    pub record: RunRecord,
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

impl Output {
    /// Tables go to `--out` or stdout with the summary on stderr; without a
    /// table, `--out` receives the run record and the summary goes to stdout.
    pub fn emit(&self, cli: &Cli) -> Result<(), CliError> {
        let summary: String = self.record.summary.iter().map(|l| format!("{l}\n")).collect();
        match (&self.artifact, &cli.out) {
            (Some(a), Some(path)) => {
                write_file(path, a)?;
                print!("{summary}");
            }
            (Some(a), None) => {
                print!("{a}");
                eprint!("{summary}");
            }
            (None, Some(path)) => {
                write_file(path, &self.record.to_text())?;
                print!("{summary}");
            }
            (None, None) => print!("{summary}"),
        }
        if let Some(path) = &cli.record {
            write_file(path, &self.record.to_text())?;
        }
        Ok(())
    }
}

fn catalog_config(c: &CatalogArgs) -> CatalogConfig {
    CatalogConfig { p_max: c.p_max, n_max: c.n_max.min(c.p_max), tau_cache: c.tau_cache.clone() }
}

/// A spec file path or a catalog name.
pub fn resolve(name: &str, cat: &CatalogArgs) -> Result<Builtin, CliError> {
    let path = Path::new(name);
    if name.ends_with(".toml") || path.is_file() {
        return Ok(Builtin::Entry(LFunctionSpecFile::load(path)?.to_entry()?));
    }
    Ok(builtin_with(name, &catalog_config(cat))?)
}

fn resolve_entry(name: &str, cat: &CatalogArgs) -> Result<LFunctionEntry, CliError> {
    match resolve(name, cat)? {
        Builtin::Entry(e) => Ok(e),
        Builtin::Combo(c) => Err(CliError::Usage(format!("`{}` is a combination; this command needs a single entry", c.name))),
    }
}

fn selberg_source(name: &str, x: u64, cat: &CatalogArgs) -> Result<Source, CliError> {
    if name == "chi4diff" {
        return Ok(chi4diff_source(cat.p_max.max(x))?);
    }
    Ok(resolve_entry(name, cat)?.source)
}

pub fn execute(cli: &Cli, argv: &[String]) -> Result<Output, CliError> {
    let name = argv.first().cloned().unwrap_or_default();
    let mut rec = RunRecord::new(&name, argv.to_vec());
    let artifact = run_command(cli, &mut rec)?;
    rec.finished = now();
    Ok(Output { artifact, record: rec })
}

fn run_command(cli: &Cli, rec: &mut RunRecord) -> Result<Option<String>, CliError> {
    let say = &mut rec.summary;
    match &cli.command {
        Command::Sieve { limit } => {
            let primes = prime_sieve(*limit)?;
            say.push(format!("pi({limit}) = {}", primes.len()));
            if let Some(p) = primes.last() {
                say.push(format!("largest prime = {p}"));
            }
            let mut t = String::new();
            for p in &primes {
                let _ = writeln!(t, "{p}");
            }
            Ok(Some(t))
        }
        Command::Selberg { entries, x, checkpoints, catalog } => {
            let marks = checkpoints.clone().unwrap_or_else(|| log_checkpoints(*x));
            let mut t = String::new();
            if let [one] = entries.as_slice() {
                let src = selberg_source(one, *x, catalog)?;
                t.push_str("x,pi_x,kappa_hat\n");
                let last = if checkpoints.is_none() {
                    let r = kappa_estimate(&src, *x)?;
                    for (xi, n, k) in &r.checkpoints {
                        let _ = writeln!(t, "{xi},{n},{k}");
                    }
                    r.kappa
                } else {
                    let mut last = 0.0;
                    for &xi in &marks {
                        let r = kappa_estimate(&src, xi)?;
                        let _ = writeln!(t, "{xi},{},{}", r.pi_x, r.kappa);
                        last = r.kappa;
                    }
                    last
                };
                say.push(format!("kappa_hat = {last}"));
            } else {
                let a = selberg_source(&entries[0], *x, catalog)?;
                let b = selberg_source(&entries[1], *x, catalog)?;
                t.push_str("x,pi_x,kappa_hat,sum_sq_first,sum_sq_second,cross\n");
                let mut last = 0.0;
                for &xi in &marks {
                    let r = pair_kappa_estimate(&a, &b, xi)?;
                    let d = &r.difference;
                    let _ = writeln!(t, "{xi},{},{},{},{},{}", d.pi_x, d.kappa, r.sum_sq_first, r.sum_sq_second, r.cross);
                    last = d.kappa;
                }
                say.push(format!("kappa_hat = {last}"));
            }
            Ok(Some(t))
        }
        Command::Tau { n, cache, only } => {
            let n = *n as usize;
            let values = match cache {
                Some(p) => tau::load_or_build(p, n)?,
                None => tau::ramanujan_tau(n)?,
            };
            if let Some(v) = values.last() {
                say.push(format!("tau({n}) = {v}"));
            }
            if *only {
                return Ok(None);
            }
            let mut t = String::from("n,tau\n");
            for (i, v) in values.iter().enumerate() {
                let _ = writeln!(t, "{},{v}", i + 1);
            }
            Ok(Some(t))
        }
        Command::Annulus { radii, z } => {
            let set = RadiiSet::new(radii)?;
            let iv = reachable_interval(&set);
            say.push(format!("annulus = [{}, {}]", iv.inner, iv.outer));
            let c = decompose(&set, *z, cli.tol)?;
            let err = (recombine(radii, &c) - z).norm();
            let mut t = String::from("j,radius,c\n");
            for (j, (r, cj)) in radii.iter().zip(&c).enumerate() {
                let _ = writeln!(t, "{j},{},{}", fmt_complex(*r), fmt_complex(*cj));
            }
            say.push(format!("reconstruction error = {err:e}"));
            Ok(Some(t))
        }
        Command::Cassels { entry, m, z, delta, n1, c0, eps, n_final, max_blocks, sigma, rule, horizon, catalog } => {
            let e = resolve_entry(entry, catalog)?;
            let src = if *m == 0 { e.source.clone() } else { log_derivative_source(&e.source, *m)? };
            let mut cfg = CasselsConfig::new(src, log_target(*m, *z)?);
            cfg.delta = *delta;
            cfg.n1 = *n1;
            cfg.c0 = *c0;
            cfg.epsilon = *eps;
            cfg.n_final = *n_final;
            cfg.max_blocks = *max_blocks;
            cfg.horizon = *horizon;
            cfg.sigma_rule = match (sigma, rule) {
                (Some(s), _) => SigmaRule::Fixed(*s),
                (None, SigmaChoice::Reachability) => SigmaRule::Reachability,
                (None, SigmaChoice::Base) => SigmaRule::BaseInequality,
            };
            let run = cassels::run(&cfg)?;
            let mut t = String::from("j,n_j,lhs,rhs,margin,holds,ratio,ratio_ok\n");
            for b in &run.certificates {
                let ratio = b.ratio.map(|r| r.to_string()).unwrap_or_default();
                let _ = writeln!(t, "{},{},{},{},{},{},{ratio},{}", b.j, b.n_j, b.lhs, b.rhs, b.margin, b.holds, b.ratio_ok);
            }
            let all = run.certificates.iter().all(|b| b.holds && b.ratio_ok);
            say.push(format!("sigma = {}", run.state.sigma));
            say.push(format!("blocks = {}, N_J = {}", run.certificates.len(), run.state.n_j));
            say.push(format!("residual = {:e} (bound {:e})", run.residual, run.residual_bound));
            say.push(format!("all block checks hold = {all}"));
            Ok(Some(t))
        }
        Command::Kronecker { primes, targets, phases, eps1, t_max, method, samples, step } => {
            let chi = match (targets, phases) {
                (Some(t), _) => t.clone(),
                (None, Some(ph)) => ph.iter().map(|&a| Complex64::from_polar(1.0, a)).collect(),
                (None, None) => vec![Complex64::new(1.0, 0.0); primes.len()],
            };
            let target = ShiftTarget::new(primes.clone(), chi, *eps1)?;
            match method {
                KroneckerMethod::Grid => {
                    let step = step.unwrap_or_else(|| target.default_step());
                    let hits = find_tau_grid(&target, *t_max, step)?;
                    let reps = cluster_hits(&target, &hits, step);
                    let mut t = String::from("tau,quality\n");
                    for r in &reps {
                        let _ = writeln!(t, "{},{}", r.tau, r.quality);
                    }
                    let best = reps.iter().min_by(|a, b| a.quality.total_cmp(&b.quality));
                    match best {
                        Some(b) => say.push(format!("{} clusters; best tau = {} (quality {})", reps.len(), b.tau, b.quality)),
                        None => return Err(Error::NoShift(format!("no grid point in [0, {t_max}] meets eps1 = {eps1}")).into()),
                    }
                    Ok(Some(t))
                }
                KroneckerMethod::Lattice => {
                    let s = find_tau_lattice(&target, *t_max)?;
                    say.push(format!("tau = {} (quality {})", s.tau, s.quality));
                    Ok(Some(format!("tau,quality\n{},{}\n", s.tau, s.quality)))
                }
                KroneckerMethod::Density => {
                    let d = density_estimate(&target, *t_max, *samples, cli.seed)?;
                    say.push(format!("empirical density = {} (95% CI [{}, {}])", d.empirical, d.ci_low, d.ci_high));
                    say.push(format!("predicted density = {}", d.predicted));
                    say.push(format!("samples = {}", d.samples));
                    Ok(None)
                }
            }
        }
        Command::Construct { entry, pipeline, limit, catalog } => {
            let e = resolve_entry(entry, catalog)?;
            let cfg = construct_config(pipeline, cli.tol);
            let outs = construct_many(&e, &cfg, *limit)?;
            for (i, o) in outs.iter().enumerate() {
                let c = &o.certificate;
                let radius = match c.region {
                    valdist::zerolab::Region::Disk { radius, .. } => radius,
                    valdist::zerolab::Region::Rect(r) => r.width().max(r.height()) / 2.0,
                };
                say.push(format!(
                    "certificate {i}: center = {}, radius = {radius}, winding = {}, margin = {:e}, comparator = {}",
                    fmt_complex(c.region.center()),
                    c.winding,
                    c.margin,
                    c.comparator.as_str()
                ));
                say.push(format!(
                    "  sigma = {}, tau = {}, kronecker quality = {}, cassels residual = {:e} (bound {:e}), blocks hold = {}, attempts = {}",
                    o.sigma, o.tau, o.kronecker_quality, o.cassels_residual, o.cassels_residual_bound, o.cassels_all_hold, o.attempts
                ));
                rec.certificates.push(CertificateRecord::from_certificate(c));
            }
            Ok(None)
        }
        Command::Scan { entry, pipeline, strategy, cell_sigma, cell_t, max_split, limit, catalog } => {
            let b = resolve(entry, catalog)?;
            let PipelineArgs { m, z, delta, t_max, .. } = pipeline;
            let strat = match strategy {
                ScanStrategy::Raster => Strategy::Raster { cell_sigma: *cell_sigma, cell_t: *cell_t, max_split: *max_split },
                ScanStrategy::Constructive => Strategy::Constructive(Box::new(construct_config(pipeline, cli.tol)), *limit),
            };
            let rep = match (&b, strategy) {
                (Builtin::Combo(c), ScanStrategy::Constructive) => {
                    if *m != 0 || z.norm() != 0.0 {
                        return Err(CliError::Usage("constructive scans of combinations look for zeros (m = 0, z = 0)".into()));
                    }
                    combo_zero_search(c, *delta, *t_max, &strat, cli.tol)?
                }
                _ => cvalue_scan(&b, *m, *z, *delta, *t_max, &strat, cli.tol)?,
            };
            say.push(format!("hits = {}", rep.hits.len()));
            say.push(format!("zero-free cells = {}, indeterminate cells = {}", rep.zero_free, rep.indeterminate.len()));
            if let Some(s) = rep.certified_strip {
                say.push(format!(
                    "strip [{}, {}] x [{}, {}] exhaustive = {}",
                    s.sigma_min,
                    s.sigma_max,
                    s.t_min,
                    s.t_max,
                    rep.exhaustive()
                ));
            }
            rec.certificates = rep.hits.iter().map(CertificateRecord::from_certificate).collect();
            Ok(Some(plot::to_csv(&plot::rows(&rep))))
        }
        Command::Certify { record_file, replay } => certify(record_file, *replay, say).map(|_| None),
        Command::Almostperiod { entry, delta, eps, theta_min, theta_cap, points, t_max, catalog } => {
            let e = resolve_entry(entry, catalog)?;
            let margin = nonvanishing_margin(&e, *delta)?;
            say.push(format!("margin = {margin}"));
            let ap = almost_period_find(&e, *delta, *eps, AlmostOptions { theta_min: *theta_min, theta_cap: *theta_cap })?;
            say.push(format!("theta = {}", ap.theta));
            say.push(format!("sup bound = {} (head {}, tail {}, n <= {})", ap.bound, ap.head, ap.tail, ap.n_terms));
            let seen = spot_check(&e, *delta, ap.theta, *t_max, *points, cli.tol)?;
            say.push(format!("grid discrepancy = {seen}"));
            if seen > ap.bound {
                return Err(CliError::Internal(format!("observed discrepancy {seen} exceeds the certified bound {}", ap.bound)));
            }
            let lower = composite_lower_bound(margin, &ap);
            say.push(format!("composite lower bound = {lower}"));
            if !(lower > 0.0) {
                return Err(Error::NoCertificate(format!("margin {margin} does not exceed the shift bound {}", ap.bound)).into());
            }
            let low = composite_spot_check(&e, *delta, ap.theta, *t_max, *points, cli.seed, cli.tol)?;
            say.push(format!("composite minimum at {points} random points = {low}"));
            if low < lower {
                return Err(CliError::Internal(format!("observed |L(s) + L(s + i theta)| = {low} below {lower}")));
            }
            Ok(None)
        }
        Command::Plot { csv, title } => {
            let text = std::fs::read_to_string(csv).map_err(|e| CliError::io(csv, e))?;
            let rows = plot::from_csv(&text)?;
            let title = title.clone().unwrap_or_else(|| csv.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default());
            say.push(format!("points = {}", rows.len()));
            Ok(Some(plot::svg(&rows, &title)))
        }
    }
}

fn construct_config(p: &PipelineArgs, tol: f64) -> ConstructConfig {
    let mut k = ConstructConfig::new(p.m, p.z, p.delta);
    k.sigma = p.sigma;
    k.radius = p.radius;
    k.t_max = p.t_max;
    k.epsilon1 = p.eps1;
    k.candidates = p.candidates;
    k.n_final = p.n_final;
    k.allow_taylor = !p.no_taylor;
    k.tol = tol;
    k
}

/// Drop `--out` and `--record` so a replay writes nothing.
fn replay_argv(argv: &[String]) -> Vec<String> {
    let mut out = Vec::new();
    let mut skip = false;
    for a in argv {
        if skip {
            skip = false;
            continue;
        }
        if a == "--out" || a == "--record" {
            skip = true;
            continue;
        }
        if a.starts_with("--out=") || a.starts_with("--record=") {
            continue;
        }
        out.push(a.clone());
    }
    out
}

fn parse_snapshot(argv: &[String]) -> Result<Cli, CliError> {
    use clap::Parser;
    Cli::try_parse_from(std::iter::once("valdist".to_string()).chain(argv.iter().cloned()))
        .map_err(|e| CliError::Usage(format!("recorded arguments do not parse: {e}")))
}

fn check_all(f: &dyn Evaluable, certs: &[ZeroCertificate], say: &mut Vec<String>) -> Result<usize, CliError> {
    let mut bad = 0;
    for (i, c) in certs.iter().enumerate() {
        let ok = revalidate(f, c).unwrap_or(false);
        say.push(format!("certificate {i}: {}", if ok { "ok" } else { "REJECTED" }));
        bad += usize::from(!ok);
    }
    Ok(bad)
}

fn certify(path: &Path, replay: bool, say: &mut Vec<String>) -> Result<(), CliError> {
    let rec = RunRecord::load(path)?;
    let certs = rec.certificates.iter().map(CertificateRecord::to_certificate).collect::<Result<Vec<_>, _>>()?;
    let snap = parse_snapshot(&rec.argv)?;
    let zero = Complex64::new(0.0, 0.0);
    let bad = match &snap.command {
        Command::Construct { entry, pipeline, catalog, .. } | Command::Scan { entry, pipeline, catalog, .. } => {
            let (m, z) = (pipeline.m, pipeline.z);
            match resolve(entry, catalog)? {
                Builtin::Entry(e) if m == 0 => {
                    check_all(&EntryValue { entry: &e, shift: zero, minus: z, tol: snap.tol }, &certs, say)?
                }
                Builtin::Entry(e) => {
                    check_all(&EntryLogDeriv { entry: &e, m, shift: zero, minus: z, tol: snap.tol }, &certs, say)?
                }
                Builtin::Combo(c) => check_all(&ComboValue { combo: &c, shift: zero, minus: z, tol: snap.tol }, &certs, say)?,
            }
        }
        _ if certs.is_empty() => 0,
        _ => return Err(CliError::Usage(format!("`{}` records carry no checkable certificates", rec.command))),
    };
    say.push(format!("{} of {} certificates re-validated", certs.len() - bad, certs.len()));
    if replay {
        let argv = replay_argv(&rec.argv);
        let again = execute(&parse_snapshot(&argv)?, &argv)?;
        let same = again.record.same_outputs(&rec);
        say.push(format!("replay identical = {same}"));
        if !same {
            return Err(CliError::Rejected("replayed run differs from the record".into()));
        }
    }
    if bad > 0 {
        return Err(CliError::Rejected(format!("{bad} certificate(s) failed re-validation")));
    }
    Ok(())
}
