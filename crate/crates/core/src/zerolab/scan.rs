//! Raster and constructive scans for c-values and combination zeros.

use rayon::prelude::*;

use super::construct::{construct_many, ConstructConfig};
use super::{
    winding_number, Comparator, ComboValue, EntryLogDeriv, EntryValue, Evaluable, Rectangle, Region, ScanReport,
    ZeroCertificate,
};
use crate::catalog::selberg::kappa_estimate;
use crate::catalog::{Backend, Builtin, ComboEntry, EmFactor, LFunctionEntry};
use crate::coeffs::b_to_a;
use crate::error::{Error, Result};
use crate::Complex64;

pub const CELL_SIGMA: f64 = 0.05;
pub const CELL_T: f64 = 0.5;
/// Closest approach to the abscissa certified by default.
pub const SIGMA_FLOOR: f64 = 0.05;
const CELL_SEGMENTS: usize = 16;
const MAX_SPLIT: u32 = 3;
const POSITIVITY_FLOOR: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub enum Strategy {
    Raster { cell_sigma: f64, cell_t: f64, max_split: u32 },
    Constructive(Box<ConstructConfig>, usize),
}

impl Strategy {
    pub fn raster() -> Self {
        Strategy::Raster { cell_sigma: CELL_SIGMA, cell_t: CELL_T, max_split: MAX_SPLIT }
    }
}

enum Cell {
    Hit(ZeroCertificate),
    Free,
    Open(Rectangle),
}

fn classify(f: &dyn Evaluable, cell: Rectangle, depth: u32, max_split: u32) -> Result<Vec<Cell>> {
    match winding_number(f, &Region::Rect(cell), CELL_SEGMENTS) {
        Ok(w) if w.winding == 0 => Ok(vec![Cell::Free]),
        Ok(w) if w.winding > 0 => Ok(vec![Cell::Hit(ZeroCertificate {
            region: Region::Rect(cell),
            winding: w.winding,
            margin: w.margin,
            comparator: Comparator::Direct,
            samples: w.samples,
        })]),
        Ok(_) | Err(Error::IndeterminateBoundary(_)) => {
            if depth >= max_split {
                return Ok(vec![Cell::Open(cell)]);
            }
            let mut out = Vec::new();
            for q in cell.split4() {
                out.extend(classify(f, q, depth + 1, max_split)?);
            }
            Ok(out)
        }
        Err(e) => Err(e),
    }
}

/// Winding over a grid of cells covering `rect`; undecided cells are split
/// into quadrants up to `max_split` times, then reported.
pub fn raster_scan(f: &dyn Evaluable, rect: Rectangle, cell_sigma: f64, cell_t: f64, max_split: u32) -> Result<ScanReport> {
    if !(cell_sigma > 0.0 && cell_t > 0.0) {
        return Err(Error::Invalid("cell sizes must be positive".into()));
    }
    let ns = (rect.width() / cell_sigma).ceil().max(1.0) as usize;
    let nt = (rect.height() / cell_t).ceil().max(1.0) as usize;
    let (ds, dt) = (rect.width() / ns as f64, rect.height() / nt as f64);
    let cells: Vec<Rectangle> = (0..nt)
        .flat_map(|j| {
            (0..ns).map(move |i| Rectangle {
                sigma_min: rect.sigma_min + i as f64 * ds,
                sigma_max: if i + 1 == ns { rect.sigma_max } else { rect.sigma_min + (i + 1) as f64 * ds },
                t_min: rect.t_min + j as f64 * dt,
                t_max: if j + 1 == nt { rect.t_max } else { rect.t_min + (j + 1) as f64 * dt },
            })
        })
        .collect();
    let results: Vec<Vec<Cell>> = cells.par_iter().map(|&c| classify(f, c, 0, max_split)).collect::<Result<_>>()?;
    let mut report = ScanReport::empty(rect, Complex64::new(0.0, 0.0));
    for cell in results.into_iter().flatten() {
        match cell {
            Cell::Hit(c) => report.hits.push(c),
            Cell::Free => report.zero_free += 1,
            Cell::Open(r) => report.indeterminate.push(r),
        }
    }
    report.hits.sort_by(|a, b| {
        let (ca, cb) = (a.region.center(), b.region.center());
        ca.im.total_cmp(&cb.im).then(ca.re.total_cmp(&cb.re))
    });
    let total: i64 = report.hits.iter().map(|h| h.winding).sum();
    report.count_per_t = total as f64 / rect.height();
    Ok(report)
}

/// Strip actually scanned for `1 < sigma < 1 + delta` style requests.
fn strip(abscissa: f64, delta: f64, t_max: f64) -> Result<Rectangle> {
    let lo = abscissa + SIGMA_FLOOR.min(0.5 * delta);
    Rectangle::new(lo, abscissa + delta, 0.0, t_max)
}

/// Solutions of `L(s) = z` (`m = 0`) or `(log L)^{(m)}(s) = z` in
/// `abscissa < sigma < abscissa + delta`, `0 <= t <= t_max`.
pub fn cvalue_scan(entry: &Builtin, m: u32, z: Complex64, delta: f64, t_max: f64, strategy: &Strategy, tol: f64) -> Result<ScanReport> {
    match (entry, strategy) {
        (Builtin::Entry(e), Strategy::Raster { cell_sigma, cell_t, max_split }) => {
            let rect = strip(e.abscissa_abs, delta, t_max)?;
            let mut rep = if m == 0 {
                raster_scan(&EntryValue { entry: e, shift: Complex64::new(0.0, 0.0), minus: z, tol }, rect, *cell_sigma, *cell_t, *max_split)?
            } else {
                let f = EntryLogDeriv { entry: e, m, shift: Complex64::new(0.0, 0.0), minus: z, tol };
                raster_scan(&f, rect, *cell_sigma, *cell_t, *max_split)?
            };
            rep.target = z;
            rep.certified_strip = Some(rect);
            Ok(rep)
        }
        (Builtin::Combo(c), Strategy::Raster { cell_sigma, cell_t, max_split }) => {
            if m != 0 {
                return Err(Error::Invalid("combinations are scanned for values only (m = 0)".into()));
            }
            let rect = strip(c.abscissa(), delta, t_max)?;
            let mut rep = raster_scan(&ComboValue { combo: c, shift: Complex64::new(0.0, 0.0), minus: z, tol }, rect, *cell_sigma, *cell_t, *max_split)?;
            rep.target = z;
            rep.certified_strip = Some(rect);
            Ok(rep)
        }
        (Builtin::Entry(e), Strategy::Constructive(cfg, limit)) => {
            let mut cfg = (**cfg).clone();
            cfg.m = m;
            cfg.z = z;
            cfg.delta = delta;
            cfg.t_max = t_max;
            constructive_report(e, &cfg, *limit, Complex64::new(0.0, 0.0))
        }
        (Builtin::Combo(_), Strategy::Constructive(..)) => {
            Err(Error::Invalid("use combo_zero_search for combinations".into()))
        }
    }
}

fn constructive_report(e: &LFunctionEntry, cfg: &ConstructConfig, limit: usize, shift: Complex64) -> Result<ScanReport> {
    let outs = construct_many(e, cfg, limit)?;
    let rect = Rectangle::new(e.abscissa_abs + shift.re, e.abscissa_abs + cfg.delta + shift.re, 0.0, cfg.t_max)?;
    let mut rep = ScanReport::empty(rect, cfg.z);
    for o in outs {
        let mut c = o.certificate;
        c.region = c.region.translated(shift);
        rep.hits.push(c);
    }
    rep.hits.sort_by(|a, b| a.region.center().im.total_cmp(&b.region.center().im));
    rep.count_per_t = rep.hits.len() as f64 / cfg.t_max;
    Ok(rep)
}

/// Shift `c_1 L_1(s + eta_1) + c_2 L_2(s + eta_2)` into `w = s + eta_1`,
/// return `(Q, -c_2/c_1, eta_1)` with `Q(w) = L_1(w) / L_2(w + d)`.
pub fn quotient_entry(combo: &ComboEntry) -> Result<(LFunctionEntry, Complex64, Complex64)> {
    if combo.parts.len() != 2 {
        return Err(Error::Invalid(format!("need a two-part combination, got {} parts", combo.parts.len())));
    }
    let (mut p1, mut p2) = (&combo.parts[0], &combo.parts[1]);
    if p2.shift.re < p1.shift.re {
        std::mem::swap(&mut p1, &mut p2);
    }
    if p1.shift.im != 0.0 || p2.shift.im != 0.0 {
        return Err(Error::Invalid("only real shifts are supported".into()));
    }
    let d = p2.shift.re - p1.shift.re;
    let (e1, e2) = (&p1.entry, &p2.entry);
    let second = if d > 0.0 { e2.source.shifted(d)? } else { e2.source.clone() };
    let source = e1.source.difference(&second)?;
    let n_max = e1.coeffs.n_max().min(e2.coeffs.n_max());
    let coeffs = b_to_a(&source, n_max)?;
    let backend = match (&e1.backend, &e2.backend) {
        (Backend::EulerMaclaurin(f1), Backend::EulerMaclaurin(f2)) => {
            let mut fs = f1.clone();
            fs.extend(f2.iter().map(|f| EmFactor::new(f.kind, f.scale, f.offset + f.scale * d, -f.power)));
            Backend::EulerMaclaurin(fs)
        }
        _ => Backend::RawSeries,
    };
    let q = LFunctionEntry {
        name: format!("{}/{}", e1.name, e2.name),
        source,
        coeffs,
        backend,
        expected_kappa: None,
        abscissa_abs: e1.abscissa_abs.max(e2.abscissa_abs - d),
    };
    Ok((q, -p2.coefficient / p1.coefficient, p1.shift))
}

/// The difference source must have a positive mean square over primes.
pub fn positivity_precheck(q: &LFunctionEntry) -> Result<f64> {
    let x = q.source.p_max().min(100_000);
    let k = kappa_estimate(&q.source, x)?.kappa;
    if !(k > POSITIVITY_FLOOR) {
        return Err(Error::Invalid(format!("difference source fails the positivity precheck (kappa_hat = {k:e})")));
    }
    Ok(k)
}

/// Zeros of a two-part combination in `abscissa < sigma < abscissa + delta`.
///
/// The constructive strategy targets `log(-c_2/c_1)` on the principal
/// branch for the quotient; the raster strategy scans the combination.
pub fn combo_zero_search(combo: &ComboEntry, delta: f64, t_max: f64, strategy: &Strategy, tol: f64) -> Result<ScanReport> {
    let (q, value, eta1) = quotient_entry(combo)?;
    positivity_precheck(&q)?;
    match strategy {
        Strategy::Raster { .. } => cvalue_scan(&Builtin::Combo(combo.clone()), 0, Complex64::new(0.0, 0.0), delta, t_max, strategy, tol),
        Strategy::Constructive(cfg, limit) => {
            if matches!(q.backend, Backend::RawSeries) {
                return Err(Error::Invalid("constructive search needs Euler–Maclaurin backends; use the raster strategy".into()));
            }
            let mut cfg = (**cfg).clone();
            cfg.m = 0;
            cfg.z = value;
            cfg.delta = delta;
            cfg.t_max = t_max;
            // w = s + eta_1
            let mut rep = constructive_report(&q, &cfg, *limit, -eta1)?;
            rep.target = Complex64::new(0.0, 0.0);
            Ok(rep)
        }
    }
}

/// Certificate counts for each `T`, from one constructive run to the
/// largest `T`.
pub fn linear_growth_probe(entry: &LFunctionEntry, cfg: &ConstructConfig, t_list: &[f64], limit: usize) -> Result<Vec<(f64, usize, f64)>> {
    let t_top = t_list.iter().cloned().fold(0.0, f64::max);
    let mut c = cfg.clone();
    c.t_max = t_top;
    c.candidates = c.candidates.max(limit);
    let rep = match constructive_report(entry, &c, limit, Complex64::new(0.0, 0.0)) {
        Ok(r) => r,
        Err(Error::NoCertificate(_)) | Err(Error::NoShift(_)) => ScanReport::empty(Rectangle::new(1.0, 2.0, 0.0, t_top.max(1.0))?, cfg.z),
        Err(e) => return Err(e),
    };
    if !rep.pairwise_disjoint() {
        return Err(Error::Invalid("overlapping certificates".into()));
    }
    Ok(t_list
        .iter()
        .map(|&t| {
            let n = rep.hits.iter().filter(|h| h.region.bbox().t_max <= t).count();
            (t, n, n as f64 / t)
        })
        .collect())
}
