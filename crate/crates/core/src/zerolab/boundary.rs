//! Adaptive boundary subdivision with certified per-segment enclosures.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;

use super::{Evaluable, Region};
use crate::error::{Error, Result};
use crate::Complex64;

pub const DEFAULT_SEGMENTS: usize = 64;
const MAX_DEPTH: u32 = 40;
const MAX_SAMPLES: usize = 1 << 21;

#[derive(Clone, Copy, Debug)]
pub(crate) struct Sample {
    pub v: Complex64,
    pub e: f64,
    pub d: Option<(Complex64, f64)>,
}

pub(crate) fn sample(f: &dyn Evaluable, s: Complex64, with_deriv: bool) -> Result<Sample> {
    let b = f.eval(s)?;
    let d = if with_deriv {
        match f.deriv(s) {
            Some(r) => {
                let d = r?;
                Some((d.value, d.error_bound))
            }
            None => None,
        }
    } else {
        None
    };
    Ok(Sample { v: b.value, e: b.error_bound, d })
}

/// Bound on `|f(s) - f~(a)|` for `|s - a| <= h`.
pub(crate) fn excursion(a: &Sample, h: f64, lip: f64, second: f64) -> f64 {
    let first = lip * h;
    let taylor = match a.d {
        Some((d, e)) if second.is_finite() => (d.norm() + e) * h + 0.5 * second * h * h,
        _ => f64::INFINITY,
    };
    a.e + first.min(taylor)
}

/// Walk the boundary, bisecting every segment until `test(a, b, h)` accepts
/// it; `test` returns a certified lower bound for the segment. Returns the
/// accepted points in order (first point not repeated) and the minimum bound.
pub(crate) fn walk<T, P, F>(region: &Region, segments: usize, point: P, test: F) -> Result<(Vec<T>, f64)>
where
    T: Clone + Send + Sync,
    P: Fn(Complex64) -> Result<T> + Sync,
    F: Fn(&T, &T, f64) -> Option<f64> + Sync,
{
    let n0 = segments.max(4);
    let per = region.perimeter();
    let count = AtomicUsize::new(n0);
    let nodes: Vec<T> = (0..n0).into_par_iter().map(|i| point(region.point(i as f64 / n0 as f64))).collect::<Result<_>>()?;
    let parts: Vec<(Vec<T>, f64)> = (0..n0)
        .into_par_iter()
        .map(|i| {
            let (ua, ub) = (i as f64 / n0 as f64, (i + 1) as f64 / n0 as f64);
            let b = nodes[(i + 1) % n0].clone();
            let mut out = vec![nodes[i].clone()];
            let mut lo = f64::INFINITY;
            // stack of pending (u_a, a, u_b, b, depth), processed left to right
            let mut stack = vec![(ua, nodes[i].clone(), ub, b, 0u32)];
            while let Some((ua, a, ub, b, depth)) = stack.pop() {
                let h = per * (ub - ua);
                if let Some(m) = test(&a, &b, h) {
                    lo = lo.min(m);
                    out.push(b);
                    continue;
                }
                if depth >= MAX_DEPTH || count.fetch_add(1, Ordering::Relaxed) >= MAX_SAMPLES {
                    let s = region.point(ua);
                    return Err(Error::IndeterminateBoundary(format!(
                        "boundary could not be certified near {s} (segment length {h:.3e})"
                    )));
                }
                let um = 0.5 * (ua + ub);
                let m = point(region.point(um))?;
                stack.push((um, m.clone(), ub, b, depth + 1));
                stack.push((ua, a, um, m, depth + 1));
            }
            out.pop();
            Ok((out, lo))
        })
        .collect::<Result<_>>()?;
    let lo = parts.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    Ok((parts.into_iter().flat_map(|p| p.0).collect(), lo))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Winding {
    pub winding: i64,
    /// Certified lower bound on `|f|` over the boundary.
    pub margin: f64,
    pub samples: usize,
}

/// Sum of principal argument increments around the closed samples.
pub(crate) fn winding_of(values: &[Complex64]) -> i64 {
    let n = values.len();
    let total: f64 = (0..n).map(|i| (values[(i + 1) % n] / values[i]).arg()).sum();
    (total / (2.0 * PI)).round() as i64
}

/// Certified winding number of `f` around the boundary of `region`.
///
/// Each accepted segment keeps `f` inside a disk about the sampled value of
/// radius below `|f~| sin(pi/4)`, so the argument moves by less than `pi/2`.
pub fn winding_number(f: &dyn Evaluable, region: &Region, segments: usize) -> Result<Winding> {
    let bbox = region.bbox();
    let lip = f.deriv_bound(&bbox)?;
    let second = f.second_deriv_bound(&bbox).unwrap_or(f64::INFINITY);
    let with_deriv = second.is_finite();
    let (pts, margin) = walk(
        region,
        segments,
        |s| sample(f, s, with_deriv),
        |a: &Sample, b: &Sample, h| {
            let rho = excursion(a, h, lip, second);
            let cap = a.v.norm() * FRAC_1_SQRT_2;
            (rho + b.e < cap && b.e < b.v.norm() * FRAC_1_SQRT_2).then(|| a.v.norm() - rho)
        },
    )?;
    if !(margin > 0.0) {
        return Err(Error::IndeterminateBoundary(format!("nonpositive boundary margin {margin}")));
    }
    let values: Vec<Complex64> = pts.iter().map(|p| p.v).collect();
    Ok(Winding { winding: winding_of(&values), margin, samples: pts.len() })
}
