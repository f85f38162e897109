//! Rouché certificates: `|g - F| < |F - z|` on a circle.

use super::boundary::{sample, walk, Sample};
use super::{winding_number, Comparator, Evaluable, Offset, Region, ZeroCertificate, DEFAULT_SEGMENTS};
use crate::error::{Error, Result};
use crate::Complex64;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RoucheReport {
    pub certificate_gap: f64,
    pub comparator_winding: i64,
}

/// Certify that `g = z` has a solution in the disk of the given radius
/// about `center`, by comparison with `f`.
///
/// Both sides of the inequality are enclosed on every boundary segment from
/// sampled values and the Lipschitz bounds of `g` and `f`; the winding of
/// `g - z` is computed independently and must agree with that of `f - z`.
pub fn rouche_certify(
    g: &dyn Evaluable,
    f: &dyn Evaluable,
    center: Complex64,
    radius: f64,
    z: Complex64,
    abscissa: f64,
    comparator: Comparator,
) -> Result<(ZeroCertificate, RoucheReport)> {
    if !(radius > 0.0 && radius < center.re - abscissa) {
        return Err(Error::Invalid(format!(
            "need 0 < r < sigma0 - {abscissa}, got r = {radius}, sigma0 = {}",
            center.re
        )));
    }
    let region = Region::disk(center, radius)?;
    let bbox = region.bbox();
    let (lg, lf) = (g.deriv_bound(&bbox)?, f.deriv_bound(&bbox)?);
    let walked = walk(
        &region,
        DEFAULT_SEGMENTS,
        |s| Ok((sample(g, s, false)?, sample(f, s, false)?)),
        |a: &(Sample, Sample), _b, h| {
            let (ga, fa) = a;
            let upper = (ga.v - fa.v).norm() + ga.e + fa.e + (lg + lf) * h;
            let lower = (fa.v - z).norm() - fa.e - lf * h;
            (upper < lower).then_some(lower - upper)
        },
    );
    let gap = match walked {
        Ok((_, gap)) if gap > 0.0 => gap,
        Ok(_) | Err(Error::IndeterminateBoundary(_)) => {
            return Err(Error::NoCertificate(format!("Rouché inequality fails on the circle |s - {center}| = {radius}")))
        }
        Err(e) => return Err(e),
    };
    let gz = Offset { inner: g, minus: z };
    let fz = Offset { inner: f, minus: z };
    let wg = match winding_number(&gz, &region, DEFAULT_SEGMENTS) {
        Ok(w) => w,
        Err(Error::IndeterminateBoundary(m)) => return Err(Error::NoCertificate(m)),
        Err(e) => return Err(e),
    };
    let wf = match winding_number(&fz, &region, DEFAULT_SEGMENTS) {
        Ok(w) => w,
        Err(Error::IndeterminateBoundary(m)) => return Err(Error::NoCertificate(m)),
        Err(e) => return Err(e),
    };
    if wg.winding != wf.winding {
        return Err(Error::NoCertificate(format!("winding disagreement: {} vs comparator {}", wg.winding, wf.winding)));
    }
    if wg.winding < 1 {
        return Err(Error::NoCertificate(format!("comparator does not wind (winding {})", wf.winding)));
    }
    let cert = ZeroCertificate { region, winding: wg.winding, margin: wg.margin, comparator, samples: wg.samples };
    Ok((cert, RoucheReport { certificate_gap: gap, comparator_winding: wf.winding }))
}

/// Recompute the winding of `f` over the certificate's region with twice as
/// many initial boundary points; true when winding and sign of margin agree.
pub fn revalidate(f: &dyn Evaluable, cert: &ZeroCertificate) -> Result<bool> {
    let w = winding_number(f, &cert.region, (2 * cert.samples).max(2 * DEFAULT_SEGMENTS))?;
    Ok(w.winding == cert.winding && w.margin > 0.0)
}
