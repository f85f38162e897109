//! Sums of unimodular multiples of prescribed radii.
//!
//! For radii `0 < |r_1| <= ... <= |r_n|` with partial sums `R_j`, the values
//! `sum c_j r_j` with `|c_j| = 1` fill exactly the closed annulus
//! `T_n <= |z| <= R_n`, where `T_n = max(|r_n| - R_{n-1}, 0)`.
//! [`decompose`] produces one representation by peeling off the largest
//! radius and keeping the remainder at the middle of the child annulus.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Radii sorted by modulus, remembering the caller's order.
#[derive(Clone, Debug)]
pub struct RadiiSet<R: Real> {
    radii: Vec<Complex<R>>,
    /// `order[i]` is the caller's index of `radii[i]`
    order: Vec<usize>,
    partial: Vec<R>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnnulusInterval<R: Real> {
    pub inner: R,
    pub outer: R,
}

impl<R: Real> AnnulusInterval<R> {
    pub fn contains(&self, modulus: R, slack: R) -> bool {
        modulus >= self.inner - slack && modulus <= self.outer + slack
    }
}

impl<R: Real> RadiiSet<R> {
    pub fn new(radii: &[Complex<R>]) -> Result<Self> {
        if radii.is_empty() {
            return Err(Error::EmptyDomain("no radii".into()));
        }
        if let Some(r) = radii.iter().find(|r| !(r.norm() > R::zero()) || !r.norm().is_finite()) {
            return Err(Error::Domain(format!("radius {r} must be nonzero and finite")));
        }
        let mut order: Vec<usize> = (0..radii.len()).collect();
        order.sort_by(|&i, &j| radii[i].norm().partial_cmp(&radii[j].norm()).unwrap().then(i.cmp(&j)));
        let sorted: Vec<Complex<R>> = order.iter().map(|&i| radii[i]).collect();
        let mut partial = Vec::with_capacity(sorted.len() + 1);
        partial.push(R::zero());
        for r in &sorted {
            let last = *partial.last().unwrap();
            partial.push(last + r.norm());
        }
        Ok(Self { radii: sorted, order, partial })
    }

    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }

    /// Radii in nondecreasing modulus.
    pub fn sorted(&self) -> &[Complex<R>] {
        &self.radii
    }

    /// `R_j` for `j = 0..=n`.
    pub fn partial_sums(&self) -> &[R] {
        &self.partial
    }

    /// Annulus reachable with the `j` smallest radii.
    fn interval_of_prefix(&self, j: usize) -> AnnulusInterval<R> {
        if j == 0 {
            return AnnulusInterval { inner: R::zero(), outer: R::zero() };
        }
        let top = self.radii[j - 1].norm();
        AnnulusInterval { inner: (top - self.partial[j - 1]).max(R::zero()), outer: self.partial[j] }
    }
}

pub fn reachable_interval<R: Real>(radii: &RadiiSet<R>) -> AnnulusInterval<R> {
    radii.interval_of_prefix(radii.len())
}

/// Unimodular `c_j`, in the caller's order, with `|sum c_j r_j - z| <= tol`.
///
/// Targets within `tol` outside the annulus are treated as lying on its
/// boundary.
pub fn decompose<R: Real>(radii: &RadiiSet<R>, z: Complex<R>, tol: R) -> Result<Vec<Complex<R>>> {
    let n = radii.len();
    let whole = reachable_interval(radii);
    let zm = z.norm();
    if !whole.contains(zm, tol) {
        return Err(Error::Unreachable {
            target: format!("{z}"),
            inner: whole.inner.to_f64_lossy(),
            outer: whole.outer.to_f64_lossy(),
        });
    }
    let mut c = vec![Complex::new(R::one(), R::zero()); n];
    let mut w = z;
    for j in (0..n).rev() {
        let r = radii.radii[j];
        let a = r.norm();
        let wm = w.norm();
        let child = radii.interval_of_prefix(j);
        let lo = child.inner.max((wm - a).abs());
        let hi = child.outer.min(wm + a);
        let rho = if j == 0 || hi < lo { lo.min(hi).max(R::zero()) } else { (lo + hi) / R::lit(2.0) };
        let u = if wm > R::zero() {
            let phi = triangle_angle(wm, a, rho);
            (w / wm) * Complex::new(phi.cos(), phi.sin())
        } else {
            Complex::new(R::one(), R::zero())
        };
        w = w - u * a;
        // u was chosen for |r|; rotate so that c * r = u |r|
        let cj = u * (r.conj() / a);
        c[radii.order[j]] = cj / cj.norm();
    }
    Ok(c)
}

/// Angle between sides `x` and `y` of the triangle whose third side is `opp`,
/// in Kahan's cancellation-free form. Infeasible sides clamp to `0` or `pi`.
fn triangle_angle<R: Real>(x: R, y: R, opp: R) -> R {
    let (a, b) = if x >= y { (x, y) } else { (y, x) };
    let c = opp;
    let zero = R::zero();
    let mu = if b >= c { c - (a - b) } else { b - (a - c) };
    let num = (((a - b) + c) * mu).max(zero);
    let den = ((a + (b + c)) * ((a - c) + b)).max(zero);
    if den == zero {
        return R::PI();
    }
    R::lit(2.0) * (num / den).sqrt().atan()
}

/// `sum c_j r_j` in the caller's order.
pub fn recombine<R: Real>(radii: &[Complex<R>], c: &[Complex<R>]) -> Complex<R> {
    radii.iter().zip(c).fold(Complex::new(R::zero(), R::zero()), |acc, (r, c)| acc + r * c)
}
