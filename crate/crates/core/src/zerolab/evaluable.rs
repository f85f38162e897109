//! Functions with certified values and derivative bounds on boxes.

use super::Rectangle;
use crate::catalog::{
    deriv_abs_bound, eval_entry, eval_entry_deriv, eval_entry_log_deriv, log_deriv_abs_bound, second_deriv_abs_bound,
    ComboEntry, LFunctionEntry,
};
use crate::error::Result;
use crate::eval::sum_terms;
use crate::{Ball, Complex64};

pub trait Evaluable: Sync {
    fn eval(&self, s: Complex64) -> Result<Ball>;

    /// Upper bound on `|f'|` over `bbox`.
    fn deriv_bound(&self, bbox: &Rectangle) -> Result<f64>;

    /// Certified `f'(s)`, when available.
    fn deriv(&self, _s: Complex64) -> Option<Result<Ball>> {
        None
    }

    /// Upper bound on `|f''|` over `bbox`; only used together with `deriv`.
    fn second_deriv_bound(&self, _bbox: &Rectangle) -> Result<f64> {
        Ok(f64::INFINITY)
    }
}

fn minus(v: Ball, z: Complex64) -> Ball {
    v - Ball::exact(z)
}

/// `L(s + shift) - minus`.
pub struct EntryValue<'a> {
    pub entry: &'a LFunctionEntry,
    pub shift: Complex64,
    pub minus: Complex64,
    pub tol: f64,
}

impl Evaluable for EntryValue<'_> {
    fn eval(&self, s: Complex64) -> Result<Ball> {
        Ok(minus(eval_entry(self.entry, s + self.shift, self.tol)?, self.minus))
    }

    fn deriv_bound(&self, bbox: &Rectangle) -> Result<f64> {
        deriv_abs_bound(self.entry, bbox.sigma_min + self.shift.re)
    }

    fn deriv(&self, s: Complex64) -> Option<Result<Ball>> {
        Some(eval_entry_deriv(self.entry, s + self.shift, self.tol))
    }

    fn second_deriv_bound(&self, bbox: &Rectangle) -> Result<f64> {
        second_deriv_abs_bound(self.entry, bbox.sigma_min + self.shift.re)
    }
}

/// `(log L)^{(m)}(s + shift) - minus`.
pub struct EntryLogDeriv<'a> {
    pub entry: &'a LFunctionEntry,
    pub m: u32,
    pub shift: Complex64,
    pub minus: Complex64,
    pub tol: f64,
}

impl Evaluable for EntryLogDeriv<'_> {
    fn eval(&self, s: Complex64) -> Result<Ball> {
        Ok(minus(eval_entry_log_deriv(self.entry, self.m, s + self.shift, self.tol)?, self.minus))
    }

    fn deriv_bound(&self, bbox: &Rectangle) -> Result<f64> {
        log_deriv_abs_bound(self.entry, self.m + 1, bbox.sigma_min + self.shift.re)
    }

    fn deriv(&self, s: Complex64) -> Option<Result<Ball>> {
        (self.m == 0).then(|| eval_entry_log_deriv(self.entry, 1, s + self.shift, self.tol))
    }

    fn second_deriv_bound(&self, bbox: &Rectangle) -> Result<f64> {
        log_deriv_abs_bound(self.entry, self.m + 2, bbox.sigma_min + self.shift.re)
    }
}

/// `combo(s + shift) - minus`.
pub struct ComboValue<'a> {
    pub combo: &'a ComboEntry,
    pub shift: Complex64,
    pub minus: Complex64,
    pub tol: f64,
}

impl Evaluable for ComboValue<'_> {
    fn eval(&self, s: Complex64) -> Result<Ball> {
        Ok(minus(self.combo.eval(s + self.shift, self.tol)?, self.minus))
    }

    fn deriv_bound(&self, bbox: &Rectangle) -> Result<f64> {
        self.combo.deriv_abs_bound(bbox.sigma_min + self.shift.re)
    }

    fn deriv(&self, s: Complex64) -> Option<Result<Ball>> {
        Some(self.combo.eval_deriv(s + self.shift, self.tol))
    }

    fn second_deriv_bound(&self, bbox: &Rectangle) -> Result<f64> {
        self.combo.second_deriv_abs_bound(bbox.sigma_min + self.shift.re)
    }
}

/// Finite `sum_n c_n n^{-s} - minus`.
#[derive(Clone, Debug)]
pub struct DirichletPoly {
    pub terms: Vec<(u64, Complex64)>,
    pub minus: Complex64,
}

impl DirichletPoly {
    pub fn new(terms: Vec<(u64, Complex64)>) -> Self {
        Self { terms, minus: Complex64::new(0.0, 0.0) }
    }

    fn moment(&self, j: i32, sigma: f64) -> f64 {
        let raw: f64 = self.terms.iter().map(|&(n, c)| c.norm() * (n as f64).ln().powi(j) * (n as f64).powf(-sigma)).sum();
        raw * (1.0 + 1e-12)
    }
}

impl Evaluable for DirichletPoly {
    fn eval(&self, s: Complex64) -> Result<Ball> {
        Ok(minus(sum_terms(self.terms.iter().map(|&(n, c)| (n as f64, c)), s), self.minus))
    }

    fn deriv_bound(&self, bbox: &Rectangle) -> Result<f64> {
        Ok(self.moment(1, bbox.sigma_min))
    }

    fn deriv(&self, s: Complex64) -> Option<Result<Ball>> {
        Some(Ok(sum_terms(self.terms.iter().map(|&(n, c)| (n as f64, -c * (n as f64).ln())), s)))
    }

    fn second_deriv_bound(&self, bbox: &Rectangle) -> Result<f64> {
        Ok(self.moment(2, bbox.sigma_min))
    }
}

/// `value + slope (s - s0)`.
#[derive(Clone, Copy, Debug)]
pub struct LinearModel {
    pub s0: Complex64,
    pub slope: Complex64,
    pub value: Complex64,
}

impl Evaluable for LinearModel {
    fn eval(&self, s: Complex64) -> Result<Ball> {
        let v = self.value + self.slope * (s - self.s0);
        let err = 8.0 * f64::EPSILON * (self.value.norm() + self.slope.norm() * ((s - self.s0).norm() + s.norm()));
        Ok(Ball::new(v, err))
    }

    fn deriv_bound(&self, _bbox: &Rectangle) -> Result<f64> {
        Ok(self.slope.norm())
    }

    fn deriv(&self, _s: Complex64) -> Option<Result<Ball>> {
        Some(Ok(Ball::exact(self.slope)))
    }

    fn second_deriv_bound(&self, _bbox: &Rectangle) -> Result<f64> {
        Ok(0.0)
    }
}

/// A closure with a global Lipschitz constant.
pub struct FnEvaluable<F> {
    pub f: F,
    pub lipschitz: f64,
}

impl<F> Evaluable for FnEvaluable<F>
where
    F: Fn(Complex64) -> Result<Ball> + Sync,
{
    fn eval(&self, s: Complex64) -> Result<Ball> {
        (self.f)(s)
    }

    fn deriv_bound(&self, _bbox: &Rectangle) -> Result<f64> {
        Ok(self.lipschitz)
    }
}

/// `inner(s) - minus`.
pub struct Offset<'a> {
    pub inner: &'a dyn Evaluable,
    pub minus: Complex64,
}

impl Evaluable for Offset<'_> {
    fn eval(&self, s: Complex64) -> Result<Ball> {
        Ok(minus(self.inner.eval(s)?, self.minus))
    }

    fn deriv_bound(&self, bbox: &Rectangle) -> Result<f64> {
        self.inner.deriv_bound(bbox)
    }

    fn deriv(&self, s: Complex64) -> Option<Result<Ball>> {
        self.inner.deriv(s)
    }

    fn second_deriv_bound(&self, bbox: &Rectangle) -> Result<f64> {
        self.inner.second_deriv_bound(bbox)
    }
}
