//! Certified value distribution of L-functions in the half-plane of absolute
//! convergence: Euler products and their logarithmic derivatives, block
//! constructions of twisted log-series, Kronecker shifts, and argument
//! principle certificates for c-values and zeros.

pub mod annulus;
pub mod catalog;
pub mod cassels;
pub mod certified;
pub mod coeffs;
pub mod error;
pub mod eval;
pub mod kronecker;
pub mod primes;
pub mod zerolab;
pub mod scalar;
pub mod zeta_em;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Complex64 = num_complex::Complex<f64>;
pub type Ball = certified::CertifiedValue<f64>;
pub type Source = coeffs::CoefficientSource<f64>;
pub type Coefficients = coeffs::DirichletCoefficients<f64>;
pub type Growth = coeffs::GrowthCertificate<f64>;
