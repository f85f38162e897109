//! L-function spec files.
//!
//! ```text
//! name = "zeta_97"
//! p_max = 97
//! n_max = 97
//! backend = "em"
//! em_factors = [["zeta", 1.0, 0.0, 1]]
//! growth = [1.0, 0.0, 1.0, 0.0]
//! expected_kappa = 1.0
//! coefficients = [[2, 1, 1.0, 0.0], [2, 2, 0.5, 0.0]]
//! ```
//!
//! Prime powers without a record have `b(p^k) = 0`.

use std::collections::BTreeMap;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use valdist::catalog::{Backend, EmFactor, EmKind, LFunctionEntry};
use valdist::coeffs::{b_to_a, max_exponent, CoefficientSource, ExtensionRule};
use valdist::primes::simple_sieve;
use valdist::Growth;

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LFunctionSpecFile {
    pub name: String,
    pub p_max: u64,
    pub n_max: u64,
    /// `"raw"` or `"em"`.
    pub backend: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub em_factors: Vec<(String, f64, f64, i32)>,
    /// `[a_const, a_exp, b_const, b_exp]`
    pub growth: [f64; 4],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_kappa: Option<f64>,
    #[serde(default = "one")]
    pub abscissa: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub large_prime_floor: Option<f64>,
    pub coefficients: Vec<(u64, u32, f64, f64)>,
}

fn one() -> f64 {
    1.0
}

fn kind_name(k: EmKind) -> &'static str {
    match k {
        EmKind::Zeta => "zeta",
        EmKind::Chi4 => "chi4",
    }
}

fn parse_kind(s: &str) -> Result<EmKind, CliError> {
    match s {
        "zeta" => Ok(EmKind::Zeta),
        "chi4" => Ok(EmKind::Chi4),
        other => Err(CliError::Usage(format!("unknown Euler-Maclaurin factor `{other}`"))),
    }
}

impl LFunctionSpecFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Usage(format!("spec file: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text)
    }

    pub fn to_text(&self) -> String {
        toml::to_string(self).expect("spec files serialize")
    }

    /// Spec for an in-memory entry; tabulated records only.
    pub fn from_entry(entry: &LFunctionEntry) -> Self {
        let src = &entry.source;
        let mut coefficients = Vec::new();
        for (i, &p) in src.primes().iter().enumerate() {
            for (k, b) in src.row(i).iter().enumerate() {
                if b.re != 0.0 || b.im != 0.0 {
                    coefficients.push((p, k as u32 + 1, b.re, b.im));
                }
            }
        }
        let (backend, em_factors) = match &entry.backend {
            Backend::RawSeries => ("raw".to_string(), Vec::new()),
            Backend::EulerMaclaurin(fs) => (
                "em".to_string(),
                fs.iter().map(|f| (kind_name(f.kind).to_string(), f.scale, f.offset, f.power)).collect(),
            ),
        };
        let g = src.growth();
        Self {
            name: entry.name.clone(),
            p_max: src.p_max(),
            n_max: entry.coeffs.n_max(),
            backend,
            em_factors,
            growth: [g.a_bound_const, g.a_bound_exp, g.b_bound_const, g.b_bound_exp],
            expected_kappa: entry.expected_kappa,
            abscissa: entry.abscissa_abs,
            large_prime_floor: src.large_prime_floor(),
            coefficients,
        }
    }

    pub fn to_entry(&self) -> Result<LFunctionEntry, CliError> {
        if self.n_max == 0 || self.n_max > self.p_max {
            return Err(CliError::Usage(format!("need 1 <= n_max <= p_max, got {} and {}", self.n_max, self.p_max)));
        }
        let [a0, ae, b0, be] = self.growth;
        let growth = Growth::new(a0, ae, b0, be)?;
        let primes = simple_sieve(self.p_max);
        let index: BTreeMap<u64, usize> = primes.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let mut table: Vec<Vec<Complex64>> =
            primes.iter().map(|&p| vec![Complex64::new(0.0, 0.0); max_exponent(p, self.p_max) as usize]).collect();
        for &(p, k, re, im) in &self.coefficients {
            let slot = index
                .get(&p)
                .and_then(|&i| table[i].get_mut((k as usize).wrapping_sub(1)))
                .ok_or_else(|| CliError::Usage(format!("record ({p}, {k}) is not a prime power up to p_max")))?;
            *slot = Complex64::new(re, im);
        }
        let mut source = CoefficientSource::from_table(self.p_max, primes, table, ExtensionRule::ZeroBeyondCutoff, growth)?;
        if let Some(f) = self.large_prime_floor {
            source = source.with_large_prime_floor(f);
        }
        let backend = match self.backend.as_str() {
            "raw" => Backend::RawSeries,
            "em" => {
                if self.em_factors.is_empty() {
                    return Err(CliError::Usage("backend `em` needs em_factors".into()));
                }
                let fs = self
                    .em_factors
                    .iter()
                    .map(|(k, scale, offset, power)| Ok(EmFactor::new(parse_kind(k)?, *scale, *offset, *power)))
                    .collect::<Result<Vec<_>, CliError>>()?;
                Backend::EulerMaclaurin(fs)
            }
            other => return Err(CliError::Usage(format!("unknown backend `{other}`"))),
        };
        let coeffs = b_to_a(&source, self.n_max)?;
        Ok(LFunctionEntry {
            name: self.name.clone(),
            source,
            coeffs,
            backend,
            expected_kappa: self.expected_kappa,
            abscissa_abs: self.abscissa,
        })
    }
}
