//! Run records: the argument snapshot of a command and what it produced.
//!
//! ```text
//! command = "construct"
//! argv = ["construct", "zeta", "--m", "0", "--z", "2", "--delta", "1"]
//! version = "0.1.0"
//! started = 1760000000.0
//! finished = 1760000012.5
//! summary = ["sigma = 1.4", "tau = 1234.5"]
//!
//! [[certificate]]
//! shape = "disk"
//! region = [1.4, 1234.5, 0.15]
//! winding = 1
//! margin = 0.012
//! comparator = "cassels"
//! samples = 96
//! ```
//!
//! `region` is `[re, im, radius]` for disks and
//! `[sigma_min, sigma_max, t_min, t_max]` for rectangles.

use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use valdist::zerolab::{Comparator, Rectangle, Region, ZeroCertificate};
use valdist::Complex64;

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateRecord {
    pub shape: String,
    pub region: Vec<f64>,
    pub winding: i64,
    pub margin: f64,
    pub comparator: String,
    pub samples: u64,
}

impl CertificateRecord {
    pub fn from_certificate(c: &ZeroCertificate) -> Self {
        let (shape, region) = match c.region {
            Region::Disk { center, radius } => ("disk", vec![center.re, center.im, radius]),
            Region::Rect(r) => ("rect", vec![r.sigma_min, r.sigma_max, r.t_min, r.t_max]),
        };
        Self {
            shape: shape.into(),
            region,
            winding: c.winding,
            margin: c.margin,
            comparator: c.comparator.as_str().into(),
            samples: c.samples as u64,
        }
    }

    pub fn to_certificate(&self) -> Result<ZeroCertificate, CliError> {
        let region = match (self.shape.as_str(), self.region.as_slice()) {
            ("disk", &[re, im, r]) => Region::disk(Complex64::new(re, im), r)?,
            ("rect", &[a, b, c, d]) => Region::Rect(Rectangle::new(a, b, c, d)?),
            _ => return Err(CliError::Usage(format!("bad certificate region {:?} {:?}", self.shape, self.region))),
        };
        Ok(ZeroCertificate {
            region,
            winding: self.winding,
            margin: self.margin,
            comparator: Comparator::parse(&self.comparator)?,
            samples: self.samples as usize,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunRecord {
    pub command: String,
    /// Arguments after the program name; replaying them reproduces the run.
    pub argv: Vec<String>,
    pub version: String,
    pub started: f64,
    pub finished: f64,
    #[serde(default)]
    pub summary: Vec<String>,
    #[serde(default, rename = "certificate", skip_serializing_if = "Vec::is_empty")]
    pub certificates: Vec<CertificateRecord>,
}

pub fn now() -> f64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs_f64()).unwrap_or(0.0)
}

impl RunRecord {
    pub fn new(command: &str, argv: Vec<String>) -> Self {
        Self {
            command: command.into(),
            argv,
            version: env!("CARGO_PKG_VERSION").into(),
            started: now(),
            finished: 0.0,
            summary: Vec::new(),
            certificates: Vec::new(),
        }
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Usage(format!("run record: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text)
    }

    pub fn to_text(&self) -> String {
        toml::to_string(self).expect("run records serialize")
    }

    /// Equal up to timestamps.
    pub fn same_outputs(&self, other: &Self) -> bool {
        self.command == other.command && self.summary == other.summary && self.certificates == other.certificates
    }
}
