use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("empty domain: {0}")]
    EmptyDomain(String),
    #[error("outside the domain of evaluation: {0}")]
    Domain(String),
    #[error("requested range exceeds the tabulated range: {0}")]
    Range(String),
    #[error("pole at {0}")]
    Pole(String),
    #[error("invalid growth certificate: {0}")]
    Growth(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("unknown catalog entry `{0}`")]
    UnknownEntry(String),
    #[error("target {target} unreachable: annulus [{inner}, {outer}]")]
    Unreachable { target: String, inner: f64, outer: f64 },
    #[error("no admissible sigma at desk scale: {0}")]
    SigmaInfeasible(String),
    #[error("block construction failed at block {block}: {reason}")]
    Construction { block: usize, reason: String },
    #[error("block {block} too small: ratio S3/S2 = {ratio} below {threshold}; enlarge N1 or c0")]
    BlockTooSmall { block: usize, ratio: f64, threshold: f64 },
    #[error("no shift found: {0}")]
    NoShift(String),
    #[error("indeterminate boundary: {0}")]
    IndeterminateBoundary(String),
    #[error("no Rouche certificate: {0}")]
    NoCertificate(String),
    #[error("cache file: {0}")]
    Cache(String),
}

pub type Result<T> = std::result::Result<T, Error>;
