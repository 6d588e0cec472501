use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("distribution has no atoms")]
    EmptyAtomList,

    #[error("invalid atom ({value}, {prob}): values must be finite and probabilities in (0, 1]")]
    InvalidAtom { value: f64, prob: f64 },

    #[error("probabilities sum to {total}, expected 1")]
    NonUnitMass { total: f64 },

    #[error("distribution mean is {mean}, expected 0")]
    NonZeroMean { mean: f64 },

    #[error("context has no summands")]
    EmptyContext,

    #[error("sum of variances is {bn2}, expected a positive value")]
    ZeroVariance { bn2: f64 },

    #[error("g is undefined at z = {z}")]
    GFunctionDomain { z: f64 },

    #[error("argument {z} outside the domain (0, inf)")]
    DomainError { z: f64 },

    #[error("invalid g-function: {0}")]
    InvalidGFunction(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("projected support of {projected} atoms exceeds the limit of {limit}")]
    SupportTooLarge { projected: u128, limit: usize },

    #[error("no tabulated constant available for {what}")]
    NoConstantAvailable { what: String },

    #[error("root not bracketed on [{lo}, {hi}]")]
    RootNotBracketed { lo: f64, hi: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
