use thiserror::Error;

/// Errors raised by the engine. Verification *findings* (a residual that is
/// not zero, a failed certification) are reported in result values, not here.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("parameter out of domain: {0}")]
    ParameterDomain(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("family has no nonzero member")]
    DegenerateSupport,
    #[error("no index shift aligns the family with the operator: {0}")]
    AlignmentFailure(String),
    #[error("series truncated: need kmax >= {needed}, have {have}")]
    Truncation { needed: i64, have: i64 },
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("singular fitting system: {0}")]
    FitDegeneracy(String),
    #[error("normalization failed: {0}")]
    Normalization(String),
    #[error("cannot reindex: {0}")]
    Reindex(String),
}

pub type Result<T> = std::result::Result<T, Error>;
