use alloc::string::String;

/// Errors raised by the core routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("cut-points must be finite and strictly increasing")]
    UnorderedCutPoints,
    #[error("category label {label} outside 1..={k}")]
    LabelOutOfRange { label: usize, k: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("null log-likelihood is zero; McFadden's R2 is undefined")]
    DegenerateNullLikelihood,
    #[error("empty input: {0}")]
    Empty(&'static str),
    #[error("auxiliary GIG representation requires lambda > -1/2 (got {0}); use the direct sampler")]
    AuxiliaryLambda(f64),
    #[error("sampling failed after {attempts} attempts: {what}")]
    SamplingFailed { what: &'static str, attempts: usize },
    #[error("sampler could not find a finite initial point after {0} attempts")]
    Initialization(usize),
    #[error("step size search failed: {0}")]
    StepSize(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
