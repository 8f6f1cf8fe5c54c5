use thiserror::Error;

/// Errors raised by the relation calculus.
///
/// Numerical verdicts (a predicate that turns out false, a certificate that
/// fails) are never errors; they are reported in the result types. Errors are
/// reserved for malformed inputs and violated preconditions.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("ambient dimension mismatch: expected {expected}, found {found}")]
    AmbientMismatch { expected: usize, found: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("non-finite entry in input")]
    NonFinite,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("{what} did not stabilize within {cap} steps")]
    NoStabilization { what: &'static str, cap: usize },

    #[error("window claim references index {index}, outside the window 1..={window}")]
    OutsideWindow { index: usize, window: usize },

    #[error("invalid window configuration: {0}")]
    InvalidWindow(String),
}

pub type Result<T> = std::result::Result<T, Error>;
