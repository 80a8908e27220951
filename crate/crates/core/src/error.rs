use thiserror::Error;

/// Errors raised by the numerical routines.
///
/// Each variant names the contract that was violated so that callers (the
/// CLI in particular) can map it onto an exit status.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("range error: {0}")]
    Range(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("degenerate quadrature pair: sin(theta) = 0 for theta = {0}")]
    DegeneratePair(f64),
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("insufficient grid coverage: {0}")]
    Coverage(String),
    #[error("underdetermined: {0}")]
    Underdetermined(String),
    #[error("ill-conditioned system: condition number {0:.3e} exceeds limit")]
    Conditioning(f64),
    #[error("series did not converge: {0}")]
    Convergence(String),
    #[error("length mismatch: {0}")]
    Length(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for failures of an input's structural invariants (as opposed to
    /// a numerical contract failing during evaluation).
    pub fn is_validation(&self) -> bool {
        matches!(self, Error::Validation(_) | Error::Parse(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
