use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("overflow evaluating C_n(1) at degree {degree}")]
    Overflow { degree: u32 },

    #[error("root finding did not converge for degree {degree} after {iterations} iterations")]
    Convergence { degree: usize, iterations: usize },

    #[error("norm did not stabilize at {nodes} nodes per piece (last {last:e}, previous {previous:e})")]
    NonConvergence { nodes: usize, last: f64, previous: f64 },

    #[error("gap violation at j={index}: n_j - n_(j-1) = {gap} < {required}")]
    GapViolation { index: usize, gap: u32, required: u32 },

    #[error("degrees are not strictly increasing at index {index}")]
    NonMonotone { index: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("grid capacity {available} is below required degree {needed}")]
    Capacity { needed: u32, available: u32 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: u32, right: u32 },

    #[error("zero polynomial")]
    ZeroPolynomial,

    #[error("spectrum not contained in kernel spectrum: degree {degree}")]
    SpectrumNotContained { degree: u32 },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for failures caused by numerical iteration rather than bad input.
    pub fn is_numeric(&self) -> bool {
        matches!(self, Error::Convergence { .. } | Error::NonConvergence { .. } | Error::Overflow { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
