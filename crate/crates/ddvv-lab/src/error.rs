//! Error type shared across the crate.
//!
//! Every fallible operation returns [`Result`]. Variants split along the
//! lines callers actually branch on: shape problems are programming errors
//! near the call site, `NonFinite` means the data itself is unusable, and
//! `Precondition` covers hypotheses of the inequalities (unit norm,
//! tracelessness, orthogonality, ...) that an input failed to satisfy.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while building or checking an input.
#[derive(Debug, Error)]
pub enum Error {
    /// A matrix was created with a data buffer of the wrong length.
    #[error("matrix data has {got} entries, expected {rows}x{cols} = {expected}")]
    DataLength {
        rows: usize,
        cols: usize,
        expected: usize,
        got: usize,
    },

    /// A matrix with zero rows or columns.
    #[error("matrix dimensions must be positive, got {rows}x{cols}")]
    EmptyMatrix { rows: usize, cols: usize },

    /// An operation that requires a square matrix received a rectangular one.
    #[error("{op} requires a square matrix, got {rows}x{cols}")]
    NotSquare {
        op: &'static str,
        rows: usize,
        cols: usize,
    },

    /// Two operands whose dimensions do not line up.
    #[error("{op}: dimension mismatch ({left} vs {right})")]
    ShapeMismatch {
        op: &'static str,
        left: String,
        right: String,
    },

    /// A NaN or infinity where a finite number is required.
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    /// A matrix that was supposed to be orthogonal is not.
    #[error("{name} is not orthogonal (|{name}^T {name} - I| = {defect:.3e}, allowed {allowed:.3e})")]
    NotOrthogonal {
        name: &'static str,
        defect: f64,
        allowed: f64,
    },

    /// The all-zero tuple, which has no canonical form and no ratio.
    #[error("the zero tuple is fixed by every rotation and has no canonical form")]
    ZeroTuple,

    /// A mathematical hypothesis of an inequality was not satisfied.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Malformed user-supplied input (files, CLI values, configs).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An oracle name that the fuzzer does not recognize.
    #[error("unknown oracle '{0}'")]
    UnknownOracle(String),

    /// Failure reading or writing a file.
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    /// Failure parsing a JSON document.
    #[error("{path}: {source}")]
    Json {
        path: String,
        #[source]
        source: serde_json::Error,
    },
}

impl Error {
    /// Shorthand for a [`Error::Precondition`] with a formatted message.
    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    /// Shorthand for a [`Error::InvalidInput`] with a formatted message.
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
