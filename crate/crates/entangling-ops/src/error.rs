//! Crate-wide error type.
//!
//! Variants are grouped by the stage at which they arise: malformed input
//! data (I/O and JSON decoding), structural validation of otherwise
//! well-formed data (dimension bookkeeping, completeness sums), and
//! numeric-domain violations (non-Hermitian input where a Hamiltonian is
//! required, parameters outside their domain). The CLI maps each group to a
//! distinct exit code.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Reading or writing a file failed.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// The input was not syntactically valid JSON, or did not match the
    /// expected schema.
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    /// A matrix or state vector contained a NaN or infinite entry.
    #[error("non-finite entry in {context}")]
    NonFinite { context: &'static str },

    /// A matrix that must be square was not.
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    /// The product of the subsystem dimensions disagrees with the matrix or
    /// vector dimension.
    #[error("subsystem dims {dims:?} multiply to {product}, but the object has dimension {actual}")]
    DimsMismatch {
        dims: Vec<usize>,
        product: usize,
        actual: usize,
    },

    /// Two operands that must share a dimension do not.
    #[error("dimension mismatch: {context} (expected {expected}, got {actual})")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        actual: usize,
    },

    /// A subsystem index referred to a tensor factor that does not exist,
    /// or the same factor was named twice.
    #[error("invalid subsystem selection {subsystems:?} for a {count}-factor space")]
    BadSubsystems { subsystems: Vec<usize>, count: usize },

    /// A bipartition must leave at least one factor on each side.
    #[error("bipartition must be a proper nonempty subset of the tensor factors")]
    EmptyCut,

    /// A state vector had (numerically) zero norm where a normalized state
    /// was required, e.g. after conditioning on an impossible outcome.
    #[error("cannot normalize a zero-norm state vector")]
    ZeroNorm,

    /// An operator that must be Hermitian was not, within tolerance.
    #[error("operator is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    /// An operator that must be unitary was not, within tolerance.
    #[error("operator is not unitary (max deviation {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    /// A channel needs at least one Kraus operator.
    #[error("a channel requires at least one Kraus operator")]
    EmptyKraus,

    /// The Kraus completeness sum violated the declared trace behavior.
    #[error("Kraus operators violate the declared {flag} property (deviation {deviation:.3e})")]
    KrausCompleteness { flag: &'static str, deviation: f64 },

    /// A Choi operator must be positive semidefinite.
    #[error("operator is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },

    /// A Bell-basis label was outside {1, 2}.
    #[error("Bell indices must each be 1 or 2, got ({i1}, {i2})")]
    BadBellIndex { i1: u8, i2: u8 },

    /// A scripted outcome source ran out of entries before the run ended.
    #[error("outcome script exhausted after {supplied} entries")]
    ScriptExhausted { supplied: usize },

    /// A structurally invalid parameter value (counts, flags).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A numeric parameter outside its mathematical domain.
    #[error("parameter out of domain: {0}")]
    OutOfDomain(String),
}
