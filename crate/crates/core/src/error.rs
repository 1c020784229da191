use thiserror::Error;

/// Errors raised by the numerics and simulation routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix must be square with dim >= 1 (got {rows} rows, {entries} entries)")]
    Shape { rows: usize, entries: usize },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("dimension {dim} exceeds the {limit} limit of the {method} method")]
    DimensionLimit { dim: usize, limit: usize, method: &'static str },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("matrix is not unitary: max |U^dag U - I| = {deviation:e} > {tolerance:e}")]
    NotUnitary { deviation: f64, tolerance: f64 },

    #[error("matrix is not Hermitian: max |A - A^dag| = {deviation:e}")]
    NotHermitian { deviation: f64 },

    #[error("negative mean-photon parameter {value} at index {index}")]
    NegativeSpectrum { index: usize, value: f64 },

    #[error("eigen-solver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("zero matrix cannot be rescaled")]
    ZeroMatrix,

    #[error("invalid mode pair ({0}, {1})")]
    InvalidModePair(usize, usize),

    #[error("beam splitter stage {stage}: t^2 + r^2 = {sum} (must be 1)")]
    InvalidSplitter { stage: usize, sum: f64 },

    #[error("{name} = {value} is outside {range}")]
    OutOfRange { name: &'static str, value: f64, range: &'static str },

    #[error("unsupported dimension {dim} for {what}")]
    Unsupported { dim: usize, what: &'static str },

    #[error("state-space guard exceeded: {0}")]
    Guard(String),

    #[error("input mode {0} has zero total counts")]
    ZeroCounts(usize),

    #[error("cannot merge: {0}")]
    Merge(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
