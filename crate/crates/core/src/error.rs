//! Error types shared across the toolkit.

use thiserror::Error;

/// Errors produced by validation, transforms, solvers and searches.
#[derive(Debug, Error)]
pub enum Error {
    /// A config invariant was violated; `path` points at the offending field.
    #[error("validation error at `{path}`: {message}")]
    Validation { path: String, message: String },

    /// A symbol form restricted to N = 1 was evaluated on a higher-dimensional lattice.
    #[error("symbol form requires N = 1 but frequency has {got} components")]
    UnsupportedDimension { got: usize },

    /// Requested frequencies exceed what the sampled grid can represent.
    #[error("xi_max = {xi_max} violates the Nyquist bound for grid size {grid}")]
    NyquistViolation { xi_max: i64, grid: usize },

    /// Not enough populated dyadic shells (or samples) to run a fit.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("length mismatch: {0}")]
    LengthMismatch(String),

    /// Remaining precision cannot certify the next step of an exact computation.
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),

    /// A big-integer computation would exceed the configured budget.
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    /// A denominator search produced no sample at all.
    #[error("empty search: {0}")]
    EmptySearch(String),

    #[error("operation requires constant coefficients; operator {index} is not constant")]
    NonConstantCoefficients { index: usize },

    /// Homogeneous classification needs all symbols to share one order.
    #[error("mixed homogeneity orders: {0}")]
    MixedOrders(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// The per-frequency mode equation has no unique periodic solution.
    #[error("resonant frequency {xi:?}: |1 - exp(-2 pi i M0)| = {gap:.3e} is below tolerance")]
    ResonantFrequency { xi: Vec<i128>, gap: f64 },

    #[error("frequency {xi:?} is not resonant for every operator")]
    NotResonant { xi: Vec<i128> },

    #[error("witness sequence too short: got {got}, need at least {need}")]
    SequenceTooShort { got: usize, need: usize },

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),
}

impl Error {
    pub fn validation(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation {
            path: path.into(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
