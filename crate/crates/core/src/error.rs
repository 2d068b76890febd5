use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("theta series did not converge: {terms} terms required (cap {cap})")]
    NonConvergent { terms: u64, cap: u64 },

    #[error("denominator theta_{index} = {value:e} is below the guard; tau is too close to the excluded set")]
    DenominatorNearZero { index: usize, value: f64 },

    #[error("rank is ambiguous: spectral gap {gap:e} is below 10")]
    RankAmbiguous { gap: f64 },

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error(
        "characteristic calibration failed: best residual {best_residual:e} with chars ({a}, {b})"
    )]
    CalibrationFailed { a: f64, b: f64, best_residual: f64 },

    #[error("index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("slope-zero classes are not covered")]
    DegreeZero,

    /// An internal self-check failed; indicates a bug rather than bad input.
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParams(msg.into())
    }

    pub(crate) fn not_applicable(msg: impl Into<String>) -> Self {
        Error::NotApplicable(msg.into())
    }
}
