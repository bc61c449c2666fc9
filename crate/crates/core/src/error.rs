use thiserror::Error;

/// Errors raised by the exact and numerical routines of this crate.
///
/// A failed identity check is never an `Error`; those are reported through
/// [`crate::report::VerificationReport`].
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("variable count mismatch: {left} vs {right}")]
    VariableCountMismatch { left: usize, right: usize },

    #[error("variable index {index} out of range for {nvars} variables")]
    VariableOutOfRange { index: usize, nvars: usize },

    #[error("x{var} is zero but appears with a negative exponent")]
    ZeroToNegativePower { var: usize },

    #[error("invalid system LV({n},{k}): need 2k+1 <= n")]
    InvalidSpec { n: usize, k: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("characteristic polynomial has unexpected shape at lambda^{lambda} mu^{mu}: {detail}")]
    StructuralFailure { lambda: i32, mu: i32, detail: String },

    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("step size underflow at t = {t}")]
    StepUnderflow { t: f64 },

    #[error("state overflow at t = {t}")]
    Overflow { t: f64 },

    #[error("integration stopped at t = {t}: {detail}")]
    IntegrationFailed { t: f64, detail: String },

    #[error("trajectory reached coordinate hyperplane x{var} at t = {t}")]
    NearHyperplane { var: usize, t: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
