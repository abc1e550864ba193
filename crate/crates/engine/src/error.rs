use qrf_algebra::AlgebraError;
use qrf_numerics::NumericsError;
use qrf_spacetime::SpacetimeError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EngineError {
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Spacetime(#[from] SpacetimeError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("axis layout does not fit the {regime} regime: {reason}")]
    Layout { regime: String, reason: String },
    #[error("probability {probability:.3e} within the outer {fraction} of axis '{axis}' exceeds {limit:.1e}")]
    EdgeLeakage {
        axis: String,
        probability: f64,
        fraction: f64,
        limit: f64,
    },
    #[error("time {tau} lies outside the history range [{first}, {last}]")]
    OutOfRange { tau: f64, first: f64, last: f64 },
    #[error("step {step} does not divide the history spacing {spacing}")]
    StepMismatch { step: f64, spacing: f64 },
    #[error("term cannot be realized as a diagonal kernel: {0}")]
    NotDiagonal(String),
    #[error("configuration is not symmetric under exchanging the frames: {0}")]
    Asymmetric(String),
    #[error("initial state norm is {0}, expected 1")]
    NotNormalized(f64),
}
