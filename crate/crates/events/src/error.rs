use qrf_engine::EngineError;
use qrf_numerics::NumericsError;
use qrf_spacetime::SpacetimeError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EventError {
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Spacetime(#[from] SpacetimeError),
    #[error("invalid event configuration: {0}")]
    Config(String),
    #[error("regime '{regime}' {reason}")]
    Regime { regime: String, reason: String },
    #[error(
        "the kick is a pure phase with no pointer axis; read it out with \
         `interferometric_occurrence` against a kick-free history"
    )]
    NoPointer,
}
