use qrf_algebra::AlgebraError;
use qrf_engine::EngineError;
use qrf_events::EventError;
use qrf_numerics::NumericsError;
use qrf_spacetime::SpacetimeError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("unknown preset '{0}' (see `qrfsim presets`)")]
    UnknownPreset(String),
    #[error("memory cap exceeded: {axes} = {amplitudes} amplitudes, estimated {estimated_mb:.1} MB > {cap_mb} MB")]
    MemoryCap {
        axes: String,
        amplitudes: usize,
        estimated_mb: f64,
        cap_mb: f64,
    },
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Events(#[from] EventError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Spacetime(#[from] SpacetimeError),
}

/// Process exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

fn is_leakage(e: &CliError) -> bool {
    matches!(
        e,
        CliError::Engine(EngineError::EdgeLeakage { .. })
            | CliError::Events(EventError::Engine(EngineError::EdgeLeakage { .. }))
    )
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::MemoryCap { .. } | CliError::Io { .. } => EXIT_RESOURCE,
            // Leakage is a numerical check on the run, not a bad document.
            e if is_leakage(e) => EXIT_CHECK_FAILED,
            _ => EXIT_USAGE,
        }
    }
}
