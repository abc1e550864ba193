//! Command-line front end: scenario documents, bundled presets, runs and
//! their reproducibility manifests.

pub mod config;
pub mod error;
pub mod invariants;
pub mod presets;
pub mod run;

pub use config::{ScenarioConfig, ScenarioKind, SCHEMA_VERSION};
pub use error::{CliError, EXIT_CHECK_FAILED, EXIT_OK, EXIT_RESOURCE, EXIT_USAGE};
pub use invariants::{check_case, run_invariants, InvariantCase, InvariantReport};
pub use presets::{preset, preset_text, PRESETS};
pub use run::{
    cmd_run, cmd_verify_algebra, config_hash, effective_config, AlgebraReport, Check, RunManifest,
    RunOptions, RunOutcome, ARTIFACT_VERSION,
};

/// Reads a document from `path`.
pub fn load_config(path: &std::path::Path) -> Result<ScenarioConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    ScenarioConfig::parse(&text).map_err(|e| match e {
        CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
        other => other,
    })
}
