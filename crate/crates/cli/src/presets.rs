//! Bundled scenario documents.

use crate::config::ScenarioConfig;
use crate::error::CliError;

pub struct Preset {
    pub name: &'static str,
    pub text: &'static str,
}

pub const PRESETS: [Preset; 5] = [
    Preset {
        name: "galilean-event",
        text: include_str!("../presets/galilean-event.toml"),
    },
    Preset {
        name: "sr-two-momenta",
        text: include_str!("../presets/sr-two-momenta.toml"),
    },
    Preset {
        name: "newtonian-two-positions",
        text: include_str!("../presets/newtonian-two-positions.toml"),
    },
    Preset {
        name: "schrodinger-limit",
        text: include_str!("../presets/schrodinger-limit.toml"),
    },
    Preset {
        name: "qrf-swap-mirror",
        text: include_str!("../presets/qrf-swap-mirror.toml"),
    },
];

pub fn preset_text(name: &str) -> Result<&'static str, CliError> {
    PRESETS
        .iter()
        .find(|p| p.name == name)
        .map(|p| p.text)
        .ok_or_else(|| CliError::UnknownPreset(name.to_string()))
}

pub fn preset(name: &str) -> Result<ScenarioConfig, CliError> {
    ScenarioConfig::parse(preset_text(name)?)
}

/// `name  description` lines.
pub fn listing() -> Vec<String> {
    PRESETS
        .iter()
        .map(|p| {
            let cfg = ScenarioConfig::parse(p.text).expect("bundled preset parses");
            format!("{:<26}{}", p.name, cfg.description)
        })
        .collect()
}
