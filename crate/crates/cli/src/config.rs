//! Scenario documents (TOML).

use qrf_algebra::GradingRule;
use qrf_engine::{EvolveOptions, SourceLayout};
use qrf_events::{EventSpec, Readout};
use qrf_numerics::{Grid1D, C64};
use qrf_spacetime::{ModelParams, Regime};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    /// Symbolic checks only.
    Algebra,
    /// History state without a measurement.
    History,
    /// History with a clock-triggered kick and its event-time distribution.
    Event,
    SchrodingerLimit,
    QrfSwap,
}

/// Unit conventions of every dimensional quantity in the document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Units {
    /// Only "natural" (ħ = 1, lengths/times/masses in one consistent unit) is supported.
    pub system: String,
    pub hbar: f64,
    pub length: String,
    pub time: String,
    pub mass: String,
}

impl Default for Units {
    fn default() -> Self {
        Self {
            system: "natural".into(),
            hbar: 1.0,
            length: "L".into(),
            time: "L/c".into(),
            mass: "hbar/(L c)".into(),
        }
    }
}

/// Uniform periodic grid: `n` points (a power of two) from `offset` with
/// spacing `span / n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub n: usize,
    pub span: f64,
    pub offset: f64,
}

impl GridSpec {
    pub fn grid(&self, what: &str) -> Result<Grid1D, CliError> {
        Grid1D::new(self.n, self.span, self.offset)
            .map_err(|e| CliError::Config(format!("{what}: {e}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxesSpec {
    /// Relative position of the non-frame particle.
    pub space: GridSpec,
    /// Internal clock of the non-frame particle.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub clock: Option<GridSpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SourceSpec {
    Absent,
    Sharp { position: f64 },
    Dynamical { space: GridSpec, time: GridSpec },
}

impl Default for SourceSpec {
    fn default() -> Self {
        SourceSpec::Absent
    }
}

impl SourceSpec {
    pub fn layout(&self) -> Result<SourceLayout, CliError> {
        Ok(match self {
            SourceSpec::Absent => SourceLayout::Absent,
            SourceSpec::Sharp { position } => SourceLayout::Sharp { position: *position },
            SourceSpec::Dynamical { space, time } => SourceLayout::Dynamical {
                space: space.grid("source.space")?,
                time: time.grid("source.time")?,
            },
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Shape {
    Gaussian,
    /// Sharp momentum `boost`; `center` and `width` are ignored.
    PlaneWave,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PacketSpec {
    #[serde(default = "default_shape")]
    pub shape: Shape,
    #[serde(default)]
    pub center: f64,
    #[serde(default = "default_width")]
    pub width: f64,
    /// Wavenumber boost (momentum, ħ = 1).
    #[serde(default)]
    pub boost: f64,
}

fn default_shape() -> Shape {
    Shape::Gaussian
}

fn default_width() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BranchSpec {
    /// Complex amplitude [re, im].
    pub amplitude: [f64; 2],
    #[serde(default = "default_shape")]
    pub shape: Shape,
    #[serde(default)]
    pub center: f64,
    #[serde(default = "default_width")]
    pub width: f64,
    #[serde(default)]
    pub boost: f64,
}

impl BranchSpec {
    pub fn amplitude(&self) -> C64 {
        C64::new(self.amplitude[0], self.amplitude[1])
    }

    pub fn packet(&self) -> PacketSpec {
        PacketSpec {
            shape: self.shape,
            center: self.center,
            width: self.width,
            boost: self.boost,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialSpec {
    pub branches: Vec<BranchSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub clock: Option<PacketSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source_space: Option<PacketSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source_time: Option<PacketSpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EventConfig {
    pub tau_star: f64,
    pub kick_phase: f64,
    pub sigma_t: f64,
    #[serde(default = "default_readout")]
    pub readout: Readout,
}

fn default_readout() -> Readout {
    Readout::Pointer
}

impl EventConfig {
    pub fn spec(&self) -> EventSpec {
        EventSpec {
            tau_star: self.tau_star,
            kick_phase: self.kick_phase,
            sigma_t: self.sigma_t,
            readout: self.readout,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolveSpec {
    pub step: f64,
    #[serde(default = "default_edge_fraction")]
    pub edge_fraction: f64,
    #[serde(default = "default_edge_limit")]
    pub edge_limit: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub unchecked_axes: Vec<String>,
}

fn default_edge_fraction() -> f64 {
    0.05
}

fn default_edge_limit() -> f64 {
    1e-4
}

impl Default for EvolveSpec {
    fn default() -> Self {
        Self {
            step: 1e-3,
            edge_fraction: default_edge_fraction(),
            edge_limit: default_edge_limit(),
            unchecked_axes: Vec::new(),
        }
    }
}

impl EvolveSpec {
    pub fn options(&self) -> EvolveOptions {
        EvolveOptions {
            step: self.step,
            edge_fraction: self.edge_fraction,
            edge_limit: self.edge_limit,
            unchecked_axes: self.unchecked_axes.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RulePreset {
    WeakField,
    Loosened,
    Galilean,
    Exact,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSpec {
    /// Particle count of the symbolic system used for the constraint checks.
    #[serde(default = "default_particles")]
    pub particles: u8,
    #[serde(default = "default_rule")]
    pub rule: RulePreset,
    /// Explicit rule; replaces `rule` when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub custom_rule: Option<GradingRule>,
    /// Conjugation tables to check: any of "T1", "T2", "T12".
    #[serde(default = "default_tables")]
    pub tables: Vec<String>,
}

fn default_particles() -> u8 {
    3
}

fn default_rule() -> RulePreset {
    RulePreset::WeakField
}

fn default_tables() -> Vec<String> {
    vec!["T1".into(), "T2".into(), "T12".into()]
}

impl Default for AlgebraSpec {
    fn default() -> Self {
        Self {
            particles: default_particles(),
            rule: default_rule(),
            custom_rule: None,
            tables: default_tables(),
        }
    }
}

impl AlgebraSpec {
    pub fn grading_rule(&self) -> GradingRule {
        if let Some(r) = &self.custom_rule {
            return r.clone();
        }
        match self.rule {
            RulePreset::WeakField => GradingRule::weak_field(),
            RulePreset::Loosened => GradingRule::loosened(),
            RulePreset::Galilean => GradingRule::galilean(),
            RulePreset::Exact => GradingRule::exact(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    /// Output directory; `--out` overrides it.
    #[serde(default = "default_dir")]
    pub directory: String,
    /// File-name stem; defaults to the scenario name.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stem: Option<String>,
}

fn default_dir() -> String {
    "out".into()
}

impl Default for OutputSpec {
    fn default() -> Self {
        Self {
            directory: default_dir(),
            stem: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResourceSpec {
    /// Memory cap in MB; `--max-mem` overrides it.
    pub max_mem_mb: f64,
}

impl Default for ResourceSpec {
    fn default() -> Self {
        Self { max_mem_mb: 4096.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub schema_version: u32,
    pub name: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
    pub kind: ScenarioKind,
    pub regime: Regime,
    #[serde(default)]
    pub seed: u64,
    pub units: Units,
    pub params: ModelParams,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub axes: Option<AxesSpec>,
    #[serde(default)]
    pub source: SourceSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<InitialSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub event: Option<EventConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<GridSpec>,
    #[serde(default)]
    pub evolve: EvolveSpec,
    #[serde(default)]
    pub algebra: AlgebraSpec,
    #[serde(default)]
    pub output: OutputSpec,
    #[serde(default)]
    pub resources: ResourceSpec,
}

impl ScenarioConfig {
    /// Parses and validates a document; errors name the offending line and key.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: ScenarioConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(CliError::Config(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        if self.units.system != "natural" || self.units.hbar != 1.0 {
            return Err(CliError::Config(
                "units: only the natural system with hbar = 1 is supported".into(),
            ));
        }
        if self.seed > i64::MAX as u64 {
            return Err(CliError::Config(format!("seed {} exceeds the TOML integer range", self.seed)));
        }
        self.params.validate()?;
        let needs_axes = !matches!(self.kind, ScenarioKind::Algebra);
        if needs_axes && self.axes.is_none() {
            return Err(CliError::Config(format!("kind {:?} needs an [axes] table", self.kind)));
        }
        if matches!(self.kind, ScenarioKind::History | ScenarioKind::Event | ScenarioKind::QrfSwap) {
            if self.initial.is_none() {
                return Err(CliError::Config("missing [initial] table".into()));
            }
            if self.tau.is_none() {
                return Err(CliError::Config("missing [tau] grid".into()));
            }
        }
        if self.kind == ScenarioKind::Event {
            if self.event.is_none() {
                return Err(CliError::Config("kind = \"event\" needs an [event] table".into()));
            }
            if self.axes.as_ref().and_then(|a| a.clock).is_none() {
                return Err(CliError::Config("kind = \"event\" needs axes.clock".into()));
            }
        }
        for t in &self.algebra.tables {
            t.parse::<qrf_algebra::Table>().map_err(|e| CliError::Config(format!("algebra.tables: {e}")))?;
        }
        Ok(())
    }

    pub fn stem(&self) -> String {
        self.output.stem.clone().unwrap_or_else(|| self.name.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
schema_version = 1
name = "t"
kind = "algebra"
regime = "full"
[units]
system = "natural"
hbar = 1.0
length = "L"
time = "L/c"
mass = "m"
[params]
masses = [1.0, 2.0, 3.0]
gm = 0.1
c = 1.0
"#;

    #[test]
    fn minimal_document_parses_with_defaults() {
        let c = ScenarioConfig::parse(MINIMAL).unwrap();
        assert_eq!(c.algebra.particles, 3);
        assert_eq!(c.source, SourceSpec::Absent);
        assert_eq!(c.output.directory, "out");
    }

    #[test]
    fn unknown_keys_are_rejected_with_location() {
        let text = MINIMAL.replace("gm = 0.1", "gm = 0.1\ncolour = 3");
        let err = ScenarioConfig::parse(&text).unwrap_err().to_string();
        assert!(err.contains("colour"), "{err}");
        assert!(err.contains("line"), "{err}");
    }

    #[test]
    fn wrong_schema_version_is_rejected() {
        let text = MINIMAL.replace("schema_version = 1", "schema_version = 7");
        assert!(ScenarioConfig::parse(&text).is_err());
    }
}
