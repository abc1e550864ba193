use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpacetimeError {
    #[error("invalid model parameters: {0}")]
    Config(String),
    #[error("weak-field bound violated: |Phi|/c^2 = {ratio:.4} at x = {x} (limit {limit})")]
    WeakField { x: f64, ratio: f64, limit: f64 },
    #[error("regime '{regime}' {reason}")]
    Regime { regime: String, reason: String },
}

/// Physical parameters of the model. ħ = 1 throughout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelParams {
    /// Rest masses m_I of the clock-carrying particles, I = 1..N.
    pub masses: Vec<f64>,
    /// Newtonian coupling G·m_M of the source.
    #[serde(default)]
    pub gm: f64,
    pub c: f64,
    /// Cutoff radius of the potential.
    #[serde(default = "default_r_min")]
    pub r_min: f64,
    /// Whether the particles carry internal clocks.
    #[serde(default = "default_true")]
    pub clocks: bool,
}

fn default_r_min() -> f64 {
    1.0
}

fn default_true() -> bool {
    true
}

impl ModelParams {
    pub fn new(masses: Vec<f64>, gm: f64, c: f64, r_min: f64) -> crate::Result<Self> {
        let p = Self {
            masses,
            gm,
            c,
            r_min,
            clocks: true,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> crate::Result<()> {
        if self.masses.is_empty() {
            return Err(SpacetimeError::Config("at least one mass is required".into()));
        }
        if let Some(m) = self.masses.iter().find(|m| !(m.is_finite() && **m > 0.0)) {
            return Err(SpacetimeError::Config(format!("mass {m} must be positive")));
        }
        if !(self.gm.is_finite() && self.gm >= 0.0) {
            return Err(SpacetimeError::Config(format!("GM = {} must be >= 0", self.gm)));
        }
        if !(self.c.is_finite() && self.c > 0.0) {
            return Err(SpacetimeError::Config(format!("c = {} must be positive", self.c)));
        }
        if !(self.r_min.is_finite() && self.r_min > 0.0) {
            return Err(SpacetimeError::Config(format!("r_min = {} must be positive", self.r_min)));
        }
        Ok(())
    }

    pub fn particles(&self) -> usize {
        self.masses.len()
    }

    /// Mass of particle `i` (1-based).
    pub fn mass(&self, i: usize) -> f64 {
        self.masses[i - 1]
    }

    /// ε_p = k/(m c) for particle `i`.
    pub fn momentum_ratio(&self, i: usize, k: f64) -> f64 {
        k / (self.mass(i) * self.c)
    }
}
