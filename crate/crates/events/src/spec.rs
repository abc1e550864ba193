//! Measurement events triggered by a clock reading.

use qrf_numerics::{Axis, Basis, Grid1D, C64};
use serde::{Deserialize, Serialize};

use crate::{EventError, Result};

/// Label of the two-state pointer axis that records whether the kick fired.
pub const POINTER: &str = "pointer";

/// How the kick is recorded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Readout {
    /// Flip a dedicated two-state pointer: the kick is θσ_x on the pointer.
    Pointer,
    /// Multiply by a phase e^{-iθ}; readable only interferometrically.
    Phase,
}

/// Time profile replacing the delta function in clock time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KickProfile {
    /// Normalized Gaussian of width σ_T.
    Regularized,
    /// Sharp step (the σ_T → 0 limit).
    Sharp,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EventSpec {
    /// Reading of the measured clock at which the event happens.
    pub tau_star: f64,
    /// Total eigenphase θ of the kick.
    pub kick_phase: f64,
    /// Width of the Gaussian replacing the delta in clock time.
    pub sigma_t: f64,
    pub readout: Readout,
}

impl EventSpec {
    /// A full pointer flip (θ = π/2) at `tau_star`.
    pub fn pointer_flip(tau_star: f64, sigma_t: f64) -> Self {
        Self {
            tau_star,
            kick_phase: std::f64::consts::FRAC_PI_2,
            sigma_t,
            readout: Readout::Pointer,
        }
    }

    pub fn validate(&self, clock: &Grid1D) -> Result<()> {
        let span = clock.length();
        if !self.sigma_t.is_finite() || self.sigma_t <= 0.0 {
            return Err(EventError::Config(format!("sigma_t = {} must be positive", self.sigma_t)));
        }
        if self.sigma_t < clock.spacing() * (1.0 - 1e-12) {
            return Err(EventError::Config(format!(
                "sigma_t = {} is below the clock spacing {}",
                self.sigma_t,
                clock.spacing()
            )));
        }
        if self.sigma_t > 0.05 * span * (1.0 + 1e-12) {
            return Err(EventError::Config(format!(
                "sigma_t = {} exceeds 5% of the clock span {span}",
                self.sigma_t
            )));
        }
        if !self.tau_star.is_finite() || !self.kick_phase.is_finite() {
            return Err(EventError::Config("tau_star and kick_phase must be finite".into()));
        }
        Ok(())
    }

    /// Normalized Gaussian g_σ(t − τ*).
    pub fn profile_density(&self, t: f64) -> f64 {
        let u = (t - self.tau_star) / self.sigma_t;
        (-0.5 * u * u).exp() / (self.sigma_t * (2.0 * std::f64::consts::PI).sqrt())
    }

    /// ∫_{-∞}^{t} of the profile: normal CDF or a step.
    pub fn profile_cumulative(&self, t: f64, profile: KickProfile) -> f64 {
        let x = t - self.tau_star;
        match profile {
            KickProfile::Regularized => {
                0.5 * (1.0 + libm::erf(x / (self.sigma_t * std::f64::consts::SQRT_2)))
            }
            KickProfile::Sharp => {
                if x >= 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    /// Eigenvalue of the kick observable at a pointer wavenumber.
    pub(crate) fn pointer_sign(&self, k: f64) -> f64 {
        match self.readout {
            Readout::Pointer => k.cos(),
            Readout::Phase => 1.0,
        }
    }
}

pub fn pointer_grid() -> Grid1D {
    Grid1D::new(2, 2.0, 0.0).expect("two-point grid")
}

pub fn pointer_axis() -> Axis {
    Axis::new(POINTER, pointer_grid(), Basis::Position)
}

/// Pointer in its 'not fired' state.
pub fn pointer_ready() -> Vec<C64> {
    vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)]
}
