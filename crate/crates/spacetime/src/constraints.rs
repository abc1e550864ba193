use qrf_algebra::{ConstraintSet, GradingRule, OperatorExpr, Param, Party, Regime, SymbolicSystem};
use serde::{Deserialize, Serialize};

use crate::params::{ModelParams, SpacetimeError};

/// Kick δ(T_clock − τ*) Q_clock added to the energy constraint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasurementSpec {
    pub tau_star: f64,
    pub clock: u8,
}

impl Default for MeasurementSpec {
    fn default() -> Self {
        Self {
            tau_star: 0.0,
            clock: 2,
        }
    }
}

fn regime_error(regime: Regime, reason: impl Into<String>) -> SpacetimeError {
    SpacetimeError::Regime {
        regime: regime.name().into(),
        reason: reason.into(),
    }
}

/// Symbolic constraints C_I, f⁰ (or f⁰_Q) and f¹ in the regime's
/// truncation.
pub fn build_constraints(
    regime: Regime,
    params: &ModelParams,
    with_measurement: Option<MeasurementSpec>,
) -> crate::Result<ConstraintSet> {
    params.validate()?;
    if !regime.has_gravity() && params.gm != 0.0 {
        return Err(regime_error(regime, "requires GM = 0"));
    }
    let n = u8::try_from(params.particles())
        .map_err(|_| SpacetimeError::Config("too many particles".into()))?;
    let mut sys = SymbolicSystem::new(n, regime);
    sys.clocks = params.clocks;
    if let Some(m) = with_measurement {
        if !params.clocks {
            return Err(regime_error(regime, "has no internal clocks configured for a measurement"));
        }
        if n < 2 {
            return Err(SpacetimeError::Config("a measurement needs at least two particles".into()));
        }
        if m.clock == 0 || m.clock > n {
            return Err(SpacetimeError::Config(format!("no clock {}", m.clock)));
        }
        if !m.tau_star.is_finite() {
            return Err(SpacetimeError::Config("tau_star must be finite".into()));
        }
        sys = sys.with_kick(m.clock);
    }
    Ok(sys.constraints(&GradingRule::weak_field()))
}

/// The slow-motion flat constraint list, with the rest constants −m_I c
/// that the full model carries in C_I.
pub fn galilean_reference(n: u8, with_rest_energy: bool) -> ConstraintSet {
    let mut set = SymbolicSystem::new(n, Regime::Galilean).constraints(&GradingRule::weak_field());
    if with_rest_energy {
        for (i, (_, c)) in set.dynamical.iter_mut().enumerate() {
            let mc = &OperatorExpr::param(Param::Mass(Party::P(i as u8 + 1)), 1)
                * &OperatorExpr::param(Param::C, 1);
            *c = &*c - &mc;
        }
    }
    set
}
