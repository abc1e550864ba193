//! Scenario with a clock-triggered kick on the measured particle.

use qrf_engine::{
    build_hamiltonian, clock_label, space_label, HamiltonianSpec, ScenarioAxes, SOURCE_SPACE,
};
use qrf_numerics::{packets, Axis, Basis, DiagonalKernel, Grid1D, WaveFunction, C64};
use qrf_spacetime::{gamma_factor, metric_g00_unchecked, ModelParams, Regime};
use serde::{Deserialize, Serialize};

use crate::spec::{pointer_axis, pointer_ready, EventSpec, KickProfile, Readout, POINTER};
use crate::{EventError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct EventModel {
    pub regime: Regime,
    pub params: ModelParams,
    /// Scenario axes; carries the pointer axis in pointer readout.
    pub axes: ScenarioAxes,
    pub event: EventSpec,
    /// Particle whose clock triggers the event.
    pub measured: u8,
    pub hamiltonian: HamiltonianSpec,
}

/// Predicted event time on one sharp branch, for output metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchPrediction {
    pub label: String,
    pub weight: f64,
    pub delta: f64,
    pub predicted_peak: f64,
}

fn regime_error(regime: Regime, reason: impl Into<String>) -> EventError {
    EventError::Regime {
        regime: regime.name().to_string(),
        reason: reason.into(),
    }
}

impl EventModel {
    pub fn new(regime: Regime, params: ModelParams, axes: ScenarioAxes, event: EventSpec) -> Result<Self> {
        let mut axes = axes;
        let has_pointer = axes.extra.iter().any(|a| a.label == POINTER);
        if event.readout == Readout::Pointer && !has_pointer {
            axes = axes.with_extra(pointer_axis());
        }
        let measured = axes
            .particles
            .iter()
            .find(|p| p.clock.is_some())
            .ok_or_else(|| EventError::Config("the measured particle needs a clock axis".into()))?;
        let clock = measured.clock.expect("clock checked");
        let measured = measured.particle;
        event.validate(&clock)?;
        if regime == Regime::Full && axes.dynamical_source().is_some() {
            return Err(regime_error(
                regime,
                "orders the kick only with a sharp source; the rate depends on the source momentum otherwise",
            ));
        }
        let hamiltonian = build_hamiltonian(regime, &params, &axes)?;
        Ok(Self {
            regime,
            params,
            axes,
            event,
            measured,
            hamiltonian,
        })
    }

    pub fn layout(&self) -> Vec<Axis> {
        self.axes.axes()
    }

    pub fn clock_grid(&self) -> Grid1D {
        self.axes
            .particles
            .iter()
            .find(|p| p.particle == self.measured)
            .and_then(|p| p.clock)
            .expect("measured clock")
    }

    pub fn has_pointer(&self) -> bool {
        self.axes.extra.iter().any(|a| a.label == POINTER)
    }

    fn momentum_axes(&self) -> Vec<(String, Basis)> {
        self.axes
            .non_frame()
            .iter()
            .map(|&i| (space_label(i), Basis::Momentum))
            .collect()
    }

    fn position_axes(&self) -> Vec<(String, Basis)> {
        let mut out = vec![(space_label(self.measured), Basis::Position)];
        if self.axes.dynamical_source().is_some() {
            out.push((SOURCE_SPACE.to_string(), Basis::Position));
        }
        out
    }

    fn kinematic_rate(&self, k: &[f64]) -> f64 {
        let idx = self
            .axes
            .non_frame()
            .iter()
            .position(|&i| i == self.measured)
            .expect("measured axis");
        let c = self.params.c;
        let total: f64 = k.iter().sum();
        gamma_factor(total, self.params.mass(self.axes.frame as usize), c)
            / gamma_factor(k[idx], self.params.mass(self.measured as usize), c)
    }

    fn redshift_rate(&self, v: &[f64]) -> f64 {
        let qm = self.axes.sharp_source().unwrap_or_else(|| v[1]);
        let p = &self.params;
        (metric_g00_unchecked(v[0] - qm, p) / metric_g00_unchecked(qm, p)).sqrt()
    }

    /// Axes on which the clock rate is diagonal, outside the full regime.
    pub fn branch_axes(&self) -> Result<Vec<(String, Basis)>> {
        match self.regime {
            Regime::Galilean => Ok(Vec::new()),
            Regime::SpecialRelativistic => Ok(self.momentum_axes()),
            Regime::Newtonian => Ok(self.position_axes()),
            Regime::Full => Err(regime_error(
                self.regime,
                "has no single representation diagonalizing the clock rate",
            )),
        }
    }

    /// Clock rate at a sample of [`Self::branch_axes`].
    pub fn branch_rate(&self, v: &[f64]) -> f64 {
        match self.regime {
            Regime::Galilean => 1.0,
            Regime::SpecialRelativistic => self.kinematic_rate(v),
            Regime::Newtonian => self.redshift_rate(v),
            Regime::Full => f64::NAN,
        }
    }

    /// Kernel θ·s(pointer)·shape(rate(branch), t) on branch axes, the
    /// measured clock (position) and the pointer (momentum).
    pub(crate) fn clock_kernel(
        &self,
        label: &str,
        branch: &[(String, Basis)],
        rate: impl Fn(&[f64]) -> f64,
        shape: impl Fn(f64, f64) -> f64,
    ) -> Result<DiagonalKernel> {
        let t = clock_label(self.measured);
        let mut on: Vec<(&str, Basis)> = branch.iter().map(|(l, b)| (l.as_str(), *b)).collect();
        on.push((t.as_str(), Basis::Position));
        let pointer = self.has_pointer() && self.event.readout == Readout::Pointer;
        if pointer {
            on.push((POINTER, Basis::Momentum));
        }
        let nb = branch.len();
        let e = self.event;
        Ok(DiagonalKernel::on_axes(label, &self.layout(), &on, |v| {
            let s = if pointer { e.pointer_sign(v[nb + 1]) } else { 1.0 };
            e.kick_phase * s * shape(rate(&v[..nb]), v[nb])
        })?)
    }

    /// Kick generator terms rate·g_σ(t − τ*)·θ·s added to the Hamiltonian.
    pub fn kick_kernels(&self) -> Result<Vec<DiagonalKernel>> {
        let e = self.event;
        let pulse = |r: f64, t: f64| r * e.profile_density(t);
        if self.regime == Regime::Full {
            // The realized clock rate is γ_Σ/γ_i + (√g' − 1); one kernel per part.
            let kin = self.clock_kernel("kick_kinematic", &self.momentum_axes(), |k| self.kinematic_rate(k), pulse)?;
            let red = self.clock_kernel(
                "kick_redshift",
                &self.position_axes(),
                |v| self.redshift_rate(v) - 1.0,
                pulse,
            )?;
            return Ok(vec![kin, red]);
        }
        let branch = self.branch_axes()?;
        Ok(vec![self.clock_kernel("kick", &branch, |v| self.branch_rate(v), pulse)?])
    }

    /// Accumulated kick phase after frame time τ, as a diagonal kernel in the
    /// final clock reading t: θ·s·[F(t − τ*) − F(t − rate·τ − τ*)].
    pub fn accumulated_kick(&self, tau: f64, profile: KickProfile) -> Result<DiagonalKernel> {
        let e = self.event;
        let branch = self.branch_axes()?;
        self.clock_kernel(
            "accumulated_kick",
            &branch,
            |v| self.branch_rate(v),
            |r, t| e.profile_cumulative(t, profile) - e.profile_cumulative(t - r * tau, profile),
        )
    }

    /// Frame time at which a branch with clock rate `delta` reaches τ*,
    /// for clocks synchronized at zero.
    pub fn predicted_peak(&self, delta: f64) -> f64 {
        self.event.tau_star / delta
    }

    /// Superposition Σ αᵢ|branchᵢ⟩ ⊗ |clock⟩ ⊗ |source⟩ ⊗ |ready⟩ for a
    /// single non-frame particle. Branch and packet amplitudes are given in
    /// position representation and normalized individually.
    pub fn initial_state(
        &self,
        branches: &[(C64, Vec<C64>)],
        clock: Vec<C64>,
        source: Option<(Vec<C64>, Vec<C64>)>,
    ) -> Result<WaveFunction> {
        if self.axes.particles.len() != 1 {
            return Err(EventError::Config(
                "branch superpositions are built for one non-frame particle".into(),
            ));
        }
        if branches.is_empty() {
            return Err(EventError::Config("no branches given".into()));
        }
        let layout = self.layout();
        let space = &layout[0];
        let mut total: Option<WaveFunction> = None;
        for (alpha, amps) in branches {
            let mut factors = vec![(space.clone(), packets::normalized(amps.clone(), space.measure()))];
            let mut rest = layout[1..].iter();
            let clock_axis = rest.next().expect("clock axis").clone();
            factors.push((clock_axis.clone(), packets::normalized(clock.clone(), clock_axis.measure())));
            if let Some((qm, tm)) = &source {
                let a = rest.next().ok_or_else(|| EventError::Config("no source axes".into()))?;
                factors.push((a.clone(), packets::normalized(qm.clone(), a.measure())));
                let b = rest.next().ok_or_else(|| EventError::Config("no source axes".into()))?;
                factors.push((b.clone(), packets::normalized(tm.clone(), b.measure())));
            }
            for a in rest {
                if a.label == POINTER {
                    factors.push((a.clone(), pointer_ready()));
                } else {
                    return Err(EventError::Config(format!("no packet given for axis {}", a.label)));
                }
            }
            let mut psi = WaveFunction::product(factors)?;
            psi.amplitudes_mut().mapv_inplace(|x| x * alpha);
            total = Some(match total {
                None => psi,
                Some(mut acc) => {
                    *acc.amplitudes_mut() += psi.amplitudes();
                    acc
                }
            });
        }
        let mut psi = total.expect("non-empty");
        psi.normalize();
        Ok(psi)
    }
}

/// Plane wave e^{ikx} sampled on a grid; `k` should be a grid wavenumber.
pub fn plane_wave(grid: &Grid1D, k: f64) -> Vec<C64> {
    grid.coordinates().iter().map(|x| C64::from_polar(1.0, k * x)).collect()
}
