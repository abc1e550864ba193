use qrf_numerics::{Basis, WaveFunction};
use serde::{Deserialize, Serialize};

use crate::metric::potential;
use crate::params::ModelParams;

/// Dropped-term magnitude (relative to the unit leading term) above which
/// the state is flagged as out of regime.
pub const DROPPED_TERM_THRESHOLD: f64 = 1e-3;

/// Which axes of a state carry momenta and which carry separations from
/// the source.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DiagnosticAxes {
    /// (axis label, particle mass)
    pub momenta: Vec<(String, f64)>,
    /// (axis label, source position on that axis)
    pub positions: Vec<(String, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeReport {
    /// ⟨|Φ|⟩/c², largest over the position axes.
    pub eps_g: f64,
    /// ⟨k²⟩/(m²c²), largest over the momentum axes.
    pub eps_p2: f64,
    /// ⟨k⁴⟩/(m⁴c⁴).
    pub eps_p4: f64,
    /// ε_g·ε_p², the leading dropped mixed term.
    pub eps_g_eps_p2: f64,
    /// ε_g², dropped.
    pub eps_g2: f64,
    /// ⟨k⁶⟩/(m⁶c⁶), dropped.
    pub eps_p6: f64,
    pub flagged: bool,
    pub flags: Vec<String>,
}

fn moment(density: &[f64], measure: f64, values: &[f64], f: impl Fn(f64) -> f64) -> f64 {
    density
        .iter()
        .zip(values)
        .map(|(d, v)| d * f(*v))
        .sum::<f64>()
        * measure
}

/// Expectation magnitudes of the perturbative parameters over ψ.
pub fn regime_diagnostics(
    psi: &WaveFunction,
    axes: &DiagnosticAxes,
    params: &ModelParams,
) -> qrf_numerics::Result<RegimeReport> {
    let c2 = params.c * params.c;
    let mut eps_p2: f64 = 0.0;
    let mut eps_p4: f64 = 0.0;
    let mut eps_p6: f64 = 0.0;
    for (label, m) in &axes.momenta {
        let state = psi.clone().to_basis(label, Basis::Momentum)?;
        let axis = state.axis(label)?;
        let dens = state.marginal(label)?;
        let ks = axis.samples();
        let mc = m * params.c;
        eps_p2 = eps_p2.max(moment(&dens, axis.measure(), &ks, |k| (k / mc).powi(2)));
        eps_p4 = eps_p4.max(moment(&dens, axis.measure(), &ks, |k| (k / mc).powi(4)));
        eps_p6 = eps_p6.max(moment(&dens, axis.measure(), &ks, |k| (k / mc).powi(6)));
    }
    let mut eps_g: f64 = 0.0;
    for (label, source) in &axes.positions {
        let state = psi.clone().to_basis(label, Basis::Position)?;
        let axis = state.axis(label)?;
        let dens = state.marginal(label)?;
        let xs = axis.samples();
        eps_g = eps_g.max(moment(&dens, axis.measure(), &xs, |x| {
            potential(x - source, params).abs() / c2
        }));
    }
    let eps_g_eps_p2 = eps_g * eps_p2;
    let eps_g2 = eps_g * eps_g;
    let mut flags = Vec::new();
    for (name, v) in [
        ("eps_g*eps_p^2", eps_g_eps_p2),
        ("eps_g^2", eps_g2),
        ("eps_p^6", eps_p6),
    ] {
        if v > DROPPED_TERM_THRESHOLD {
            flags.push(format!("{name} = {v:.3e} exceeds {DROPPED_TERM_THRESHOLD:e}"));
        }
    }
    Ok(RegimeReport {
        eps_g,
        eps_p2,
        eps_p4,
        eps_g_eps_p2,
        eps_g2,
        eps_p6,
        flagged: !flags.is_empty(),
        flags,
    })
}
