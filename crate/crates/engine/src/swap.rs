//! Exchanging the roles of particles 1 and 2 as the reference frame.

use qrf_algebra::{verify_swap, GradingRule, SwapReport, SymbolicSystem};
use qrf_numerics::{packets, Axis, Basis, Grid1D, WaveFunction};
use qrf_spacetime::{ModelParams, Regime};
use serde::{Deserialize, Serialize};

use crate::hamiltonian::build_hamiltonian;
use crate::history::{evolve_history, EvolveOptions, HistoryState};
use crate::layout::{clock_label, space_label, ParticleAxes, ScenarioAxes, SourceLayout};
use crate::{EngineError, Result};

/// Two-particle scenario seen from particle 1; the frame-2 side is its
/// mirror image.
#[derive(Debug, Clone, PartialEq)]
pub struct SwapSetup {
    pub regime: Regime,
    pub params: ModelParams,
    /// Grid of the relative position of particle 2 in frame 1.
    pub grid: Grid1D,
    pub clock: Option<Grid1D>,
    pub center: f64,
    pub sigma: f64,
    pub k0: f64,
    /// Centre and width of the clock packet, when a clock axis is present.
    pub clock_center: f64,
    pub clock_sigma: f64,
    pub tau_grid: Grid1D,
    pub options: EvolveOptions,
    pub rule: GradingRule,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QrfSwapReport {
    pub symbolic: SwapReport,
    /// Largest |ρ₁(q) − ρ₂(−q)| over snapshots and samples.
    pub position_deviation: f64,
    /// Largest |ρ̃₁(k) − ρ̃₂(−k)|.
    pub momentum_deviation: f64,
    /// Largest deviation of the clock marginals.
    pub clock_deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

pub const SWAP_TOLERANCE: f64 = 1e-6;

/// Grid whose points are the negatives of `g`'s, in increasing order.
pub fn mirrored(g: &Grid1D) -> Result<Grid1D> {
    let n = g.n_points();
    Ok(Grid1D::with_spacing(
        n,
        g.spacing(),
        -g.offset() - (n - 1) as f64 * g.spacing(),
    )?)
}

fn initial(setup: &SwapSetup, other: u8, grid: &Grid1D, sign: f64) -> Result<WaveFunction> {
    let mut factors = vec![(
        Axis::new(space_label(other), *grid, Basis::Position),
        packets::gaussian(grid, sign * setup.center, setup.sigma, sign * setup.k0),
    )];
    if let Some(t) = setup.clock {
        factors.push((
            Axis::new(clock_label(other), t, Basis::Position),
            packets::gaussian(&t, setup.clock_center, setup.clock_sigma, 0.0),
        ));
    }
    Ok(WaveFunction::product(factors)?)
}

fn run(setup: &SwapSetup, frame: u8, other: u8, grid: Grid1D, sign: f64) -> Result<HistoryState> {
    let axes = ScenarioAxes::new(
        frame,
        vec![ParticleAxes {
            particle: other,
            space: grid,
            clock: setup.clock,
        }],
        SourceLayout::Absent,
    );
    let h = build_hamiltonian(setup.regime, &setup.params, &axes)?;
    evolve_history(&initial(setup, other, &grid, sign)?, &h, &setup.tau_grid, &setup.options)
}

fn max_dev(a: &[f64], b: &[f64], map: impl Fn(usize) -> usize) -> f64 {
    (0..a.len()).map(|j| (a[j] - b[map(j)]).abs()).fold(0.0, f64::max)
}

pub fn qrf_swap_check(setup: &SwapSetup) -> Result<QrfSwapReport> {
    let mut sys = SymbolicSystem::new(2, setup.regime);
    sys.clocks = setup.params.clocks;
    let symbolic = verify_swap(&sys, &setup.rule)?;

    let p = &setup.params;
    if p.particles() != 2 {
        return Err(EngineError::Asymmetric(format!(
            "frame exchange needs two particles, got {}",
            p.particles()
        )));
    }
    if p.mass(1) != p.mass(2) {
        return Err(EngineError::Asymmetric(format!(
            "masses differ ({} vs {})",
            p.mass(1),
            p.mass(2)
        )));
    }
    if p.gm != 0.0 {
        return Err(EngineError::Asymmetric(
            "a source sits at different relative positions in the two frames".into(),
        ));
    }

    let h1 = run(setup, 1, 2, setup.grid, 1.0)?;
    let h2 = run(setup, 2, 1, mirrored(&setup.grid)?, -1.0)?;
    let n = setup.grid.n_points();
    let (q1, q2) = (space_label(2), space_label(1));
    let (mut dx, mut dk, mut dt) = (0.0f64, 0.0f64, 0.0f64);
    for (a, b) in h1.snapshots.iter().zip(&h2.snapshots) {
        dx = dx.max(max_dev(&a.marginal(&q1)?, &b.marginal(&q2)?, |j| n - 1 - j));
        let ak = a.clone().to_basis(&q1, Basis::Momentum)?;
        let bk = b.clone().to_basis(&q2, Basis::Momentum)?;
        dk = dk.max(max_dev(&ak.marginal(&q1)?, &bk.marginal(&q2)?, |j| (n - j) % n));
        if setup.clock.is_some() {
            dt = dt.max(max_dev(&a.marginal(&clock_label(2))?, &b.marginal(&clock_label(1))?, |j| j));
        }
    }
    let pass = symbolic.all_pass && dx.max(dk).max(dt) < SWAP_TOLERANCE;
    Ok(QrfSwapReport {
        symbolic,
        position_deviation: dx,
        momentum_deviation: dk,
        clock_deviation: dt,
        tolerance: SWAP_TOLERANCE,
        pass,
    })
}
