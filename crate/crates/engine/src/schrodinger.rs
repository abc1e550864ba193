//! Non-relativistic limit: a single particle in the field of a static
//! source, evolved under the generator obtained by solving its dynamical
//! constraint for the energy, compared against a hand-built Schrödinger
//! propagator.

use std::f64::consts::PI;

use qrf_algebra::{
    series::sqrt_g00, truncate, CanonicalSymbol, Component, GradingRule, Kind, OperatorExpr, Param,
    Party, Regime, SymbolicSystem,
};
use qrf_numerics::{
    packets, trotter_evolve, Axis, Basis, DenseMatrix, DenseOracle, Grid1D, TrotterPlan,
    WaveFunction, C64,
};
use qrf_spacetime::{check_weak_field, potential, ModelParams, SpacetimeError};
use serde::{Deserialize, Serialize};

use crate::realize::{realize, Binding, PositionBinding};
use crate::{EngineError, Result};

const AXIS: &str = "x";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchrodingerSetup {
    pub source_position: f64,
    pub center: f64,
    pub sigma: f64,
    pub k0: f64,
    pub duration: f64,
    pub snapshots: usize,
    pub step: f64,
    /// Keep the −p⁴/8m³c² term in the constraint-derived generator.
    pub quartic_generator: bool,
    /// Include the same correction in the reference propagator.
    pub quartic_reference: bool,
}

impl SchrodingerSetup {
    /// Packet a quarter of the way into the grid moving at an eighth of the
    /// Nyquist wavenumber for ten spacings; source one grid length to the left.
    pub fn for_grid(params: &ModelParams, grid: &Grid1D) -> Self {
        let dx = grid.spacing();
        let m = params.masses.first().copied().unwrap_or(1.0);
        let k0 = PI / (8.0 * dx);
        let duration = 10.0 * dx * m / k0;
        let snapshots = 10;
        Self {
            source_position: grid.offset() - grid.length(),
            center: grid.offset() + 0.5 * grid.length() - 5.0 * dx,
            sigma: grid.length() / 16.0,
            k0,
            duration,
            snapshots,
            step: duration / (snapshots as f64 * 200.0),
            quartic_generator: true,
            quartic_reference: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchrodingerReport {
    pub times: Vec<f64>,
    /// L² distance between the two evolutions at each time.
    pub discrepancies: Vec<f64>,
    pub max_discrepancy: f64,
    /// Displacement of ⟨x⟩ over the run, in grid spacings.
    pub center_shift: f64,
    /// Largest |Φ|/c² on the grid.
    pub field_ratio: f64,
    /// Terms of the constraint-derived generator, as text.
    pub generator_terms: Vec<String>,
}

/// Runs the comparison with [`SchrodingerSetup::for_grid`].
pub fn schrodinger_limit_check(params: &ModelParams, grid: &Grid1D) -> Result<SchrodingerReport> {
    schrodinger_limit_check_with(params, grid, &SchrodingerSetup::for_grid(params, grid))
}

/// Energy generator c·p⁰ on the shell of the particle's dynamical
/// constraint, weak-field truncated. Optionally drops the quartic term.
pub fn constraint_generator(quartic: bool) -> Result<OperatorExpr> {
    let rule = if quartic {
        GradingRule::weak_field()
    } else {
        GradingRule {
            max_momentum: 2,
            ..GradingRule::weak_field()
        }
    };
    let sys = SymbolicSystem::new(1, Regime::Full);
    let arg = sys.metric_arg(1).expect("gravitating regime has a metric argument");
    let p0 = OperatorExpr::symbol(CanonicalSymbol::p0(Party::P(1)));
    // C = √g⁰⁰ p⁰ − ω, so p⁰ − √g₀₀ C = √g₀₀ ω up to dropped orders.
    let solved = &p0 - &(&sqrt_g00(&arg, &rule) * &sys.dynamical(1, &rule));
    let gen = truncate(&(&OperatorExpr::param(Param::C, 1) * &solved), &rule);
    let leftover = gen.terms().any(|(k, _)| {
        k.momenta
            .iter()
            .any(|(s, _)| s.kind == Kind::Momentum && s.component == Component::Time)
    });
    if leftover {
        return Err(EngineError::NotDiagonal(format!(
            "energy conjugate survives in the solved generator: {gen}"
        )));
    }
    Ok(gen)
}

fn reference_matrix(params: &ModelParams, grid: &Grid1D, setup: &SchrodingerSetup) -> DenseMatrix {
    let n = grid.n_points();
    let m = params.masses[0];
    let c = params.c;
    let xs = grid.coordinates();
    let ks = grid.wavenumbers();
    let dispersion: Vec<f64> = ks
        .iter()
        .map(|k| {
            let k2 = k * k;
            let quartic = if setup.quartic_reference {
                k2 * k2 / (8.0 * m * m * m * c * c)
            } else {
                0.0
            };
            k2 / (2.0 * m) - quartic
        })
        .collect();
    DenseMatrix::from_fn(n, |j, l| {
        let d = xs[j] - xs[l];
        let mut v: C64 = ks
            .iter()
            .zip(&dispersion)
            .map(|(k, e)| C64::from_polar(*e, k * d))
            .sum::<C64>()
            / n as f64;
        if j == l {
            let r = (xs[j] - setup.source_position).abs().max(params.r_min);
            let phi = if params.gm == 0.0 { 0.0 } else { -params.gm / r };
            v += m * c * c + m * phi;
        }
        v
    })
}

pub fn schrodinger_limit_check_with(
    params: &ModelParams,
    grid: &Grid1D,
    setup: &SchrodingerSetup,
) -> Result<SchrodingerReport> {
    params.validate()?;
    if params.particles() != 1 {
        return Err(SpacetimeError::Config(format!(
            "limit check needs exactly one particle, got {}",
            params.particles()
        ))
        .into());
    }
    let field_ratio =
        check_weak_field(grid.coordinates().iter().map(|x| x - setup.source_position), params)?;

    let layout = vec![Axis::new(AXIS, *grid, Basis::Position)];
    let c = params.c;
    let phi = |r: f64| potential(r, params) / (c * c);
    let binding = Binding {
        masses: [(Party::P(1), params.masses[0])].into_iter().collect(),
        c,
        positions: [
            (Party::P(1), PositionBinding::Axis(AXIS.into())),
            (Party::M, PositionBinding::Sharp(setup.source_position)),
        ]
        .into_iter()
        .collect(),
        momenta: [(Party::P(1), AXIS.to_string())].into_iter().collect(),
        clocks: Default::default(),
        phi: &phi,
    };
    let gen = constraint_generator(setup.quartic_generator)?;
    let kernels = realize(&gen, &binding, &layout)?;

    let interval = setup.duration / setup.snapshots as f64;
    let per = (interval / setup.step).round().max(1.0) as usize;
    let plan = TrotterPlan::strang(&kernels, interval / per as f64, per)?;
    let oracle = DenseOracle::new(&reference_matrix(params, grid, setup))?;

    let psi0 = WaveFunction::product(vec![(
        layout[0].clone(),
        packets::gaussian(grid, setup.center, setup.sigma, setup.k0),
    )])?;
    let start = psi0.flat();
    let mean_x = |psi: &WaveFunction| -> Result<f64> {
        let m = psi.marginal(AXIS)?;
        Ok(grid.coordinates().iter().zip(&m).map(|(x, p)| x * p).sum::<f64>() * grid.spacing())
    };
    let x_start = mean_x(&psi0)?;

    let mut current = psi0.clone();
    let mut times = Vec::with_capacity(setup.snapshots);
    let mut discrepancies = Vec::with_capacity(setup.snapshots);
    for s in 1..=setup.snapshots {
        current = trotter_evolve(&plan, &current)?;
        let t = interval * s as f64;
        let reference = psi0.with_flat(oracle.evolve(&start, t)?)?;
        times.push(t);
        discrepancies.push(current.distance(&reference)?);
    }
    let max_discrepancy = discrepancies.iter().copied().fold(0.0, f64::max);
    Ok(SchrodingerReport {
        times,
        discrepancies,
        max_discrepancy,
        center_shift: (mean_x(&current)? - x_start) / grid.spacing(),
        field_ratio,
        generator_terms: gen
            .terms()
            .map(|(k, v)| OperatorExpr::from_term(k.clone(), v.clone()).to_string())
            .collect(),
    })
}
