//! Randomized invariant sweep behind `qrfsim invariants`.

use qrf_engine::{
    build_hamiltonian, clock_label, evolve_history, space_label, transformed_metric, EvolveOptions,
    ParticleAxes, ScenarioAxes, SourceLayout,
};
use qrf_events::{event_time_distribution, evolve_with_event, EventModel, EventSpec, Readout};
use qrf_numerics::{packets, Axis, Basis, Grid1D, WaveFunction};
use qrf_spacetime::{ModelParams, Regime};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::run::{ENERGY_TOLERANCE, MONOTONE_TOLERANCE, NORM_TOLERANCE};

/// One randomized two-particle configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InvariantCase {
    pub regime: Regime,
    pub masses: [f64; 2],
    pub c: f64,
    /// Zero outside the gravitating regimes.
    pub gm: f64,
    pub source: f64,
    pub center: f64,
    pub width: f64,
    pub boost: f64,
    pub clock_width: f64,
    /// Event time τ* and regularization σ_T, when a kick is attached.
    pub event: Option<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub case: InvariantCase,
    pub norm_defect: f64,
    pub energy_drift: f64,
    pub origin_metric: f64,
    pub occurrence_decrease: Option<f64>,
    /// Full at GM = 0 has the special-relativistic kernels.
    pub full_matches_sr: bool,
    /// Newtonian at GM = 0 minus galilean, less the rest energy.
    pub newtonian_offset_defect: f64,
    pub failures: Vec<String>,
}

impl InvariantReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

pub const REGIMES: [Regime; 4] = [
    Regime::Galilean,
    Regime::SpecialRelativistic,
    Regime::Newtonian,
    Regime::Full,
];

const SPACE: (usize, f64) = (32, 32.0);
const CLOCK: (usize, f64, f64) = (32, 16.0, -4.0);

pub fn clock_grid() -> Grid1D {
    Grid1D::new(CLOCK.0, CLOCK.1, CLOCK.2).expect("valid clock grid")
}

pub fn random_case(rng: &mut impl Rng) -> InvariantCase {
    let regime = REGIMES[rng.gen_range(0..4)];
    let clock_spacing = clock_grid().spacing();
    InvariantCase {
        regime,
        masses: [rng.gen_range(0.5..3.0), rng.gen_range(0.5..3.0)],
        c: rng.gen_range(1.0..4.0),
        gm: if regime.has_gravity() { rng.gen_range(0.0..0.5) } else { 0.0 },
        source: rng.gen_range(-120.0..-40.0),
        center: rng.gen_range(-4.0..4.0),
        width: rng.gen_range(1.0..3.0),
        boost: rng.gen_range(-1.0..1.0),
        clock_width: rng.gen_range(0.5..1.0),
        event: rng
            .gen_bool(0.5)
            .then(|| (rng.gen_range(0.5..1.5), rng.gen_range(clock_spacing..1.6 * clock_spacing))),
    }
}

fn axes(case: &InvariantCase, space: usize, clock: Grid1D) -> Result<ScenarioAxes, CliError> {
    let source = if case.regime.has_gravity() {
        SourceLayout::Sharp { position: case.source }
    } else {
        SourceLayout::Absent
    };
    Ok(ScenarioAxes::new(
        1,
        vec![ParticleAxes {
            particle: 2,
            space: Grid1D::centered(space, SPACE.1, 0.0)?,
            clock: Some(clock),
        }],
        source,
    ))
}

fn packet(case: &InvariantCase, axes: &ScenarioAxes) -> Result<WaveFunction, CliError> {
    let p = &axes.particles[0];
    let clock = p.clock.expect("clock axis");
    let mut factors = vec![
        (
            Axis::new(space_label(2), p.space, Basis::Position),
            packets::gaussian(&p.space, case.center, case.width, case.boost),
        ),
        (
            Axis::new(clock_label(2), clock, Basis::Position),
            packets::gaussian(&clock, 0.0, case.clock_width, 0.0),
        ),
    ];
    for a in axes.axes().into_iter().skip(2) {
        factors.push((a, qrf_events::pointer_ready()));
    }
    Ok(WaveFunction::product(factors)?)
}

fn params(case: &InvariantCase, gm: f64) -> Result<ModelParams, CliError> {
    Ok(ModelParams::new(case.masses.to_vec(), gm, case.c, 1.0)?)
}

/// Largest entry of |A − B − shift·I| over two dense matrices.
fn offset_defect(a: &qrf_numerics::DenseMatrix, b: &qrf_numerics::DenseMatrix, shift: f64) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            let s = if i == j { shift } else { 0.0 };
            worst = worst.max((a.get(i, j) - b.get(i, j) - s).norm());
        }
    }
    worst
}

pub fn check_case(case: &InvariantCase) -> Result<InvariantReport, CliError> {
    let p = params(case, case.gm)?;
    let ax = axes(case, SPACE.0, clock_grid())?;
    let tau = Grid1D::with_spacing(8, 0.25, 0.0)?;
    // Periodic grids stay unitary under wrap-around; only the invariants matter here.
    let opts = EvolveOptions {
        edge_limit: 1.0,
        ..EvolveOptions::with_step(1e-3)
    };
    let h = build_hamiltonian(case.regime, &p, &ax)?;
    let psi0 = packet(case, &ax)?;
    let hist = evolve_history(&psi0, &h, &tau, &opts)?;
    let e0 = h.energy(&psi0)?;
    let mut energy_drift: f64 = 0.0;
    for s in &hist.snapshots {
        let e = h.energy(s)?;
        energy_drift = energy_drift.max(if e0 == 0.0 { e.abs() } else { ((e - e0) / e0).abs() });
    }
    let origin_metric = transformed_metric(0.0, case.source, &p)?;

    let occurrence_decrease = match case.event {
        Some((tau_star, sigma_t)) => {
            let model = EventModel::new(case.regime, p.clone(), ax.clone(), EventSpec::pointer_flip(tau_star, sigma_t))?;
            let psi = packet(case, &model.axes)?;
            let hist = evolve_with_event(&model, &psi, &tau, &opts)?;
            Some(event_time_distribution(&hist, Readout::Pointer)?.max_decrease())
        }
        None => None,
    };

    let small = |regime: Regime| -> Result<_, CliError> {
        let case = InvariantCase { regime, ..*case };
        let ax = axes(&case, 8, Grid1D::new(4, 4.0, 0.0)?)?;
        let ax = ScenarioAxes { source: SourceLayout::Absent, ..ax };
        Ok(build_hamiltonian(regime, &params(&case, 0.0)?, &ax)?)
    };
    let full_matches_sr = small(Regime::Full)?.terms == small(Regime::SpecialRelativistic)?.terms;
    let newt = small(Regime::Newtonian)?;
    let gal = small(Regime::Galilean)?;
    let rest = (case.masses[0] + case.masses[1]) * case.c * case.c;
    let newtonian_offset_defect = offset_defect(&newt.dense_matrix()?, &gal.dense_matrix()?, rest)
        .max((newt.rest_energy() - rest).abs());

    let mut failures = Vec::new();
    if hist.norm_defect() >= NORM_TOLERANCE {
        failures.push(format!("norm defect {:.3e}", hist.norm_defect()));
    }
    if energy_drift >= ENERGY_TOLERANCE {
        failures.push(format!("energy drift {energy_drift:.3e}"));
    }
    if origin_metric != 1.0 {
        failures.push(format!("g'00(0) = {origin_metric}"));
    }
    if let Some(d) = occurrence_decrease.filter(|d| *d >= MONOTONE_TOLERANCE) {
        failures.push(format!("occurrence decreases by {d:.3e}"));
    }
    if !full_matches_sr {
        failures.push("full at GM = 0 differs from special relativity".into());
    }
    if newtonian_offset_defect >= 1e-9 * rest.max(1.0) {
        failures.push(format!("newtonian - galilean - M c^2 = {newtonian_offset_defect:.3e}"));
    }
    Ok(InvariantReport {
        case: *case,
        norm_defect: hist.norm_defect(),
        energy_drift,
        origin_metric,
        occurrence_decrease,
        full_matches_sr,
        newtonian_offset_defect,
        failures,
    })
}

/// `cases` configurations drawn from a ChaCha stream seeded with `seed`.
pub fn run_invariants(cases: usize, seed: u64) -> Result<Vec<InvariantReport>, CliError> {
    use rayon::prelude::*;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let drawn: Vec<InvariantCase> = (0..cases).map(|_| random_case(&mut rng)).collect();
    drawn.par_iter().map(check_case).collect()
}
