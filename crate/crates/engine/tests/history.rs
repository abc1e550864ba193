use proptest::prelude::*;
use qrf_engine::{
    build_hamiltonian, clock_label, condition_on_clock, evolve_generator, evolve_history, space_label,
    EngineError, EvolveOptions, ParticleAxes, ScenarioAxes, SourceLayout,
};
use qrf_numerics::{packets, Axis, Basis, DenseOracle, Grid1D, WaveFunction, C64};
use qrf_spacetime::{ModelParams, Regime};

fn scenario(space: Grid1D, clock: Option<Grid1D>, source: SourceLayout) -> ScenarioAxes {
    ScenarioAxes::new(
        1,
        vec![ParticleAxes {
            particle: 2,
            space,
            clock,
        }],
        source,
    )
}

fn packet(ax: &ScenarioAxes, center: f64, sigma: f64, k0: f64, clock: (f64, f64)) -> WaveFunction {
    let p = &ax.particles[0];
    let mut f = vec![(
        Axis::new(space_label(2), p.space, Basis::Position),
        packets::gaussian(&p.space, center, sigma, k0),
    )];
    if let Some(t) = p.clock {
        f.push((
            Axis::new(clock_label(2), t, Basis::Position),
            packets::gaussian(&t, clock.0, clock.1, 0.0),
        ));
    }
    WaveFunction::product(f).unwrap()
}

fn mean_and_width(psi: &WaveFunction, label: &str) -> (f64, f64) {
    let x = psi.axis(label).unwrap().samples();
    let m = psi.marginal(label).unwrap();
    let total: f64 = m.iter().sum();
    let mean = x.iter().zip(&m).map(|(x, p)| x * p).sum::<f64>() / total;
    let var = x.iter().zip(&m).map(|(x, p)| (x - mean).powi(2) * p).sum::<f64>() / total;
    (mean, var.sqrt())
}

#[test]
fn galilean_packet_spreads_with_reduced_mass() {
    let (m1, m2) = (1.0, 2.0);
    let mu = m1 * m2 / (m1 + m2);
    let p = ModelParams::new(vec![m1, m2], 0.0, 1.0, 1.0).unwrap();
    let ax = scenario(Grid1D::centered(256, 80.0, 0.0).unwrap(), None, SourceLayout::Absent);
    let h = build_hamiltonian(Regime::Galilean, &p, &ax).unwrap();
    let sigma0 = 1.0;
    let psi0 = packet(&ax, 0.0, sigma0, 0.0, (0.0, 0.0));
    let taus = Grid1D::with_spacing(4, 1.0, 0.0).unwrap();
    let hist = evolve_history(&psi0, &h, &taus, &EvolveOptions::with_step(0.01)).unwrap();
    for (t, s) in taus.coordinates().iter().zip(&hist.snapshots) {
        // Free Gaussian of mass μ: σ(t) = σ₀ √(1 + (t / 2μσ₀²)²).
        let expected = sigma0 * (1.0 + (t / (2.0 * mu * sigma0 * sigma0)).powi(2)).sqrt();
        let (_, w) = mean_and_width(s, &space_label(2));
        assert!((w - expected).abs() < 1e-8, "t={t}: {w} vs {expected}");
    }
}

fn oracle_deviation(regime: Regime, gm: f64, source: SourceLayout) -> f64 {
    let p = ModelParams::new(vec![1.0, 2.0], gm, 2.0, 1.0).unwrap();
    let ax = scenario(
        Grid1D::centered(32, 16.0, 0.0).unwrap(),
        Some(Grid1D::new(8, 8.0, 0.0).unwrap()),
        source,
    );
    let h = build_hamiltonian(regime, &p, &ax).unwrap();
    let psi0 = packet(&ax, -1.0, 1.5, 1.0, (3.0, 1.0));
    let taus = Grid1D::with_spacing(4, 0.1, 0.0).unwrap();
    let opts = EvolveOptions {
        step: 1e-3,
        edge_fraction: 0.05,
        edge_limit: 1e-2,
        unchecked_axes: Vec::new(),
    };
    let hist = evolve_history(&psi0, &h, &taus, &opts).unwrap();
    let oracle = DenseOracle::new(&h.dense_matrix().unwrap()).unwrap();
    let scale = psi0.measure().sqrt();
    let start = psi0.flat();
    let mut worst: f64 = 0.0;
    for (t, s) in taus.coordinates().iter().zip(&hist.snapshots) {
        let exact = oracle.evolve(&start, *t).unwrap();
        for (a, b) in s.flat().iter().zip(&exact) {
            worst = worst.max((a - b).norm() * scale);
        }
    }
    worst
}

#[test]
fn thirty_two_point_instances_match_dense_oracle() {
    let sharp = SourceLayout::Sharp { position: -30.0 };
    for (regime, gm, source) in [
        (Regime::Galilean, 0.0, SourceLayout::Absent),
        (Regime::SpecialRelativistic, 0.0, SourceLayout::Absent),
        (Regime::Newtonian, 1.0, sharp),
        (Regime::Full, 1.0, sharp),
    ] {
        let d = oracle_deviation(regime, gm, source);
        assert!(d < 1e-6, "{regime:?}: {d}");
    }
}

#[test]
fn energy_is_conserved_in_a_field() {
    let p = ModelParams::new(vec![1.0, 1.0], 2.0, 3.0, 1.0).unwrap();
    let ax = scenario(
        Grid1D::centered(64, 32.0, 0.0).unwrap(),
        Some(Grid1D::new(32, 16.0, 0.0).unwrap()),
        SourceLayout::Sharp { position: -40.0 },
    );
    let h = build_hamiltonian(Regime::Newtonian, &p, &ax).unwrap();
    let psi0 = packet(&ax, 0.0, 2.0, 0.5, (4.0, 1.0));
    let taus = Grid1D::with_spacing(8, 0.5, 0.0).unwrap();
    let hist = evolve_history(&psi0, &h, &taus, &EvolveOptions::with_step(1e-3)).unwrap();
    let e0 = h.energy(&psi0).unwrap();
    for s in &hist.snapshots {
        let e = h.energy(s).unwrap();
        assert!(((e - e0) / e0).abs() < 1e-8, "{e} vs {e0}");
    }
    assert!(hist.norm_defect() < 1e-8);
}

#[test]
fn ideal_clock_reads_the_frame_time() {
    let p = ModelParams::new(vec![1.0, 2.0], 0.0, 1.0, 1.0).unwrap();
    let ax = scenario(
        Grid1D::centered(64, 64.0, 0.0).unwrap(),
        Some(Grid1D::new(128, 32.0, 0.0).unwrap()),
        SourceLayout::Absent,
    );
    let h = build_hamiltonian(Regime::Galilean, &p, &ax).unwrap();
    let psi0 = packet(&ax, 0.0, 3.0, 0.0, (6.0, 1.0));
    let taus = Grid1D::with_spacing(16, 1.0, 0.0).unwrap();
    let hist = evolve_history(&psi0, &h, &taus, &EvolveOptions::with_step(0.05)).unwrap();
    let (t0, _) = mean_and_width(&psi0, &clock_label(2));
    for (tau, s) in taus.coordinates().iter().zip(&hist.snapshots) {
        let (t, _) = mean_and_width(s, &clock_label(2));
        assert!((t - (tau + t0)).abs() < 1e-8, "{tau}: {t}");
    }
}

#[test]
fn clock_energy_alone_rotates_each_component() {
    let p = ModelParams::new(vec![1.0, 2.0], 0.0, 1.0, 1.0).unwrap();
    let clock = Grid1D::new(16, 8.0, 0.0).unwrap();
    let ax = scenario(Grid1D::centered(8, 8.0, 0.0).unwrap(), Some(clock), SourceLayout::Absent);
    let h = build_hamiltonian(Regime::Galilean, &p, &ax).unwrap();
    let only_clock = vec![h.term("clock_2").unwrap().kernel.clone()];
    let psi0 = packet(&ax, 0.0, 1.5, 0.0, (4.0, 1.0));
    let taus = Grid1D::with_spacing(4, 0.4, 0.0).unwrap();
    let hist = evolve_generator(&psi0, &only_clock, &taus, &EvolveOptions::with_step(0.1)).unwrap();
    let e = clock.wavenumbers();
    let a0 = psi0.clone().to_basis(&clock_label(2), Basis::Momentum).unwrap();
    for (tau, s) in taus.coordinates().iter().zip(&hist.snapshots) {
        let a = s.clone().to_basis(&clock_label(2), Basis::Momentum).unwrap();
        for ((idx, x), y) in a0.amplitudes().indexed_iter().zip(a.amplitudes().iter()) {
            let expected = x * C64::from_polar(1.0, -e[idx[1]] * tau);
            assert!((y - expected).norm() < 1e-12);
        }
    }
}

#[test]
fn conditioning_contract() {
    let p = ModelParams::new(vec![1.0, 1.0], 0.0, 1.0, 1.0).unwrap();
    let ax = scenario(Grid1D::centered(32, 32.0, 0.0).unwrap(), None, SourceLayout::Absent);
    let h = build_hamiltonian(Regime::Galilean, &p, &ax).unwrap();
    let psi0 = packet(&ax, 0.0, 2.0, 0.0, (0.0, 0.0));
    let taus = Grid1D::with_spacing(4, 0.5, 0.0).unwrap();
    let hist = evolve_history(&psi0, &h, &taus, &EvolveOptions::with_step(0.01)).unwrap();
    assert_eq!(condition_on_clock(&hist, 0.0).unwrap(), psi0);
    assert_eq!(condition_on_clock(&hist, 0.6).unwrap(), hist.snapshots[1]);
    assert!(matches!(
        condition_on_clock(&hist, 1.6),
        Err(EngineError::OutOfRange { .. })
    ));
}

#[test]
fn step_must_divide_the_history_spacing() {
    let p = ModelParams::new(vec![1.0, 1.0], 0.0, 1.0, 1.0).unwrap();
    let ax = scenario(Grid1D::centered(32, 32.0, 0.0).unwrap(), None, SourceLayout::Absent);
    let h = build_hamiltonian(Regime::Galilean, &p, &ax).unwrap();
    let psi0 = packet(&ax, 0.0, 2.0, 0.0, (0.0, 0.0));
    let taus = Grid1D::with_spacing(4, 0.5, 0.0).unwrap();
    let r = evolve_history(&psi0, &h, &taus, &EvolveOptions::with_step(0.3));
    assert!(matches!(r, Err(EngineError::StepMismatch { .. })));
}

#[test]
fn leakage_into_grid_edges_is_reported() {
    let p = ModelParams::new(vec![1.0, 1.0], 0.0, 1.0, 1.0).unwrap();
    let ax = scenario(Grid1D::centered(64, 16.0, 0.0).unwrap(), None, SourceLayout::Absent);
    let h = build_hamiltonian(Regime::Galilean, &p, &ax).unwrap();
    let psi0 = packet(&ax, 0.0, 0.5, 3.0, (0.0, 0.0));
    let taus = Grid1D::with_spacing(4, 1.0, 0.0).unwrap();
    let r = evolve_history(&psi0, &h, &taus, &EvolveOptions::with_step(0.01));
    assert!(matches!(r, Err(EngineError::EdgeLeakage { .. })));
}

#[test]
fn columnar_output_has_one_row_per_amplitude() {
    let p = ModelParams::new(vec![1.0, 1.0], 0.0, 1.0, 1.0).unwrap();
    let ax = scenario(Grid1D::centered(16, 32.0, 0.0).unwrap(), None, SourceLayout::Absent);
    let h = build_hamiltonian(Regime::Galilean, &p, &ax).unwrap();
    let psi0 = packet(&ax, 0.0, 2.0, 0.0, (0.0, 0.0));
    let taus = Grid1D::with_spacing(4, 0.5, 0.0).unwrap();
    let hist = evolve_history(&psi0, &h, &taus, &EvolveOptions::with_step(0.01)).unwrap();
    let mut out = Vec::new();
    hist.write_columnar(&mut out).unwrap();
    let text = String::from_utf8(out).unwrap();
    assert_eq!(text.lines().count(), 1 + 4 * 16);
    assert!(text.starts_with("# tau q_2 re im"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]
    #[test]
    fn evolution_preserves_norm(
        m2 in 0.5f64..3.0,
        c in 1.0f64..4.0,
        k0 in -1.0f64..1.0,
        regime in prop::sample::select(vec![Regime::Galilean, Regime::SpecialRelativistic]),
    ) {
        let p = ModelParams::new(vec![1.0, m2], 0.0, c, 1.0).unwrap();
        let ax = scenario(
            Grid1D::centered(64, 32.0, 0.0).unwrap(),
            Some(Grid1D::new(16, 16.0, 0.0).unwrap()),
            SourceLayout::Absent,
        );
        let h = build_hamiltonian(regime, &p, &ax).unwrap();
        let psi0 = packet(&ax, 0.0, 2.0, k0, (4.0, 1.0));
        let taus = Grid1D::with_spacing(4, 0.5, 0.0).unwrap();
        let opts = EvolveOptions { step: 0.05, edge_fraction: 0.05, edge_limit: 1.0, unchecked_axes: Vec::new() };
        let hist = evolve_history(&psi0, &h, &taus, &opts).unwrap();
        prop_assert!(hist.norm_defect() < 1e-10);
    }
}
