use proptest::prelude::*;
use qrf_engine::{
    build_hamiltonian, build_hamiltonian_with, frame_dilation_offset, transformed_metric, EngineError,
    HamiltonianSpec, Kinematics, ParticleAxes, ScenarioAxes, SourceLayout,
};
use qrf_numerics::{hamiltonian_matrix, DenseMatrix, Grid1D};
use qrf_spacetime::{ModelParams, Regime};

fn axes(n_space: usize, clock: bool, source: SourceLayout) -> ScenarioAxes {
    ScenarioAxes::new(
        1,
        vec![ParticleAxes {
            particle: 2,
            space: Grid1D::centered(n_space, 16.0, 0.0).unwrap(),
            clock: clock.then(|| Grid1D::new(4, 4.0, 0.0).unwrap()),
        }],
        source,
    )
}

fn dynamical() -> SourceLayout {
    SourceLayout::Dynamical {
        space: Grid1D::centered(4, 2.0, -60.0).unwrap(),
        time: Grid1D::new(4, 4.0, 0.0).unwrap(),
    }
}

fn dense(h: &HamiltonianSpec) -> DenseMatrix {
    h.dense_matrix().unwrap()
}

fn max_diff(a: &DenseMatrix, b: &DenseMatrix, shift: f64) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            let s = if i == j { shift } else { 0.0 };
            worst = worst.max((a.get(i, j) - b.get(i, j) - s).norm());
        }
    }
    worst
}

#[test]
fn every_regime_is_hermitian_on_small_grids() {
    let flat = ModelParams::new(vec![1.0, 2.0], 0.0, 3.0, 1.0).unwrap();
    let grav = ModelParams::new(vec![1.0, 2.0], 0.5, 3.0, 1.0).unwrap();
    let cases = [
        (Regime::Galilean, &flat, SourceLayout::Absent),
        (Regime::SpecialRelativistic, &flat, SourceLayout::Absent),
        (Regime::Newtonian, &grav, SourceLayout::Sharp { position: -40.0 }),
        (Regime::Newtonian, &grav, dynamical()),
        (Regime::Full, &grav, SourceLayout::Sharp { position: -40.0 }),
        (Regime::Full, &grav, dynamical()),
    ];
    for (regime, params, source) in cases {
        let h = build_hamiltonian(regime, params, &axes(8, true, source)).unwrap();
        let defect = dense(&h).hermitian_defect();
        assert!(defect < 1e-10, "{regime:?}: {defect}");
        for t in &h.terms {
            assert!(t.kernel.is_real(), "{}", t.kernel.label());
        }
    }
}

#[test]
fn reduced_mass_form_in_galilean_regime() {
    let p = ModelParams::new(vec![1.0, 3.0], 0.0, 1.0, 1.0).unwrap();
    let ax = axes(16, false, SourceLayout::Absent);
    let h = build_hamiltonian(Regime::Galilean, &p, &ax).unwrap();
    let mu = 1.0 * 3.0 / (1.0 + 3.0);
    let v = h.terms[0].kernel.real_values().unwrap();
    for (j, k) in ax.particles[0].space.wavenumbers().iter().enumerate() {
        assert!((v[[j]] - k * k / (2.0 * mu)).abs() < 1e-12);
    }
}

#[test]
fn full_without_field_matches_special_relativity_kernel_by_kernel() {
    let p = ModelParams::new(vec![1.0, 2.0], 0.0, 2.0, 1.0).unwrap();
    let ax = axes(8, true, SourceLayout::Absent);
    let full = build_hamiltonian(Regime::Full, &p, &ax).unwrap();
    let sr = build_hamiltonian(Regime::SpecialRelativistic, &p, &ax).unwrap();
    assert_eq!(full.terms, sr.terms);
    assert_eq!(full.rest_energy(), sr.rest_energy());
}

#[test]
fn slow_full_differs_from_newtonian_by_frame_dilation_only() {
    let p = ModelParams::new(vec![1.0, 2.0], 0.5, 3.0, 1.0).unwrap();
    for source in [SourceLayout::Sharp { position: -40.0 }, dynamical()] {
        let ax = axes(8, true, source);
        let slow =
            build_hamiltonian_with(Regime::Full, &p, &ax, Kinematics::SlowMotion).unwrap();
        let newt = build_hamiltonian(Regime::Newtonian, &p, &ax).unwrap();
        let offset = hamiltonian_matrix(&ax.axes(), &[frame_dilation_offset(&p, &ax).unwrap()]).unwrap();
        let a = dense(&slow);
        let b = dense(&newt);
        let mut worst: f64 = 0.0;
        for i in 0..a.dim() {
            for j in 0..a.dim() {
                worst = worst.max((a.get(i, j) - b.get(i, j) - offset.get(i, j)).norm());
            }
        }
        assert!(worst < 1e-9, "{worst}");
    }
}

#[test]
fn newtonian_without_field_is_galilean_plus_rest_energy() {
    let p = ModelParams::new(vec![1.0, 2.0], 0.0, 3.0, 1.0).unwrap();
    let ax = axes(8, true, SourceLayout::Absent);
    let newt = build_hamiltonian(Regime::Newtonian, &p, &ax).unwrap();
    let gal = build_hamiltonian(Regime::Galilean, &p, &ax).unwrap();
    assert_eq!(newt.rest_energy(), 3.0 * 9.0);
    assert_eq!(gal.rest_energy(), 0.0);
    assert!(max_diff(&dense(&newt), &dense(&gal), newt.rest_energy()) < 1e-9);
}

#[test]
fn metric_kernel_is_potential_difference_at_first_order() {
    let gm = 0.02;
    let p = ModelParams::new(vec![1.0, 5.0], gm, 1.0, 1.0).unwrap();
    let qm = -50.0;
    let ax = axes(16, false, SourceLayout::Sharp { position: qm });
    let h = build_hamiltonian(Regime::Newtonian, &p, &ax).unwrap();
    let v = h.term("metric_2").unwrap().kernel.real_values().unwrap().clone();
    let phi = |r: f64| -gm / r.abs();
    let qs = ax.particles[0].space.coordinates();
    let worst_phi = qs.iter().map(|q| phi(q - qm).abs()).fold(phi(qm).abs(), f64::max);
    // Second-order remainder of √((1+2a)/(1+2b)) is below 3·max(a,b)².
    let bound = 5.0 * 3.0 * worst_phi * worst_phi;
    for (j, q) in qs.iter().enumerate() {
        let first_order = 5.0 * (phi(q - qm) - phi(qm));
        assert!((v[[j]] - first_order).abs() < bound, "{q}: {} vs {first_order}", v[[j]]);
    }
}

#[test]
fn special_relativistic_rest_value_at_zero_momentum() {
    // k = 0 sample of motion + frame_rest + clock with E₂ on the clock axis.
    let m = 2.0;
    let c = 3.0;
    let p = ModelParams::new(vec![m, m], 0.0, c, 1.0).unwrap();
    let ax = axes(8, true, SourceLayout::Absent);
    let h = build_hamiltonian(Regime::SpecialRelativistic, &p, &ax).unwrap();
    let motion = h.term("motion").unwrap().kernel.real_values().unwrap();
    let frame = h.term("frame_rest").unwrap().kernel.real_values().unwrap();
    let clock = h.term("clock_2").unwrap().kernel.real_values().unwrap();
    let e2 = ax.particles[0].clock.unwrap().wavenumber(1);
    let total = motion[[0]] + frame[[0]] + clock[[0, 1]];
    assert!((total - (2.0 * m * c * c + e2)).abs() < 1e-12);
}

#[test]
fn flat_regime_with_source_axes_is_rejected() {
    let p = ModelParams::new(vec![1.0, 2.0], 0.0, 3.0, 1.0).unwrap();
    let err = build_hamiltonian(Regime::SpecialRelativistic, &p, &axes(8, false, dynamical()));
    assert!(matches!(err, Err(EngineError::Layout { .. })));
}

#[test]
fn strong_field_is_rejected() {
    let p = ModelParams::new(vec![1.0, 2.0], 5.0, 1.0, 1.0).unwrap();
    let err = build_hamiltonian(
        Regime::Newtonian,
        &p,
        &axes(8, false, SourceLayout::Sharp { position: -20.0 }),
    );
    assert!(matches!(err, Err(EngineError::Spacetime(_))));
}

#[test]
fn transformed_metric_examples() {
    let p = ModelParams::new(vec![1.0, 1.0], 0.3, 4.0, 1.0).unwrap();
    assert_eq!(transformed_metric(0.0, -12.0, &p).unwrap(), 1.0);
    // |q_i − q_M| = |q_M| puts both arguments at the same radius.
    assert!((transformed_metric(-24.0, -12.0, &p).unwrap() - 1.0).abs() < 1e-15);
    let flat = ModelParams::new(vec![1.0, 1.0], 0.0, 4.0, 1.0).unwrap();
    assert_eq!(transformed_metric(7.0, -3.0, &flat).unwrap(), 1.0);
}

proptest! {
    #[test]
    fn origin_is_locally_inertial(qm in -200.0f64..-5.0, gm in 0.0f64..0.1) {
        let p = ModelParams::new(vec![1.0, 1.0], gm, 1.0, 1.0).unwrap();
        prop_assert_eq!(transformed_metric(0.0, qm, &p).unwrap(), 1.0);
    }

    #[test]
    fn dense_realization_is_hermitian(
        m1 in 0.5f64..3.0,
        m2 in 0.5f64..3.0,
        c in 1.0f64..5.0,
        gm in 0.0f64..0.5,
        regime in prop::sample::select(vec![
            Regime::Galilean, Regime::SpecialRelativistic, Regime::Newtonian, Regime::Full,
        ]),
    ) {
        let gm = if regime.has_gravity() { gm } else { 0.0 };
        let p = ModelParams::new(vec![m1, m2], gm, c, 1.0).unwrap();
        let source = if regime.has_gravity() {
            SourceLayout::Sharp { position: -60.0 }
        } else {
            SourceLayout::Absent
        };
        let h = build_hamiltonian(regime, &p, &axes(8, true, source)).unwrap();
        prop_assert!(dense(&h).hermitian_defect() < 1e-10);
    }
}
