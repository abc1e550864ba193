use qrf_engine::{
    qrf_swap_check, schrodinger_limit_check, schrodinger_limit_check_with, EngineError,
    EvolveOptions, SchrodingerSetup, SwapSetup,
};
use qrf_algebra::GradingRule;
use qrf_numerics::Grid1D;
use qrf_spacetime::{ModelParams, Regime};

fn limit_grid() -> Grid1D {
    Grid1D::centered(256, 64.0, 0.0).unwrap()
}

#[test]
fn identical_generators_without_field_or_quartic() {
    let p = ModelParams::new(vec![1.0], 0.0, 10.0, 1.0).unwrap();
    let g = limit_grid();
    let setup = SchrodingerSetup {
        quartic_generator: false,
        quartic_reference: false,
        ..SchrodingerSetup::for_grid(&p, &g)
    };
    let r = schrodinger_limit_check_with(&p, &g, &setup).unwrap();
    assert!(r.max_discrepancy < 1e-10, "{}", r.max_discrepancy);
    assert_eq!(r.generator_terms.len(), 3);
}

#[test]
fn weak_field_generator_matches_schrodinger_propagator() {
    let p = ModelParams::new(vec![1.0], 20.0, 10.0, 1.0).unwrap();
    let g = limit_grid();
    let r = schrodinger_limit_check(&p, &g).unwrap();
    assert!(r.field_ratio > 1e-3 && r.field_ratio < 0.05);
    assert!((r.center_shift - 10.0).abs() < 0.5, "shift {}", r.center_shift);
    assert!(r.max_discrepancy < 1e-6, "{}", r.max_discrepancy);
}

/// Moments of the continuum momentum distribution of the default packet,
/// by Simpson quadrature: returns (⟨B⟩, √⟨B²⟩) with B = p⁴/8m³c².
fn quartic_moments(k0: f64, sigma_x: f64, m: f64, c: f64) -> (f64, f64) {
    let s = 1.0 / (2.0 * sigma_x);
    let n = 4000;
    let (a, b) = (k0 - 12.0 * s, k0 + 12.0 * s);
    let h = (b - a) / n as f64;
    let mut acc = [0.0f64; 3];
    for i in 0..=n {
        let p = a + i as f64 * h;
        let w = if i == 0 || i == n { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
        let rho = (-(p - k0).powi(2) / (2.0 * s * s)).exp();
        let q = p.powi(4) / (8.0 * m.powi(3) * c * c);
        acc[0] += w * rho;
        acc[1] += w * rho * q;
        acc[2] += w * rho * q * q;
    }
    (acc[1] / acc[0], (acc[2] / acc[0]).sqrt())
}

#[test]
fn one_sided_quartic_drifts_linearly() {
    let (m, c) = (1.0, 10.0);
    let p = ModelParams::new(vec![m], 0.0, c, 1.0).unwrap();
    let g = limit_grid();
    let setup = SchrodingerSetup {
        quartic_reference: false,
        ..SchrodingerSetup::for_grid(&p, &g)
    };
    let r = schrodinger_limit_check_with(&p, &g, &setup).unwrap();
    let (mean_b, rms_b) = quartic_moments(setup.k0, setup.sigma, m, c);
    let slopes: Vec<f64> = r.times.iter().zip(&r.discrepancies).map(|(t, d)| d / t).collect();
    for s in &slopes {
        assert!((s - slopes[0]).abs() < 1e-3 * slopes[0], "{slopes:?}");
    }
    // ‖(e^{-iBt} − 1)ψ‖ ≈ t·√⟨B²⟩, which exceeds ⟨B⟩ only through the
    // momentum spread of the packet.
    assert!((slopes[0] - rms_b).abs() < 1e-2 * rms_b, "{} vs {rms_b}", slopes[0]);
    assert!(slopes[0] >= mean_b && slopes[0] < 1.1 * mean_b, "{} vs {mean_b}", slopes[0]);
}

fn swap_setup(regime: Regime, params: ModelParams) -> SwapSetup {
    SwapSetup {
        regime,
        params,
        grid: Grid1D::new(64, 32.0, -12.0).unwrap(),
        clock: Some(Grid1D::new(32, 16.0, 0.0).unwrap()),
        center: 3.0,
        sigma: 1.5,
        k0: 0.7,
        clock_center: 4.0,
        clock_sigma: 1.0,
        tau_grid: Grid1D::with_spacing(4, 0.5, 0.0).unwrap(),
        options: EvolveOptions::with_step(0.01),
        rule: GradingRule::weak_field(),
    }
}

#[test]
fn mirrored_frames_give_mirrored_distributions() {
    for regime in [Regime::Galilean, Regime::SpecialRelativistic] {
        let p = ModelParams::new(vec![1.5, 1.5], 0.0, 2.0, 1.0).unwrap();
        let r = qrf_swap_check(&swap_setup(regime, p)).unwrap();
        assert!(r.symbolic.all_pass, "{regime:?}");
        assert!(r.position_deviation < 1e-6, "{}", r.position_deviation);
        assert!(r.momentum_deviation < 1e-6, "{}", r.momentum_deviation);
        assert!(r.clock_deviation < 1e-6, "{}", r.clock_deviation);
        assert!(r.pass);
    }
}

#[test]
fn unequal_masses_are_asymmetric() {
    let p = ModelParams::new(vec![1.0, 2.0], 0.0, 2.0, 1.0).unwrap();
    assert!(matches!(
        qrf_swap_check(&swap_setup(Regime::Galilean, p)),
        Err(EngineError::Asymmetric(_))
    ));
}

#[test]
fn a_source_breaks_the_mirror_symmetry() {
    let p = ModelParams::new(vec![1.0, 1.0], 0.1, 2.0, 1.0).unwrap();
    assert!(matches!(
        qrf_swap_check(&swap_setup(Regime::Newtonian, p)),
        Err(EngineError::Asymmetric(_))
    ));
}
