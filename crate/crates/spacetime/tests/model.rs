use qrf_algebra::{truncate, GradingRule, OperatorExpr, Regime, SymbolicSystem};
use qrf_numerics::{packets, Axis, Basis, Grid1D, WaveFunction};
use qrf_spacetime::*;

fn two_axis_state(x0: f64, sigma_x: f64, k0: f64, sigma_k: f64) -> WaveFunction {
    let gx = Grid1D::centered(256, 24.0, x0).unwrap();
    let gk = Grid1D::centered(256, 200.0, 0.0).unwrap();
    WaveFunction::product(vec![
        (Axis::new("x", gx.clone(), Basis::Position), packets::gaussian(&gx, x0, sigma_x, 0.0)),
        (Axis::new("k", gk.clone(), Basis::Momentum), packets::momentum_gaussian(&gk, k0, sigma_k, 0.0)),
    ])
    .unwrap()
}

fn axes() -> DiagnosticAxes {
    DiagnosticAxes {
        momenta: vec![("k".into(), 1.0)],
        positions: vec![("x".into(), 0.0)],
    }
}

/// ∫ N(x; μ, σ) f(x) dx by composite Simpson over ±12σ.
fn gaussian_average(mu: f64, sigma: f64, f: impl Fn(f64) -> f64) -> f64 {
    let n = 20_000;
    let (a, b) = (mu - 12.0 * sigma, mu + 12.0 * sigma);
    let h = (b - a) / n as f64;
    let norm = 1.0 / (sigma * (2.0 * std::f64::consts::PI).sqrt());
    let g = |x: f64| norm * (-(x - mu) * (x - mu) / (2.0 * sigma * sigma)).exp() * f(x);
    let mut s = g(a) + g(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * g(a + i as f64 * h);
    }
    s * h / 3.0
}

#[test]
fn resting_packet_in_flat_space_is_deep_in_regime() {
    let params = ModelParams::new(vec![1.0], 0.0, 100.0, 1.0).unwrap();
    let r = regime_diagnostics(&two_axis_state(0.0, 1.0, 0.0, 0.05), &axes(), &params).unwrap();
    assert_eq!(r.eps_g, 0.0);
    assert!(r.eps_p2 < 1e-6 && r.eps_p4 < 1e-12);
    assert_eq!(r.eps_g_eps_p2, 0.0);
    assert!(!r.flagged);
}

#[test]
fn moving_packet_moments() {
    let c = 10.0;
    let params = ModelParams::new(vec![1.0], 0.0, c, 1.0).unwrap();
    let (k0, sk) = (0.3 * c, 0.05);
    let r = regime_diagnostics(&two_axis_state(0.0, 1.0, k0, sk), &axes(), &params).unwrap();
    let m2 = gaussian_average(k0, sk, |k| (k / c).powi(2));
    let m4 = gaussian_average(k0, sk, |k| (k / c).powi(4));
    assert!((r.eps_p2 - m2).abs() < 1e-9, "{} vs {}", r.eps_p2, m2);
    assert!((r.eps_p4 - m4).abs() < 1e-9, "{} vs {}", r.eps_p4, m4);
    assert!((r.eps_p2 - 0.09).abs() < 1e-3);
    assert!((r.eps_p4 - 8.1e-3).abs() < 1e-4);
    assert_eq!(r.eps_g_eps_p2, 0.0);
    assert!(!r.flagged);
}

#[test]
fn packet_near_source_with_momentum_is_flagged() {
    let c: f64 = 10.0;
    let x0 = 4.0;
    let gm = 0.02 * c * c * x0;
    let params = ModelParams::new(vec![1.0], gm, c, 1.0).unwrap();
    let (sx, k0, sk) = (0.3, 0.3 * c, 0.05);
    let r = regime_diagnostics(&two_axis_state(x0, sx, k0, sk), &axes(), &params).unwrap();
    let eg = gaussian_average(x0, sx, |x| gm / (x.abs().max(1.0) * c * c));
    let ep = gaussian_average(k0, sk, |k| (k / c).powi(2));
    assert!((r.eps_g - eg).abs() < 1e-6 * eg.max(1.0), "{} vs {}", r.eps_g, eg);
    assert!((r.eps_g_eps_p2 - eg * ep).abs() < 1e-6);
    assert!((r.eps_g_eps_p2 - 1.8e-3).abs() < 5e-5);
    assert!(r.flagged);
    assert!(r.flags.iter().any(|f| f.starts_with("eps_g*eps_p^2")));
}

#[test]
fn galilean_constraint_list() {
    let params = ModelParams::new(vec![1.0, 2.0], 0.0, 10.0, 1.0).unwrap();
    let set = build_constraints(Regime::Galilean, &params, None).unwrap();
    assert_eq!(set.dynamical[0].1.to_string(), "p0_1 + -1/2 m_1^-1 c^-1 p_1^2");
    assert_eq!(set.energy.1.to_string(), "p0_1 + p0_2 + c^-1 H_1 + c^-1 H_2");
    assert_eq!(set.momentum.1.to_string(), "p_1 + p_2");
}

#[test]
fn special_relativistic_energy_constraint() {
    let params = ModelParams::new(vec![1.0, 2.0], 0.0, 10.0, 1.0).unwrap();
    let set = build_constraints(Regime::SpecialRelativistic, &params, None).unwrap();
    let rule = GradingRule::weak_field();
    let mut expected = OperatorExpr::zero();
    for i in 1..=2u8 {
        let p = qrf_algebra::series::momentum_of(qrf_algebra::Party::P(i));
        let g = qrf_algebra::series::gamma_inv(&p, qrf_algebra::Party::P(i), &rule);
        let h = OperatorExpr::symbol(qrf_algebra::CanonicalSymbol::clock_energy(i));
        expected = expected
            + OperatorExpr::symbol(qrf_algebra::CanonicalSymbol::p0(qrf_algebra::Party::P(i)))
            + &(&g * &h) * &OperatorExpr::param(qrf_algebra::Param::C, -1);
    }
    assert_eq!(set.energy.1, expected);
}

#[test]
fn measurement_adds_pulse_term() {
    let params = ModelParams::new(vec![1.0, 1.0], 0.5, 10.0, 1.0).unwrap();
    let set = build_constraints(
        Regime::Full,
        &params,
        Some(MeasurementSpec {
            tau_star: 1.5,
            clock: 2,
        }),
    )
    .unwrap();
    let text = set.energy.1.to_string();
    assert!(text.contains("c^-1 Q_2 delta(T_2-tau*)"), "{text}");
}

#[test]
fn full_model_reduces_to_galilean_list() {
    let slow = GradingRule::galilean();
    for n in 2..=3u8 {
        let full = SymbolicSystem::new(n, Regime::Full)
            .without_source()
            .constraints(&GradingRule::weak_field());
        let reference = galilean_reference(n, true);
        for ((name, a), (_, b)) in full.all().iter().zip(reference.all().iter()) {
            assert_eq!(truncate(a, &slow), *b, "{name}, N = {n}");
        }
    }
}
