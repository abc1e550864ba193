use qrf_algebra::frames::{frame_flows, table_system};
use qrf_algebra::series::{sqrt_g00, sqrt_inv_g00};
use qrf_algebra::*;

fn sym(s: CanonicalSymbol) -> OperatorExpr {
    OperatorExpr::symbol(s)
}

fn i_over_hbar() -> OperatorExpr {
    OperatorExpr::param(Param::Hbar, -1).scale(CQ::i())
}

fn line<'a>(r: &'a TableReport, lhs: &str) -> &'a frames::LineReport {
    r.lines.iter().find(|l| l.lhs == lhs).expect(lhs)
}

#[test]
fn translation_by_constant() {
    let a = OperatorExpr::param(Param::Named("a".into()), 1);
    let g = &(&i_over_hbar() * &a) * &sym(CanonicalSymbol::p(Party::P(1)));
    let x = sym(CanonicalSymbol::x(Party::P(1)));
    assert_eq!(conjugate_by_flow(&g, &x, &GradingRule::weak_field()).unwrap(), &x + &a);
}

#[test]
fn space_translation_factor_shifts_other_positions() {
    let sys = table_system();
    let rule = GradingRule::weak_field();
    let rest = &sys.momentum() - &sym(CanonicalSymbol::p(Party::P(1)));
    let g = &(&i_over_hbar() * &sym(CanonicalSymbol::x(Party::P(1)))) * &rest;
    let out = conjugate_by_flow(&g, &sym(CanonicalSymbol::x(Party::P(2))), &rule).unwrap();
    assert_eq!(out, &sym(CanonicalSymbol::x(Party::P(2))) + &sym(CanonicalSymbol::x(Party::P(1))));
}

#[test]
fn dilation_factor_rescales_clock_momenta() {
    let sys = table_system();
    let rule = GradingRule::weak_field();
    let flows = frame_flows(&sys, 1, &rule).unwrap();
    let dilation = flows.last().unwrap();
    let p0 = sym(CanonicalSymbol::p0(Party::P(2)));
    let expected = &sqrt_g00(&LinearForm::single(Party::M), &rule) * &p0;
    assert_eq!(dilation.conjugate(&p0).unwrap(), expected);
    let x0 = sym(CanonicalSymbol::x0(Party::P(2)));
    let expected = &sqrt_inv_g00(&LinearForm::single(Party::M), &rule) * &x0;
    assert_eq!(dilation.conjugate(&x0).unwrap(), expected);
}

#[test]
fn clock_and_momentum_lines_reproduce() {
    let rule = GradingRule::weak_field();
    for (table, frame_lines) in [
        (Table::T1, ["x0_1", "x0_2", "x0_3", "x0_M", "x_M", "p0_1", "p_1", "p0_2", "p_2", "p0_M", "p_M"]),
        (Table::T2, ["x0_2", "x0_1", "x0_3", "x0_M", "x_M", "p0_2", "p_2", "p0_1", "p_1", "p0_M", "p_M"]),
    ] {
        let r = verify_table(table, &rule).unwrap();
        for lhs in frame_lines {
            assert!(line(&r, lhs).pass, "{table:?} {lhs}: {:?}", line(&r, lhs).residual);
        }
    }
    let r = verify_table(Table::T12, &rule).unwrap();
    for lhs in ["x0_1", "x0_2", "x0_3", "x0_M", "p0_1", "p_1", "p0_2", "p_2", "p0_3", "p_3", "p0_M", "p_M"] {
        assert!(line(&r, lhs).pass, "T12 {lhs}: {:?}", line(&r, lhs).residual);
    }
}

/// The time-translation factor carries Δ(x_i − x_M, p_i) H_i / c, so the
/// spatial position of every clock picks up x⁰_f ∂Δ/∂p_i H_i / c, and the
/// dilation then turns x⁰_f into √g⁰⁰(x_M) x⁰_f. With Δ kept as
///   1 + φ − p²/(2m²c²) + 3p⁴/(8m⁴c⁴),
/// ∂Δ/∂p = −p/(m²c²) + (3/2) p³/(m⁴c⁴).
#[test]
fn position_lines_carry_clock_boost_term() {
    let rule = GradingRule::weak_field();
    let r = verify_table(Table::T1, &rule).unwrap();
    let x = |p| sym(CanonicalSymbol::x(p));
    let p3 = sym(CanonicalSymbol::p(Party::P(3)));
    let m3 = Party::P(3);
    let h_over_c = &sym(CanonicalSymbol::clock_energy(3)) * &OperatorExpr::param(Param::C, -1);
    let x0 = sym(CanonicalSymbol::x0(Party::P(1)));
    let dilated_x0 = &(&OperatorExpr::one() - &OperatorExpr::metric(0, LinearForm::single(Party::M))) * &x0;
    let inv = |k: i32| &OperatorExpr::param(Param::Mass(m3), -k) * &OperatorExpr::param(Param::C, -k);
    let linear = &(&(&dilated_x0 * &h_over_c) * &p3) * &inv(2);
    let cubic = &(&(&x0 * &h_over_c) * &p3.pow(3)) * &inv(4);
    let expected = &(&(&x(m3) + &x(Party::P(1))) - &linear) + &cubic.scale(CQ::frac(3, 2));
    let sys = table_system();
    let computed = to_frame(&sys, 1, &x(m3), &rule).unwrap();
    assert_eq!(computed, expected);
    assert!(!line(&r, "x_3").pass);
    assert_eq!(r.failures, 3);
    for lhs in ["x_1", "x_2", "x_3"] {
        let low = line(&r, lhs).residual.iter().map(|t| t.grading).min().unwrap();
        assert_eq!((low.metric, low.momentum), (0, 1));
    }
}

#[test]
fn galilean_frame_has_no_boost_term() {
    let rule = GradingRule::weak_field();
    let sys = SymbolicSystem::new(3, Regime::Galilean);
    for i in 2..=3 {
        let x = sym(CanonicalSymbol::x(Party::P(i)));
        let out = to_frame(&sys, 1, &x, &rule).unwrap();
        assert_eq!(out, &x + &sym(CanonicalSymbol::x(Party::P(1))));
    }
}

#[test]
fn energy_and_momentum_constraints_map_to_frame_momenta() {
    let rule = GradingRule::weak_field();
    let sys = table_system();
    let f0 = to_frame(&sys, 1, &sys.energy(&rule), &rule).unwrap();
    let expected = &sqrt_g00(&LinearForm::single(Party::M), &rule) * &sym(CanonicalSymbol::p0(Party::P(1)));
    assert_eq!(f0, expected);
    let f1 = to_frame(&sys, 1, &sys.momentum(), &rule).unwrap();
    assert_eq!(f1, sym(CanonicalSymbol::p(Party::P(1))));
}

#[test]
fn transformed_metric_ratio() {
    // T₁ g₀₀(x_i − x_M)/g₀₀(x₁ − x_M) T₁† = g₀₀(q_i − q_M)/g₀₀(q_M)
    let rule = GradingRule::weak_field();
    let sys = table_system();
    let two = |l: LinearForm| OperatorExpr::metric(0, l).scale(CQ::int(2));
    let ratio = &(&OperatorExpr::one() + &two(LinearForm::difference(Party::P(2), Party::M)))
        - &two(LinearForm::difference(Party::P(1), Party::M));
    let out = to_frame(&sys, 1, &ratio, &rule).unwrap();
    let expected = &(&OperatorExpr::one() + &two(LinearForm::difference(Party::P(2), Party::M)))
        - &two(LinearForm::single(Party::M));
    assert_eq!(out, expected);
}

#[test]
fn frame_exchange_is_form_invariant() {
    let rule = GradingRule::weak_field();
    let report = verify_swap(&table_system(), &rule).unwrap();
    for c in &report.checks {
        assert!(c.pass, "{}: {:?}", c.name, c.residual);
    }
}

#[test]
fn table_report_serializes() {
    let r = verify_table(Table::T1, &GradingRule::weak_field()).unwrap();
    let json = serde_json::to_string(&r).unwrap();
    assert!(json.contains("\"table\":\"T1\""));
    assert_eq!(r.lines.len(), 16);
}
