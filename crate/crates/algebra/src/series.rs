//! Truncated expansions of the metric and kinematic factors.

use crate::expr::OperatorExpr;
use crate::func::LinearForm;
use crate::grading::{truncate, GradingRule};
use crate::scalar::{binomial, Q};
use crate::symbol::{CanonicalSymbol, Param, Party};

// Hard caps keep the exact rule from generating unbounded series.
const MAX_METRIC_ORDER: u32 = 6;
const MAX_MOMENTUM_PAIRS: u32 = 6;

fn metric_order(rule: &GradingRule) -> u32 {
    rule.max_metric.min(MAX_METRIC_ORDER)
}

fn momentum_pairs(rule: &GradingRule) -> u32 {
    (rule.max_momentum.clamp(0, 2 * MAX_MOMENTUM_PAIRS as i32) / 2) as u32
}

/// (1 + 2φ(arg))^a expanded in φ.
fn metric_power(arg: &LinearForm, a: Q, rule: &GradingRule) -> OperatorExpr {
    let two_phi = OperatorExpr::metric(0, arg.clone()).scale_q(Q::from_integer(2));
    let mut out = OperatorExpr::zero();
    let mut pow = OperatorExpr::one();
    for n in 0..=metric_order(rule) {
        out = out + pow.scale_q(binomial(a, n));
        pow = truncate(&(&pow * &two_phi), rule);
    }
    truncate(&out, rule)
}

/// √g₀₀(arg) = √(1 + 2φ).
pub fn sqrt_g00(arg: &LinearForm, rule: &GradingRule) -> OperatorExpr {
    metric_power(arg, Q::new(1, 2), rule)
}

/// √g⁰⁰(arg) = (1 + 2φ)^{-1/2}.
pub fn sqrt_inv_g00(arg: &LinearForm, rule: &GradingRule) -> OperatorExpr {
    metric_power(arg, Q::new(-1, 2), rule)
}

/// log √g⁰⁰(arg) = −½ log(1 + 2φ).
pub fn log_sqrt_inv_g00(arg: &LinearForm, rule: &GradingRule) -> OperatorExpr {
    let two_phi = OperatorExpr::metric(0, arg.clone()).scale_q(Q::from_integer(2));
    let mut out = OperatorExpr::zero();
    let mut pow = two_phi.clone();
    for n in 1..=metric_order(rule).max(1) {
        let sign = if n % 2 == 1 { -1 } else { 1 };
        out = out + pow.scale_q(Q::new(sign, 2 * n as i128));
        pow = truncate(&(&pow * &two_phi), rule);
    }
    truncate(&out, rule)
}

/// p² / (m² c²) for the given momentum.
pub fn momentum_ratio_sq(p: &OperatorExpr, mass: Party) -> OperatorExpr {
    &(p * p) * &(&OperatorExpr::param(Param::Mass(mass), -2) * &OperatorExpr::param(Param::C, -2))
}

/// (1 + p²/m²c²)^a expanded in p/(mc).
fn kinematic_power(p: &OperatorExpr, mass: Party, a: Q, rule: &GradingRule) -> OperatorExpr {
    let x = momentum_ratio_sq(p, mass);
    let mut out = OperatorExpr::zero();
    let mut pow = OperatorExpr::one();
    for n in 0..=momentum_pairs(rule) {
        out = out + pow.scale_q(binomial(a, n));
        pow = truncate(&(&pow * &x), rule);
    }
    truncate(&out, rule)
}

/// γ(p) = √(1 + p²/m²c²).
pub fn gamma(p: &OperatorExpr, mass: Party, rule: &GradingRule) -> OperatorExpr {
    kinematic_power(p, mass, Q::new(1, 2), rule)
}

/// γ(p)⁻¹.
pub fn gamma_inv(p: &OperatorExpr, mass: Party, rule: &GradingRule) -> OperatorExpr {
    kinematic_power(p, mass, Q::new(-1, 2), rule)
}

/// ω(p) = m c γ(p).
pub fn omega(p: &OperatorExpr, mass: Party, rule: &GradingRule) -> OperatorExpr {
    let mc = &OperatorExpr::param(Param::Mass(mass), 1) * &OperatorExpr::param(Param::C, 1);
    truncate(&(&mc * &gamma(p, mass, rule)), rule)
}

/// Δ(arg, p) = √g₀₀(arg) γ(p)⁻¹, symmetrized so that it stays Hermitian
/// when mixed terms are retained.
pub fn worldline_delta(
    arg: Option<&LinearForm>,
    p: &OperatorExpr,
    mass: Party,
    rule: &GradingRule,
) -> OperatorExpr {
    let g = gamma_inv(p, mass, rule);
    match arg {
        None => g,
        Some(arg) => {
            let s = sqrt_g00(arg, rule);
            let sym = (&(&s * &g) + &(&g * &s)).scale_q(Q::new(1, 2));
            truncate(&sym, rule)
        }
    }
}

/// Spatial momentum symbol of a party as an expression.
pub fn momentum_of(party: Party) -> OperatorExpr {
    OperatorExpr::symbol(CanonicalSymbol::p(party))
}
