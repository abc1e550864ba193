//! Turns normal-ordered symbolic expressions into diagonal kernels.

use std::collections::BTreeMap;

use num_traits::{ToPrimitive, Zero};
use qrf_algebra::{CanonicalSymbol, Component, FuncFactor, Kind, OperatorExpr, Param, Party, TermKey};
use qrf_numerics::{Axis, Basis, DiagonalKernel};

use crate::{EngineError, Result};

/// Where a party's spatial position lives numerically.
#[derive(Debug, Clone, PartialEq)]
pub enum PositionBinding {
    Axis(String),
    Sharp(f64),
}

/// Numeric values of parameters and the axes carrying each symbol.
pub struct Binding<'a> {
    pub masses: BTreeMap<Party, f64>,
    pub c: f64,
    pub positions: BTreeMap<Party, PositionBinding>,
    /// Spatial momentum of a party → axis held in its conjugate basis.
    pub momenta: BTreeMap<Party, String>,
    /// Clock index → clock axis.
    pub clocks: BTreeMap<u8, String>,
    /// Dimensionless potential φ = Φ/c² as a function of separation.
    pub phi: &'a dyn Fn(f64) -> f64,
}

impl Binding<'_> {
    fn param(&self, p: &Param) -> Result<f64> {
        match p {
            Param::Mass(party) => self
                .masses
                .get(party)
                .copied()
                .ok_or_else(|| EngineError::NotDiagonal(format!("no value for mass of {party}"))),
            Param::C => Ok(self.c),
            Param::Hbar => Ok(1.0),
            other => Err(EngineError::NotDiagonal(format!("no value for parameter {other:?}"))),
        }
    }
}

enum Factor {
    /// Power of the sample on one axis.
    Power(usize, i32),
    /// φ of a linear combination of axis samples plus a constant.
    Phi(Vec<(usize, f64)>, f64),
}

fn exponent(e: u32) -> i32 {
    e as i32
}

/// One kernel per term of `expr`. Fails on anti-Hermitian coefficients,
/// on symbols without a binding, and on terms that need an axis in both
/// representations.
pub fn realize(expr: &OperatorExpr, binding: &Binding, layout: &[Axis]) -> Result<Vec<DiagonalKernel>> {
    expr.terms()
        .map(|(key, coeff)| {
            if !coeff.im.is_zero() {
                return Err(EngineError::NotDiagonal(format!("imaginary coefficient on {key:?}")));
            }
            let re = coeff.re.to_f64().unwrap_or(f64::NAN);
            realize_term(key, re, binding, layout)
        })
        .collect()
}

fn realize_term(key: &TermKey, coeff: f64, b: &Binding, layout: &[Axis]) -> Result<DiagonalKernel> {
    let mut scale = coeff;
    for (p, e) in &key.params {
        scale *= b.param(p)?.powi(*e);
    }
    let mut on: Vec<(String, Basis)> = Vec::new();
    let mut slot = |label: &str, basis: Basis| -> Result<usize> {
        match on.iter().position(|(l, _)| l == label) {
            Some(i) if on[i].1 == basis => Ok(i),
            Some(_) => Err(EngineError::NotDiagonal(format!(
                "axis '{label}' needed in both representations"
            ))),
            None => {
                on.push((label.to_string(), basis));
                Ok(on.len() - 1)
            }
        }
    };
    let mut factors = Vec::new();
    for f in &key.funcs {
        match f {
            FuncFactor::Metric { deriv: 0, arg } => {
                let mut lin = Vec::new();
                let mut constant = arg.constant().to_f64().unwrap_or(f64::NAN);
                for (party, c) in arg.coeffs() {
                    match b.positions.get(party) {
                        Some(PositionBinding::Axis(l)) => {
                            lin.push((slot(l, Basis::Position)?, *c as f64))
                        }
                        Some(PositionBinding::Sharp(x)) => constant += *c as f64 * x,
                        None => {
                            return Err(EngineError::NotDiagonal(format!("no position for {party}")))
                        }
                    }
                }
                factors.push(Factor::Phi(lin, constant));
            }
            other => {
                return Err(EngineError::NotDiagonal(format!("unsupported factor {other}")));
            }
        }
    }
    for (s, e) in &key.positions {
        match (s.kind, s.component) {
            (Kind::Position, Component::Space) => match b.positions.get(&s.particle) {
                Some(PositionBinding::Axis(l)) => {
                    factors.push(Factor::Power(slot(l, Basis::Position)?, exponent(*e)))
                }
                Some(PositionBinding::Sharp(x)) => scale *= x.powi(exponent(*e)),
                None => return Err(EngineError::NotDiagonal(format!("no position for {s}"))),
            },
            (Kind::InternalTime, _) => {
                let l = clock_axis(b, s)?;
                factors.push(Factor::Power(slot(l, Basis::Position)?, exponent(*e)));
            }
            _ => return Err(EngineError::NotDiagonal(format!("symbol {s} has no axis"))),
        }
    }
    for (s, e) in &key.momenta {
        let l = match (s.kind, s.component) {
            (Kind::Momentum, Component::Space) => b
                .momenta
                .get(&s.particle)
                .ok_or_else(|| EngineError::NotDiagonal(format!("no momentum axis for {s}")))?,
            (Kind::InternalEnergy, _) => clock_axis(b, s)?,
            _ => return Err(EngineError::NotDiagonal(format!("symbol {s} has no axis"))),
        };
        factors.push(Factor::Power(slot(l, Basis::Momentum)?, exponent(*e)));
    }
    let spec: Vec<(&str, Basis)> = on.iter().map(|(l, b)| (l.as_str(), *b)).collect();
    let phi = b.phi;
    let label = format!("{}", OperatorExpr::from_term(key.clone(), qrf_algebra::CQ::one()));
    Ok(DiagonalKernel::on_axes(label, layout, &spec, |v| {
        factors.iter().fold(scale, |acc, f| match f {
            Factor::Power(i, e) => acc * v[*i].powi(*e),
            Factor::Phi(lin, c) => acc * phi(lin.iter().map(|(i, w)| w * v[*i]).sum::<f64>() + c),
        })
    })?)
}

fn clock_axis<'b>(b: &'b Binding, s: &CanonicalSymbol) -> Result<&'b String> {
    match s.particle {
        Party::P(i) => b
            .clocks
            .get(&i)
            .ok_or_else(|| EngineError::NotDiagonal(format!("no clock axis for {s}"))),
        Party::M => Err(EngineError::NotDiagonal(format!("source has no clock ({s})"))),
    }
}
