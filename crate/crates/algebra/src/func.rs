use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::scalar::Q;
use crate::symbol::{CanonicalSymbol, Component, Kind, Party};

/// Integer combination of spatial positions plus a rational constant.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearForm {
    coeffs: BTreeMap<Party, i64>,
    constant: Q,
}

impl LinearForm {
    pub fn new(terms: &[(Party, i64)]) -> Self {
        let mut coeffs = BTreeMap::new();
        for (p, c) in terms {
            *coeffs.entry(*p).or_insert(0) += c;
        }
        coeffs.retain(|_, c| *c != 0);
        Self {
            coeffs,
            constant: Q::zero(),
        }
    }

    /// x_a − x_b.
    pub fn difference(a: Party, b: Party) -> Self {
        Self::new(&[(a, 1), (b, -1)])
    }

    pub fn single(a: Party) -> Self {
        Self::new(&[(a, 1)])
    }

    pub fn with_constant(mut self, c: Q) -> Self {
        self.constant = c;
        self
    }

    pub fn coeffs(&self) -> &BTreeMap<Party, i64> {
        &self.coeffs
    }

    pub fn constant(&self) -> Q {
        self.constant
    }

    pub fn coeff(&self, p: Party) -> i64 {
        self.coeffs.get(&p).copied().unwrap_or(0)
    }

    pub fn negated(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(p, c)| (*p, -c)).collect(),
            constant: -self.constant,
        }
    }

    /// Adds `scale` times `other`.
    pub fn plus(&self, other: &LinearForm, scale: i64) -> Self {
        let mut coeffs = self.coeffs.clone();
        for (p, c) in &other.coeffs {
            *coeffs.entry(*p).or_insert(0) += scale * c;
        }
        coeffs.retain(|_, c| *c != 0);
        Self {
            coeffs,
            constant: self.constant + other.constant * Q::from_integer(scale as i128),
        }
    }

    /// Sign convention making the form unique up to the metric's evenness:
    /// the first nonzero coefficient (or else the constant) is positive.
    pub fn is_canonical(&self) -> bool {
        match self.coeffs.values().next() {
            Some(c) => *c > 0,
            None => !self.constant.is_negative(),
        }
    }

    pub fn relabeled(&self, map: impl Fn(Party) -> Party) -> Self {
        let mut coeffs = BTreeMap::new();
        for (p, c) in &self.coeffs {
            *coeffs.entry(map(*p)).or_insert(0) += c;
        }
        coeffs.retain(|_, c| *c != 0);
        Self {
            coeffs,
            constant: self.constant,
        }
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (p, c) in &self.coeffs {
            let sign = if *c < 0 { "-" } else if first { "" } else { "+" };
            let mag = c.abs();
            if mag == 1 {
                write!(f, "{sign}x_{p}")?;
            } else {
                write!(f, "{sign}{mag}x_{p}")?;
            }
            first = false;
        }
        if !self.constant.is_zero() || first {
            let sign = if self.constant.is_negative() {
                "-"
            } else if first {
                ""
            } else {
                "+"
            };
            write!(f, "{sign}{}", self.constant.abs())?;
        }
        Ok(())
    }
}

/// Coefficient function factor of a term.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FuncFactor {
    /// n-th derivative of the dimensionless potential φ = Φ/c² (an even
    /// function) at a linear form in spatial positions. Each factor carries
    /// one power of the metric grading.
    Metric { deriv: u32, arg: LinearForm },
    /// n-th derivative of the regularized delta δ(T_clock − τ*).
    Pulse { clock: u8, deriv: u32 },
}

impl FuncFactor {
    /// φ^{(deriv)}(arg) in canonical sign form, with the sign picked up from
    /// evenness.
    pub fn metric(deriv: u32, arg: LinearForm) -> (i64, FuncFactor) {
        if arg.is_canonical() {
            (1, FuncFactor::Metric { deriv, arg })
        } else {
            let sign = if deriv % 2 == 0 { 1 } else { -1 };
            (
                sign,
                FuncFactor::Metric {
                    deriv,
                    arg: arg.negated(),
                },
            )
        }
    }

    pub fn depends_on(&self, s: &CanonicalSymbol) -> bool {
        match self {
            FuncFactor::Metric { arg, .. } => {
                s.kind == Kind::Position
                    && s.component == Component::Space
                    && arg.coeff(s.particle) != 0
            }
            FuncFactor::Pulse { clock, .. } => *s == CanonicalSymbol::clock_time(*clock),
        }
    }

    /// ∂/∂s of the factor as (integer multiplier, factor).
    pub fn derivative(&self, s: &CanonicalSymbol) -> Option<(i64, FuncFactor)> {
        if !self.depends_on(s) {
            return None;
        }
        match self {
            FuncFactor::Metric { deriv, arg } => Some((
                arg.coeff(s.particle),
                FuncFactor::Metric {
                    deriv: deriv + 1,
                    arg: arg.clone(),
                },
            )),
            FuncFactor::Pulse { clock, deriv } => Some((
                1,
                FuncFactor::Pulse {
                    clock: *clock,
                    deriv: deriv + 1,
                },
            )),
        }
    }

    pub fn is_metric(&self) -> bool {
        matches!(self, FuncFactor::Metric { .. })
    }

    /// Derivative order of a metric factor (0 for pulses).
    pub fn metric_gradient_order(&self) -> u32 {
        match self {
            FuncFactor::Metric { deriv, .. } => *deriv,
            FuncFactor::Pulse { .. } => 0,
        }
    }
}

impl fmt::Display for FuncFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let primes = |n: u32| -> String {
            if n <= 3 {
                "'".repeat(n as usize)
            } else {
                format!("^({n})")
            }
        };
        match self {
            FuncFactor::Metric { deriv, arg } => write!(f, "phi{}({arg})", primes(*deriv)),
            FuncFactor::Pulse { clock, deriv } => {
                write!(f, "delta{}(T_{clock}-tau*)", primes(*deriv))
            }
        }
    }
}
