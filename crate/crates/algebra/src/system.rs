//! Symbolic constraint sets for the N-particle model and its limits.

use serde::{Deserialize, Serialize};

use crate::expr::OperatorExpr;
use crate::func::LinearForm;
use crate::grading::{truncate, GradingRule};
use crate::scalar::Q;
use crate::series::{gamma_inv, momentum_of, omega, sqrt_g00, sqrt_inv_g00, worldline_delta};
use crate::symbol::{CanonicalSymbol, Param, Party};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Galilean,
    SpecialRelativistic,
    Newtonian,
    Full,
}

impl Regime {
    pub fn has_gravity(self) -> bool {
        matches!(self, Regime::Newtonian | Regime::Full)
    }

    pub fn has_kinematic_dilation(self) -> bool {
        matches!(self, Regime::SpecialRelativistic | Regime::Full)
    }

    pub fn name(self) -> &'static str {
        match self {
            Regime::Galilean => "galilean",
            Regime::SpecialRelativistic => "special_relativistic",
            Regime::Newtonian => "newtonian",
            Regime::Full => "full",
        }
    }
}

impl std::str::FromStr for Regime {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "galilean" => Ok(Regime::Galilean),
            "special_relativistic" | "sr" => Ok(Regime::SpecialRelativistic),
            "newtonian" => Ok(Regime::Newtonian),
            "full" => Ok(Regime::Full),
            other => Err(format!("unknown regime '{other}'")),
        }
    }
}

/// Particle content and options of a symbolic model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolicSystem {
    pub particles: u8,
    pub regime: Regime,
    /// Include the source mass M. Ignored for flat regimes.
    pub source: bool,
    /// Include internal clocks (T_I, H_I).
    pub clocks: bool,
    /// Clock index carrying a δ(T − τ*)Q kick in the energy constraint.
    pub kicked_clock: Option<u8>,
}

impl SymbolicSystem {
    pub fn new(particles: u8, regime: Regime) -> Self {
        Self {
            particles,
            regime,
            source: regime.has_gravity(),
            clocks: true,
            kicked_clock: None,
        }
    }

    pub fn with_kick(mut self, clock: u8) -> Self {
        self.kicked_clock = Some(clock);
        self
    }

    pub fn without_source(mut self) -> Self {
        self.source = false;
        self
    }

    pub fn parties(&self) -> Vec<Party> {
        let mut v: Vec<Party> = (1..=self.particles).map(Party::P).collect();
        if self.has_source() {
            v.push(Party::M);
        }
        v
    }

    pub fn has_source(&self) -> bool {
        self.source && self.regime.has_gravity()
    }

    /// Argument of the metric seen by particle `i`.
    pub fn metric_arg(&self, i: u8) -> Option<LinearForm> {
        if !self.regime.has_gravity() {
            return None;
        }
        Some(if self.has_source() {
            LinearForm::difference(Party::P(i), Party::M)
        } else {
            LinearForm::single(Party::P(i))
        })
    }

    /// Factor multiplying H_I/c in the energy constraint.
    pub fn clock_factor(&self, i: u8, rule: &GradingRule) -> OperatorExpr {
        let p = momentum_of(Party::P(i));
        let arg = self.metric_arg(i);
        match self.regime {
            Regime::Galilean => OperatorExpr::one(),
            Regime::SpecialRelativistic => gamma_inv(&p, Party::P(i), rule),
            Regime::Newtonian => sqrt_g00(arg.as_ref().expect("metric"), rule),
            Regime::Full => worldline_delta(arg.as_ref(), &p, Party::P(i), rule),
        }
    }

    /// Dynamical constraint C_i.
    pub fn dynamical(&self, i: u8, rule: &GradingRule) -> OperatorExpr {
        let me = Party::P(i);
        let p = momentum_of(me);
        let p0 = OperatorExpr::symbol(CanonicalSymbol::p0(me));
        let mc = &OperatorExpr::param(Param::Mass(me), 1) * &OperatorExpr::param(Param::C, 1);
        let kinetic = &(&p * &p) * &mc.scale_q(Q::from_integer(2)).inverse_monomial();
        let time_part = match self.metric_arg(i) {
            Some(arg) => &sqrt_inv_g00(&arg, rule) * &p0,
            None => p0,
        };
        let c = match self.regime {
            Regime::Galilean => &time_part - &kinetic,
            Regime::Newtonian => &(&time_part - &mc) - &kinetic,
            Regime::SpecialRelativistic | Regime::Full => &time_part - &omega(&p, me, rule),
        };
        truncate(&c, rule)
    }

    /// Energy constraint f⁰ (with the kick term when configured).
    pub fn energy(&self, rule: &GradingRule) -> OperatorExpr {
        let inv_c = OperatorExpr::param(Param::C, -1);
        let mut f = OperatorExpr::zero();
        for i in 1..=self.particles {
            f = f + OperatorExpr::symbol(CanonicalSymbol::p0(Party::P(i)));
            let factor = self.clock_factor(i, rule);
            if self.clocks {
                let h = OperatorExpr::symbol(CanonicalSymbol::clock_energy(i));
                f = f + &(&factor * &h) * &inv_c;
            }
            if self.kicked_clock == Some(i) {
                let q = OperatorExpr::param(Param::Observable(i), 1);
                f = f + &(&(&factor * &OperatorExpr::pulse(i)) * &q) * &inv_c;
            }
        }
        if self.has_source() {
            f = f + OperatorExpr::symbol(CanonicalSymbol::p0(Party::M));
        }
        truncate(&f, rule)
    }

    /// Momentum constraint f¹.
    pub fn momentum(&self) -> OperatorExpr {
        self.parties().into_iter().map(momentum_of).sum()
    }

    pub fn constraints(&self, rule: &GradingRule) -> ConstraintSet {
        let dynamical = (1..=self.particles)
            .map(|i| (format!("C_{i}"), self.dynamical(i, rule)))
            .collect();
        let energy_name = if self.kicked_clock.is_some() { "f0_Q" } else { "f0" };
        ConstraintSet {
            dynamical,
            energy: (energy_name.to_string(), self.energy(rule)),
            momentum: ("f1".to_string(), self.momentum()),
        }
    }
}

/// Named constraints of one model.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintSet {
    pub dynamical: Vec<(String, OperatorExpr)>,
    pub energy: (String, OperatorExpr),
    pub momentum: (String, OperatorExpr),
}

impl ConstraintSet {
    pub fn all(&self) -> Vec<(String, OperatorExpr)> {
        let mut v = self.dynamical.clone();
        v.push(self.energy.clone());
        v.push(self.momentum.clone());
        v
    }
}

impl OperatorExpr {
    /// Inverse of a single-term monomial in central parameters times a
    /// rational constant.
    pub fn inverse_monomial(&self) -> OperatorExpr {
        let mut out = OperatorExpr::zero();
        let (k, c) = self.terms().next().expect("non-empty");
        assert!(
            self.len() == 1 && k.funcs.is_empty() && k.positions.is_empty() && k.momenta.is_empty(),
            "not a central monomial"
        );
        let mut key = k.clone();
        for e in key.params.values_mut() {
            *e = -*e;
        }
        assert!(c.im == Q::from_integer(0), "complex constant");
        out.add_term(key, crate::scalar::CQ::real(Q::from_integer(1) / c.re));
        out
    }
}
