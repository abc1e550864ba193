use serde::{Deserialize, Serialize};

use crate::expr::{OperatorExpr, TermKey};
use crate::symbol::{Component, Kind, Param};

/// Perturbative degree of a term: powers of the metric parameter ε_g (one
/// per φ factor), of ε_p (spatial momenta plus ħ), and the total derivative
/// order carried by metric factors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Grading {
    pub metric: u32,
    pub momentum: i32,
    pub gradient: u32,
}

impl Grading {
    pub fn of(key: &TermKey) -> Self {
        let metric = key.funcs.iter().filter(|f| f.is_metric()).count() as u32;
        let gradient = key.funcs.iter().map(|f| f.metric_gradient_order()).sum();
        let momentum = key
            .momenta
            .iter()
            .filter(|(s, _)| s.is_spatial_momentum())
            .map(|(_, e)| *e as i32)
            .sum::<i32>()
            + key.param_power(&Param::Hbar);
        Self {
            metric,
            momentum,
            gradient,
        }
    }

    /// Power of c in slow-motion counting: x⁰ = ct counts +1, p₀ = E/c
    /// counts −1, φ = Φ/c² counts −2.
    pub fn c_weight(key: &TermKey) -> i32 {
        let time = |m: &crate::expr::Monomial| -> i32 {
            m.iter()
                .filter(|(s, _)| s.component == Component::Time && s.kind == Kind::Position)
                .map(|(_, e)| *e as i32)
                .sum()
        };
        let time_mom: i32 = key
            .momenta
            .iter()
            .filter(|(s, _)| s.component == Component::Time && s.kind == Kind::Momentum)
            .map(|(_, e)| *e as i32)
            .sum();
        let metric = key.funcs.iter().filter(|f| f.is_metric()).count() as i32;
        key.param_power(&Param::C) + time(&key.positions) - time_mom - 2 * metric
    }
}

impl std::fmt::Display for Grading {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "eps_g^{} eps_p^{}", self.metric, self.momentum)?;
        if self.gradient > 0 {
            write!(f, " (metric gradient order {})", self.gradient)?;
        }
        Ok(())
    }
}

/// Which terms survive truncation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GradingRule {
    /// Highest kept power of ε_g.
    pub max_metric: u32,
    /// Highest kept power of ε_p.
    pub max_momentum: i32,
    /// Terms with ε_g ≥ 1 and ε_p at or above this power are dropped.
    pub mixed_momentum_cut: i32,
    /// Drop terms carrying metric gradients ([g₀₀, ω_p] = 0 in-regime).
    pub commuting_regime: bool,
    /// If set, drop terms whose c-weight is below this value.
    #[serde(default)]
    pub min_c_weight: Option<i32>,
}

impl Default for GradingRule {
    fn default() -> Self {
        Self::weak_field()
    }
}

impl GradingRule {
    /// ε_p through fourth order, ε_g to first order, no ε_g·ε_p² terms.
    pub fn weak_field() -> Self {
        Self {
            max_metric: 1,
            max_momentum: 4,
            mixed_momentum_cut: 2,
            commuting_regime: true,
            min_c_weight: None,
        }
    }

    /// Keeps ε_g·ε_p² and metric gradients.
    pub fn loosened() -> Self {
        Self {
            mixed_momentum_cut: 3,
            commuting_regime: false,
            ..Self::weak_field()
        }
    }

    /// Slow-motion flat limit: no metric terms, c-weight ≥ −1.
    pub fn galilean() -> Self {
        Self {
            max_metric: 0,
            max_momentum: 4,
            mixed_momentum_cut: 2,
            commuting_regime: true,
            min_c_weight: Some(-1),
        }
    }

    /// No truncation at all.
    pub fn exact() -> Self {
        Self {
            max_metric: u32::MAX,
            max_momentum: i32::MAX,
            mixed_momentum_cut: i32::MAX,
            commuting_regime: false,
            min_c_weight: None,
        }
    }

    pub fn keeps(&self, key: &TermKey) -> bool {
        let g = Grading::of(key);
        if g.metric > self.max_metric || g.momentum > self.max_momentum {
            return false;
        }
        if g.metric >= 1 && g.momentum >= self.mixed_momentum_cut {
            return false;
        }
        if self.commuting_regime && g.gradient > 0 {
            return false;
        }
        match self.min_c_weight {
            Some(w) => Grading::c_weight(key) >= w,
            None => true,
        }
    }
}

/// Removes every term the rule does not keep.
pub fn truncate(a: &OperatorExpr, rule: &GradingRule) -> OperatorExpr {
    a.filter(|k| rule.keeps(k))
}
