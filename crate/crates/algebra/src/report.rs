use serde::{Deserialize, Serialize};

use crate::expr::{commutator, OperatorExpr};
use crate::grading::{truncate, Grading, GradingRule};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualTerm {
    pub term: String,
    pub grading: Grading,
    pub c_weight: i32,
}

pub fn residual_terms(e: &OperatorExpr) -> Vec<ResidualTerm> {
    e.terms()
        .map(|(k, c)| ResidualTerm {
            term: OperatorExpr::from_term(k.clone(), *c).to_string(),
            grading: Grading::of(k),
            c_weight: Grading::c_weight(k),
        })
        .collect()
}

pub fn lowest_grading(e: &OperatorExpr) -> Option<Grading> {
    e.terms().map(|(k, _)| Grading::of(k)).min()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairStatus {
    ExactZero,
    ZeroAfterTruncation,
    Nonzero,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairReport {
    pub left: String,
    pub right: String,
    pub status: PairStatus,
    pub required_exact: bool,
    pub pass: bool,
    pub lowest_residual_grading: Option<Grading>,
    /// Terms of the raw commutator; those surviving truncation first.
    pub surviving_terms: Vec<ResidualTerm>,
    pub dropped_terms: Vec<ResidualTerm>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FirstClassReport {
    pub rule: GradingRule,
    pub pairs: Vec<PairReport>,
    pub all_first_class: bool,
}

fn is_momentum_constraint(name: &str) -> bool {
    name == "f1"
}

/// Checks every pair of constraints; pairs involving the momentum
/// constraint must vanish exactly.
pub fn verify_first_class(constraints: &[(String, OperatorExpr)], rule: &GradingRule) -> FirstClassReport {
    let mut pairs = Vec::new();
    for (i, (na, a)) in constraints.iter().enumerate() {
        for (nb, b) in constraints.iter().skip(i + 1) {
            let raw = commutator(a, b);
            let kept = truncate(&raw, rule);
            let dropped = &raw - &kept;
            let status = if raw.is_zero() {
                PairStatus::ExactZero
            } else if kept.is_zero() {
                PairStatus::ZeroAfterTruncation
            } else {
                PairStatus::Nonzero
            };
            let required_exact = is_momentum_constraint(na) || is_momentum_constraint(nb);
            let pass = match status {
                PairStatus::ExactZero => true,
                PairStatus::ZeroAfterTruncation => !required_exact,
                PairStatus::Nonzero => false,
            };
            pairs.push(PairReport {
                left: na.clone(),
                right: nb.clone(),
                status,
                required_exact,
                pass,
                lowest_residual_grading: lowest_grading(&raw),
                surviving_terms: residual_terms(&kept),
                dropped_terms: residual_terms(&dropped),
            });
        }
    }
    let all_first_class = pairs.iter().all(|p| p.pass);
    FirstClassReport {
        rule: rule.clone(),
        pairs,
        all_first_class,
    }
}

impl FirstClassReport {
    pub fn pair(&self, a: &str, b: &str) -> Option<&PairReport> {
        self.pairs
            .iter()
            .find(|p| (p.left == a && p.right == b) || (p.left == b && p.right == a))
    }
}
