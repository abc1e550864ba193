//! Conjugation e^{G} A e^{−G} by anti-Hermitian generators.

use std::cell::RefCell;
use std::collections::HashMap;

use thiserror::Error;

use crate::expr::{commutator, OperatorExpr, TermKey};
use crate::func::{FuncFactor, LinearForm};
use crate::grading::{truncate, Grading, GradingRule};
use crate::scalar::{CQ, Q};
use crate::symbol::{CanonicalSymbol, Component, Kind, Party};

pub const DEFAULT_DEPTH: usize = 12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgebraError {
    #[error("generator is not anti-Hermitian: G + G† = {0}")]
    NotAntiHermitian(String),
    #[error("series did not terminate within depth {depth}: {terms} residual terms, lowest grading {residual}")]
    NonTerminating {
        depth: usize,
        residual: Grading,
        terms: usize,
    },
}

/// A + [G,A] + [G,[G,A]]/2! + …, truncating each increment.
pub fn bch_series(
    generator: &OperatorExpr,
    a: &OperatorExpr,
    rule: &GradingRule,
    depth: usize,
) -> Result<OperatorExpr, AlgebraError> {
    let mut total = truncate(a, rule);
    let mut cur = total.clone();
    for n in 1..=depth {
        cur = truncate(&commutator(generator, &cur), rule).scale_q(Q::new(1, n as i128));
        if cur.is_zero() {
            return Ok(total);
        }
        total = total + cur.clone();
    }
    Err(AlgebraError::NonTerminating {
        depth,
        residual: cur
            .terms()
            .map(|(k, _)| Grading::of(k))
            .min()
            .expect("non-empty residual"),
        terms: cur.len(),
    })
}

/// Conjugation by a single exponential, applied as an algebra
/// automorphism: images of basic symbols are computed once and substituted.
#[derive(Debug, Clone)]
pub struct Flow {
    generator: OperatorExpr,
    rule: GradingRule,
    depth: usize,
    cache: RefCell<HashMap<CanonicalSymbol, OperatorExpr>>,
}

impl Flow {
    pub fn new(generator: OperatorExpr, rule: &GradingRule) -> Result<Self, AlgebraError> {
        let defect = truncate(&(&generator + &generator.adjoint()), rule);
        if !defect.is_zero() {
            return Err(AlgebraError::NotAntiHermitian(defect.to_string()));
        }
        Ok(Self {
            generator,
            rule: rule.clone(),
            depth: DEFAULT_DEPTH,
            cache: RefCell::new(HashMap::new()),
        })
    }

    pub fn with_depth(mut self, depth: usize) -> Self {
        self.depth = depth;
        self
    }

    pub fn generator(&self) -> &OperatorExpr {
        &self.generator
    }

    pub fn inverse(&self) -> Flow {
        Flow {
            generator: -&self.generator,
            rule: self.rule.clone(),
            depth: self.depth,
            cache: RefCell::new(HashMap::new()),
        }
    }

    pub fn image_symbol(&self, s: CanonicalSymbol) -> Result<OperatorExpr, AlgebraError> {
        if let Some(e) = self.cache.borrow().get(&s) {
            return Ok(e.clone());
        }
        let e = bch_series(&self.generator, &OperatorExpr::symbol(s), &self.rule, self.depth)?;
        self.cache.borrow_mut().insert(s, e.clone());
        Ok(e)
    }

    /// Image of x_party when it is a pure integer shift by other positions.
    fn linear_image(&self, party: Party) -> Result<Option<LinearForm>, AlgebraError> {
        let img = self.image_symbol(CanonicalSymbol::x(party))?;
        let mut coeffs = Vec::new();
        let mut constant = Q::from_integer(0);
        for (k, c) in img.terms() {
            if !c.im.is_integer() || c.im != Q::from_integer(0) {
                return Ok(None);
            }
            if !k.params.is_empty() || !k.funcs.is_empty() || !k.momenta.is_empty() {
                return Ok(None);
            }
            if k.positions.is_empty() {
                constant = c.re;
                continue;
            }
            let (s, e) = match k.positions.iter().next() {
                Some((s, e)) if k.positions.len() == 1 => (*s, *e),
                _ => return Ok(None),
            };
            if e != 1
                || s.component != Component::Space
                || s.kind != Kind::Position
                || !c.re.is_integer()
            {
                return Ok(None);
            }
            coeffs.push((s.particle, c.re.to_integer() as i64));
        }
        Ok(Some(LinearForm::new(&coeffs).with_constant(constant)))
    }

    fn image_func(&self, f: &FuncFactor) -> Result<OperatorExpr, AlgebraError> {
        if let FuncFactor::Metric { deriv, arg } = f {
            let mut new_arg = LinearForm::new(&[]).with_constant(arg.constant());
            let mut linear = true;
            for (party, a) in arg.coeffs() {
                match self.linear_image(*party)? {
                    Some(form) => new_arg = new_arg.plus(&form, *a),
                    None => {
                        linear = false;
                        break;
                    }
                }
            }
            if linear {
                return Ok(OperatorExpr::metric(*deriv, new_arg));
            }
        }
        let single = OperatorExpr::from_term(
            TermKey {
                funcs: vec![f.clone()],
                ..Default::default()
            },
            CQ::one(),
        );
        bch_series(&self.generator, &single, &self.rule, self.depth)
    }

    /// e^{G} A e^{−G}, truncated by the flow's rule.
    pub fn conjugate(&self, a: &OperatorExpr) -> Result<OperatorExpr, AlgebraError> {
        let mut out = OperatorExpr::zero();
        for (key, c) in a.terms() {
            let mut term = OperatorExpr::from_term(
                TermKey {
                    params: key.params.clone(),
                    ..Default::default()
                },
                *c,
            );
            for f in &key.funcs {
                term = truncate(&(&term * &self.image_func(f)?), &self.rule);
            }
            for (s, e) in key.positions.iter().chain(key.momenta.iter()) {
                let img = self.image_symbol(*s)?;
                for _ in 0..*e {
                    term = truncate(&(&term * &img), &self.rule);
                }
            }
            out = out + term;
        }
        Ok(truncate(&out, &self.rule))
    }
}

/// T A T† for T = e^{G}, with G anti-Hermitian.
pub fn conjugate_by_flow(
    generator: &OperatorExpr,
    a: &OperatorExpr,
    rule: &GradingRule,
) -> Result<OperatorExpr, AlgebraError> {
    Flow::new(generator.clone(), rule)?.conjugate(a)
}

/// Applies flows in sequence: the first listed acts first on A, i.e. the
/// product operator is flows[n−1]·…·flows[0].
pub fn conjugate_sequence(flows: &[Flow], a: &OperatorExpr) -> Result<OperatorExpr, AlgebraError> {
    flows.iter().try_fold(a.clone(), |acc, f| f.conjugate(&acc))
}
