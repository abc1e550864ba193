use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::func::{FuncFactor, LinearForm};
use crate::scalar::{CQ, Q};
use crate::symbol::{CanonicalSymbol, Param, Party};

pub type Monomial = BTreeMap<CanonicalSymbol, u32>;

/// Normal-ordered shape of one term: central parameters, coefficient
/// functions and position-like symbols to the left, then momentum-like
/// symbols.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct TermKey {
    pub params: BTreeMap<Param, i32>,
    pub funcs: Vec<FuncFactor>,
    pub positions: Monomial,
    pub momenta: Monomial,
}

impl TermKey {
    pub fn is_identity(&self) -> bool {
        self.params.is_empty()
            && self.funcs.is_empty()
            && self.positions.is_empty()
            && self.momenta.is_empty()
    }

    pub fn param_power(&self, p: &Param) -> i32 {
        self.params.get(p).copied().unwrap_or(0)
    }

    pub fn contains_symbol(&self, s: &CanonicalSymbol) -> bool {
        self.positions.contains_key(s) || self.momenta.contains_key(s)
    }

    fn relabeled(&self, map: &impl Fn(Party) -> Party) -> (i64, TermKey) {
        let params = self
            .params
            .iter()
            .map(|(p, e)| {
                let p = match p {
                    Param::Mass(x) => Param::Mass(map(*x)),
                    Param::Observable(i) => match map(Party::P(*i)) {
                        Party::P(j) => Param::Observable(j),
                        Party::M => Param::Observable(*i),
                    },
                    other => other.clone(),
                };
                (p, *e)
            })
            .collect();
        let mut sign = 1;
        let mut funcs: Vec<FuncFactor> = self
            .funcs
            .iter()
            .map(|f| match f {
                FuncFactor::Metric { deriv, arg } => {
                    let (s, g) = FuncFactor::metric(*deriv, arg.relabeled(map));
                    sign *= s;
                    g
                }
                FuncFactor::Pulse { clock, deriv } => match map(Party::P(*clock)) {
                    Party::P(j) => FuncFactor::Pulse {
                        clock: j,
                        deriv: *deriv,
                    },
                    Party::M => f.clone(),
                },
            })
            .collect();
        funcs.sort();
        let mono = |m: &Monomial| {
            m.iter()
                .map(|(s, e)| (s.with_particle(map(s.particle)), *e))
                .collect()
        };
        (
            sign,
            TermKey {
                params,
                funcs,
                positions: mono(&self.positions),
                momenta: mono(&self.momenta),
            },
        )
    }
}

/// Finite sum of normal-ordered terms with exact complex-rational
/// coefficients. Equality is equality of normal forms.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OperatorExpr {
    terms: BTreeMap<TermKey, CQ>,
}

impl OperatorExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::scalar(CQ::one())
    }

    pub fn scalar(c: CQ) -> Self {
        Self::from_term(TermKey::default(), c)
    }

    pub fn int(n: i128) -> Self {
        Self::scalar(CQ::int(n))
    }

    pub fn frac(n: i128, d: i128) -> Self {
        Self::scalar(CQ::frac(n, d))
    }

    pub fn from_term(key: TermKey, c: CQ) -> Self {
        let mut e = Self::zero();
        e.add_term(key, c);
        e
    }

    pub fn symbol(s: CanonicalSymbol) -> Self {
        let mut key = TermKey::default();
        if s.is_position_like() {
            key.positions.insert(s, 1);
        } else {
            key.momenta.insert(s, 1);
        }
        Self::from_term(key, CQ::one())
    }

    /// p^e for a central parameter.
    pub fn param(p: Param, e: i32) -> Self {
        let mut key = TermKey::default();
        if e != 0 {
            key.params.insert(p, e);
        }
        Self::from_term(key, CQ::one())
    }

    /// φ^{(deriv)}(arg).
    pub fn metric(deriv: u32, arg: LinearForm) -> Self {
        let (sign, f) = FuncFactor::metric(deriv, arg);
        let key = TermKey {
            funcs: vec![f],
            ..Default::default()
        };
        Self::from_term(key, CQ::int(sign as i128))
    }

    /// δ(T_clock − τ*).
    pub fn pulse(clock: u8) -> Self {
        let key = TermKey {
            funcs: vec![FuncFactor::Pulse { clock, deriv: 0 }],
            ..Default::default()
        };
        Self::from_term(key, CQ::one())
    }

    pub fn add_term(&mut self, key: TermKey, c: CQ) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TermKey, &CQ)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, key: &TermKey) -> CQ {
        self.terms.get(key).copied().unwrap_or_else(CQ::zero)
    }

    pub fn filter(&self, keep: impl Fn(&TermKey) -> bool) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| keep(k))
                .map(|(k, v)| (k.clone(), *v))
                .collect(),
        }
    }

    pub fn scale(&self, c: CQ) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(k, v)| (k.clone(), *v * c)).collect(),
        }
    }

    pub fn scale_q(&self, q: Q) -> Self {
        self.scale(CQ::real(q))
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Formal adjoint; symbols, parameters and coefficient functions are
    /// Hermitian.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero();
        for (k, c) in &self.terms {
            let left = TermKey {
                momenta: k.momenta.clone(),
                ..Default::default()
            };
            let right = TermKey {
                params: k.params.clone(),
                funcs: k.funcs.clone(),
                positions: k.positions.clone(),
                momenta: Monomial::new(),
            };
            let prod = &Self::from_term(left, c.conj()) * &Self::from_term(right, CQ::one());
            out = out + prod;
        }
        out
    }

    /// Renames particles (symbols, masses, metric arguments, clocks).
    pub fn relabeled(&self, map: impl Fn(Party) -> Party) -> Self {
        let mut out = Self::zero();
        for (k, c) in &self.terms {
            let (sign, key) = k.relabeled(&map);
            out.add_term(key, c.scale(Q::from_integer(sign as i128)));
        }
        out
    }

    /// Exchanges particle labels `a` and `b`.
    pub fn swapped(&self, a: u8, b: u8) -> Self {
        self.relabeled(|p| match p {
            Party::P(i) if i == a => Party::P(b),
            Party::P(i) if i == b => Party::P(a),
            other => other,
        })
    }

    /// Drops every term containing one of `symbols` (projection onto their
    /// zero eigenvalue when they sit rightmost).
    pub fn without_symbols(&self, symbols: &[CanonicalSymbol]) -> Self {
        self.filter(|k| !symbols.iter().any(|s| k.contains_symbol(s)))
    }

    /// Total number of multiplicative factors, used to cap expression growth
    /// in generated tests.
    pub fn degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|k| {
                k.funcs.len() as u32
                    + k.positions.values().sum::<u32>()
                    + k.momenta.values().sum::<u32>()
            })
            .max()
            .unwrap_or(0)
    }
}

type PosPart = (Vec<FuncFactor>, Monomial);

fn depends(part: &PosPart, q: &CanonicalSymbol) -> bool {
    part.1.contains_key(q) || part.0.iter().any(|f| f.depends_on(q))
}

/// ∂/∂q of a sum of position parts.
fn differentiate(parts: &BTreeMap<PosPart, CQ>, q: &CanonicalSymbol) -> BTreeMap<PosPart, CQ> {
    let mut out: BTreeMap<PosPart, CQ> = BTreeMap::new();
    let mut push = |k: PosPart, c: CQ| {
        if c.is_zero() {
            return;
        }
        let e = out.entry(k).or_insert_with(CQ::zero);
        *e += c;
    };
    for ((funcs, pos), c) in parts {
        for (i, f) in funcs.iter().enumerate() {
            if let Some((m, df)) = f.derivative(q) {
                let mut fs = funcs.clone();
                fs[i] = df;
                fs.sort();
                push((fs, pos.clone()), c.scale(Q::from_integer(m as i128)));
            }
        }
        if let Some(&e) = pos.get(q) {
            let mut ps = pos.clone();
            if e == 1 {
                ps.remove(q);
            } else {
                ps.insert(*q, e - 1);
            }
            push((funcs.clone(), ps), c.scale(Q::from_integer(e as i128)));
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn binom_int(n: u32, k: u32) -> i128 {
    (0..k).fold(1i128, |acc, j| acc * (n - j) as i128 / (j + 1) as i128)
}

/// Product of two terms, normal-ordered with
///   p^n f(x) = Σ_k C(n,k) (−iħ)^k f^{(k)}(x) p^{n−k}
/// for each conjugate pair.
fn mul_terms(a: &TermKey, ca: CQ, b: &TermKey, cb: CQ, out: &mut OperatorExpr) {
    // (coefficient, extra ħ power, position part, remaining left momenta)
    let mut entries: Vec<(CQ, i32, PosPart, Monomial)> = vec![(
        ca * cb,
        0,
        (b.funcs.clone(), b.positions.clone()),
        a.momenta.clone(),
    )];
    for (p, &n) in &a.momenta {
        let q = p.conjugate();
        let mut next = Vec::with_capacity(entries.len());
        for (c, h, part, mom) in entries {
            if !depends(&part, &q) {
                next.push((c, h, part, mom));
                continue;
            }
            let mut parts: BTreeMap<PosPart, CQ> = BTreeMap::new();
            parts.insert(part, CQ::one());
            let minus_i = -CQ::i();
            for k in 0..=n {
                if k > 0 {
                    parts = differentiate(&parts, &q);
                    if parts.is_empty() {
                        break;
                    }
                }
                let factor = c * minus_i.pow(k) * CQ::int(binom_int(n, k));
                let mut m = mom.clone();
                if n - k == 0 {
                    m.remove(p);
                } else {
                    m.insert(*p, n - k);
                }
                for (pp, pc) in &parts {
                    next.push((factor * *pc, h + k as i32, pp.clone(), m.clone()));
                }
            }
        }
        entries = next;
    }
    for (c, h, (funcs, pos), mom) in entries {
        let mut params = a.params.clone();
        for (k, e) in &b.params {
            *params.entry(k.clone()).or_insert(0) += e;
        }
        if h != 0 {
            *params.entry(Param::Hbar).or_insert(0) += h;
        }
        params.retain(|_, e| *e != 0);
        let mut fs = a.funcs.clone();
        fs.extend(funcs);
        fs.sort();
        let mut positions = a.positions.clone();
        for (s, e) in pos {
            *positions.entry(s).or_insert(0) += e;
        }
        let mut momenta = mom;
        for (s, e) in &b.momenta {
            *momenta.entry(*s).or_insert(0) += e;
        }
        out.add_term(
            TermKey {
                params,
                funcs: fs,
                positions,
                momenta,
            },
            c,
        );
    }
}

impl Mul for &OperatorExpr {
    type Output = OperatorExpr;
    fn mul(self, rhs: &OperatorExpr) -> OperatorExpr {
        let mut out = OperatorExpr::zero();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &rhs.terms {
                mul_terms(ka, *ca, kb, *cb, &mut out);
            }
        }
        out
    }
}

impl Mul for OperatorExpr {
    type Output = OperatorExpr;
    fn mul(self, rhs: OperatorExpr) -> OperatorExpr {
        &self * &rhs
    }
}

impl Add for &OperatorExpr {
    type Output = OperatorExpr;
    fn add(self, rhs: &OperatorExpr) -> OperatorExpr {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(k.clone(), *c);
        }
        out
    }
}

impl Add for OperatorExpr {
    type Output = OperatorExpr;
    fn add(mut self, rhs: OperatorExpr) -> OperatorExpr {
        for (k, c) in rhs.terms {
            self.add_term(k, c);
        }
        self
    }
}

impl Sub for &OperatorExpr {
    type Output = OperatorExpr;
    fn sub(self, rhs: &OperatorExpr) -> OperatorExpr {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(k.clone(), -*c);
        }
        out
    }
}

impl Sub for OperatorExpr {
    type Output = OperatorExpr;
    fn sub(self, rhs: OperatorExpr) -> OperatorExpr {
        &self - &rhs
    }
}

impl Neg for OperatorExpr {
    type Output = OperatorExpr;
    fn neg(self) -> OperatorExpr {
        self.scale(-CQ::one())
    }
}

impl Neg for &OperatorExpr {
    type Output = OperatorExpr;
    fn neg(self) -> OperatorExpr {
        self.scale(-CQ::one())
    }
}

impl std::iter::Sum for OperatorExpr {
    fn sum<I: Iterator<Item = OperatorExpr>>(iter: I) -> Self {
        iter.fold(OperatorExpr::zero(), |a, b| a + b)
    }
}

/// [A, B] = AB − BA.
pub fn commutator(a: &OperatorExpr, b: &OperatorExpr) -> OperatorExpr {
    &(a * b) - &(b * a)
}

impl fmt::Display for TermKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        for (p, e) in &self.params {
            parts.push(if *e == 1 {
                p.to_string()
            } else {
                format!("{p}^{e}")
            });
        }
        for func in &self.funcs {
            parts.push(func.to_string());
        }
        for (s, e) in self.positions.iter().chain(self.momenta.iter()) {
            parts.push(if *e == 1 {
                s.to_string()
            } else {
                format!("{s}^{e}")
            });
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" "))
        }
    }
}

impl fmt::Display for OperatorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if k.is_identity() {
                write!(f, "{c}")?;
            } else if *c == CQ::one() {
                write!(f, "{k}")?;
            } else {
                write!(f, "{c} {k}")?;
            }
        }
        Ok(())
    }
}
