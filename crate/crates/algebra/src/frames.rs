//! Frame-change operators, their action tables and swap checks.

use serde::{Deserialize, Serialize};

use crate::expr::OperatorExpr;
use crate::flow::{conjugate_sequence, AlgebraError, Flow};
use crate::func::LinearForm;
use crate::grading::{truncate, GradingRule};
use crate::report::{residual_terms, ResidualTerm};
use crate::scalar::{CQ, Q};
use crate::series::{gamma, momentum_of, omega, sqrt_g00, sqrt_inv_g00, worldline_delta};
use crate::symbol::{CanonicalSymbol, Param, Party};
use crate::system::SymbolicSystem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Table {
    T1,
    T2,
    T12,
}

impl std::str::FromStr for Table {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_uppercase().as_str() {
            "T1" => Ok(Table::T1),
            "T2" => Ok(Table::T2),
            "T12" => Ok(Table::T12),
            _ => Err(format!("unknown table '{s}'")),
        }
    }
}

fn i_over_hbar() -> OperatorExpr {
    OperatorExpr::param(Param::Hbar, -1).scale(CQ::i())
}

fn sym(s: CanonicalSymbol) -> OperatorExpr {
    OperatorExpr::symbol(s)
}

/// Flows composing the transformation to the frame of particle `frame`, in
/// the order they act on an operator: time translation, space translation,
/// then the clock dilation at the source.
pub fn frame_flows(
    sys: &SymbolicSystem,
    frame: u8,
    rule: &GradingRule,
) -> Result<Vec<Flow>, AlgebraError> {
    let f = Party::P(frame);
    let energy = sys.energy(rule);
    let rest_energy = &energy - &sym(CanonicalSymbol::p0(f));
    let time = &(&i_over_hbar() * &sym(CanonicalSymbol::x0(f))) * &rest_energy;
    let rest_momentum = &sys.momentum() - &momentum_of(f);
    let space = &(&i_over_hbar() * &sym(CanonicalSymbol::x(f))) * &rest_momentum;
    let mut flows = vec![Flow::new(time, rule)?, Flow::new(space, rule)?];
    if sys.has_source() {
        // x⁰ ↦ √g⁰⁰(x_M) x⁰ for every particle clock coordinate
        let log = crate::series::log_sqrt_inv_g00(&LinearForm::single(Party::M), rule);
        let mut sym_sum = OperatorExpr::zero();
        for i in 1..=sys.particles {
            let x0 = sym(CanonicalSymbol::x0(Party::P(i)));
            let p0 = sym(CanonicalSymbol::p0(Party::P(i)));
            sym_sum = sym_sum + (&x0 * &p0) + (&p0 * &x0);
        }
        let dilation = &(&i_over_hbar() * &log) * &sym_sum.scale_q(Q::new(1, 2));
        flows.push(Flow::new(dilation, rule)?);
    }
    Ok(flows)
}

/// T_f A T_f†.
pub fn to_frame(
    sys: &SymbolicSystem,
    frame: u8,
    a: &OperatorExpr,
    rule: &GradingRule,
) -> Result<OperatorExpr, AlgebraError> {
    conjugate_sequence(&frame_flows(sys, frame, rule)?, a)
}

/// T_to T_from† A T_from T_to†.
pub fn between_frames(
    sys: &SymbolicSystem,
    from: u8,
    to: u8,
    a: &OperatorExpr,
    rule: &GradingRule,
) -> Result<OperatorExpr, AlgebraError> {
    let mut flows: Vec<Flow> = frame_flows(sys, from, rule)?
        .iter()
        .rev()
        .map(Flow::inverse)
        .collect();
    flows.extend(frame_flows(sys, to, rule)?);
    conjugate_sequence(&flows, a)
}

/// One expected identity T A T† = B.
#[derive(Debug, Clone)]
pub struct TableLine {
    pub lhs: CanonicalSymbol,
    pub expected: OperatorExpr,
}

struct Builder<'a> {
    sys: &'a SymbolicSystem,
    rule: &'a GradingRule,
}

impl Builder<'_> {
    fn t(&self, e: OperatorExpr) -> OperatorExpr {
        truncate(&e, self.rule)
    }
    fn x0(&self, p: Party) -> OperatorExpr {
        sym(CanonicalSymbol::x0(p))
    }
    fn x(&self, p: Party) -> OperatorExpr {
        sym(CanonicalSymbol::x(p))
    }
    fn p0(&self, p: Party) -> OperatorExpr {
        sym(CanonicalSymbol::p0(p))
    }
    fn p(&self, p: Party) -> OperatorExpr {
        momentum_of(p)
    }
    fn h_over_c(&self, i: u8) -> OperatorExpr {
        &sym(CanonicalSymbol::clock_energy(i)) * &OperatorExpr::param(Param::C, -1)
    }
    fn up(&self, arg: &LinearForm) -> OperatorExpr {
        sqrt_inv_g00(arg, self.rule)
    }
    fn down(&self, arg: &LinearForm) -> OperatorExpr {
        sqrt_g00(arg, self.rule)
    }
    fn delta(&self, arg: &LinearForm, p: &OperatorExpr, mass: u8) -> OperatorExpr {
        worldline_delta(Some(arg), p, Party::P(mass), self.rule)
    }
    fn others(&self, frame: u8) -> Vec<u8> {
        (1..=self.sys.particles).filter(|i| *i != frame).collect()
    }
    fn rel(&self, i: u8) -> LinearForm {
        LinearForm::difference(Party::P(i), Party::M)
    }
    fn source(&self) -> LinearForm {
        LinearForm::single(Party::M)
    }
}

/// Expected action of T_f on every basic phase-space symbol.
pub fn frame_table(sys: &SymbolicSystem, frame: u8, rule: &GradingRule) -> Vec<TableLine> {
    let b = Builder { sys, rule };
    let f = Party::P(frame);
    let m = Party::M;
    let others = b.others(frame);
    let up_m = b.up(&b.source());
    let down_m = b.down(&b.source());
    let mut lines = vec![
        TableLine {
            lhs: CanonicalSymbol::x0(f),
            expected: b.t(&up_m * &b.x0(f)),
        },
        TableLine {
            lhs: CanonicalSymbol::x(f),
            expected: b.x(f),
        },
    ];
    for &i in &others {
        let pi = Party::P(i);
        lines.push(TableLine {
            lhs: CanonicalSymbol::x0(pi),
            expected: b.t(&up_m * &(&b.x0(pi) + &b.x0(f))),
        });
        lines.push(TableLine {
            lhs: CanonicalSymbol::x(pi),
            expected: &b.x(pi) + &b.x(f),
        });
    }
    lines.push(TableLine {
        lhs: CanonicalSymbol::x0(m),
        expected: b.t(&b.x0(m) + &(&up_m * &b.x0(f))),
    });
    lines.push(TableLine {
        lhs: CanonicalSymbol::x(m),
        expected: &b.x(m) + &b.x(f),
    });

    let sum_p0: OperatorExpr = others.iter().map(|&i| b.p0(Party::P(i))).sum();
    let sum_p: OperatorExpr = others.iter().map(|&i| b.p(Party::P(i))).sum();
    let frame_momentum = &(&b.p(f) - &sum_p) - &b.p(m);
    let clocks: OperatorExpr = others
        .iter()
        .map(|&i| &b.delta(&b.rel(i), &b.p(Party::P(i)), i) * &b.h_over_c(i))
        .sum();
    let frame_clock = &b.delta(&b.source(), &frame_momentum, frame) * &b.h_over_c(frame);
    lines.push(TableLine {
        lhs: CanonicalSymbol::p0(f),
        expected: b.t(&(&(&(&down_m * &(&b.p0(f) - &sum_p0)) - &clocks) - &b.p0(m)) - &frame_clock),
    });
    lines.push(TableLine {
        lhs: CanonicalSymbol::p(f),
        expected: frame_momentum,
    });
    for &i in &others {
        let pi = Party::P(i);
        lines.push(TableLine {
            lhs: CanonicalSymbol::p0(pi),
            expected: b.t(&down_m * &b.p0(pi)),
        });
        lines.push(TableLine {
            lhs: CanonicalSymbol::p(pi),
            expected: b.p(pi),
        });
    }
    lines.push(TableLine {
        lhs: CanonicalSymbol::p0(m),
        expected: b.p0(m),
    });
    lines.push(TableLine {
        lhs: CanonicalSymbol::p(m),
        expected: b.p(m),
    });
    lines
}

/// Expected action of T_12 = T_2 T_1†, written for particles 1 and 2.
pub fn exchange_table(sys: &SymbolicSystem, rule: &GradingRule) -> Vec<TableLine> {
    let b = Builder { sys, rule };
    let (p1, p2, m) = (Party::P(1), Party::P(2), Party::M);
    let spectators: Vec<u8> = (3..=sys.particles).collect();
    let rel1 = b.rel(1);
    let source = b.source();
    // √(g₀₀(x₁ − x_M)/g₀₀(x_M)) and its inverse
    let ratio = b.t(&b.down(&rel1) * &b.up(&source));
    let ratio_inv = b.t(&b.up(&rel1) * &b.down(&source));
    let mut lines = vec![
        TableLine {
            lhs: CanonicalSymbol::x0(p1),
            expected: b.t(&ratio * &(&b.x0(p1) + &b.x0(p2))),
        },
        TableLine {
            lhs: CanonicalSymbol::x(p1),
            expected: &b.x(p1) + &b.x(p2),
        },
        TableLine {
            lhs: CanonicalSymbol::x0(p2),
            expected: -b.t(&ratio * &b.x0(p1)),
        },
        TableLine {
            lhs: CanonicalSymbol::x(p2),
            expected: -b.x(p1),
        },
    ];
    for &l in &spectators {
        let pl = Party::P(l);
        lines.push(TableLine {
            lhs: CanonicalSymbol::x0(pl),
            expected: b.t(&ratio * &(&b.x0(pl) - &b.x0(p1))),
        });
        lines.push(TableLine {
            lhs: CanonicalSymbol::x(pl),
            expected: &b.x(pl) - &b.x(p1),
        });
    }
    lines.push(TableLine {
        lhs: CanonicalSymbol::x0(m),
        expected: b.t(&b.x0(m) - &(&b.up(&source) * &b.x0(p1))),
    });
    lines.push(TableLine {
        lhs: CanonicalSymbol::x(m),
        expected: &b.x(m) - &b.x(p1),
    });

    lines.push(TableLine {
        lhs: CanonicalSymbol::p0(p1),
        expected: b.t(&(&b.up(&rel1) * &b.down(&source)) * &b.p0(p2)),
    });
    lines.push(TableLine {
        lhs: CanonicalSymbol::p(p1),
        expected: b.p(p2),
    });
    let not2: Vec<u8> = b.others(2);
    let sum_u0: OperatorExpr = not2.iter().map(|&j| b.p0(Party::P(j))).sum();
    let sum_u: OperatorExpr = not2.iter().map(|&j| b.p(Party::P(j))).sum();
    let u_frame = &(&b.p(p2) - &sum_u) - &b.p(m);
    let clocks: OperatorExpr = not2
        .iter()
        .map(|&j| &b.delta(&b.rel(j), &b.p(Party::P(j)), j) * &b.h_over_c(j))
        .sum();
    let bracket = &(&clocks + &b.p0(m)) + &(&b.delta(&source, &u_frame, 2) * &b.h_over_c(2));
    lines.push(TableLine {
        lhs: CanonicalSymbol::p0(p2),
        expected: b.t(&(&ratio_inv * &(&b.p0(p2) - &sum_u0)) - &(&b.up(&rel1) * &bracket)),
    });
    lines.push(TableLine {
        lhs: CanonicalSymbol::p(p2),
        expected: u_frame,
    });
    for &l in &spectators {
        let pl = Party::P(l);
        lines.push(TableLine {
            lhs: CanonicalSymbol::p0(pl),
            expected: b.t(&ratio_inv * &b.p0(pl)),
        });
        lines.push(TableLine {
            lhs: CanonicalSymbol::p(pl),
            expected: b.p(pl),
        });
    }
    lines.push(TableLine {
        lhs: CanonicalSymbol::p0(m),
        expected: b.p0(m),
    });
    lines.push(TableLine {
        lhs: CanonicalSymbol::p(m),
        expected: b.p(m),
    });
    lines
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LineReport {
    pub lhs: String,
    pub expected: String,
    pub computed: String,
    pub pass: bool,
    /// computed − expected after truncation.
    pub residual: Vec<ResidualTerm>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableReport {
    pub table: Table,
    pub rule: GradingRule,
    pub particles: u8,
    pub lines: Vec<LineReport>,
    pub failures: usize,
}

/// System the tables are written for: three particles with clocks and the
/// source, so that every line family appears.
pub fn table_system() -> SymbolicSystem {
    SymbolicSystem::new(3, crate::system::Regime::Full)
}

pub fn verify_table(which: Table, rule: &GradingRule) -> Result<TableReport, AlgebraError> {
    verify_table_for(&table_system(), which, rule)
}

pub fn verify_table_for(
    sys: &SymbolicSystem,
    which: Table,
    rule: &GradingRule,
) -> Result<TableReport, AlgebraError> {
    let (lines, flows) = match which {
        Table::T1 => (frame_table(sys, 1, rule), frame_flows(sys, 1, rule)?),
        Table::T2 => (frame_table(sys, 2, rule), frame_flows(sys, 2, rule)?),
        Table::T12 => {
            let mut flows: Vec<Flow> = frame_flows(sys, 1, rule)?
                .iter()
                .rev()
                .map(Flow::inverse)
                .collect();
            flows.extend(frame_flows(sys, 2, rule)?);
            (exchange_table(sys, rule), flows)
        }
    };
    let mut reports = Vec::with_capacity(lines.len());
    for line in lines {
        let computed = conjugate_sequence(&flows, &sym(line.lhs))?;
        let residual = truncate(&(&computed - &line.expected), rule);
        reports.push(LineReport {
            lhs: line.lhs.to_string(),
            expected: line.expected.to_string(),
            computed: computed.to_string(),
            pass: residual.is_zero(),
            residual: residual_terms(&residual),
        });
    }
    let failures = reports.iter().filter(|r| !r.pass).count();
    Ok(TableReport {
        table: which,
        rule: rule.clone(),
        particles: sys.particles,
        lines: reports,
        failures,
    })
}

/// Relational Hamiltonian of the remaining particles and the source seen
/// from the clock of particle `frame`.
pub fn relational_hamiltonian(sys: &SymbolicSystem, frame: u8, rule: &GradingRule) -> OperatorExpr {
    let b = Builder { sys, rule };
    let f = Party::P(frame);
    let others = b.others(frame);
    let mut total_p: OperatorExpr = others.iter().map(|&i| b.p(Party::P(i))).sum();
    if sys.has_source() {
        total_p = total_p + b.p(Party::M);
    }
    let g_sigma = gamma(&total_p, f, rule);
    let c = OperatorExpr::param(Param::C, 1);
    let mut inner = OperatorExpr::zero();
    for &i in &others {
        let pi = Party::P(i);
        let clock = &crate::series::gamma_inv(&b.p(pi), pi, rule)
            * &sym(CanonicalSymbol::clock_energy(i));
        let body = &(&c * &omega(&b.p(pi), pi, rule)) + &clock;
        let metric = if sys.has_source() {
            b.t(&b.down(&b.rel(i)) * &b.up(&b.source()))
        } else {
            OperatorExpr::one()
        };
        inner = inner + b.t(&metric * &body);
    }
    let mut h = b.t(&g_sigma * &inner);
    if sys.has_source() {
        let source = &(&(&c * &g_sigma) * &b.up(&b.source())) * &b.p0(Party::M);
        h = h + b.t(source);
    }
    let rest = &(&OperatorExpr::param(Param::Mass(f), 1) * &OperatorExpr::param(Param::C, 2))
        * &(&g_sigma * &g_sigma);
    b.t(h + rest)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SwapCheck {
    pub name: String,
    pub pass: bool,
    pub residual: Vec<ResidualTerm>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SwapReport {
    pub rule: GradingRule,
    pub checks: Vec<SwapCheck>,
    pub all_pass: bool,
}

fn swap_check(name: String, a: &OperatorExpr, b: &OperatorExpr, rule: &GradingRule) -> SwapCheck {
    let residual = truncate(&(a - b), rule);
    SwapCheck {
        name,
        pass: residual.is_zero(),
        residual: residual_terms(&residual),
    }
}

/// Form invariance under exchanging the frames of particles 1 and 2:
/// the Hamiltonian seen from 2 is the relabeled one seen from 1, the
/// transformed constraints are relabeled images of each other, and the
/// exchange followed by its inverse is the identity on every symbol.
pub fn verify_swap(sys: &SymbolicSystem, rule: &GradingRule) -> Result<SwapReport, AlgebraError> {
    let mut checks = Vec::new();
    let h1 = relational_hamiltonian(sys, 1, rule);
    let h2 = relational_hamiltonian(sys, 2, rule);
    checks.push(swap_check("H2 = swap(H1)".into(), &h2, &h1.swapped(1, 2), rule));

    let constraints = sys.constraints(rule).all();
    for (name, c) in &constraints {
        let in1 = to_frame(sys, 1, c, rule)?;
        let swapped_c = c.swapped(1, 2);
        let in2 = to_frame(sys, 2, &swapped_c, rule)?;
        checks.push(swap_check(
            format!("T2 swap({name}) T2† = swap(T1 {name} T1†)"),
            &in2,
            &in1.swapped(1, 2),
            rule,
        ));
    }

    for party in sys.parties() {
        for s in [
            CanonicalSymbol::x0(party),
            CanonicalSymbol::x(party),
            CanonicalSymbol::p0(party),
            CanonicalSymbol::p(party),
        ] {
            let there = between_frames(sys, 1, 2, &sym(s), rule)?;
            let back = between_frames(sys, 2, 1, &there, rule)?;
            checks.push(swap_check(format!("T21 T12 {s} = {s}"), &back, &sym(s), rule));
        }
    }
    let all_pass = checks.iter().all(|c| c.pass);
    Ok(SwapReport {
        rule: rule.clone(),
        checks,
        all_pass,
    })
}
