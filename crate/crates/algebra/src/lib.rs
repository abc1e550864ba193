//! Exact canonical operator algebra with normal ordering, perturbative
//! truncation and conjugation by flows.

pub mod expr;
pub mod flow;
pub mod frames;
pub mod func;
pub mod grading;
pub mod report;
pub mod scalar;
pub mod series;
pub mod symbol;
pub mod system;

pub use expr::{commutator, Monomial, OperatorExpr, TermKey};
pub use func::{FuncFactor, LinearForm};
pub use grading::{truncate, Grading, GradingRule};
pub use scalar::{binomial, CQ, Q};
pub use symbol::{CanonicalSymbol, Component, Kind, Param, Party};
pub use flow::{bch_series, conjugate_by_flow, conjugate_sequence, AlgebraError, Flow};
pub use system::{ConstraintSet, Regime, SymbolicSystem};
pub use frames::{
    between_frames, relational_hamiltonian, to_frame, verify_swap, verify_table, verify_table_for,
    SwapReport, Table, TableReport,
};
pub use report::{verify_first_class, FirstClassReport, PairReport, PairStatus};
