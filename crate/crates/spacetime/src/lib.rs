//! Weak-field metric, time-dilation factors, constraint builders and
//! regime diagnostics.

mod constraints;
mod diagnostics;
mod metric;
mod params;

pub use constraints::{build_constraints, galilean_reference, MeasurementSpec};
pub use diagnostics::{regime_diagnostics, DiagnosticAxes, RegimeReport, DROPPED_TERM_THRESHOLD};
pub use metric::{
    check_weak_field, gamma_factor, metric_g00, metric_g00_unchecked, potential, worldline_delta,
    WEAK_FIELD_LIMIT, WEAK_FIELD_WARNING,
};
pub use params::{ModelParams, SpacetimeError};
pub use qrf_algebra::Regime;

pub type Result<T> = std::result::Result<T, SpacetimeError>;
