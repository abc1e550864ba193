//! Measurements triggered when one particle's clock reaches a given reading,
//! observed as a function of another particle's clock.
//!
//! The kick e^{-iθQ} is switched on by a normalized Gaussian of width σ_T in
//! the measured clock's reading, so the total phase is θ for any σ_T. In
//! pointer readout Q flips a two-state pointer axis and the probability of
//! the fired state is directly readable; in phase readout the kick is a pure
//! phase and must be read out against a kick-free reference history.

mod delta;
mod distribution;
mod error;
mod evolve;
mod model;
mod spec;

pub use delta::delta12;
pub use distribution::{event_time_distribution, interferometric_occurrence, EventTimeDistribution};
pub use error::EventError;
pub use evolve::{clock_width, closed_form_history, evolve_with_event};
pub use model::{plane_wave, BranchPrediction, EventModel};
pub use spec::{pointer_axis, pointer_grid, pointer_ready, EventSpec, KickProfile, Readout, POINTER};

pub type Result<T> = std::result::Result<T, EventError>;
