//! Reduced relational dynamics in the frame of one particle: Hamiltonian
//! construction, history states, the non-relativistic limit and frame swaps.

pub mod error;
pub mod hamiltonian;
pub mod history;
pub mod layout;
pub mod realize;
pub mod schrodinger;
pub mod swap;

pub use error::EngineError;
pub use hamiltonian::{
    build_hamiltonian, build_hamiltonian_with, frame_dilation_offset, transformed_metric,
    HamiltonianSpec, HamiltonianTerm, Kinematics, TermRole,
};
pub use history::{condition_on_clock, evolve_generator, evolve_history, EvolveOptions, HistoryState};
pub use layout::{clock_label, space_label, ParticleAxes, ScenarioAxes, SourceLayout, SOURCE_SPACE, SOURCE_TIME};
pub use realize::{realize, Binding, PositionBinding};
pub use schrodinger::{
    constraint_generator, schrodinger_limit_check, schrodinger_limit_check_with, SchrodingerReport,
    SchrodingerSetup,
};
pub use swap::{mirrored, qrf_swap_check, QrfSwapReport, SwapSetup, SWAP_TOLERANCE};

pub type Result<T> = std::result::Result<T, EngineError>;
