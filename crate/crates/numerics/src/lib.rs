//! Discretized Hilbert-space substrate.
//!
//! Wavefunctions live on tensor products of uniform periodic 1D grids. Each
//! axis is held either in its position representation or in its conjugate
//! (momentum-like) representation, and diagonal operators are applied in the
//! representation where they are diagonal.

mod error;
mod grid;
mod kernel;
mod oracle;
pub mod packets;
mod transform;
mod trotter;
mod wavefunction;

pub use error::NumericsError;
pub use grid::{make_uniform_grid, Grid1D};
pub use kernel::{apply_diagonal, expectation, DiagonalKernel, KernelValues};
pub use oracle::{
    dense_oracle_evolve, hamiltonian_matrix, DenseMatrix, DenseOracle, ORACLE_MAX_DIM,
};
pub use transform::to_conjugate_basis;
pub use trotter::{trotter_evolve, TrotterOp, TrotterPlan};
pub use wavefunction::{Axis, Basis, WaveFunction};

/// Complex amplitude type used throughout.
pub type C64 = num_complex::Complex64;

pub type Result<T> = std::result::Result<T, NumericsError>;
