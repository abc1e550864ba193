use crate::wavefunction::Basis;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NumericsError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("unknown axis '{0}'")]
    UnknownAxis(String),
    #[error("basis mismatch on axis '{axis}': kernel needs {required:?}, state is in {actual:?}")]
    BasisMismatch {
        axis: String,
        required: Basis,
        actual: Basis,
    },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("dimension {dim} exceeds the dense oracle limit of {limit}")]
    TooLarge { dim: usize, limit: usize },
    #[error("matrix is not Hermitian (max |H - H^dagger| = {0:e})")]
    NotHermitian(f64),
    #[error("kernel '{0}' is complex-valued; evolution needs a real generator")]
    ComplexGenerator(String),
}
