//! Statevector simulation, classical specialization and template
//! verification.

pub mod dense;
pub mod kernel;
pub mod sparse;
pub mod specialize;
pub mod verify;

use thiserror::Error;

pub use dense::{run, unitary_of, Matrix, StateVector, MAX_UNITARY_QUBITS};
pub use kernel::omega;
pub use sparse::{SparseState, MAX_SPARSE_QUBITS};
pub use specialize::{specialize_classical, Specialized};
pub use verify::{verify_encoding, EquivalenceReport, VerifyMode};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("register of {width} qubits exceeds the simulator limit of {limit}")]
    TooWide { width: usize, limit: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}
