//! Exact complex state-vector engine for few-qubit systems.
//!
//! Qubit `0` is the most significant bit of a basis index, so the ket
//! `|q0 q1 … q(n-1)⟩` lives at index `Σ q_j · 2^(n-1-j)`. The polarization
//! convention is `|H⟩ ↔ 0`, `|V⟩ ↔ 1`.
//!
//! Global phases are carried exactly. Everything observable (fidelity,
//! measurement statistics, reduced density matrices) is insensitive to them.

mod density;
mod gate;
mod kernel;
mod measure;
mod state;

pub use density::{partial_trace, trace_distance, DensityMatrix};
pub use gate::{GateMatrix, Operator};
pub use measure::{measure_projective, measure_qubit};
pub use state::{fidelity, tensor_product, StateVector};

pub(crate) use kernel::apply_dense;

use thiserror::Error;

/// Complex amplitude type used throughout the crate.
pub type C64 = num_complex::Complex64;

/// Tolerance for algebraic identities (norms, unitarity, amplitude equality).
pub const ALGEBRA_TOL: f64 = 1e-12;

/// Tolerance for orthonormality of caller-supplied measurement bases.
pub const BASIS_TOL: f64 = 1e-10;

/// Lowest eigenvalue a density matrix may carry before it is rejected.
pub const EIGEN_FLOOR: f64 = -1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QcoreError {
    #[error("amplitude vector length {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("state is not normalized (norm² = {0})")]
    NotNormalized(f64),
    #[error("qubit index {index} out of range for a {qubits}-qubit state")]
    QubitOutOfRange { index: usize, qubits: usize },
    #[error("gate acts on {arity} qubits but {targets} targets were given")]
    ArityMismatch { arity: usize, targets: usize },
    #[error("target qubit {0} listed more than once")]
    DuplicateTarget(usize),
    #[error("matrix is not unitary (max deviation {0:.3e})")]
    NotUnitary(f64),
    #[error("matrix of {0} entries is not square with power-of-two dimension")]
    BadMatrixShape(usize),
    #[error("measurement basis is not orthonormal (max deviation {0:.3e})")]
    NonOrthonormalBasis(f64),
    #[error("measurement basis has {got} vectors, subsystem dimension is {expected}")]
    IncompleteBasis { expected: usize, got: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("partial trace needs at least one kept qubit")]
    EmptyKeep,
    #[error("not a valid density matrix: {0}")]
    InvalidDensity(String),
}

pub type Result<T> = std::result::Result<T, QcoreError>;

/// Checks a target list against a state size and a gate arity.
pub(crate) fn check_targets(targets: &[usize], qubits: usize, arity: usize) -> Result<()> {
    if targets.len() != arity {
        return Err(QcoreError::ArityMismatch {
            arity,
            targets: targets.len(),
        });
    }
    for (i, &t) in targets.iter().enumerate() {
        if t >= qubits {
            return Err(QcoreError::QubitOutOfRange { index: t, qubits });
        }
        if targets[..i].contains(&t) {
            return Err(QcoreError::DuplicateTarget(t));
        }
    }
    Ok(())
}

pub(crate) fn log2_exact(len: usize) -> Option<usize> {
    if len == 0 || !len.is_power_of_two() {
        None
    } else {
        Some(len.trailing_zeros() as usize)
    }
}
