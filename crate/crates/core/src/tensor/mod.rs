//! Dense complex linear algebra for two- to eight-dimensional Hilbert spaces.
//!
//! Every object is immutable once built. Measurements are restricted to
//! qubit observables `n·σ`, whose eigenprojectors have the closed form
//! `(I ± n·σ)/2`, so no eigensolver is needed anywhere.

mod bloch;
mod matrix;
mod state;

pub use bloch::{observable_from_bloch, projector_from_bloch, BlochVector};
pub use matrix::{dagger, is_unitary, kron, matmul, trace, ComplexMatrix};
pub use state::{partial_trace, partial_trace_matrix, DensityMatrix, MAX_DIM};

pub use num_complex::Complex64;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TensorError {
    #[error("expected {rows}x{cols} = {} entries, got {len}", rows * cols)]
    Shape {
        rows: usize,
        cols: usize,
        len: usize,
    },
    #[error("matrix entries must be finite")]
    NonFinite,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("Bloch vector ({0}, {1}, {2}) does not have unit norm")]
    NotUnitVector(f64, f64, f64),
    #[error("not a density matrix: {0}")]
    InvalidState(String),
}

/// Pauli matrices.
pub mod pauli {
    use super::{Complex64, ComplexMatrix};

    const O: Complex64 = Complex64::new(0.0, 0.0);
    const ONE: Complex64 = Complex64::new(1.0, 0.0);
    const I: Complex64 = Complex64::new(0.0, 1.0);

    pub fn x() -> ComplexMatrix {
        ComplexMatrix::new(2, 2, vec![O, ONE, ONE, O]).expect("2x2")
    }

    pub fn y() -> ComplexMatrix {
        ComplexMatrix::new(2, 2, vec![O, -I, I, O]).expect("2x2")
    }

    pub fn z() -> ComplexMatrix {
        ComplexMatrix::new(2, 2, vec![ONE, O, O, -ONE]).expect("2x2")
    }
}
