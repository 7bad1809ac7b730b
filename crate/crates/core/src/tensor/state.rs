use num_complex::Complex64;
use serde::Serialize;

use super::{ComplexMatrix, TensorError};

/// Largest Hilbert-space dimension a [`DensityMatrix`] may have
/// (a qubit plus two memory qubits).
pub const MAX_DIM: usize = 8;

const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-12;
const PIVOT_TOL: f64 = 1e-10;

/// A validated quantum state: Hermitian, unit trace, positive semidefinite.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self, TensorError> {
        if !matrix.is_square() {
            return Err(TensorError::InvalidState(format!(
                "non-square {}x{} matrix",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let dim = matrix.rows();
        if dim == 0 || dim > MAX_DIM {
            return Err(TensorError::InvalidState(format!(
                "dimension {dim} outside 1..={MAX_DIM}"
            )));
        }
        let herm = matrix.hermiticity_error();
        if herm > HERMITIAN_TOL {
            return Err(TensorError::InvalidState(format!(
                "not Hermitian (deviation {herm:e})"
            )));
        }
        let tr = matrix.trace()?;
        if (tr - Complex64::new(1.0, 0.0)).norm() > TRACE_TOL {
            return Err(TensorError::InvalidState(format!("trace {tr} is not 1")));
        }
        if !is_positive_semidefinite(&matrix) {
            return Err(TensorError::InvalidState(
                "not positive semidefinite".to_string(),
            ));
        }
        Ok(Self { matrix })
    }

    /// `|psi><psi|` for a nonzero amplitude vector, normalized first.
    pub fn from_pure(amplitudes: &[Complex64]) -> Result<Self, TensorError> {
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return Err(TensorError::InvalidState(
                "zero or non-finite amplitude vector".to_string(),
            ));
        }
        let psi: Vec<Complex64> = amplitudes.iter().map(|z| z / norm).collect();
        Self::new(ComplexMatrix::outer(&psi, &psi).hermitian_part())
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self, TensorError> {
        Self::new(ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64))
    }

    /// Computational basis state `|index>` of a `dim`-level system.
    pub fn basis(dim: usize, index: usize) -> Result<Self, TensorError> {
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        *amps.get_mut(index).ok_or_else(|| {
            TensorError::InvalidState(format!("basis index {index} out of range"))
        })? = Complex64::new(1.0, 0.0);
        Self::from_pure(&amps)
    }

    /// Pure qubit state `cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>`.
    pub fn qubit_from_angles(theta: f64, phi: f64) -> Result<Self, TensorError> {
        Self::from_pure(&[
            Complex64::new((theta / 2.0).cos(), 0.0),
            Complex64::from_polar((theta / 2.0).sin(), phi),
        ])
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// `Tr[rho^2]`.
    pub fn purity(&self) -> f64 {
        let m = &self.matrix;
        let n = m.rows();
        let mut acc = 0.0;
        for r in 0..n {
            for c in 0..n {
                acc += m.get(r, c).norm_sqr();
            }
        }
        acc
    }

    /// `Tr[rho A]`, real part.
    pub fn expectation(&self, observable: &ComplexMatrix) -> Result<f64, TensorError> {
        Ok(self.matrix.matmul(observable)?.trace()?.re)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.matrix.approx_eq(&other.matrix, tol)
    }
}

/// PSD test. For a qubit the diagonal and determinant must be nonnegative;
/// larger matrices must admit an `L D L^dagger` factorization with
/// nonnegative pivots, where a pivot below `1e-10` in magnitude
/// requires the rest of its column to vanish as well.
fn is_positive_semidefinite(m: &ComplexMatrix) -> bool {
    let n = m.rows();
    if n == 1 {
        return m.get(0, 0).re >= -PIVOT_TOL;
    }
    if n == 2 {
        let a = m.get(0, 0).re;
        let d = m.get(1, 1).re;
        let det = a * d - m.get(0, 1).norm_sqr();
        return a >= -PIVOT_TOL && d >= -PIVOT_TOL && det >= -PIVOT_TOL;
    }
    let mut work: Vec<Complex64> = m.entries().to_vec();
    let at = |r: usize, c: usize| r * n + c;
    for k in 0..n {
        let pivot = work[at(k, k)].re;
        if pivot < -PIVOT_TOL {
            return false;
        }
        if pivot <= PIVOT_TOL {
            if (k + 1..n).any(|i| work[at(i, k)].norm() > PIVOT_TOL.sqrt()) {
                return false;
            }
            continue;
        }
        for i in k + 1..n {
            let lik = work[at(i, k)] / pivot;
            for j in k + 1..n {
                let update = lik * work[at(k, j)];
                work[at(i, j)] -= update;
            }
        }
    }
    true
}

/// Reduced state of subsystem `keep` in a tensor product with subsystem
/// dimensions `dims`.
pub fn partial_trace(
    rho: &DensityMatrix,
    dims: &[usize],
    keep: usize,
) -> Result<DensityMatrix, TensorError> {
    let reduced = partial_trace_matrix(rho.matrix(), dims, keep)?;
    DensityMatrix::new(reduced.hermitian_part())
}

/// [`partial_trace`] on an unvalidated square matrix (for unnormalized
/// intermediate states).
pub fn partial_trace_matrix(
    m: &ComplexMatrix,
    dims: &[usize],
    keep: usize,
) -> Result<ComplexMatrix, TensorError> {
    let total: usize = dims.iter().product();
    if !m.is_square() || m.rows() != total {
        return Err(TensorError::DimensionMismatch(format!(
            "partial trace: dims {dims:?} do not match a {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    if keep >= dims.len() {
        return Err(TensorError::DimensionMismatch(format!(
            "partial trace: subsystem {keep} out of range for {} subsystems",
            dims.len()
        )));
    }
    let dk = dims[keep];
    // stride of subsystem `keep` in the row-major composite index
    let stride: usize = dims[keep + 1..].iter().product();
    let mut entries = vec![Complex64::new(0.0, 0.0); dk * dk];
    for row in 0..total {
        let i = (row / stride) % dk;
        let rest = row - i * stride;
        for j in 0..dk {
            let col = rest + j * stride;
            entries[i * dk + j] += m.get(row, col);
        }
    }
    ComplexMatrix::new(dk, dk, entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::kron;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn bell_state_marginal_is_maximally_mixed() {
        let phi = DensityMatrix::from_pure(&[c(FRAC_1_SQRT_2), c(0.0), c(0.0), c(FRAC_1_SQRT_2)])
            .unwrap();
        let reduced = partial_trace(&phi, &[2, 2], 0).unwrap();
        assert!(reduced.approx_eq(&DensityMatrix::maximally_mixed(2).unwrap(), 1e-15));
    }

    #[test]
    fn product_state_marginal() {
        let a = DensityMatrix::qubit_from_angles(0.4, 1.1).unwrap();
        let b = DensityMatrix::qubit_from_angles(2.0, -0.3).unwrap();
        let ab = DensityMatrix::new(kron(a.matrix(), b.matrix())).unwrap();
        assert!(partial_trace(&ab, &[2, 2], 1).unwrap().approx_eq(&b, 1e-15));
        assert!(partial_trace(&ab, &[2, 2], 0).unwrap().approx_eq(&a, 1e-15));
    }

    #[test]
    fn partial_trace_rejects_mismatch() {
        let rho = DensityMatrix::maximally_mixed(4).unwrap();
        assert!(partial_trace(&rho, &[2, 3], 0).is_err());
        assert!(partial_trace(&rho, &[2, 2], 2).is_err());
    }

    #[test]
    fn validation_catches_bad_states() {
        // trace 2
        assert!(DensityMatrix::new(ComplexMatrix::identity(2)).is_err());
        // negative eigenvalue
        let bad = ComplexMatrix::from_real(2, 2, &[1.5, 0.0, 0.0, -0.5]).unwrap();
        assert!(DensityMatrix::new(bad).is_err());
        // off-diagonal too large for a valid qubit
        let bad = ComplexMatrix::from_real(2, 2, &[0.5, 0.8, 0.8, 0.5]).unwrap();
        assert!(DensityMatrix::new(bad).is_err());
        // non-Hermitian
        let bad = ComplexMatrix::from_real(2, 2, &[0.5, 0.1, 0.0, 0.5]).unwrap();
        assert!(DensityMatrix::new(bad).is_err());
        // too large
        assert!(DensityMatrix::maximally_mixed(16).is_err());
        // 3x3 indefinite with positive diagonal
        let bad =
            ComplexMatrix::from_real(3, 3, &[0.4, 0.4, 0.0, 0.4, 0.3, 0.0, 0.0, 0.0, 0.3]).unwrap();
        assert!(DensityMatrix::new(bad).is_err());
    }

    #[test]
    fn rank_deficient_states_pass_psd() {
        let ghz = DensityMatrix::from_pure(&[
            c(FRAC_1_SQRT_2),
            c(0.0),
            c(0.0),
            c(0.0),
            c(0.0),
            c(0.0),
            c(0.0),
            c(FRAC_1_SQRT_2),
        ]);
        assert!(ghz.is_ok());
        assert!(DensityMatrix::basis(4, 2).is_ok());
        assert!(DensityMatrix::basis(4, 4).is_err());
    }

    #[test]
    fn purity_values() {
        assert!((DensityMatrix::maximally_mixed(2).unwrap().purity() - 0.5).abs() < 1e-15);
        assert!((DensityMatrix::qubit_from_angles(1.0, 2.0).unwrap().purity() - 1.0).abs() < 1e-14);
    }
}
