use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{pauli, ComplexMatrix, TensorError};
use crate::outcome::Outcome;

/// Norm tolerance for a vector to name an observable.
pub const UNIT_NORM_TOL: f64 = 1e-12;

/// A unit vector on the Bloch sphere, naming the qubit observable `n·σ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct BlochVector {
    x: f64,
    y: f64,
    z: f64,
}

impl TryFrom<[f64; 3]> for BlochVector {
    type Error = TensorError;

    fn try_from([x, y, z]: [f64; 3]) -> Result<Self, Self::Error> {
        BlochVector::new(x, y, z)
    }
}

impl From<BlochVector> for [f64; 3] {
    fn from(n: BlochVector) -> Self {
        [n.x, n.y, n.z]
    }
}

impl BlochVector {
    /// Accepts only vectors whose norm is 1 within `1e-12`.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self, TensorError> {
        let norm = (x * x + y * y + z * z).sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > UNIT_NORM_TOL {
            return Err(TensorError::NotUnitVector(x, y, z));
        }
        Ok(Self { x, y, z })
    }

    /// Rescales a nonzero vector onto the sphere.
    pub fn normalized(x: f64, y: f64, z: f64) -> Result<Self, TensorError> {
        let norm = (x * x + y * y + z * z).sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return Err(TensorError::NotUnitVector(x, y, z));
        }
        Ok(Self {
            x: x / norm,
            y: y / norm,
            z: z / norm,
        })
    }

    /// Polar angle `theta` from +z, azimuth `phi` from +x.
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        Self {
            x: theta.sin() * phi.cos(),
            y: theta.sin() * phi.sin(),
            z: theta.cos(),
        }
    }

    /// Vector in the x–z plane at angle `theta` from +z towards +x.
    pub fn planar(theta: f64) -> Self {
        Self {
            x: theta.sin(),
            y: 0.0,
            z: theta.cos(),
        }
    }

    pub fn x_axis() -> Self {
        Self {
            x: 1.0,
            y: 0.0,
            z: 0.0,
        }
    }

    pub fn y_axis() -> Self {
        Self {
            x: 0.0,
            y: 1.0,
            z: 0.0,
        }
    }

    pub fn z_axis() -> Self {
        Self {
            x: 0.0,
            y: 0.0,
            z: 1.0,
        }
    }

    pub fn components(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn negated(&self) -> Self {
        Self {
            x: -self.x,
            y: -self.y,
            z: -self.z,
        }
    }
}

/// The observable `n·σ = n_x σ_x + n_y σ_y + n_z σ_z`.
pub fn observable_from_bloch(n: &BlochVector) -> ComplexMatrix {
    let k = |v: f64| Complex64::new(v, 0.0);
    let sx = pauli::x().scale(k(n.x));
    let sy = pauli::y().scale(k(n.y));
    let sz = pauli::z().scale(k(n.z));
    sx.add(&sy)
        .and_then(|m| m.add(&sz))
        .expect("Pauli matrices share a shape")
}

/// Eigenprojector `(I + s n·σ)/2` for the outcome with eigenvalue `s`.
pub fn projector_from_bloch(n: &BlochVector, outcome: Outcome) -> ComplexMatrix {
    let s = outcome.value();
    ComplexMatrix::identity(2)
        .add(&observable_from_bloch(n).scale_real(s))
        .expect("2x2")
        .scale_real(0.5)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{matmul, trace};
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn sigma_z_plus_projector() {
        let p = projector_from_bloch(&BlochVector::z_axis(), Outcome::Plus);
        assert!(p.approx_eq(&ComplexMatrix::diag(&[1.0, 0.0]), 0.0));
    }

    #[test]
    fn sigma_x_minus_projector() {
        let p = projector_from_bloch(&BlochVector::x_axis(), Outcome::Minus);
        let expected = ComplexMatrix::from_real(2, 2, &[0.5, -0.5, -0.5, 0.5]).unwrap();
        assert!(p.approx_eq(&expected, 1e-15));
    }

    #[test]
    fn projectors_complete_and_idempotent() {
        let n = BlochVector::normalized(0.3, -0.4, 0.5).unwrap();
        let plus = projector_from_bloch(&n, Outcome::Plus);
        let minus = projector_from_bloch(&n, Outcome::Minus);
        assert!(plus
            .add(&minus)
            .unwrap()
            .approx_eq(&ComplexMatrix::identity(2), 1e-15));
        assert!(matmul(&plus, &plus).unwrap().approx_eq(&plus, 1e-12));
        assert!((trace(&plus).unwrap() - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(plus.hermiticity_error() < 1e-15);
    }

    #[test]
    #[allow(clippy::approx_constant)] // the truncated decimal is the point
    fn non_unit_vectors_rejected() {
        assert!(BlochVector::new(1.0, 1.0, 0.0).is_err());
        assert!(BlochVector::new(0.70710678, 0.0, 0.70710678).is_err());
        assert!(BlochVector::new(FRAC_1_SQRT_2, 0.0, FRAC_1_SQRT_2).is_ok());
        assert!(BlochVector::normalized(0.0, 0.0, 0.0).is_err());
        assert!(BlochVector::try_from([0.0, 0.0, 2.0]).is_err());
    }

    #[test]
    fn planar_matches_angles() {
        let a = BlochVector::planar(0.7);
        let b = BlochVector::from_angles(0.7, 0.0);
        assert_eq!(a, b);
        assert!((a.dot(&a) - 1.0).abs() < 1e-15);
    }
}
