//! Validated n-qubit density matrices.

use super::eigen::eig_hermitian;
use super::matrix::DenseMatrix;
use super::{QmatError, TOL_HERMITIAN, TOL_PSD_MIN_EIG, TOL_TRACE};
use num_complex::Complex64;

/// An n-qubit mixed state: Hermitian, unit trace, positive semidefinite.
/// Every construction path re-validates; violations are errors, never
/// silently repaired.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    mat: DenseMatrix,
}

/// Largest supported register; the dense kernel is not meant for more.
pub const MAX_QUBITS: usize = 12;

impl DensityMatrix {
    pub fn new(n_qubits: usize, mat: DenseMatrix) -> Result<Self, QmatError> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(QmatError::UnsupportedQubitCount { n_qubits });
        }
        let dim = 1usize << n_qubits;
        if !mat.is_square() || mat.rows() != dim {
            return Err(QmatError::DimensionMismatch {
                expected: dim,
                actual: mat.rows(),
            });
        }
        if !mat.all_finite() {
            return Err(QmatError::NonFiniteEntry);
        }
        let defect = mat.hermiticity_defect();
        if defect > TOL_HERMITIAN {
            return Err(QmatError::NotHermitian { defect });
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > TOL_TRACE || tr.im.abs() > TOL_TRACE {
            return Err(QmatError::TraceNotOne { trace: tr.re });
        }
        let min_eig = eig_hermitian(&mat)?.min();
        if min_eig < TOL_PSD_MIN_EIG {
            return Err(QmatError::NotPositiveSemidefinite { min_eig });
        }
        Ok(DensityMatrix { n_qubits, mat })
    }

    /// |ψ⟩⟨ψ| from amplitudes in the computational basis (qubit 0 is the
    /// most significant bit). The vector must be normalized.
    pub fn from_pure(n_qubits: usize, amplitudes: &[Complex64]) -> Result<Self, QmatError> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(QmatError::UnsupportedQubitCount { n_qubits });
        }
        let dim = 1usize << n_qubits;
        if amplitudes.len() != dim {
            return Err(QmatError::DimensionMismatch {
                expected: dim,
                actual: amplitudes.len(),
            });
        }
        let norm_sq: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > TOL_TRACE {
            return Err(QmatError::TraceNotOne { trace: norm_sq });
        }
        let mat = DenseMatrix::from_fn(dim, dim, |r, c| amplitudes[r] * amplitudes[c].conj());
        Self::new(n_qubits, mat)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1usize << self.n_qubits
    }

    pub fn mat(&self) -> &DenseMatrix {
        &self.mat
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn accepts_maximally_mixed() {
        let rho = DensityMatrix::new(1, DenseMatrix::identity(2).scale(0.5)).unwrap();
        assert_eq!(rho.n_qubits(), 1);
        assert_eq!(rho.dim(), 2);
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = DenseMatrix::identity(2).scale(0.5);
        m[(0, 1)] = c(0.1);
        assert!(matches!(
            DensityMatrix::new(1, m),
            Err(QmatError::NotHermitian { .. })
        ));
    }

    #[test]
    fn rejects_wrong_trace() {
        let m = DenseMatrix::identity(2);
        assert!(matches!(
            DensityMatrix::new(1, m),
            Err(QmatError::TraceNotOne { .. })
        ));
    }

    #[test]
    fn rejects_negative_eigenvalue() {
        let mut m = DenseMatrix::zeros(2, 2);
        m[(0, 0)] = c(1.5);
        m[(1, 1)] = c(-0.5);
        assert!(matches!(
            DensityMatrix::new(1, m),
            Err(QmatError::NotPositiveSemidefinite { .. })
        ));
    }

    #[test]
    fn rejects_dimension_mismatch() {
        let m = DenseMatrix::identity(2).scale(0.5);
        assert!(matches!(
            DensityMatrix::new(2, m),
            Err(QmatError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn from_pure_requires_normalization() {
        let amps = [c(1.0), c(1.0)];
        assert!(DensityMatrix::from_pure(1, &amps).is_err());
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let rho = DensityMatrix::from_pure(1, &[c(s), c(s)]).unwrap();
        assert!((rho.mat()[(0, 1)].re - 0.5).abs() < 1e-15);
    }
}
