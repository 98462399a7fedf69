//! Dense complex linear algebra for few-qubit states: Kronecker products,
//! partial trace and transpose, a deterministic Hermitian eigensolver, and
//! a support-restricted base-2 matrix logarithm.
//!
//! Qubit indexing convention: qubit 0 is the most significant bit of the
//! computational-basis index, so |q0 q1 … q(n-1)⟩ maps to index
//! q0·2^(n-1) + … + q(n-1).

mod complex;
mod density;
mod eigen;
mod matrix;

pub use complex::{format_complex, parse_complex, ParseComplexError};
pub use density::{DensityMatrix, MAX_QUBITS};
pub use eigen::{eig_hermitian, Eigen};
pub use matrix::{id2, kron, sigma_x, sigma_y, sigma_z, DenseMatrix};
pub use num_complex::Complex64;

use thiserror::Error;

/// Hermiticity slack for validation (max entrywise |M - M†|).
pub const TOL_HERMITIAN: f64 = 1e-12;
/// Unit-trace slack for density matrices.
pub const TOL_TRACE: f64 = 1e-12;
/// Smallest admissible eigenvalue of a density matrix.
pub const TOL_PSD_MIN_EIG: f64 = -1e-10;
/// Eigenvalues at or below this are treated as outside the support.
pub const LOG_SUPPORT_CUTOFF: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QmatError {
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian (max |M - M†| = {defect:.3e})")]
    NotHermitian { defect: f64 },
    #[error("trace is {trace}, expected 1")]
    TraceNotOne { trace: f64 },
    #[error("matrix is not positive semidefinite (min eigenvalue {min_eig:.3e})")]
    NotPositiveSemidefinite { min_eig: f64 },
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("qubit index {index} out of range for {n_qubits} qubits")]
    IndexOutOfRange { index: usize, n_qubits: usize },
    #[error("empty qubit index set")]
    EmptyIndexSet,
    #[error("duplicate qubit index {index}")]
    DuplicateIndex { index: usize },
    #[error("matrix has a non-finite entry")]
    NonFiniteEntry,
    #[error("unsupported qubit count {n_qubits} (1 to 12 supported)")]
    UnsupportedQubitCount { n_qubits: usize },
    #[error("eigenvalue {value:.3e} below the PSD tolerance")]
    NegativeEigenvalue { value: f64 },
    #[error("Jacobi eigensolver failed to converge")]
    EigenNoConvergence,
}

fn bit_of(index: usize, qubit: usize, n_qubits: usize) -> usize {
    (index >> (n_qubits - 1 - qubit)) & 1
}

fn with_bit(index: usize, qubit: usize, n_qubits: usize, bit: usize) -> usize {
    let shift = n_qubits - 1 - qubit;
    (index & !(1 << shift)) | (bit << shift)
}

/// Trace out every qubit not in `keep`. Kept qubits appear in ascending
/// original order in the result.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix, QmatError> {
    let n = rho.n_qubits();
    if keep.is_empty() {
        return Err(QmatError::EmptyIndexSet);
    }
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    for w in kept.windows(2) {
        if w[0] == w[1] {
            return Err(QmatError::DuplicateIndex { index: w[0] });
        }
    }
    if let Some(&bad) = kept.iter().find(|&&q| q >= n) {
        return Err(QmatError::IndexOutOfRange {
            index: bad,
            n_qubits: n,
        });
    }

    let traced: Vec<usize> = (0..n).filter(|q| !kept.contains(q)).collect();
    let k = kept.len();
    let out_dim = 1usize << k;
    let trace_dim = 1usize << traced.len();

    // Spread a pattern of kept bits (+ one of traced bits) into a full index.
    let compose = |kept_bits: usize, traced_bits: usize| -> usize {
        let mut idx = 0usize;
        for (pos, &q) in kept.iter().enumerate() {
            idx = with_bit(idx, q, n, (kept_bits >> (k - 1 - pos)) & 1);
        }
        for (pos, &q) in traced.iter().enumerate() {
            idx = with_bit(idx, q, n, (traced_bits >> (traced.len() - 1 - pos)) & 1);
        }
        idx
    };

    let mut out = DenseMatrix::zeros(out_dim, out_dim);
    for i in 0..out_dim {
        for j in 0..out_dim {
            let mut acc = Complex64::new(0.0, 0.0);
            for t in 0..trace_dim {
                acc += rho.mat()[(compose(i, t), compose(j, t))];
            }
            out[(i, j)] = acc;
        }
    }
    DensityMatrix::new(k, out)
}

/// Transpose the indices of one qubit. The result is Hermitian but may
/// have negative eigenvalues, so it comes back as a plain matrix.
pub fn partial_transpose(rho: &DensityMatrix, subsys: usize) -> Result<DenseMatrix, QmatError> {
    let n = rho.n_qubits();
    if subsys >= n {
        return Err(QmatError::IndexOutOfRange {
            index: subsys,
            n_qubits: n,
        });
    }
    let dim = rho.dim();
    let out = DenseMatrix::from_fn(dim, dim, |i, j| {
        let ip = with_bit(i, subsys, n, bit_of(j, subsys, n));
        let jp = with_bit(j, subsys, n, bit_of(i, subsys, n));
        rho.mat()[(ip, jp)]
    });
    Ok(out)
}

/// Base-2 matrix logarithm restricted to the support: eigenvalues at or
/// below `cutoff` contribute 0 to the log spectrum. Errors if any
/// eigenvalue is materially negative.
pub fn log_on_support(m: &DenseMatrix, cutoff: f64) -> Result<DenseMatrix, QmatError> {
    let eig = eig_hermitian(m)?;
    if eig.min() < TOL_PSD_MIN_EIG {
        return Err(QmatError::NegativeEigenvalue { value: eig.min() });
    }
    let n = eig.values.len();
    let log_vals: Vec<f64> = eig
        .values
        .iter()
        .map(|&l| if l > cutoff { l.log2() } else { 0.0 })
        .collect();
    let v = &eig.vectors;
    Ok(DenseMatrix::from_fn(n, n, |r, c| {
        (0..n)
            .map(|k| v[(r, k)] * Complex64::new(log_vals[k], 0.0) * v[(c, k)].conj())
            .sum()
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn bell_state() -> DensityMatrix {
        let amps = [c(FRAC_1_SQRT_2), c(0.0), c(0.0), c(FRAC_1_SQRT_2)];
        DensityMatrix::from_pure(2, &amps).unwrap()
    }

    /// ρ1-family state used across the kernel tests.
    fn sc2(a1: f64, a4: f64, a2: Complex64) -> DensityMatrix {
        let mut m = DenseMatrix::zeros(4, 4);
        m[(0, 0)] = c(a1);
        m[(3, 3)] = c(a4);
        m[(0, 3)] = a2;
        m[(3, 0)] = a2.conj();
        DensityMatrix::new(2, m).unwrap()
    }

    fn random_density(rng: &mut SplitMix64, n_qubits: usize) -> DensityMatrix {
        let dim = 1usize << n_qubits;
        let g = DenseMatrix::from_fn(dim, dim, |_, _| {
            Complex64::new(rng.next_gaussian(), rng.next_gaussian())
        });
        let gg = &g * &g.adjoint();
        let tr = gg.trace().re;
        DensityMatrix::new(n_qubits, gg.scale(1.0 / tr)).unwrap()
    }

    #[test]
    fn bell_marginal_is_maximally_mixed() {
        let reduced = partial_trace(&bell_state(), &[0]).unwrap();
        assert!(reduced
            .mat()
            .max_abs_diff(&DenseMatrix::identity(2).scale(0.5))
            < 1e-14);
    }

    #[test]
    fn product_state_marginal() {
        // |0⟩⟨0| ⊗ |1⟩⟨1|, keep qubit 1 -> |1⟩⟨1|.
        let mut m = DenseMatrix::zeros(4, 4);
        m[(1, 1)] = c(1.0);
        let rho = DensityMatrix::new(2, m).unwrap();
        let reduced = partial_trace(&rho, &[1]).unwrap();
        assert!((reduced.mat()[(1, 1)].re - 1.0).abs() < 1e-15);
        assert!(reduced.mat()[(0, 0)].norm() < 1e-15);
    }

    #[test]
    fn sc2_marginal_is_diagonal() {
        // Oracle: explicit summation over the traced basis,
        // out[i][j] = Σ_t ⟨i t|ρ|j t⟩.
        let rho = sc2(0.7, 0.3, c(0.2));
        let reduced = partial_trace(&rho, &[0]).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let want: Complex64 = (0..2).map(|t| rho.mat()[(2 * i + t, 2 * j + t)]).sum();
                assert!((reduced.mat()[(i, j)] - want).norm() < 1e-15);
            }
        }
        assert!((reduced.mat()[(0, 0)].re - 0.7).abs() < 1e-15);
        assert!((reduced.mat()[(1, 1)].re - 0.3).abs() < 1e-15);
        assert!(reduced.mat()[(0, 1)].norm() < 1e-15);
    }

    #[test]
    fn partial_trace_preserves_trace() {
        let mut rng = SplitMix64::new(11);
        for trial in 0..1000 {
            let n = 2 + trial % 2;
            let rho = random_density(&mut rng, n);
            let keep: &[usize] = if trial % 3 == 0 { &[0] } else { &[n - 1] };
            let reduced = partial_trace(&rho, keep).unwrap();
            assert!((reduced.mat().trace().re - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn partial_trace_rejects_bad_indices() {
        let rho = bell_state();
        assert!(matches!(
            partial_trace(&rho, &[]),
            Err(QmatError::EmptyIndexSet)
        ));
        assert!(matches!(
            partial_trace(&rho, &[2]),
            Err(QmatError::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            partial_trace(&rho, &[0, 0]),
            Err(QmatError::DuplicateIndex { .. })
        ));
    }

    #[test]
    fn diagonal_state_is_pt_invariant() {
        let rho = sc2(0.6, 0.4, c(0.0));
        let pt = partial_transpose(&rho, 1).unwrap();
        assert!(pt.max_abs_diff(rho.mat()) < 1e-15);
    }

    #[test]
    fn bell_partial_transpose_min_eigenvalue() {
        let pt = partial_transpose(&bell_state(), 1).unwrap();
        let eig = eig_hermitian(&pt).unwrap();
        assert!((eig.min() + 0.5).abs() < 1e-12);
    }

    #[test]
    fn sc2_partial_transpose_min_eigenvalue() {
        // PT moves the coherence into the |01⟩⟨10| block; spectrum {a1, a4, ±|a2|}.
        let pt = partial_transpose(&sc2(0.5, 0.5, c(0.25)), 1).unwrap();
        let eig = eig_hermitian(&pt).unwrap();
        assert!((eig.min() + 0.25).abs() < 1e-12);
    }

    #[test]
    fn partial_transpose_is_involutive() {
        let mut rng = SplitMix64::new(23);
        for trial in 0..1000 {
            let n = 2 + trial % 2;
            let rho = random_density(&mut rng, n);
            let q = trial % n;
            let once = partial_transpose(&rho, q).unwrap();
            assert!(once.is_hermitian(1e-12));
            // Apply again via the raw index map on the plain matrix.
            let dim = rho.dim();
            let twice = DenseMatrix::from_fn(dim, dim, |i, j| {
                let ip = with_bit(i, q, n, bit_of(j, q, n));
                let jp = with_bit(j, q, n, bit_of(i, q, n));
                once[(ip, jp)]
            });
            assert!(twice.max_abs_diff(rho.mat()) < 1e-14);
        }
    }

    #[test]
    fn density_eigenvalues_sum_to_one() {
        let mut rng = SplitMix64::new(31);
        for trial in 0..1000 {
            let n = 1 + trial % 3;
            let rho = random_density(&mut rng, n);
            let eig = eig_hermitian(rho.mat()).unwrap();
            let sum: f64 = eig.values.iter().sum();
            assert!((sum - 1.0).abs() <= 1e-10);
        }
    }

    #[test]
    fn log_of_identity_is_zero() {
        let l = log_on_support(&DenseMatrix::identity(2), LOG_SUPPORT_CUTOFF).unwrap();
        assert!(l.max_abs() < 1e-14);
    }

    #[test]
    fn log_of_half_identity() {
        let l = log_on_support(&DenseMatrix::identity(2).scale(0.5), LOG_SUPPORT_CUTOFF).unwrap();
        assert!(l.max_abs_diff(&DenseMatrix::identity(2).scale(-1.0)) < 1e-14);
    }

    #[test]
    fn log_respects_support_convention() {
        let mut m = DenseMatrix::zeros(2, 2);
        m[(0, 0)] = c(0.5);
        let l = log_on_support(&m, LOG_SUPPORT_CUTOFF).unwrap();
        assert!((l[(0, 0)].re + 1.0).abs() < 1e-14);
        assert!(l[(1, 1)].norm() < 1e-14);
    }

    #[test]
    fn log_rejects_negative_spectrum() {
        let mut m = DenseMatrix::zeros(2, 2);
        m[(0, 0)] = c(1.0);
        m[(1, 1)] = c(-0.5);
        assert!(matches!(
            log_on_support(&m, LOG_SUPPORT_CUTOFF),
            Err(QmatError::NegativeEigenvalue { .. })
        ));
    }
}
