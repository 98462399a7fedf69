//! Hermitian eigendecomposition by cyclic Jacobi sweeps with complex
//! Givens rotations. Deterministic: no pivot randomization, fixed sweep
//! order, stable ascending sort, so repeated runs give bit-identical
//! output for the same input.

use super::matrix::DenseMatrix;
use super::QmatError;
use num_complex::Complex64;

#[derive(Debug, Clone)]
pub struct Eigen {
    /// Eigenvalues sorted ascending.
    pub values: Vec<f64>,
    /// Column k is the eigenvector for `values[k]`.
    pub vectors: DenseMatrix,
}

impl Eigen {
    pub fn min(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    /// V diag(values) V†.
    pub fn reconstruct(&self) -> DenseMatrix {
        let n = self.values.len();
        DenseMatrix::from_fn(n, n, |r, c| {
            (0..n)
                .map(|k| {
                    self.vectors[(r, k)] * Complex64::new(self.values[k], 0.0)
                        * self.vectors[(c, k)].conj()
                })
                .sum()
        })
    }
}

const MAX_SWEEPS: usize = 64;

fn off_diagonal_norm(a: &DenseMatrix) -> f64 {
    let n = a.rows();
    let mut sum = 0.0;
    for p in 0..n {
        for q in (p + 1)..n {
            sum += 2.0 * a[(p, q)].norm_sqr();
        }
    }
    sum.sqrt()
}

pub fn eig_hermitian(m: &DenseMatrix) -> Result<Eigen, QmatError> {
    if !m.is_square() {
        return Err(QmatError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let defect = m.hermiticity_defect();
    if defect > super::TOL_HERMITIAN {
        return Err(QmatError::NotHermitian { defect });
    }

    let n = m.rows();
    let mut a = m.clone();
    let mut v = DenseMatrix::identity(n);
    // Absolute convergence scale; also covers the all-zero matrix.
    let scale = a.max_abs().max(1e-300);
    let target = scale * (n as f64) * 1e-15;

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) <= target {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r <= scale * 1e-18 {
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let phase = apq / Complex64::new(r, 0.0);

                // Zero a[p][q]: solve r·t² - (aqq-app)·t - r = 0 for the
                // smaller-magnitude root.
                let tau = (aqq - app) / (2.0 * r);
                let sgn = if tau >= 0.0 { 1.0 } else { -1.0 };
                let t = -sgn / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // Rotation J: J[p][p]=c, J[p][q]=-s·phase, J[q][p]=s·phase*, J[q][q]=c.
                // Update A <- J†AJ, exploiting Hermiticity.
                let new_pp = app * c * c + 2.0 * r * c * s + aqq * s * s;
                let new_qq = app * s * s - 2.0 * r * c * s + aqq * c * c;
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    let np = akp * c + akq * s * phase.conj();
                    let nq = -akp * s * phase + akq * c;
                    a[(k, p)] = np;
                    a[(p, k)] = np.conj();
                    a[(k, q)] = nq;
                    a[(q, k)] = nq.conj();
                }
                a[(p, p)] = Complex64::new(new_pp, 0.0);
                a[(q, q)] = Complex64::new(new_qq, 0.0);
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);

                // V <- V·J.
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * c + vkq * s * phase.conj();
                    v[(k, q)] = -vkp * s * phase + vkq * c;
                }
            }
        }
    }

    if off_diagonal_norm(&a) > scale * (n as f64) * 1e-12 {
        return Err(QmatError::EigenNoConvergence);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = DenseMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);

    Ok(Eigen { values, vectors })
}
