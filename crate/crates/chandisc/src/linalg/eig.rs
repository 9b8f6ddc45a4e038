// Copyright 2026 chandisc contributors
// SPDX-License-Identifier: Apache-2.0

//! Hermitian eigendecomposition by cyclic complex Jacobi rotations.
//!
//! Jacobi is slower than tridiagonalization-based solvers but is simple,
//! deterministic across platforms, and delivers small relative errors on
//! the modest dimensions used here. Each pivot is annihilated by a phase
//! rotation that makes it real followed by a real Givens rotation.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{column, ComplexMatrix};
use crate::tol::Tolerances;

/// Spectral decomposition of a Hermitian matrix.
///
/// Eigenvalues are sorted descending; column `j` of `eigenvectors` is the
/// unit eigenvector for `eigenvalues[j]`, with its phase fixed so that the
/// entry of largest modulus (first such entry on ties) is real and
/// nonnegative. The decomposition is therefore a deterministic function of
/// the input away from degeneracies.
#[derive(Clone, Debug)]
pub struct HermitianEigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigenDecomposition {
    /// `V diag(lambda) V†`; agreement with the input bounds solver error.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        ComplexMatrix::from_fn(n, n, |r, c| {
            (0..n)
                .map(|k| v[(r, k)] * self.eigenvalues[k] * v[(c, k)].conj())
                .sum()
        })
    }

    pub fn eigenvector(&self, index: usize) -> Vec<Complex64> {
        column(&self.eigenvectors, index)
    }
}

fn off_diagonal_norm(m: &ComplexMatrix) -> f64 {
    let n = m.rows();
    let mut acc = 0.0;
    for r in 0..n {
        for c in 0..n {
            if r != c {
                acc += m[(r, c)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Diagonalize a Hermitian matrix.
///
/// The input must be square and Hermitian within `tol.hermiticity`; it is
/// symmetrized before iteration so roundoff asymmetry cannot drift. Sweeps
/// stop once the off-diagonal Frobenius norm falls below
/// `tol.jacobi_off * max(1, ||m||_F)` or after `tol.jacobi_max_sweeps`.
pub fn hermitian_eig(m: &ComplexMatrix, tol: &Tolerances) -> Result<HermitianEigenDecomposition> {
    if !m.is_square() {
        return Err(Error::NonSquare { rows: m.rows(), cols: m.cols() });
    }
    let violation = m.hermiticity_violation();
    if violation > tol.hermiticity {
        return Err(Error::NotHermitian { violation });
    }

    let n = m.rows();
    let mut work = m.symmetrized();
    let mut v = ComplexMatrix::identity(n);
    let threshold = tol.jacobi_off * work.frobenius_norm().max(1.0);

    for _sweep in 0..tol.jacobi_max_sweeps {
        if off_diagonal_norm(&work) <= threshold {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = work[(p, q)];
                let r = apq.norm();
                if r == 0.0 {
                    continue;
                }
                let phase = apq / r;
                let app = work[(p, p)].re;
                let aqq = work[(q, q)].re;
                let tau = (aqq - app) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // Two-sided update by U with U[p][p] = phase*c, U[p][q] = phase*s,
                // U[q][p] = -s, U[q][q] = c; rows follow by hermiticity.
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = work[(k, p)];
                    let akq = work[(k, q)];
                    let new_kp = phase * akp * c - akq * s;
                    let new_kq = phase * akp * s + akq * c;
                    work[(k, p)] = new_kp;
                    work[(p, k)] = new_kp.conj();
                    work[(k, q)] = new_kq;
                    work[(q, k)] = new_kq.conj();
                }
                work[(p, p)] = Complex64::new(app - t * r, 0.0);
                work[(q, q)] = Complex64::new(aqq + t * r, 0.0);
                work[(p, q)] = Complex64::new(0.0, 0.0);
                work[(q, p)] = Complex64::new(0.0, 0.0);

                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = phase * vkp * c - vkq * s;
                    v[(k, q)] = phase * vkp * s + vkq * c;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| work[(b, b)].re.total_cmp(&work[(a, a)].re));

    let eigenvalues: Vec<f64> = order.iter().map(|&i| work[(i, i)].re).collect();
    let mut eigenvectors = ComplexMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    canonicalize_phases(&mut eigenvectors);

    Ok(HermitianEigenDecomposition { eigenvalues, eigenvectors })
}

/// Rotate each column so its largest-modulus entry (first on ties) is real
/// and nonnegative.
fn canonicalize_phases(v: &mut ComplexMatrix) {
    let n = v.rows();
    for col in 0..n {
        let mut best = 0usize;
        let mut best_mod = 0.0f64;
        for row in 0..n {
            let m = v[(row, col)].norm();
            if m > best_mod {
                best_mod = m;
                best = row;
            }
        }
        if best_mod == 0.0 {
            continue;
        }
        let phase = v[(best, col)] / best_mod;
        let correction = phase.conj();
        for row in 0..n {
            let z = v[(row, col)] * correction;
            v[(row, col)] = z;
        }
        // Force the pivot entry exactly real; its imaginary part is pure roundoff.
        v[(best, col)] = Complex64::new(v[(best, col)].re.abs(), 0.0);
    }
}

/// Sum of singular values.
///
/// A square matrix that is Hermitian within `tol.hermiticity` uses the sum
/// of eigenvalue magnitudes; anything else goes through the eigenvalues of
/// `m† m`. Gram eigenvalues at or below the solver's convergence floor are
/// clamped to zero first: the square root would otherwise turn roundoff of
/// size eps into an error of size sqrt(eps).
pub fn trace_norm(m: &ComplexMatrix, tol: &Tolerances) -> Result<f64> {
    if m.is_square() && m.hermiticity_violation() <= tol.hermiticity {
        let eig = hermitian_eig(m, tol)?;
        Ok(eig.eigenvalues.iter().map(|x| x.abs()).sum())
    } else {
        let gram = &m.dagger() * m;
        let floor = tol.jacobi_off * gram.frobenius_norm().max(1.0);
        let eig = hermitian_eig(&gram, tol)?;
        Ok(eig
            .eigenvalues
            .iter()
            .map(|&x| if x <= floor { 0.0 } else { x.sqrt() })
            .sum())
    }
}
