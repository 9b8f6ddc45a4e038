// Copyright 2026 chandisc contributors
// SPDX-License-Identifier: Apache-2.0

//! Dense complex linear algebra on row-major matrices.
//!
//! Everything downstream manipulates explicit matrices: density operators,
//! Choi representations, measurement operators. Dimensions stay small (a
//! channel on a d-dimensional input has a Choi matrix of side d * dOut), so
//! dense storage with straightforward O(n^3) kernels is the right trade.
//!
//! Bipartite indices over [`DimPair`] `{ first, second }` pack as
//! `a * second + b`: the first factor is always the slow index.

pub mod eig;

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense row-major complex matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixRepr", into = "MatrixRepr")]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

/// Wire form: entries as `[re, im]` pairs in row-major order.
#[derive(Clone, Serialize, Deserialize)]
struct MatrixRepr {
    rows: usize,
    cols: usize,
    data: Vec<[f64; 2]>,
}

impl TryFrom<MatrixRepr> for ComplexMatrix {
    type Error = Error;

    fn try_from(repr: MatrixRepr) -> Result<Self> {
        let expected = repr.rows.checked_mul(repr.cols).ok_or_else(|| Error::Format {
            detail: "matrix dimensions overflow".to_string(),
        })?;
        if repr.data.len() != expected {
            return Err(Error::Format {
                detail: format!(
                    "matrix data has {} entries, expected rows*cols = {}",
                    repr.data.len(),
                    expected
                ),
            });
        }
        Ok(ComplexMatrix {
            rows: repr.rows,
            cols: repr.cols,
            data: repr.data.iter().map(|&[re, im]| Complex64::new(re, im)).collect(),
        })
    }
}

impl From<ComplexMatrix> for MatrixRepr {
    fn from(m: ComplexMatrix) -> Self {
        MatrixRepr {
            rows: m.rows,
            cols: m.cols,
            data: m.data.iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

impl ComplexMatrix {
    /// Build from row-major data; the length must equal `rows * cols`.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Format {
                detail: format!(
                    "matrix data has {} entries, expected rows*cols = {}",
                    data.len(),
                    rows * cols
                ),
            });
        }
        Ok(ComplexMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix { rows, cols, data: vec![Complex64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        ComplexMatrix { rows, cols, data }
    }

    /// Standard matrix unit `E[row][col]` of side `dim`: a single 1 entry.
    pub fn matrix_unit(dim: usize, row: usize, col: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        m[(row, col)] = Complex64::new(1.0, 0.0);
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    pub fn conj(&self) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square(), "trace of a non-square matrix");
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.max_abs_diff(other) <= tol
    }

    /// Largest entrywise deviation from `self = self†`; zero iff Hermitian.
    pub fn hermiticity_violation(&self) -> f64 {
        assert!(self.is_square(), "hermiticity of a non-square matrix");
        let mut worst = 0.0f64;
        for r in 0..self.rows {
            for c in r..self.cols {
                let dev = (self[(r, c)] - self[(c, r)].conj()).norm();
                worst = worst.max(dev);
            }
        }
        worst
    }

    /// `(self + self†) / 2`: the exactly Hermitian matrix nearest to `self`.
    pub fn symmetrized(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |r, c| {
            (self[(r, c)] + self[(c, r)].conj()) * 0.5
        })
    }

    /// Kronecker product; `self` indexes the slow (first) factor.
    pub fn tensor(&self, other: &Self) -> Self {
        Self::from_fn(self.rows * other.rows, self.cols * other.cols, |r, c| {
            let (r1, r2) = (r / other.rows, r % other.rows);
            let (c1, c2) = (c / other.cols, c % other.cols);
            self[(r1, c1)] * other[(r2, c2)]
        })
    }

    pub fn scaled(&self, factor: f64) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn scaled_complex(&self, factor: Complex64) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        assert!(r < self.rows && c < self.cols, "index ({r}, {c}) out of bounds");
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        assert!(r < self.rows && c < self.cols, "index ({r}, {c}) out of bounds");
        &mut self.data[r * self.cols + c]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, other.rows, "inner dimension mismatch");
        let mut out = ComplexMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self[(i, k)];
                if aik == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += aik * other[(k, j)];
                }
            }
        }
        out
    }
}

/// Dimensions of a bipartite space; `first` is the slow index.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DimPair {
    pub first: usize,
    pub second: usize,
}

impl DimPair {
    pub fn new(first: usize, second: usize) -> Self {
        DimPair { first, second }
    }

    pub fn total(&self) -> usize {
        self.first * self.second
    }
}

/// Selects one factor of a bipartite space.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Factor {
    First,
    Second,
}

fn check_bipartite(m: &ComplexMatrix, dims: DimPair) -> Result<()> {
    if !m.is_square() || m.rows() != dims.total() {
        return crate::error::dim_mismatch(format!(
            "matrix is {}x{}, expected square of side {} = {} * {}",
            m.rows(),
            m.cols(),
            dims.total(),
            dims.first,
            dims.second
        ));
    }
    Ok(())
}

/// Trace out one factor of a bipartite operator.
pub fn partial_trace(m: &ComplexMatrix, dims: DimPair, traced: Factor) -> Result<ComplexMatrix> {
    check_bipartite(m, dims)?;
    let (da, db) = (dims.first, dims.second);
    let out = match traced {
        Factor::Second => ComplexMatrix::from_fn(da, da, |a1, a2| {
            (0..db).map(|b| m[(a1 * db + b, a2 * db + b)]).sum()
        }),
        Factor::First => ComplexMatrix::from_fn(db, db, |b1, b2| {
            (0..da).map(|a| m[(a * db + b1, a * db + b2)]).sum()
        }),
    };
    Ok(out)
}

/// Transpose one factor of a bipartite operator.
///
/// A pure entry permutation, so applying it twice restores the input
/// bit for bit.
pub fn partial_transpose(
    m: &ComplexMatrix,
    dims: DimPair,
    transposed: Factor,
) -> Result<ComplexMatrix> {
    check_bipartite(m, dims)?;
    let db = dims.second;
    let side = dims.total();
    let out = ComplexMatrix::from_fn(side, side, |r, c| {
        let (a1, b1) = (r / db, r % db);
        let (a2, b2) = (c / db, c % db);
        match transposed {
            Factor::First => m[(a2 * db + b1, a1 * db + b2)],
            Factor::Second => m[(a1 * db + b2, a2 * db + b1)],
        }
    });
    Ok(out)
}

/// `Tr(a b)` without forming the product.
pub fn trace_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Complex64 {
    assert_eq!(a.cols(), b.rows(), "inner dimension mismatch");
    assert_eq!(a.rows(), b.cols(), "outer dimension mismatch");
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    acc
}

pub fn basis_vector(dim: usize, index: usize) -> Vec<Complex64> {
    assert!(index < dim, "basis index out of range");
    let mut v = vec![Complex64::new(0.0, 0.0); dim];
    v[index] = Complex64::new(1.0, 0.0);
    v
}

pub fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn normalized(v: &[Complex64]) -> Vec<Complex64> {
    let n = vec_norm(v);
    assert!(n > 0.0, "cannot normalize the zero vector");
    v.iter().map(|z| z / n).collect()
}

/// Inner product, conjugate-linear in the first argument.
pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    assert_eq!(a.len(), b.len(), "length mismatch");
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Rank-one projector-like outer product `v v†` (not normalized).
pub fn outer(v: &[Complex64]) -> ComplexMatrix {
    ComplexMatrix::from_fn(v.len(), v.len(), |r, c| v[r] * v[c].conj())
}

pub fn matvec(m: &ComplexMatrix, v: &[Complex64]) -> Vec<Complex64> {
    assert_eq!(m.cols(), v.len(), "length mismatch");
    (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| m[(r, c)] * v[c]).sum())
        .collect()
}

/// Kronecker product of vectors; `a` indexes the slow (first) factor.
pub fn kron_vec(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.push(x * y);
        }
    }
    out
}

pub fn column(m: &ComplexMatrix, col: usize) -> Vec<Complex64> {
    (0..m.rows()).map(|r| m[(r, col)]).collect()
}
