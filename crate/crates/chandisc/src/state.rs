// Copyright 2026 chandisc contributors
// SPDX-License-Identifier: Apache-2.0

//! Density matrices: validation, named families, and probe samplers.
//!
//! A [`DensityMatrix`] is only obtainable through [`validate_state`] or the
//! factories here, so holding one certifies hermiticity, positivity within
//! the configured floor, and unit trace. Samplers take explicit seeds and
//! draw from labeled streams, so every experiment replays exactly.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Exp1, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{dim_mismatch, Error, Result};
use crate::linalg::eig::hermitian_eig;
use crate::linalg::{normalized, outer, ComplexMatrix, DimPair};
use crate::rng::stream;
use crate::tol::Tolerances;

/// A validated quantum state on one factor or a bipartite pair.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StateFile", into = "StateFile")]
pub struct DensityMatrix {
    mat: ComplexMatrix,
    dims: Vec<usize>,
}

/// Wire form of a state: `{"dims": [...], "matrix": {...}}`.
///
/// Deserializing straight into [`DensityMatrix`] re-validates, so a
/// hand-edited file cannot smuggle in a non-state.
#[derive(Clone, Serialize, Deserialize)]
pub struct StateFile {
    pub dims: Vec<usize>,
    pub matrix: ComplexMatrix,
}

impl TryFrom<StateFile> for DensityMatrix {
    type Error = Error;

    fn try_from(file: StateFile) -> Result<Self> {
        validate_state(&file.matrix, &file.dims, &Tolerances::default())
    }
}

impl From<DensityMatrix> for StateFile {
    fn from(state: DensityMatrix) -> Self {
        StateFile { dims: state.dims, matrix: state.mat }
    }
}

impl DensityMatrix {
    pub fn mat(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    /// The two factor dimensions; fails on single-factor states.
    pub fn bipartite_dims(&self) -> Result<DimPair> {
        match self.dims[..] {
            [a, b] => Ok(DimPair::new(a, b)),
            _ => dim_mismatch(format!("state has dims {:?}, expected two factors", self.dims)),
        }
    }

    /// Factor dimensions of a probe, reading a single-factor state as
    /// carrying a trivial ancilla.
    pub fn probe_dims(&self) -> DimPair {
        match self.dims[..] {
            [a] => DimPair::new(a, 1),
            [a, b] => DimPair::new(a, b),
            _ => unreachable!("validation admits one or two factors"),
        }
    }

    /// `Tr(rho^2)`; equals the squared Frobenius norm for Hermitian input.
    pub fn purity(&self) -> f64 {
        let f = self.mat.frobenius_norm();
        f * f
    }

    /// Wrap a matrix known valid by construction. Callers must guarantee
    /// the invariants that `validate_state` would check.
    pub(crate) fn from_valid_parts(mat: ComplexMatrix, dims: Vec<usize>) -> Self {
        DensityMatrix { mat, dims }
    }
}

/// Check hermiticity, unit trace, and positivity, in that order.
///
/// `dims` must have one or two entries whose product matches the matrix
/// side. The smallest eigenvalue may dip to `tol.psd_floor` below zero to
/// absorb eigensolver noise on boundary states.
pub fn validate_state(m: &ComplexMatrix, dims: &[usize], tol: &Tolerances) -> Result<DensityMatrix> {
    if dims.is_empty() || dims.len() > 2 {
        return dim_mismatch(format!("dims list has {} entries, expected 1 or 2", dims.len()));
    }
    if dims.iter().any(|&d| d == 0) {
        return dim_mismatch("zero factor dimension".to_string());
    }
    let total: usize = dims.iter().product();
    if !m.is_square() || m.rows() != total {
        return dim_mismatch(format!(
            "matrix is {}x{}, expected square of side {}",
            m.rows(),
            m.cols(),
            total
        ));
    }

    let violation = m.hermiticity_violation();
    if violation > tol.hermiticity {
        return Err(Error::NotHermitian { violation });
    }

    let trace = m.trace().re;
    if (trace - 1.0).abs() > tol.trace_one {
        return Err(Error::TraceNotOne { trace });
    }

    let eig = hermitian_eig(m, tol)?;
    let min_eigenvalue = eig.eigenvalues.last().copied().unwrap_or(0.0);
    if min_eigenvalue < tol.psd_floor {
        return Err(Error::NotPsd { min_eigenvalue });
    }

    Ok(DensityMatrix { mat: m.clone(), dims: dims.to_vec() })
}

/// Maximally entangled pure state on `d x d`, `(1/sqrt(d)) sum_i |ii>`.
pub fn bell_state(d: usize) -> DensityMatrix {
    assert!(d >= 2, "maximally entangled state needs dimension >= 2");
    let side = d * d;
    let mut mat = ComplexMatrix::zeros(side, side);
    let amp = Complex64::new(1.0 / d as f64, 0.0);
    for i in 0..d {
        for j in 0..d {
            mat[(i * d + i, j * d + j)] = amp;
        }
    }
    DensityMatrix::from_valid_parts(mat, vec![d, d])
}

/// Convex mix of the maximally entangled state with the maximally mixed
/// one: `visibility * bell + (1 - visibility) * identity / d^2`.
pub fn isotropic_state(d: usize, visibility: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&visibility) {
        return Err(Error::ParameterOutOfRange { name: "visibility", value: visibility });
    }
    let bell = bell_state(d);
    let side = d * d;
    let mixed = ComplexMatrix::identity(side).scaled((1.0 - visibility) / side as f64);
    let mat = &bell.mat().scaled(visibility) + &mixed;
    Ok(DensityMatrix::from_valid_parts(mat, vec![d, d]))
}

fn gaussian_vector(rng: &mut impl Rng, dim: usize) -> Vec<Complex64> {
    (0..dim)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re, im)
        })
        .collect()
}

/// Haar-style random pure state: a normalized vector of standard complex
/// Gaussian entries, as a rank-1 projector.
pub fn sample_random_pure(dim: usize, seed: u64) -> DensityMatrix {
    assert!(dim >= 1, "state dimension must be positive");
    let mut rng = stream(seed, "sample-random-pure", 0);
    let v = normalized(&gaussian_vector(&mut rng, dim));
    DensityMatrix::from_valid_parts(outer(&v), vec![dim])
}

fn random_factor(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
    if rng.gen_bool(0.5) {
        outer(&normalized(&gaussian_vector(rng, dim)))
    } else {
        // Wishart-style mixed state G G† / Tr(G G†).
        let g = ComplexMatrix::from_fn(dim, dim, |_, _| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re, im)
        });
        let w = &g * &g.dagger();
        w.scaled(1.0 / w.trace().re)
    }
}

/// Explicit convex combination of product states, kept term by term as a
/// certificate of separability.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SeparableEnsemble {
    pub weights: Vec<f64>,
    pub factors_x: Vec<ComplexMatrix>,
    pub factors_z: Vec<ComplexMatrix>,
}

impl SeparableEnsemble {
    /// `sum_i p_i X_i tensor Z_i`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let dx = self.factors_x[0].rows();
        let dz = self.factors_z[0].rows();
        let mut acc = ComplexMatrix::zeros(dx * dz, dx * dz);
        for ((w, x), z) in self.weights.iter().zip(&self.factors_x).zip(&self.factors_z) {
            acc = &acc + &x.tensor(z).scaled(*w);
        }
        acc
    }
}

/// Draw a random separable state together with its product-state ensemble.
///
/// Weights come from a flat Dirichlet (normalized unit exponentials); each
/// factor is pure or Wishart-mixed on a fair coin. The draw order is fixed
/// (weights, then per term: X coin and data, Z coin and data), so output is
/// a deterministic function of `(dims, terms, seed)`.
pub fn sample_separable(
    dims: DimPair,
    terms: usize,
    seed: u64,
) -> (SeparableEnsemble, DensityMatrix) {
    assert!(terms >= 1, "ensemble needs at least one term");
    let mut rng = stream(seed, "sample-separable", 0);

    let raw: Vec<f64> = (0..terms).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = raw.iter().sum();
    let weights: Vec<f64> = raw.iter().map(|w| w / total).collect();

    let mut factors_x = Vec::with_capacity(terms);
    let mut factors_z = Vec::with_capacity(terms);
    for _ in 0..terms {
        factors_x.push(random_factor(&mut rng, dims.first));
        factors_z.push(random_factor(&mut rng, dims.second));
    }

    let ensemble = SeparableEnsemble { weights, factors_x, factors_z };
    let mat = ensemble.reconstruct();
    let state = DensityMatrix::from_valid_parts(mat, vec![dims.first, dims.second]);
    (ensemble, state)
}
