// Copyright 2026 chandisc contributors
// SPDX-License-Identifier: Apache-2.0

//! Superoperators in the Choi representation.
//!
//! A map taking operators on the input space X to operators on the output
//! space Y is stored as its Choi matrix `J = sum_ij map(E_ij) tensor E_ij`
//! on Y tensor X, with Y always the first (slow) factor. The representation
//! covers maps that are not completely positive, which Kraus forms cannot,
//! and turns the property predicates into marginal and spectral checks:
//! hermiticity-preserving iff J is Hermitian, trace-preserving iff the
//! first-factor marginal of J is the identity, trace-annihilating iff that
//! marginal vanishes, completely positive iff J is positive semidefinite.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{dim_mismatch, Error, Result};
use crate::linalg::eig::hermitian_eig;
use crate::linalg::{partial_trace, partial_transpose, ComplexMatrix, DimPair, Factor};
use crate::rng::stream;
use crate::state::DensityMatrix;
use crate::tol::Tolerances;

/// A linear map on operators, stored by its Choi matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ChannelFile", into = "ChannelFile")]
pub struct Superoperator {
    choi: ComplexMatrix,
    d_in: usize,
    d_out: usize,
}

/// Wire form of a superoperator: `{"dIn": n, "dOut": m, "choi": {...}}`.
#[derive(Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ChannelFile {
    pub d_in: usize,
    pub d_out: usize,
    pub choi: ComplexMatrix,
}

impl TryFrom<ChannelFile> for Superoperator {
    type Error = Error;

    fn try_from(file: ChannelFile) -> Result<Self> {
        Superoperator::new(file.choi, file.d_in, file.d_out)
    }
}

impl From<Superoperator> for ChannelFile {
    fn from(s: Superoperator) -> Self {
        ChannelFile { d_in: s.d_in, d_out: s.d_out, choi: s.choi }
    }
}

impl Superoperator {
    pub fn new(choi: ComplexMatrix, d_in: usize, d_out: usize) -> Result<Self> {
        let side = d_out * d_in;
        if !choi.is_square() || choi.rows() != side {
            return dim_mismatch(format!(
                "Choi matrix is {}x{}, expected square of side dOut*dIn = {}",
                choi.rows(),
                choi.cols(),
                side
            ));
        }
        Ok(Superoperator { choi, d_in, d_out })
    }

    pub fn choi(&self) -> &ComplexMatrix {
        &self.choi
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    /// Choi factor layout: output space first, input space second.
    pub fn choi_dims(&self) -> DimPair {
        DimPair::new(self.d_out, self.d_in)
    }

    /// Hex digest over dimensions and raw Choi entries.
    ///
    /// Reports carry this to bind derived quantities to the exact map that
    /// produced them; equality of digests means bit-identical maps.
    pub fn content_hash(&self) -> String {
        use sha2::{Digest, Sha256};
        let mut hasher = Sha256::new();
        hasher.update((self.d_in as u64).to_le_bytes());
        hasher.update((self.d_out as u64).to_le_bytes());
        for r in 0..self.choi.rows() {
            for c in 0..self.choi.cols() {
                let z = self.choi[(r, c)];
                hasher.update(z.re.to_le_bytes());
                hasher.update(z.im.to_le_bytes());
            }
        }
        hex::encode(hasher.finalize())
    }
}

/// Outcome of one property predicate: whether it holds at the configured
/// tolerance, and the measured violation.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct PropertyCheck {
    pub holds: bool,
    pub violation: f64,
}

fn check(violation: f64, tol: f64) -> PropertyCheck {
    PropertyCheck { holds: violation <= tol, violation }
}

/// Classification of a superoperator by the Choi-matrix predicates.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ChannelPropertyReport {
    pub hermiticity_preserving: PropertyCheck,
    pub trace_preserving: PropertyCheck,
    pub trace_annihilating: PropertyCheck,
    pub completely_positive: PropertyCheck,
    pub is_channel: bool,
}

/// Build the Choi matrix of a map given as a closure on input operators.
///
/// Linearity is spot-checked on five seeded random pairs before the matrix
/// units are pushed through; that is a heuristic guard against accidentally
/// nonlinear closures, not a proof of linearity.
pub fn choi_from_applier<F>(apply: F, d_in: usize, d_out: usize, tol: &Tolerances) -> Result<Superoperator>
where
    F: Fn(&ComplexMatrix) -> ComplexMatrix,
{
    let probe = apply(&ComplexMatrix::identity(d_in));
    if !probe.is_square() || probe.rows() != d_out {
        return dim_mismatch(format!(
            "applier output is {}x{}, expected square of side {}",
            probe.rows(),
            probe.cols(),
            d_out
        ));
    }

    let mut rng = stream(0, "choi-linearity-check", 0);
    for _ in 0..5 {
        let x = random_complex(&mut rng, d_in);
        let y = random_complex(&mut rng, d_in);
        let a = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let b = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let combined = apply(&(&x.scaled_complex(a) + &y.scaled_complex(b)));
        let split = &apply(&x).scaled_complex(a) + &apply(&y).scaled_complex(b);
        let violation = combined.max_abs_diff(&split);
        if violation > tol.linearity {
            return Err(Error::NonLinearApplier { violation });
        }
    }

    let side = d_out * d_in;
    let mut choi = ComplexMatrix::zeros(side, side);
    for x1 in 0..d_in {
        for x2 in 0..d_in {
            let block = apply(&ComplexMatrix::matrix_unit(d_in, x1, x2));
            for y1 in 0..d_out {
                for y2 in 0..d_out {
                    choi[(y1 * d_in + x1, y2 * d_in + x2)] = block[(y1, y2)];
                }
            }
        }
    }
    Superoperator::new(choi, d_in, d_out)
}

fn random_complex(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(dim, dim, |_, _| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    })
}

/// Evaluate the map on an input operator.
pub fn apply_choi(s: &Superoperator, x: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !x.is_square() || x.rows() != s.d_in {
        return dim_mismatch(format!(
            "input is {}x{}, expected square of side {}",
            x.rows(),
            x.cols(),
            s.d_in
        ));
    }
    let d_in = s.d_in;
    let out = ComplexMatrix::from_fn(s.d_out, s.d_out, |y1, y2| {
        let mut acc = Complex64::new(0.0, 0.0);
        for x1 in 0..d_in {
            for x2 in 0..d_in {
                acc += x[(x1, x2)] * s.choi[(y1 * d_in + x1, y2 * d_in + x2)];
            }
        }
        acc
    });
    Ok(out)
}

/// Evaluate `map tensor identity` on a probe whose first factor is the
/// map's input space; a single-factor probe gets a trivial ancilla. The
/// result lives on Y tensor Z.
pub fn apply_tensor_identity(s: &Superoperator, rho: &DensityMatrix) -> Result<ComplexMatrix> {
    let dims = rho.probe_dims();
    if dims.first != s.d_in {
        return dim_mismatch(format!(
            "state's first factor is {}, the map expects {}",
            dims.first, s.d_in
        ));
    }
    apply_tensor_identity_mat(s, rho.mat(), dims.second)
}

pub(crate) fn apply_tensor_identity_mat(
    s: &Superoperator,
    rho: &ComplexMatrix,
    d_z: usize,
) -> Result<ComplexMatrix> {
    let d_in = s.d_in;
    let d_out = s.d_out;
    if !rho.is_square() || rho.rows() != d_in * d_z {
        return dim_mismatch(format!(
            "operator is {}x{}, expected square of side {}",
            rho.rows(),
            rho.cols(),
            d_in * d_z
        ));
    }
    let side = d_out * d_z;
    let mut out = ComplexMatrix::zeros(side, side);
    for y1 in 0..d_out {
        for z1 in 0..d_z {
            for y2 in 0..d_out {
                for z2 in 0..d_z {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for x1 in 0..d_in {
                        for x2 in 0..d_in {
                            acc += s.choi[(y1 * d_in + x1, y2 * d_in + x2)]
                                * rho[(x1 * d_z + z1, x2 * d_z + z2)];
                        }
                    }
                    out[(y1 * d_z + z1, y2 * d_z + z2)] = acc;
                }
            }
        }
    }
    Ok(out)
}

/// Adjoint map with respect to the Hilbert-Schmidt inner product.
///
/// Entrywise `J*(x1 a, x2 b) = conj(J(a x1, b x2))`, a pure permutation
/// plus conjugation, so applying it twice restores the input bit for bit.
pub fn adjoint(s: &Superoperator) -> Superoperator {
    let d_in = s.d_in;
    let d_out = s.d_out;
    let side = d_in * d_out;
    let choi = ComplexMatrix::from_fn(side, side, |r, c| {
        let (x1, a) = (r / d_out, r % d_out);
        let (x2, b) = (c / d_out, c % d_out);
        s.choi[(a * d_in + x1, b * d_in + x2)].conj()
    });
    Superoperator { choi, d_in: d_out, d_out: d_in }
}

/// Run all Choi-matrix property predicates at the given tolerances.
pub fn classify(s: &Superoperator, tol: &Tolerances) -> ChannelPropertyReport {
    let hp = check(s.choi.hermiticity_violation(), tol.hermiticity);

    let marginal = partial_trace(&s.choi, s.choi_dims(), Factor::First)
        .expect("Choi side is dOut*dIn by construction");
    let tp_violation = marginal.max_abs_diff(&ComplexMatrix::identity(s.d_in));
    let tp = check(tp_violation, tol.choi_marginal);
    let ta = check(marginal.max_abs(), tol.choi_marginal);

    // Complete positivity needs a Hermitian Choi matrix before its spectrum
    // is meaningful; a non-Hermitian one fails with that violation.
    let cp = if hp.holds {
        let eig = hermitian_eig(&s.choi, tol).expect("hermiticity just checked");
        let min_eig = eig.eigenvalues.last().copied().unwrap_or(0.0);
        check((-min_eig).max(0.0), tol.eigen_zero)
    } else {
        PropertyCheck { holds: false, violation: hp.violation }
    };

    let is_channel = cp.holds && tp.holds;
    ChannelPropertyReport {
        hermiticity_preserving: hp,
        trace_preserving: tp,
        trace_annihilating: ta,
        completely_positive: cp,
        is_channel,
    }
}

/// The identity channel on a `d`-dimensional system.
pub fn identity_channel(d: usize) -> Superoperator {
    let side = d * d;
    let mut choi = ComplexMatrix::zeros(side, side);
    for i in 0..d {
        for j in 0..d {
            choi[(i * d + i, j * d + j)] = Complex64::new(1.0, 0.0);
        }
    }
    Superoperator { choi, d_in: d, d_out: d }
}

/// The totally depolarizing channel `X -> (Tr X / dOut) identity`.
pub fn depolarizing_channel(d_in: usize, d_out: usize) -> Superoperator {
    assert!(d_in >= 1 && d_out >= 1, "channel dimensions must be positive");
    let side = d_out * d_in;
    let choi = ComplexMatrix::identity(side).scaled(1.0 / d_out as f64);
    Superoperator { choi, d_in, d_out }
}

/// Purity-ball sufficient test for separability: a bipartite state of total
/// dimension D with `Tr(sigma^2) <= 1/(D-1)` is separable. The converse
/// fails, so `false` is inconclusive.
pub fn in_separable_ball(sigma: &DensityMatrix) -> Result<bool> {
    let dims = sigma.bipartite_dims()?;
    let total = dims.total();
    if total < 2 {
        return dim_mismatch("purity ball needs total dimension at least 2".to_string());
    }
    Ok(sigma.purity() <= 1.0 / (total as f64 - 1.0))
}

/// PPT necessary test for separability: a separable state stays positive
/// under partial transposition, so `false` certifies entanglement while
/// `true` is inconclusive.
pub fn is_ppt(sigma: &DensityMatrix, tol: &Tolerances) -> Result<bool> {
    let dims = sigma.bipartite_dims()?;
    let pt = partial_transpose(sigma.mat(), dims, Factor::Second)?;
    let eig = hermitian_eig(&pt, tol)?;
    let min_eig = eig.eigenvalues.last().copied().unwrap_or(0.0);
    Ok(min_eig >= -tol.eigen_zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::eig::trace_norm;
    use crate::linalg::trace_product;
    use crate::state::{bell_state, isotropic_state, sample_random_pure, sample_separable};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn tols() -> Tolerances {
        Tolerances::default()
    }

    fn transpose_map(d: usize) -> Superoperator {
        choi_from_applier(|x| x.transpose(), d, d, &tols()).unwrap()
    }

    #[test]
    fn identity_choi_is_unnormalized_bell_projector() {
        let id = choi_from_applier(|x| x.clone(), 2, 2, &tols()).unwrap();
        let bell2 = bell_state(2).mat().scaled(2.0);
        assert!(id.choi().approx_eq(&bell2, 1e-15));
        assert_eq!(id.choi(), identity_channel(2).choi());
    }

    #[test]
    fn trace_map_choi_is_identity() {
        let tr = choi_from_applier(
            |x| ComplexMatrix::identity(2).scaled_complex(x.trace()),
            2,
            2,
            &tols(),
        )
        .unwrap();
        assert!(tr.choi().approx_eq(&ComplexMatrix::identity(4), 1e-15));
    }

    #[test]
    fn transpose_choi_is_swap() {
        let t = transpose_map(2);
        let swap = ComplexMatrix::from_fn(4, 4, |r, col| {
            let (a1, b1) = (r / 2, r % 2);
            let (a2, b2) = (col / 2, col % 2);
            if a1 == b2 && b1 == a2 {
                c(1.0, 0.0)
            } else {
                c(0.0, 0.0)
            }
        });
        assert!(t.choi().approx_eq(&swap, 1e-15));

        let report = classify(&t, &tols());
        assert!(report.hermiticity_preserving.holds);
        assert!(report.trace_preserving.holds);
        assert!(!report.completely_positive.holds);
        assert!((report.completely_positive.violation - 1.0).abs() < 1e-10);
        assert!(!report.is_channel);
    }

    #[test]
    fn nonlinear_applier_is_rejected() {
        let squaring = choi_from_applier(|x| x * x, 2, 2, &tols());
        assert!(matches!(squaring, Err(Error::NonLinearApplier { .. })));
    }

    #[test]
    fn apply_round_trips_the_applier() {
        let mut rng = stream(5, "channel-roundtrip", 0);
        let a = random_complex(&mut rng, 3);
        let map = move |x: &ComplexMatrix| &(&a * x) + &x.transpose().scaled(0.5);
        let s = choi_from_applier(&map, 3, 3, &tols()).unwrap();
        for k in 0..5 {
            let mut rng = stream(6, "channel-roundtrip-input", k);
            let x = random_complex(&mut rng, 3);
            assert!(apply_choi(&s, &x).unwrap().approx_eq(&map(&x), 1e-9));
        }
    }

    #[test]
    fn choi_of_apply_choi_round_trips() {
        for n in 2..=4usize {
            let mut rng = stream(7, "channel-bijection", n as u64);
            let side = n * n;
            let choi = ComplexMatrix::from_fn(side, side, |_, _| {
                c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            });
            let s = Superoperator::new(choi.clone(), n, n).unwrap();
            let rebuilt =
                choi_from_applier(|x| apply_choi(&s, x).unwrap(), n, n, &tols()).unwrap();
            assert!(rebuilt.choi().approx_eq(&choi, 1e-10));
        }
    }

    #[test]
    fn fixed_channel_outputs() {
        let id = identity_channel(3);
        let state = sample_random_pure(3, 9);
        assert!(apply_choi(&id, state.mat()).unwrap().approx_eq(state.mat(), 1e-12));

        let depol = depolarizing_channel(2, 2);
        let out = apply_choi(&depol, state.mat()).unwrap_err();
        assert!(matches!(out, Error::DimensionMismatch { .. }));

        let qubit = sample_random_pure(2, 10);
        let out = apply_choi(&depol, qubit.mat()).unwrap();
        assert!(out.approx_eq(&ComplexMatrix::identity(2).scaled(0.5), 1e-12));

        let t = transpose_map(2);
        let e01 = ComplexMatrix::matrix_unit(2, 0, 1);
        let e10 = ComplexMatrix::matrix_unit(2, 1, 0);
        assert!(apply_choi(&t, &e01).unwrap().approx_eq(&e10, 1e-15));
    }

    #[test]
    fn tensor_identity_application() {
        let rho = isotropic_state(2, 0.7).unwrap();

        let id = identity_channel(2);
        assert!(apply_tensor_identity(&id, &rho).unwrap().approx_eq(rho.mat(), 1e-12));

        let t = transpose_map(2);
        let pt = apply_tensor_identity(&t, &bell_state(2)).unwrap();
        let eig = hermitian_eig(&pt, &tols()).unwrap();
        for i in 0..3 {
            assert!((eig.eigenvalues[i] - 0.5).abs() < 1e-10);
        }
        assert!((eig.eigenvalues[3] + 0.5).abs() < 1e-10);

        let depol = depolarizing_channel(2, 2);
        let out = apply_tensor_identity(&depol, &rho).unwrap();
        let marginal = partial_trace(rho.mat(), DimPair::new(2, 2), Factor::First).unwrap();
        let expected = ComplexMatrix::identity(2).scaled(0.5).tensor(&marginal);
        assert!(out.approx_eq(&expected, 1e-12));
    }

    #[test]
    fn trace_annihilating_maps_yield_traceless_outputs() {
        // X - U X U† with U unitary annihilates traces.
        let u = ComplexMatrix::new(2, 2, vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 1.0)])
            .unwrap();
        let ud = u.dagger();
        let s = choi_from_applier(|x| x - &(&(&u * x) * &ud), 2, 2, &tols());
        let s = match s {
            Ok(s) => s,
            Err(e) => panic!("applier rejected: {e}"),
        };

        let report = classify(&s, &tols());
        assert!(report.trace_annihilating.holds);
        assert!(!report.trace_preserving.holds);
        assert!(report.hermiticity_preserving.holds);

        for seed in 0..20u64 {
            let (_, rho) = sample_separable(DimPair::new(2, 3), 2, seed);
            let out = apply_tensor_identity(&s, &rho).unwrap();
            assert!(out.trace().norm() <= 1e-10);
        }
    }

    #[test]
    fn zero_map_is_trace_annihilating_not_preserving() {
        let zero = Superoperator::new(ComplexMatrix::zeros(4, 4), 2, 2).unwrap();
        let report = classify(&zero, &tols());
        assert!(report.trace_annihilating.holds);
        assert!(!report.trace_preserving.holds);
        assert!(report.completely_positive.holds);
        assert!(!report.is_channel);
    }

    #[test]
    fn adjoint_satisfies_the_pairing_identity() {
        let mut rng = stream(8, "channel-adjoint", 0);
        let side = 6;
        let choi = ComplexMatrix::from_fn(side, side, |_, _| {
            c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let s = Superoperator::new(choi, 3, 2).unwrap();
        let s_adj = adjoint(&s);
        assert_eq!(s_adj.d_in(), 2);
        assert_eq!(s_adj.d_out(), 3);

        for k in 0..5u64 {
            let mut rng = stream(9, "channel-adjoint-pair", k);
            let a = random_complex(&mut rng, 2);
            let b = random_complex(&mut rng, 3);
            let lhs = trace_product(&a.dagger(), &apply_choi(&s, &b).unwrap());
            let rhs = trace_product(&apply_choi(&s_adj, &a).unwrap().dagger(), &b);
            assert!((lhs - rhs).norm() < 1e-9);
        }

        let twice = adjoint(&s_adj);
        assert_eq!(twice.choi(), s.choi());

        let id = identity_channel(2);
        assert_eq!(adjoint(&id).choi(), id.choi());
    }

    #[test]
    fn random_kraus_channels_classify_as_channels() {
        for instance in 0..20u64 {
            let mut rng = stream(10, "channel-kraus", instance);
            let d = 2 + (instance % 2) as usize;
            let kraus_raw: Vec<ComplexMatrix> =
                (0..3).map(|_| random_complex(&mut rng, d)).collect();

            // Normalize so sum A† A = identity.
            let mut gram = ComplexMatrix::zeros(d, d);
            for a in &kraus_raw {
                gram = &gram + &(&a.dagger() * a);
            }
            let eig = hermitian_eig(&gram, &tols()).unwrap();
            let inv_half = ComplexMatrix::from_fn(d, d, |r, col| {
                (0..d)
                    .map(|k| {
                        eig.eigenvectors[(r, k)] * (1.0 / eig.eigenvalues[k].sqrt())
                            * eig.eigenvectors[(col, k)].conj()
                    })
                    .sum()
            });
            let kraus: Vec<ComplexMatrix> = kraus_raw.iter().map(|a| a * &inv_half).collect();

            let s = choi_from_applier(
                |x| {
                    let mut acc = ComplexMatrix::zeros(d, d);
                    for a in &kraus {
                        acc = &acc + &(&(a * x) * &a.dagger());
                    }
                    acc
                },
                d,
                d,
                &tols(),
            )
            .unwrap();
            let report = classify(&s, &tols());
            assert!(report.is_channel, "instance {instance}");
            assert!(report.hermiticity_preserving.holds);
        }
    }

    #[test]
    fn hermiticity_preservation_matches_hermitian_choi() {
        let mut rng = stream(11, "channel-hp", 0);
        let raw = ComplexMatrix::from_fn(4, 4, |_, _| {
            c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });

        let herm = Superoperator::new(raw.symmetrized(), 2, 2).unwrap();
        assert!(classify(&herm, &tols()).hermiticity_preserving.holds);

        let skew = Superoperator::new(raw.clone(), 2, 2).unwrap();
        let report = classify(&skew, &tols());
        assert!(!report.hermiticity_preserving.holds);
        assert!(!report.completely_positive.holds);

        // A Hermitian Choi also means Hermitian outputs on Hermitian inputs.
        let state = sample_random_pure(2, 3);
        let out = apply_choi(&herm, state.mat()).unwrap();
        assert!(out.hermiticity_violation() < 1e-12);
    }

    #[test]
    fn depolarizing_choi_sits_in_the_separable_ball() {
        let depol = depolarizing_channel(3, 2);
        assert!(classify(&depol, &tols()).is_channel);

        let sigma = depol.choi().scaled(1.0 / 3.0);
        let state = crate::state::validate_state(&sigma, &[2, 3], &tols()).unwrap();
        assert!((state.purity() - 1.0 / 6.0).abs() < 1e-12);
        assert!(in_separable_ball(&state).unwrap());
    }

    #[test]
    fn separable_ball_membership_examples() {
        let mixed = isotropic_state(2, 0.0).unwrap();
        assert!(in_separable_ball(&mixed).unwrap());

        assert!(!in_separable_ball(&bell_state(2)).unwrap());

        let iso = isotropic_state(2, 0.2).unwrap();
        assert!((iso.purity() - 0.28).abs() < 1e-12);
        assert!(in_separable_ball(&iso).unwrap());
    }

    #[test]
    fn ppt_diagnostic_flags_entanglement() {
        assert!(!is_ppt(&bell_state(2), &tols()).unwrap());
        assert!(is_ppt(&isotropic_state(2, 0.2).unwrap(), &tols()).unwrap());
        let (_, sep) = sample_separable(DimPair::new(2, 2), 3, 1);
        assert!(is_ppt(&sep, &tols()).unwrap());
    }

    #[test]
    fn channel_files_round_trip_and_check_shape() {
        let depol = depolarizing_channel(2, 3);
        let text = serde_json::to_string(&depol).unwrap();
        assert!(text.contains("\"dIn\":2"));
        assert!(text.contains("\"dOut\":3"));
        let back: Superoperator = serde_json::from_str(&text).unwrap();
        assert_eq!(back, depol);

        let bad = r#"{"dIn":2,"dOut":2,"choi":{"rows":2,"cols":2,"data":[[1,0],[0,0],[0,0],[1,0]]}}"#;
        assert!(serde_json::from_str::<Superoperator>(bad).is_err());
    }

    #[test]
    fn trace_norm_of_transposed_bell_output_is_two() {
        let t = transpose_map(2);
        let pt = apply_tensor_identity(&t, &bell_state(2)).unwrap();
        assert!((trace_norm(&pt, &tols()).unwrap() - 2.0).abs() < 1e-10);
    }
}
