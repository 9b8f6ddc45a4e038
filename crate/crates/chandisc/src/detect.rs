// Copyright 2026 chandisc contributors
// SPDX-License-Identifier: Apache-2.0

//! Entanglement detection through positive maps.
//!
//! A positive map that is not completely positive witnesses entanglement:
//! applied to one half of an entangled state it can produce an operator
//! with negative eigenvalues, which never happens on separable states. The
//! registry ships transposition (all dimensions), the reduction map, and a
//! three-dimensional map that detects some states transposition misses.
//! The negativity computed here is the certified quantity the channel-pair
//! construction later converts into a discrimination advantage.

use serde::Serialize;

use crate::channel::{apply_choi, apply_tensor_identity, choi_from_applier, classify, Superoperator};
use crate::construct::{normalize_to_tp, TPNormalization};
use crate::error::{Error, Result};
use crate::linalg::eig::hermitian_eig;
use crate::linalg::ComplexMatrix;
use crate::rng::stream;
use crate::state::DensityMatrix;
use crate::tol::Tolerances;

/// Number of seeded PSD probes in the sampled-positivity check.
const POSITIVITY_PROBES: usize = 200;

/// A named positive map with a certified-at-construction contract.
///
/// Construction verifies hermiticity preservation exactly and positivity
/// by 200 seeded PSD probes. Sampling is a guard, not a proof: a map that
/// passes may still fail positivity off the sampled set, so registry
/// entries are the trusted source and user-supplied maps carry this
/// caveat.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PositiveMapSpec {
    name: String,
    superop: Superoperator,
    domain_dim: usize,
}

impl PositiveMapSpec {
    pub fn new(name: impl Into<String>, superop: Superoperator, tol: &Tolerances) -> Result<Self> {
        let report = classify(&superop, tol);
        if !report.hermiticity_preserving.holds {
            return Err(Error::NotHermiticityPreserving {
                violation: report.hermiticity_preserving.violation,
            });
        }

        let dim = superop.d_in();
        let mut rng = stream(0, "positive-map-probes", 0);
        for probe_index in 0..POSITIVITY_PROBES {
            let probe = if probe_index % 2 == 0 {
                crate::state::sample_random_pure(dim, rng_probe_seed(&mut rng)).mat().clone()
            } else {
                wishart_state(&mut rng, dim)
            };
            let out = apply_choi(&superop, &probe)?;
            let eig = hermitian_eig(&out.symmetrized(), tol)?;
            let min_eigenvalue = eig.eigenvalues.last().copied().unwrap_or(0.0);
            if min_eigenvalue < -tol.eigen_zero {
                return Err(Error::NotPsd { min_eigenvalue });
            }
        }

        Ok(PositiveMapSpec { name: name.into(), superop, domain_dim: dim })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn superop(&self) -> &Superoperator {
        &self.superop
    }

    pub fn domain_dim(&self) -> usize {
        self.domain_dim
    }
}

fn rng_probe_seed(rng: &mut impl rand::Rng) -> u64 {
    rng.gen()
}

fn wishart_state(rng: &mut impl rand::Rng, dim: usize) -> ComplexMatrix {
    use num_complex::Complex64;
    use rand_distr::StandardNormal;
    let g = ComplexMatrix::from_fn(dim, dim, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im)
    });
    let w = &g * &g.dagger();
    w.scaled(1.0 / w.trace().re)
}

/// The builtin registry for one input dimension, in detection order:
/// transposition first (detects every NPT state and is cheapest), then the
/// reduction map, then at dimension three the extra map below.
pub fn builtin_maps(dim: usize, tol: &Tolerances) -> Result<Vec<PositiveMapSpec>> {
    if dim < 2 {
        return Err(Error::UnsupportedDim { dim });
    }

    let transpose = choi_from_applier(|x| x.transpose(), dim, dim, tol)?;
    let reduction = choi_from_applier(
        |x| &ComplexMatrix::identity(dim).scaled_complex(x.trace()) - x,
        dim,
        dim,
        tol,
    )?;

    let mut maps = vec![
        PositiveMapSpec::new("transpose", transpose, tol)?,
        PositiveMapSpec::new("reduction", reduction, tol)?,
    ];

    if dim == 3 {
        // The positive-but-not-completely-positive map on 3x3 inputs with
        // diagonal (x00+x22, x11+x00, x22+x11) and negated off-diagonal;
        // it detects some states with positive partial transpose.
        let choi3 = choi_from_applier(
            |x| {
                ComplexMatrix::from_fn(3, 3, |r, c| {
                    if r == c {
                        x[(r, r)] + x[((r + 2) % 3, (r + 2) % 3)]
                    } else {
                        -x[(r, c)]
                    }
                })
            },
            3,
            3,
            tol,
        )?;
        maps.push(PositiveMapSpec::new("choi-map", choi3, tol)?);
    }

    Ok(maps)
}

/// Negativity of a state under a trace-preserving positive map.
///
/// The witness operator `(map tensor identity)[rho]` has trace one; its
/// negative spectral mass is both `sum |negative eigenvalues|` and
/// `(trace norm - 1)/2`. A strictly positive value certifies entanglement;
/// zero only says this map saw nothing.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct NegativityResult {
    pub value: f64,
    pub negative_eigenvalues: Vec<f64>,
    pub witness_output: ComplexMatrix,
    /// Digest of the trace-preserving map that produced the witness.
    pub phi_tp_hash: String,
}

/// Compute the negativity of `rho` under a normalized (trace-preserving)
/// positive map.
pub fn negativity(
    tp: &TPNormalization,
    rho: &DensityMatrix,
    tol: &Tolerances,
) -> Result<NegativityResult> {
    let report = classify(tp.phi_tp(), tol);
    if !report.trace_preserving.holds {
        return Err(Error::MapNotTracePreserving { violation: report.trace_preserving.violation });
    }

    let witness = apply_tensor_identity(tp.phi_tp(), rho)?;
    let eig = hermitian_eig(&witness, tol)?;
    let negative_eigenvalues: Vec<f64> = eig
        .eigenvalues
        .iter()
        .copied()
        .filter(|&r| r < -tol.eigen_zero)
        .collect();
    // Seeded fold: an empty `Sum` would yield IEEE negative zero.
    let value = negative_eigenvalues.iter().fold(0.0, |acc, r| acc + r.abs());

    Ok(NegativityResult {
        value,
        negative_eigenvalues,
        witness_output: witness,
        phi_tp_hash: tp.phi_tp().content_hash(),
    })
}

/// Outcome of a registry scan for one state.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DetectionResult {
    pub detected: bool,
    /// The first registry map whose negativity cleared the detection
    /// threshold, if any.
    pub map: Option<PositiveMapSpec>,
    pub negativity: f64,
    pub details: Option<NegativityResult>,
}

/// Scan the registry for a map that detects `rho`.
///
/// `detected = false` does not certify separability: the registry is
/// finite, and entangled states outside its reach exist.
pub fn detect_entanglement(rho: &DensityMatrix, tol: &Tolerances) -> Result<DetectionResult> {
    let dims = rho.bipartite_dims()?;
    let maps = match builtin_maps(dims.first, tol) {
        Ok(maps) => maps,
        // A first factor of dimension 1 admits no entanglement at all.
        Err(Error::UnsupportedDim { .. }) => {
            return Ok(DetectionResult { detected: false, map: None, negativity: 0.0, details: None })
        }
        Err(e) => return Err(e),
    };

    for map in maps {
        let tp = normalize_to_tp(&map, tol)?;
        let result = negativity(&tp, rho, tol)?;
        if result.value > tol.detection {
            return Ok(DetectionResult {
                detected: true,
                negativity: result.value,
                map: Some(map),
                details: Some(result),
            });
        }
    }

    Ok(DetectionResult { detected: false, map: None, negativity: 0.0, details: None })
}

/// Standard negativity under transposition, computed directly from the
/// partial transpose. Used as the oracle the map-based route must match.
pub fn standard_transpose_negativity(rho: &DensityMatrix, tol: &Tolerances) -> Result<f64> {
    let dims = rho.bipartite_dims()?;
    let pt = crate::linalg::partial_transpose(rho.mat(), dims, crate::linalg::Factor::First)?;
    let norm = crate::linalg::eig::trace_norm(&pt, tol)?;
    Ok((norm - 1.0) / 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::eig::trace_norm;
    use crate::linalg::DimPair;
    use crate::state::{bell_state, isotropic_state, sample_separable};

    fn tols() -> Tolerances {
        Tolerances::default()
    }

    fn transpose_tp(dim: usize) -> TPNormalization {
        let maps = builtin_maps(dim, &tols()).unwrap();
        normalize_to_tp(&maps[0], &tols()).unwrap()
    }

    #[test]
    fn registry_contents_by_dimension() {
        assert!(matches!(builtin_maps(1, &tols()), Err(Error::UnsupportedDim { dim: 1 })));

        let two = builtin_maps(2, &tols()).unwrap();
        let names: Vec<&str> = two.iter().map(|m| m.name()).collect();
        assert_eq!(names, ["transpose", "reduction"]);

        let three = builtin_maps(3, &tols()).unwrap();
        let names: Vec<&str> = three.iter().map(|m| m.name()).collect();
        assert_eq!(names, ["transpose", "reduction", "choi-map"]);

        let four = builtin_maps(4, &tols()).unwrap();
        assert_eq!(four.len(), 2);
    }

    #[test]
    fn transpose_registry_choi_is_swap() {
        let maps = builtin_maps(2, &tols()).unwrap();
        let swap = ComplexMatrix::from_fn(4, 4, |r, c| {
            let (a1, b1) = (r / 2, r % 2);
            let (a2, b2) = (c / 2, c % 2);
            if a1 == b2 && b1 == a2 {
                num_complex::Complex64::new(1.0, 0.0)
            } else {
                num_complex::Complex64::new(0.0, 0.0)
            }
        });
        assert!(maps[0].superop().choi().approx_eq(&swap, 1e-15));
    }

    #[test]
    fn sampled_positivity_rejects_a_non_positive_map() {
        // Shifting the diagonal by the wrong cyclic neighbor breaks
        // positivity (the uniform vector input exposes it).
        let bad = choi_from_applier(
            |x| {
                ComplexMatrix::from_fn(3, 3, |r, c| {
                    if r == c {
                        x[((r + 1) % 3, (r + 1) % 3)]
                    } else {
                        -x[(r, c)]
                    }
                })
            },
            3,
            3,
            &tols(),
        )
        .unwrap();
        assert!(matches!(
            PositiveMapSpec::new("bad", bad, &tols()),
            Err(Error::NotPsd { .. })
        ));

        // A linear map that is not Hermiticity-preserving fails earlier.
        let shift = ComplexMatrix::matrix_unit(2, 0, 1);
        let skew = choi_from_applier(|x| x * &shift, 2, 2, &tols()).unwrap();
        assert!(matches!(
            PositiveMapSpec::new("skew", skew, &tols()),
            Err(Error::NotHermiticityPreserving { .. })
        ));
    }

    #[test]
    fn negativity_requires_a_trace_preserving_map() {
        let doubled = Superoperator::new(
            crate::channel::identity_channel(2).choi().scaled(2.0),
            2,
            2,
        )
        .unwrap();
        let fake = TPNormalization::from_parts(
            doubled.clone(),
            1.0,
            test_support::raw_positive_map("doubled", doubled),
        );
        assert!(matches!(
            negativity(&fake, &bell_state(2), &tols()),
            Err(Error::MapNotTracePreserving { .. })
        ));
    }

    #[test]
    fn bell_negativity_under_transposition_is_one_half() {
        let tp = transpose_tp(2);
        let result = negativity(&tp, &bell_state(2), &tols()).unwrap();
        assert!((result.value - 0.5).abs() < 1e-10);
        assert_eq!(result.negative_eigenvalues.len(), 1);
        assert!((result.negative_eigenvalues[0] + 0.5).abs() < 1e-10);

        // Trace-norm form of the same quantity.
        let tn = trace_norm(&result.witness_output, &tols()).unwrap();
        assert!(((tn - 1.0) / 2.0 - result.value).abs() < 1e-8);
        assert_eq!(result.phi_tp_hash, tp.phi_tp().content_hash());
    }

    #[test]
    fn isotropic_negativity_profile() {
        let tp = transpose_tp(2);
        for (v, expected) in [(1.0, 0.5), (0.5, 0.125), (1.0 / 3.0, 0.0), (0.2, 0.0), (0.0, 0.0)] {
            let rho = isotropic_state(2, v).unwrap();
            let result = negativity(&tp, &rho, &tols()).unwrap();
            assert!(
                (result.value - expected).abs() < 1e-9,
                "visibility {v}: negativity {} vs {expected}",
                result.value
            );
        }
    }

    #[test]
    fn map_negativity_matches_standard_negativity_for_transposition() {
        let tp = transpose_tp(2);
        for seed in 0..20u64 {
            let rho = random_two_qubit_state(seed);
            let via_map = negativity(&tp, &rho, &tols()).unwrap().value;
            let standard = standard_transpose_negativity(&rho, &tols()).unwrap();
            assert!((via_map - standard).abs() < 1e-9, "seed {seed}");
        }
    }

    fn random_two_qubit_state(seed: u64) -> DensityMatrix {
        // Mix of a random pure state and separable noise keeps both
        // entangled and unentangled instances in the loop.
        let pure = crate::state::sample_random_pure(4, seed);
        let (_, sep) = sample_separable(DimPair::new(2, 2), 2, seed);
        let w = 0.1 + 0.8 * ((seed % 10) as f64) / 10.0;
        let mat = &pure.mat().scaled(w) + &sep.mat().scaled(1.0 - w);
        crate::state::validate_state(&mat, &[2, 2], &tols()).unwrap()
    }

    #[test]
    fn separable_states_have_zero_negativity_under_every_registry_map() {
        for &(dx, dz) in &[(2usize, 2usize), (2, 3), (3, 3)] {
            let maps = builtin_maps(dx, &tols()).unwrap();
            let tps: Vec<TPNormalization> =
                maps.iter().map(|m| normalize_to_tp(m, &tols()).unwrap()).collect();
            for seed in 0..500u64 {
                let (_, rho) = sample_separable(DimPair::new(dx, dz), 3, seed);
                for tp in &tps {
                    let value = negativity(tp, &rho, &tols()).unwrap().value;
                    assert!(
                        value <= 1e-9,
                        "dims ({dx},{dz}), seed {seed}, map {}: negativity {value}",
                        tp.original().name()
                    );
                }
            }
        }
    }

    #[test]
    fn negativity_is_nonnegative_by_construction() {
        let tp = transpose_tp(2);
        for seed in 0..50u64 {
            let rho = random_two_qubit_state(seed);
            let result = negativity(&tp, &rho, &tols()).unwrap();
            assert!(result.value >= 0.0);
            assert!(result.negative_eigenvalues.iter().all(|&r| r < 0.0));
            let recomputed: f64 = result.negative_eigenvalues.iter().map(|r| r.abs()).sum();
            assert!((result.value - recomputed).abs() < 1e-10);
        }
    }

    #[test]
    fn zero_negativity_is_positive_zero() {
        // An empty eigenvalue list must not leak IEEE negative zero into
        // reports.
        let tp = transpose_tp(2);
        let rho = crate::state::isotropic_state(2, 0.0).unwrap();
        let result = negativity(&tp, &rho, &tols()).unwrap();
        assert!(result.negative_eigenvalues.is_empty());
        assert_eq!(result.value.to_bits(), 0.0f64.to_bits());
    }

    #[test]
    fn detection_scan_oracle_cases() {
        let bell3 = bell_state(3);
        let hit = detect_entanglement(&bell3, &tols()).unwrap();
        assert!(hit.detected);
        assert_eq!(hit.map.as_ref().unwrap().name(), "transpose");
        assert!(hit.negativity > 0.9);

        let (_, sep) = sample_separable(DimPair::new(3, 3), 4, 77);
        let miss = detect_entanglement(&sep, &tols()).unwrap();
        assert!(!miss.detected);
        assert!(miss.map.is_none());

        let iso = isotropic_state(2, 0.5).unwrap();
        let hit = detect_entanglement(&iso, &tols()).unwrap();
        assert!(hit.detected);
        assert!((hit.negativity - 0.125).abs() < 1e-9);
    }

    #[test]
    fn single_factor_first_dimension_is_never_detected() {
        let mat = ComplexMatrix::identity(3).scaled(1.0 / 3.0);
        let rho = crate::state::validate_state(&mat, &[1, 3], &tols()).unwrap();
        let result = detect_entanglement(&rho, &tols()).unwrap();
        assert!(!result.detected);
    }

    #[test]
    fn applying_the_map_to_the_wrong_factor_dimension_errors() {
        let tp = transpose_tp(3);
        let rho = bell_state(2);
        assert!(matches!(
            negativity(&tp, &rho, &tols()),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
