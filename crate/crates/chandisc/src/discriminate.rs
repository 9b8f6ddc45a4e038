// Copyright 2026 chandisc contributors
// SPDX-License-Identifier: Apache-2.0

//! The discrimination game and its figures of merit.
//!
//! One of two known channels is applied to a probe, possibly entangled
//! with an ancilla kept on the side, and a binary measurement guesses
//! which. The optimal guess is the Helstrom measurement of the two output
//! states, with error probability set by their trace distance. For a
//! channel pair built by this crate the probe distance equals
//! `2c (1 + N)` with `N` the probe's certified negativity, while no
//! separable probe can beat `2c`; the gap is the advantage an entangled
//! probe buys. See-saw ascent estimates the best unentangled probe and a
//! lower bound on the diamond distance, and a seeded sampler plays the
//! game shot by shot.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::channel::{adjoint, apply_tensor_identity, apply_tensor_identity_mat, Superoperator};
use crate::construct::{ChannelPair, EBPair};
use crate::detect::NegativityResult;
use crate::error::{Error, Result};
use crate::linalg::eig::{hermitian_eig, trace_norm};
use crate::linalg::{normalized, outer, ComplexMatrix};
use crate::rng::stream;
use crate::state::DensityMatrix;
use crate::tol::Tolerances;

/// A two-outcome measurement: positive operators summing to the identity.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BinaryPovm {
    pub m0: ComplexMatrix,
    pub m1: ComplexMatrix,
}

/// Optimal discrimination data for one pair of states.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct HelstromResult {
    /// Error probability of the best measurement under a uniform prior.
    pub p_error_min: f64,
    /// Trace norm of the difference of the two states, in `[0, 2]`.
    pub trace_distance: f64,
    pub measurement: BinaryPovm,
}

/// Helstrom measurement and minimum error for two density operators.
///
/// The first element projects onto the nonnegative eigenspace of
/// `rho0 - rho1`; eigenvalues at exactly zero are routed to the first
/// outcome, which keeps the measurement deterministic.
pub fn helstrom(rho0: &ComplexMatrix, rho1: &ComplexMatrix, tol: &Tolerances) -> Result<HelstromResult> {
    if rho0.rows() != rho1.rows() || rho0.cols() != rho1.cols() {
        return crate::error::dim_mismatch(format!(
            "state shapes {}x{} and {}x{} differ",
            rho0.rows(),
            rho0.cols(),
            rho1.rows(),
            rho1.cols()
        ));
    }
    let delta = (rho0 - rho1).symmetrized();
    let eig = hermitian_eig(&delta, tol)?;

    let side = delta.rows();
    let mut m0 = ComplexMatrix::zeros(side, side);
    let mut trace_distance = 0.0;
    for (k, &value) in eig.eigenvalues.iter().enumerate() {
        trace_distance += value.abs();
        if value >= 0.0 {
            m0 = &m0 + &outer(&eig.eigenvector(k));
        }
    }
    let m1 = &ComplexMatrix::identity(side) - &m0;

    Ok(HelstromResult {
        p_error_min: 0.5 * (1.0 - 0.5 * trace_distance),
        trace_distance,
        measurement: BinaryPovm { m0, m1 },
    })
}

/// Distance of the two channel outputs on one shared probe:
/// the trace norm of `(Psi0 (x) 1 - Psi1 (x) 1)[rho]`.
pub fn probe_distance(
    psi0: &Superoperator,
    psi1: &Superoperator,
    rho: &DensityMatrix,
    tol: &Tolerances,
) -> Result<f64> {
    let out0 = apply_tensor_identity(psi0, rho)?;
    let out1 = apply_tensor_identity(psi1, rho)?;
    trace_norm(&(&out0 - &out1), tol)
}

/// Progress record of one see-saw run.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct OptimizationTrace {
    pub starts: usize,
    pub total_iterations: usize,
    /// Index of the start that produced the reported value.
    pub best_start: usize,
    pub best_converged: bool,
    pub seed: u64,
}

/// Outcome of a see-saw ascent over probes.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SeesawResult {
    /// Largest output trace distance found.
    pub value: f64,
    /// Probe density operator achieving `value`.
    pub best_input: ComplexMatrix,
    /// Helstrom measurement at the best probe.
    pub measurement: BinaryPovm,
    pub trace: OptimizationTrace,
}

/// Alternating ascent of `|| (Psi0 - Psi1) (x) 1_Z [rho] ||_1` over probes
/// on the input space times a `d_z`-dimensional ancilla.
///
/// Each round takes the sign measurement of the current output difference
/// and then the top eigenvector of the pulled-back observable; both steps
/// only increase the objective, so every start yields a certified lower
/// bound and warm starts are never lost.
fn seesaw(
    psi0: &Superoperator,
    psi1: &Superoperator,
    d_z: usize,
    warm_starts: &[ComplexMatrix],
    label: &str,
    seed: u64,
    tol: &Tolerances,
) -> Result<SeesawResult> {
    if psi0.d_in() != psi1.d_in() || psi0.d_out() != psi1.d_out() {
        return crate::error::dim_mismatch(format!(
            "channel shapes {}->{} and {}->{} differ",
            psi0.d_in(),
            psi0.d_out(),
            psi1.d_in(),
            psi1.d_out()
        ));
    }
    let d_in = psi0.d_in();
    let side = d_in * d_z;

    let diff = Superoperator::new(psi0.choi() - psi1.choi(), d_in, psi0.d_out())?;
    let pull_back = adjoint(&diff);

    let mut starts: Vec<ComplexMatrix> = Vec::new();
    for warm in warm_starts {
        if !warm.is_square() || warm.rows() != side {
            return crate::error::dim_mismatch(format!(
                "warm start side {} does not match probe side {side}",
                warm.rows()
            ));
        }
        starts.push(warm.clone());
    }
    if d_z == 1 {
        for j in 0..d_in {
            starts.push(outer(&crate::linalg::basis_vector(d_in, j)));
        }
        let uniform: Vec<Complex64> =
            vec![Complex64::new(1.0 / (d_in as f64).sqrt(), 0.0); d_in];
        starts.push(outer(&uniform));
    } else {
        let pairs = d_in.min(d_z);
        let mut entangled = vec![Complex64::new(0.0, 0.0); side];
        for i in 0..pairs {
            entangled[i * d_z + i] = Complex64::new(1.0 / (pairs as f64).sqrt(), 0.0);
        }
        starts.push(outer(&entangled));
        starts.push(ComplexMatrix::identity(side).scaled(1.0 / side as f64));
    }
    let mut rng = stream(seed, label, 0);
    for _ in 0..tol.seesaw_restarts {
        let v: Vec<Complex64> = (0..side)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        starts.push(outer(&normalized(&v)));
    }

    let mut best_value = f64::NEG_INFINITY;
    let mut best_input = starts[0].clone();
    let mut best_m0 = ComplexMatrix::identity(psi0.d_out() * d_z);
    let mut best_start = 0;
    let mut best_converged = false;
    let mut total_iterations = 0;

    for (start_index, start) in starts.iter().enumerate() {
        let mut rho = start.clone();
        let mut previous = f64::NEG_INFINITY;
        let mut converged = false;
        let mut improved_here = false;

        for _ in 0..tol.seesaw_max_iters {
            total_iterations += 1;
            let out = apply_tensor_identity_mat(&diff, &rho, d_z)?.symmetrized();
            let eig = hermitian_eig(&out, tol)?;

            let mut value = 0.0;
            let side_out = out.rows();
            let mut m0 = ComplexMatrix::zeros(side_out, side_out);
            for (k, &lam) in eig.eigenvalues.iter().enumerate() {
                value += lam.abs();
                if lam >= 0.0 {
                    m0 = &m0 + &outer(&eig.eigenvector(k));
                }
            }

            if value > best_value {
                best_value = value;
                best_input = rho.clone();
                best_m0 = m0.clone();
                improved_here = true;
            }
            if (value - previous).abs() < tol.seesaw_objective {
                converged = true;
                break;
            }
            previous = value;

            let observable = &m0.scaled(2.0) - &ComplexMatrix::identity(side_out);
            let pulled = apply_tensor_identity_mat(&pull_back, &observable, d_z)?.symmetrized();
            let input_eig = hermitian_eig(&pulled, tol)?;
            rho = outer(&input_eig.eigenvector(0));
        }

        if improved_here {
            best_start = start_index;
            best_converged = converged;
        }
    }

    let out_side = psi0.d_out() * d_z;
    Ok(SeesawResult {
        value: best_value,
        best_input,
        measurement: BinaryPovm {
            m1: &ComplexMatrix::identity(out_side) - &best_m0,
            m0: best_m0,
        },
        trace: OptimizationTrace {
            starts: starts.len(),
            total_iterations,
            best_start,
            best_converged,
            seed,
        },
    })
}

/// Best output distance over probes carrying no ancilla, by see-saw
/// ascent. A lower bound on the unassisted channel distance; exact
/// whenever the ascent reaches the global maximum.
pub fn channel_distance_no_ancilla(
    psi0: &Superoperator,
    psi1: &Superoperator,
    seed: u64,
    tol: &Tolerances,
) -> Result<SeesawResult> {
    seesaw(psi0, psi1, 1, &[], "seesaw-no-ancilla", seed, tol)
}

/// See-saw lower bound on the diamond distance, probing with an ancilla
/// of the input dimension, which is enough for the diamond norm's
/// maximum.
pub fn diamond_lower_bound(
    psi0: &Superoperator,
    psi1: &Superoperator,
    seed: u64,
    tol: &Tolerances,
) -> Result<SeesawResult> {
    seesaw(psi0, psi1, psi0.d_in().max(1), &[], "seesaw-diamond", seed, tol)
}

/// Full comparison of one probe against the best unentangled strategy for
/// one channel pair.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DiscriminationReport {
    /// Effective difference scale: `c` for a plain pair, `p c` after
    /// mixing.
    pub c: f64,
    /// Weight kept on the original channels; one for an unmixed pair.
    pub mixing_weight: f64,
    /// Certified negativity of the probe under the generating map.
    pub negativity: f64,
    pub probe_distance: f64,
    /// See-saw estimate of the best unentangled probe's distance.
    pub separable_bound: f64,
    /// Proven ceiling for unentangled probes: `2c`.
    pub closed_form_bound: f64,
    /// Probe distance minus the larger of the two separable bounds.
    pub advantage: f64,
    /// The identity the construction promises: `2 c N`.
    pub predicted_advantage: f64,
    pub diamond_lower_bound: f64,
    pub probe_success_probability: f64,
    pub separable_success_probability: f64,
    #[serde(rename = "phiTPHash")]
    pub phi_tp_hash: String,
    pub seed: u64,
    pub no_ancilla: OptimizationTrace,
    pub diamond: OptimizationTrace,
}

/// Assemble the discrimination report for a constructed pair and a probe
/// whose negativity was certified against the same generating map.
pub fn advantage_report(
    pair: &ChannelPair,
    rho: &DensityMatrix,
    negativity: &NegativityResult,
    seed: u64,
    tol: &Tolerances,
) -> Result<DiscriminationReport> {
    report_impl(
        &pair.psi0,
        &pair.psi1,
        pair.c,
        1.0,
        pair.phi_tp_hash.as_deref(),
        rho,
        negativity,
        seed,
        tol,
    )
}

/// The same report for an entanglement-broken mixture of the pair; every
/// figure scales with the mixing weight.
pub fn eb_advantage_report(
    eb: &EBPair,
    rho: &DensityMatrix,
    negativity: &NegativityResult,
    seed: u64,
    tol: &Tolerances,
) -> Result<DiscriminationReport> {
    report_impl(
        &eb.xi0,
        &eb.xi1,
        eb.c,
        eb.p,
        eb.phi_tp_hash.as_deref(),
        rho,
        negativity,
        seed,
        tol,
    )
}

#[allow(clippy::too_many_arguments)]
fn report_impl(
    psi0: &Superoperator,
    psi1: &Superoperator,
    c_base: f64,
    weight: f64,
    pair_hash: Option<&str>,
    rho: &DensityMatrix,
    negativity: &NegativityResult,
    seed: u64,
    tol: &Tolerances,
) -> Result<DiscriminationReport> {
    let verified_hash = match pair_hash {
        Some(hash) if hash == negativity.phi_tp_hash => hash.to_string(),
        other => {
            return Err(Error::InconsistentProvenance {
                pair_hash: other.unwrap_or("unset").to_string(),
                negativity_hash: negativity.phi_tp_hash.clone(),
            })
        }
    };

    let c = weight * c_base;
    let closed_form_bound = 2.0 * c;

    let probe_distance = probe_distance(psi0, psi1, rho, tol)?;
    let no_ancilla = channel_distance_no_ancilla(psi0, psi1, seed, tol)?;
    let separable_bound = no_ancilla.value;

    // Warm starts: the given probe (padded onto the engine's ancilla when
    // needed) and the best unentangled probe; monotone ascent then makes
    // the diamond bound at least as large as the other two figures, and
    // the final max removes roundoff between the two evaluation routes.
    let probe_dims = rho.probe_dims();
    let d_z = psi0.d_in().max(probe_dims.second);
    let warm_probe = pad_ancilla(rho.mat(), probe_dims.first, probe_dims.second, d_z);
    let warm_separable = pad_ancilla(&no_ancilla.best_input, psi0.d_in(), 1, d_z);
    let diamond = seesaw(
        psi0,
        psi1,
        d_z,
        &[warm_probe, warm_separable],
        "seesaw-diamond",
        seed,
        tol,
    )?;
    let diamond_lower_bound = diamond.value.max(probe_distance).max(separable_bound);

    let advantage = probe_distance - separable_bound.max(closed_form_bound);
    Ok(DiscriminationReport {
        c,
        mixing_weight: weight,
        negativity: negativity.value,
        probe_distance,
        separable_bound,
        closed_form_bound,
        advantage,
        predicted_advantage: 2.0 * c * negativity.value,
        diamond_lower_bound,
        probe_success_probability: 0.5 + 0.25 * probe_distance,
        separable_success_probability: 0.5 + 0.25 * separable_bound,
        phi_tp_hash: verified_hash,
        seed,
        no_ancilla: no_ancilla.trace,
        diamond: diamond.trace,
    })
}

/// Embed a probe on `d_x (x) d_z` into a larger ancilla `d_z_new >= d_z`,
/// keeping the channel-input factor untouched.
fn pad_ancilla(rho: &ComplexMatrix, d_x: usize, d_z: usize, d_z_new: usize) -> ComplexMatrix {
    if d_z == d_z_new {
        return rho.clone();
    }
    let side = d_x * d_z_new;
    ComplexMatrix::from_fn(side, side, |row, col| {
        let (x1, z1) = (row / d_z_new, row % d_z_new);
        let (x2, z2) = (col / d_z_new, col % d_z_new);
        if z1 < d_z && z2 < d_z {
            rho[(x1 * d_z + z1, x2 * d_z + z2)]
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// Result of playing the discrimination game shot by shot.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SimulationResult {
    pub shots: u64,
    pub successes: u64,
    pub success_rate: f64,
    /// Exact success probability of the supplied measurement.
    pub expected_success_rate: f64,
    /// Normal-approximation standard error of the empirical rate.
    pub std_error: f64,
    pub ci95_low: f64,
    pub ci95_high: f64,
    pub seed: u64,
}

/// Play the game: each shot picks one of the two states uniformly,
/// measures with the supplied two-outcome measurement, and counts correct
/// guesses. Fully determined by the seed.
pub fn simulate_experiment(
    rho0: &ComplexMatrix,
    rho1: &ComplexMatrix,
    povm: &BinaryPovm,
    shots: u64,
    seed: u64,
    tol: &Tolerances,
) -> Result<SimulationResult> {
    if shots == 0 {
        return Err(Error::ParameterOutOfRange { name: "shots", value: 0.0 });
    }
    let side = rho0.rows();
    if !rho0.is_square() || !rho1.is_square() || rho1.rows() != side {
        return Err(Error::InvalidPovm {
            detail: "states must be square and share one dimension".to_string(),
        });
    }
    for (name, m) in [("m0", &povm.m0), ("m1", &povm.m1)] {
        if !m.is_square() || m.rows() != side {
            return Err(Error::InvalidPovm {
                detail: format!("{name} must be {side}x{side} to act on the states"),
            });
        }
        let violation = m.hermiticity_violation();
        if violation > tol.hermiticity {
            return Err(Error::InvalidPovm {
                detail: format!("{name} is not Hermitian (violation {violation:.3e})"),
            });
        }
        let eig = hermitian_eig(&m.symmetrized(), tol)?;
        let min_eig = eig.eigenvalues.last().copied().unwrap_or(0.0);
        if min_eig < -tol.eigen_zero {
            return Err(Error::InvalidPovm {
                detail: format!("{name} has negative eigenvalue {min_eig:.3e}"),
            });
        }
    }
    let completeness = (&povm.m0 + &povm.m1).max_abs_diff(&ComplexMatrix::identity(side));
    if completeness > tol.hermiticity {
        return Err(Error::InvalidPovm {
            detail: format!("elements sum to identity only within {completeness:.3e}"),
        });
    }

    let p0 = crate::linalg::trace_product(rho0, &povm.m0).re.clamp(0.0, 1.0);
    let p1 = crate::linalg::trace_product(rho1, &povm.m1).re.clamp(0.0, 1.0);
    let expected_success_rate = 0.5 * (p0 + p1);

    let mut rng = stream(seed, "simulate-experiment", 0);
    let mut successes = 0u64;
    for _ in 0..shots {
        let hypothesis_zero = rng.gen::<f64>() < 0.5;
        let success_probability = if hypothesis_zero { p0 } else { p1 };
        if rng.gen::<f64>() < success_probability {
            successes += 1;
        }
    }

    let success_rate = successes as f64 / shots as f64;
    let std_error = (success_rate * (1.0 - success_rate) / shots as f64).sqrt();
    Ok(SimulationResult {
        shots,
        successes,
        success_rate,
        expected_success_rate,
        std_error,
        ci95_low: (success_rate - 1.96 * std_error).max(0.0),
        ci95_high: (success_rate + 1.96 * std_error).min(1.0),
        seed,
    })
}
