// Copyright 2026 chandisc contributors
// SPDX-License-Identifier: Apache-2.0

//! Central tolerance policy.
//!
//! The identities this toolkit certifies are exact, so every numerical
//! comparison threads through one auditable record instead of ad-hoc
//! constants. Reports embed the record that produced them.

use serde::{Deserialize, Serialize};

/// All numerical thresholds used across the toolkit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Tolerances {
    /// Max |m - m†| entry for a matrix to count as Hermitian.
    pub hermiticity: f64,
    /// Max |apply(aX+bY) - a apply(X) - b apply(Y)| entry in the
    /// linearity spot-check on appliers.
    pub linearity: f64,
    /// Eigenvalues in (-eigen_zero, eigen_zero) are treated as zero
    /// (Jordan splits, negativity sums, rank decisions).
    pub eigen_zero: f64,
    /// Allowed reconstruction error for an eigendecomposition.
    pub reconstruction: f64,
    /// Min eigenvalue a density matrix may have; absorbs eigensolver noise
    /// on boundary states.
    pub psd_floor: f64,
    /// Allowed |Tr - 1| for density matrices.
    pub trace_one: f64,
    /// Max |Tr_Y J - 1| (resp. |Tr_Y J|) for the trace-preserving
    /// (trace-annihilating) Choi checks.
    pub choi_marginal: f64,
    /// Off-diagonal Frobenius mass at which Jacobi sweeps stop.
    pub jacobi_off: f64,
    /// Hard cap on Jacobi sweeps.
    pub jacobi_max_sweeps: usize,
    /// Below this the normalization constant of a positive map, or the
    /// operator norm of Q in the channel-pair construction, counts as zero.
    pub degenerate: f64,
    /// Negativity above this counts as detection.
    pub detection: f64,
    /// Objective change at which see-saw iterations stop.
    pub seesaw_objective: f64,
    /// Iteration cap per see-saw restart.
    pub seesaw_max_iters: usize,
    /// Default number of seeded see-saw restarts.
    pub seesaw_restarts: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            hermiticity: 1e-9,
            linearity: 1e-9,
            eigen_zero: 1e-9,
            reconstruction: 1e-8,
            psd_floor: -1e-9,
            trace_one: 1e-9,
            choi_marginal: 1e-9,
            jacobi_off: 1e-12,
            jacobi_max_sweeps: 100,
            degenerate: 1e-12,
            detection: 1e-8,
            seesaw_objective: 1e-10,
            seesaw_max_iters: 500,
            seesaw_restarts: 20,
        }
    }
}
