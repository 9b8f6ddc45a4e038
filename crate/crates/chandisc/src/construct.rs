// Copyright 2026 chandisc contributors
// SPDX-License-Identifier: Apache-2.0

//! Turning a positive map into a pair of quantum channels.
//!
//! The pipeline has three steps. First the map is rescaled and padded with
//! one extra output coordinate so it becomes trace preserving without
//! losing its detection power. Second, subtracting the full trace into a
//! further appended coordinate yields a trace-annihilating map. Third, the
//! Jordan decomposition of that map splits it into two completely positive
//! halves which, after a shared completion term, become channels whose
//! difference is a known multiple of the original map. Every entangled
//! state a map detects turns into a discrimination advantage for the pair
//! built from it.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::channel::{
    choi_from_applier, classify, depolarizing_channel, in_separable_ball, Superoperator,
};
use crate::detect::{detect_entanglement, negativity, NegativityResult, PositiveMapSpec};
use crate::error::{dim_mismatch, Error, Result};
use crate::linalg::eig::hermitian_eig;
use crate::linalg::{outer, partial_trace, ComplexMatrix, Factor};
use crate::state::DensityMatrix;
use crate::tol::Tolerances;

/// A positive map rescaled and padded into a trace-preserving positive map.
///
/// The padded map acts into a space one dimension larger: the original
/// output occupies the leading coordinates scaled by `1/lambda`, and the
/// appended last coordinate absorbs the missing trace. The result is trace
/// preserving but still not completely positive whenever the original map
/// was not, which is what makes it useful downstream.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TPNormalization {
    phi_tp: Superoperator,
    lambda: f64,
    original: PositiveMapSpec,
}

impl TPNormalization {
    pub fn phi_tp(&self) -> &Superoperator {
        &self.phi_tp
    }

    /// The largest eigenvalue of the input marginal of the original map;
    /// the smallest scale that keeps the completion term positive.
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn original(&self) -> &PositiveMapSpec {
        &self.original
    }

    #[cfg(test)]
    pub(crate) fn from_parts(
        phi_tp: Superoperator,
        lambda: f64,
        original: PositiveMapSpec,
    ) -> Self {
        TPNormalization { phi_tp, lambda, original }
    }
}

/// Rescale a positive map and append one output coordinate so the result
/// is trace preserving.
///
/// With `M` the input marginal of the map and `lambda` its largest
/// eigenvalue, the padded map sends `X` to the original output over
/// `lambda` in the leading block plus `Tr(X (1 - M/lambda)^T)` in the
/// appended diagonal corner; its marginal is exactly the identity.
pub fn normalize_to_tp(map: &PositiveMapSpec, tol: &Tolerances) -> Result<TPNormalization> {
    let omega = map.superop();
    let d_in = omega.d_in();
    let d_out = omega.d_out();

    let marginal = partial_trace(omega.choi(), omega.choi_dims(), Factor::First)?;
    let eig = hermitian_eig(&marginal.symmetrized(), tol)?;
    let lambda = eig.eigenvalues.first().copied().unwrap_or(0.0);
    if lambda <= tol.degenerate {
        return Err(Error::DegenerateMap { lambda });
    }

    let inv_lambda = 1.0 / lambda;
    let d_pad = d_out + 1;
    let side = d_pad * d_in;
    let choi = ComplexMatrix::from_fn(side, side, |row, col| {
        let (y1, x1) = (row / d_in, row % d_in);
        let (y2, x2) = (col / d_in, col % d_in);
        if y1 < d_out && y2 < d_out {
            omega.choi()[(y1 * d_in + x1, y2 * d_in + x2)] * inv_lambda
        } else if y1 == d_out && y2 == d_out {
            let unit = if x1 == x2 { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) };
            unit - marginal[(x1, x2)] * inv_lambda
        } else {
            Complex64::new(0.0, 0.0)
        }
    });

    let phi_tp = Superoperator::new(choi, d_in, d_pad)?;
    Ok(TPNormalization { phi_tp, lambda, original: map.clone() })
}

/// Append one more output coordinate carrying `-Tr(X)` so a trace-
/// preserving map becomes trace annihilating. The difference-of-channels
/// construction consumes the result.
pub fn build_ta(phi_tp: &Superoperator, tol: &Tolerances) -> Result<Superoperator> {
    let report = classify(phi_tp, tol);
    if !report.trace_preserving.holds {
        return Err(Error::MapNotTracePreserving { violation: report.trace_preserving.violation });
    }

    let d_in = phi_tp.d_in();
    let d_out = phi_tp.d_out();
    let d_pad = d_out + 1;
    let side = d_pad * d_in;
    let choi = ComplexMatrix::from_fn(side, side, |row, col| {
        let (y1, x1) = (row / d_in, row % d_in);
        let (y2, x2) = (col / d_in, col % d_in);
        if y1 < d_out && y2 < d_out {
            phi_tp.choi()[(y1 * d_in + x1, y2 * d_in + x2)]
        } else if y1 == d_out && y2 == d_out && x1 == x2 {
            Complex64::new(-1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });

    Superoperator::new(choi, d_in, d_pad)
}

/// How the common completion term of the two channels is realized.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum XiMode {
    /// Place the completion operator in the last output coordinate. Always
    /// applicable.
    #[default]
    Block,
    /// Use a rank-one completion built from a purification of the missing
    /// marginal. Needs output dimension at least the rank of `1 - cQ`.
    Purification,
}

/// Two channels whose difference is `c` times a trace-annihilating map.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ChannelPair {
    pub psi0: Superoperator,
    pub psi1: Superoperator,
    /// Scale factor relating the channel difference to the generating map.
    pub c: f64,
    /// Common input marginal of the two Jordan halves.
    pub q: ComplexMatrix,
    /// Completion term shared by both channels.
    pub xi: ComplexMatrix,
    /// The trace-annihilating map the pair was built from.
    #[serde(rename = "phiTA")]
    pub phi_ta: Superoperator,
    /// Spectral mass below the eigenvalue cutoff dropped by the Jordan
    /// split.
    pub jordan_discarded_mass: f64,
    /// Digest of the trace-preserving map upstream of `phiTA`, when the
    /// pair was built from one; binds negativity results to this pair.
    #[serde(rename = "phiTPHash")]
    pub phi_tp_hash: Option<String>,
}

impl ChannelPair {
    pub fn d_in(&self) -> usize {
        self.psi0.d_in()
    }

    pub fn d_out(&self) -> usize {
        self.psi0.d_out()
    }

    /// Largest probe distance achievable without entanglement: `2c`.
    pub fn separable_ceiling(&self) -> f64 {
        2.0 * self.c
    }
}

/// Split a trace-annihilating map into a channel pair with the default
/// block completion.
pub fn channel_pair_from_ta(phi_ta: &Superoperator, tol: &Tolerances) -> Result<ChannelPair> {
    channel_pair_from_ta_with(phi_ta, XiMode::Block, tol)
}

/// Split a trace-annihilating map `Phi` into channels `Psi0, Psi1` with
/// `Psi0 - Psi1 = c Phi`.
///
/// The Jordan decomposition of the Choi operator gives completely positive
/// halves `P0 - P1`; trace annihilation forces their input marginals to
/// agree on an operator `Q`, and `c = 1/lambda_max(Q)` is the largest
/// scale for which `1 - cQ` stays positive, so both halves extend to
/// channels by the shared completion `xi`.
pub fn channel_pair_from_ta_with(
    phi_ta: &Superoperator,
    mode: XiMode,
    tol: &Tolerances,
) -> Result<ChannelPair> {
    let report = classify(phi_ta, tol);
    if !report.hermiticity_preserving.holds {
        return Err(Error::NotHermiticityPreserving {
            violation: report.hermiticity_preserving.violation,
        });
    }
    if !report.trace_annihilating.holds {
        return Err(Error::NotTa { violation: report.trace_annihilating.violation });
    }

    let d_in = phi_ta.d_in();
    let d_out = phi_ta.d_out();
    let side = d_out * d_in;

    let eig = hermitian_eig(&phi_ta.choi().symmetrized(), tol)?;
    let mut p0 = ComplexMatrix::zeros(side, side);
    let mut p1 = ComplexMatrix::zeros(side, side);
    let mut discarded = 0.0;
    for (k, &value) in eig.eigenvalues.iter().enumerate() {
        if value > tol.eigen_zero {
            p0 = &p0 + &outer(&eig.eigenvector(k)).scaled(value);
        } else if value < -tol.eigen_zero {
            p1 = &p1 + &outer(&eig.eigenvector(k)).scaled(-value);
        } else {
            discarded += value.abs();
        }
    }

    let m0 = partial_trace(&p0, phi_ta.choi_dims(), Factor::First)?;
    let m1 = partial_trace(&p1, phi_ta.choi_dims(), Factor::First)?;
    let marginal_gap = m0.max_abs_diff(&m1);
    if marginal_gap > tol.reconstruction {
        return Err(Error::NotTa { violation: marginal_gap });
    }
    let q = (&m0 + &m1).scaled(0.5).symmetrized();

    let q_eig = hermitian_eig(&q, tol)?;
    let q_max = q_eig.eigenvalues.first().copied().unwrap_or(0.0);
    if q_max <= tol.degenerate {
        return Err(Error::DegenerateTa { norm: q_max });
    }
    let c = 1.0 / q_max;

    let missing = &ComplexMatrix::identity(d_in) - &q.scaled(c);
    let xi = match mode {
        XiMode::Block => {
            // |last><last| on the output factor tensor the missing marginal.
            let mut xi = ComplexMatrix::zeros(side, side);
            let base = (d_out - 1) * d_in;
            for x1 in 0..d_in {
                for x2 in 0..d_in {
                    xi[(base + x1, base + x2)] = missing[(x1, x2)];
                }
            }
            xi
        }
        XiMode::Purification => {
            let m_eig = hermitian_eig(&missing.symmetrized(), tol)?;
            let kept: Vec<usize> = (0..m_eig.eigenvalues.len())
                .filter(|&k| m_eig.eigenvalues[k] > tol.eigen_zero)
                .collect();
            if kept.len() > d_out {
                return Err(Error::PurificationTooSmall {
                    needed: kept.len(),
                    available: d_out,
                });
            }
            let mut v = vec![Complex64::new(0.0, 0.0); side];
            for (slot, &k) in kept.iter().enumerate() {
                let weight = m_eig.eigenvalues[k].sqrt();
                let x_k = m_eig.eigenvector(k);
                for (x, &entry) in x_k.iter().enumerate() {
                    v[slot * d_in + x] = entry * weight;
                }
            }
            outer(&v)
        }
    };

    let psi0 = Superoperator::new(&p0.scaled(c) + &xi, d_in, d_out)?;
    let psi1 = Superoperator::new(&p1.scaled(c) + &xi, d_in, d_out)?;
    debug_assert!(
        classify(&psi0, tol).is_channel && classify(&psi1, tol).is_channel,
        "jordan halves plus completion must classify as channels"
    );

    Ok(ChannelPair {
        psi0,
        psi1,
        c,
        q,
        xi,
        phi_ta: phi_ta.clone(),
        jordan_discarded_mass: discarded,
        phi_tp_hash: None,
    })
}

/// Everything produced on the road from one entangled state to a channel
/// pair it helps discriminate.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ConstructedChannels {
    pub pair: ChannelPair,
    /// The registry map that detected the state.
    pub map: PositiveMapSpec,
    pub negativity: NegativityResult,
}

/// Build a channel pair from whatever registry map detects `rho`.
///
/// Fails with `NotDetected` when no registry map sees the state; a state
/// can be entangled and still end up there, since the registry is finite.
pub fn state_to_channels(rho: &DensityMatrix, tol: &Tolerances) -> Result<ConstructedChannels> {
    state_to_channels_with(rho, XiMode::default(), tol)
}

/// Same pipeline with an explicit completion mode.
pub fn state_to_channels_with(
    rho: &DensityMatrix,
    mode: XiMode,
    tol: &Tolerances,
) -> Result<ConstructedChannels> {
    let detection = detect_entanglement(rho, tol)?;
    if !detection.detected {
        return Err(Error::NotDetected);
    }
    let map = detection.map.expect("detected scan carries its map");

    // Recomputing from the map keeps the negativity, the hash, and the
    // pair bound to one concrete trace-preserving map instance.
    let tp = normalize_to_tp(&map, tol)?;
    let negativity = negativity(&tp, rho, tol)?;
    let phi_ta = build_ta(tp.phi_tp(), tol)?;
    let mut pair = channel_pair_from_ta_with(&phi_ta, mode, tol)?;
    pair.phi_tp_hash = Some(tp.phi_tp().content_hash());

    Ok(ConstructedChannels { pair, map, negativity })
}

/// The channel pair generated by the transposition map, written in closed
/// form.
///
/// On a `d`-dimensional input both channels act into `d + 1` dimensions:
/// the first averages the input trace with the transpose, the second
/// subtracts the transpose and routes the excess into the appended
/// coordinate. Their difference is `2/(d+1)` times the padded transpose
/// minus trace map, the same map the pipeline builds from the registry, so
/// the two routes must agree and the stored hash lets callers check that.
pub fn transpose_channels_closed_form(d: usize, tol: &Tolerances) -> Result<ChannelPair> {
    if d < 2 {
        return Err(Error::UnsupportedDim { dim: d });
    }
    let d_pad = d + 1;
    let scale = 1.0 / (d as f64 + 1.0);
    let pad = |m: &ComplexMatrix| {
        ComplexMatrix::from_fn(d_pad, d_pad, |r, c| {
            if r < d && c < d {
                m[(r, c)]
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    };

    let phi_ta = choi_from_applier(
        |x| {
            let mut out = pad(&x.transpose());
            out[(d, d)] = out[(d, d)] - x.trace();
            out
        },
        d,
        d_pad,
        tol,
    )?;
    let psi0 = choi_from_applier(
        |x| {
            let filled = &ComplexMatrix::identity(d).scaled_complex(x.trace()) + &x.transpose();
            pad(&filled).scaled(scale)
        },
        d,
        d_pad,
        tol,
    )?;
    let psi1 = choi_from_applier(
        |x| {
            let hollowed = &ComplexMatrix::identity(d).scaled_complex(x.trace()) - &x.transpose();
            let mut out = pad(&hollowed);
            out[(d, d)] = out[(d, d)] + x.trace() * 2.0;
            out.scaled(scale)
        },
        d,
        d_pad,
        tol,
    )?;
    let phi_tp = choi_from_applier(|x| pad(&x.transpose()), d, d_pad, tol)?;

    let pair = ChannelPair {
        psi0,
        psi1,
        c: 2.0 / (d as f64 + 1.0),
        q: ComplexMatrix::identity(d).scaled((d as f64 + 1.0) / 2.0),
        xi: ComplexMatrix::zeros(d_pad * d, d_pad * d),
        phi_ta,
        jordan_discarded_mass: 0.0,
        phi_tp_hash: Some(phi_tp.content_hash()),
    };
    debug_assert!(
        classify(&pair.psi0, tol).is_channel && classify(&pair.psi1, tol).is_channel,
        "closed-form channels must classify as channels"
    );
    Ok(pair)
}

/// A channel pair mixed toward the totally depolarizing channel far enough
/// to be entanglement breaking.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct EBPair {
    pub xi0: Superoperator,
    pub xi1: Superoperator,
    /// Mixing weight kept on the original channels.
    pub p: f64,
    /// Whether both mixed Choi states landed inside the separability
    /// purity ball, certifying entanglement breaking.
    pub ball_certified: bool,
    /// Scale factor of the underlying pair; the mixed difference is
    /// `p c` times the generating map.
    pub c: f64,
    #[serde(rename = "phiTPHash")]
    pub phi_tp_hash: Option<String>,
}

fn mixed_with_depolarizing(
    psi: &Superoperator,
    depol: &Superoperator,
    p: f64,
) -> Result<Superoperator> {
    let choi = &psi.choi().scaled(p) + &depol.choi().scaled(1.0 - p);
    Superoperator::new(choi, psi.d_in(), psi.d_out())
}

fn choi_state(s: &Superoperator) -> DensityMatrix {
    let sigma = s.choi().scaled(1.0 / s.d_in() as f64);
    DensityMatrix::from_valid_parts(sigma, vec![s.d_out(), s.d_in()])
}

/// Mix both channels of a pair with the totally depolarizing channel.
///
/// With `p = None` the weight is pushed up by bisection to the largest
/// value (within `1e-6`) whose mixed Choi states the purity ball still
/// certifies as separable, hence the mixed channels as entanglement
/// breaking. An explicit `p` is used as given and the certificate reported
/// honestly, since the ball is sufficient but not necessary.
pub fn eb_mix(pair: &ChannelPair, p: Option<f64>, _tol: &Tolerances) -> Result<EBPair> {
    let depol = depolarizing_channel(pair.d_in(), pair.d_out());
    let certified_at = |weight: f64| -> Result<bool> {
        let a = mixed_with_depolarizing(&pair.psi0, &depol, weight)?;
        let b = mixed_with_depolarizing(&pair.psi1, &depol, weight)?;
        Ok(in_separable_ball(&choi_state(&a))? && in_separable_ball(&choi_state(&b))?)
    };

    let p = match p {
        Some(value) => {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::ParameterOutOfRange { name: "p", value });
            }
            value
        }
        None => {
            if certified_at(1.0)? {
                1.0
            } else {
                // Purity grows monotonically with the weight, so the
                // certified region is an interval containing zero.
                let mut lo = 0.0f64;
                let mut hi = 1.0f64;
                while hi - lo > 1e-6 {
                    let mid = 0.5 * (lo + hi);
                    if certified_at(mid)? {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                lo
            }
        }
    };

    let xi0 = mixed_with_depolarizing(&pair.psi0, &depol, p)?;
    let xi1 = mixed_with_depolarizing(&pair.psi1, &depol, p)?;
    let ball_certified = certified_at(p)?;

    Ok(EBPair {
        xi0,
        xi1,
        p,
        ball_certified,
        c: pair.c,
        phi_tp_hash: pair.phi_tp_hash.clone(),
    })
}

/// One named invariant re-checked on a stored pair.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct NamedCheck {
    pub name: &'static str,
    pub passed: bool,
    /// Worst violation the check measured; zero means exact.
    pub violation: f64,
    /// Error code a failure of this check maps to.
    pub error_code: &'static str,
}

/// Outcome of re-checking all invariants of a constructed pair.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PairVerification {
    pub passed: bool,
    pub checks: Vec<NamedCheck>,
}

impl PairVerification {
    /// First failed check, if any.
    pub fn first_failure(&self) -> Option<&NamedCheck> {
        self.checks.iter().find(|c| !c.passed)
    }
}

fn channel_checks(
    names: [&'static str; 3],
    op: &Superoperator,
    tol: &Tolerances,
) -> [NamedCheck; 3] {
    let report = classify(op, tol);
    let parts = [
        (report.hermiticity_preserving, "NotHermiticityPreserving"),
        (report.completely_positive, "NotPSD"),
        (report.trace_preserving, "MapNotTracePreserving"),
    ];
    let mut iter = names.into_iter().zip(parts);
    std::array::from_fn(|_| {
        let (name, (check, error_code)) = iter.next().expect("three names, three parts");
        NamedCheck {
            name,
            passed: check.holds,
            violation: check.violation,
            error_code,
        }
    })
}

/// Re-check every invariant a constructed pair promises: both branches are
/// channels, the stored generator is trace annihilating, the branch
/// difference reproduces `c` times the generator, the completion term is
/// positive, and the scale `c` matches the stored marginal. Shape
/// disagreements between the stored blocks are structural and error out;
/// everything else is reported as a named check.
pub fn verify_pair(pair: &ChannelPair, tol: &Tolerances) -> Result<PairVerification> {
    let d_in = pair.psi0.d_in();
    let d_out = pair.psi0.d_out();
    if pair.psi1.d_in() != d_in || pair.psi1.d_out() != d_out {
        return dim_mismatch(format!(
            "branch shapes disagree: psi0 is {}x{}, psi1 is {}x{}",
            d_out,
            d_in,
            pair.psi1.d_out(),
            pair.psi1.d_in()
        ));
    }
    if pair.phi_ta.d_in() != d_in || pair.phi_ta.d_out() != d_out {
        return dim_mismatch(format!(
            "generator shape {}x{} does not match branch shape {}x{}",
            pair.phi_ta.d_out(),
            pair.phi_ta.d_in(),
            d_out,
            d_in
        ));
    }
    if pair.q.rows() != d_in || pair.q.cols() != d_in {
        return dim_mismatch(format!(
            "marginal is {}x{}, expected {}x{}",
            pair.q.rows(),
            pair.q.cols(),
            d_in,
            d_in
        ));
    }
    let side = d_out * d_in;
    if pair.xi.rows() != side || pair.xi.cols() != side {
        return dim_mismatch(format!(
            "completion term is {}x{}, expected {}x{}",
            pair.xi.rows(),
            pair.xi.cols(),
            side,
            side
        ));
    }

    let mut checks = Vec::with_capacity(11);
    checks.extend(channel_checks(
        [
            "psi0-hermiticity-preserving",
            "psi0-completely-positive",
            "psi0-trace-preserving",
        ],
        &pair.psi0,
        tol,
    ));
    checks.extend(channel_checks(
        [
            "psi1-hermiticity-preserving",
            "psi1-completely-positive",
            "psi1-trace-preserving",
        ],
        &pair.psi1,
        tol,
    ));

    let generator = classify(&pair.phi_ta, tol);
    checks.push(NamedCheck {
        name: "generator-hermiticity-preserving",
        passed: generator.hermiticity_preserving.holds,
        violation: generator.hermiticity_preserving.violation,
        error_code: "NotHermiticityPreserving",
    });
    checks.push(NamedCheck {
        name: "generator-trace-annihilating",
        passed: generator.trace_annihilating.holds,
        violation: generator.trace_annihilating.violation,
        error_code: "NotTA",
    });

    // The pair's defining identity: J(psi0) - J(psi1) = c J(generator).
    let difference = pair.psi0.choi() - pair.psi1.choi();
    let scaled = pair.phi_ta.choi().scaled(pair.c);
    let residual = difference.max_abs_diff(&scaled);
    checks.push(NamedCheck {
        name: "difference-identity",
        passed: residual < tol.reconstruction,
        violation: residual,
        error_code: "NotTA",
    });

    let xi_floor = hermitian_eig(&pair.xi.symmetrized(), tol)?
        .eigenvalues
        .last()
        .copied()
        .unwrap_or(0.0);
    let xi_violation = (-xi_floor).max(0.0);
    checks.push(NamedCheck {
        name: "completion-positive",
        passed: xi_floor >= tol.psd_floor,
        violation: xi_violation,
        error_code: "NotPSD",
    });

    let q_top = hermitian_eig(&pair.q.symmetrized(), tol)?
        .eigenvalues
        .first()
        .copied()
        .unwrap_or(0.0);
    let scale_violation = (pair.c * q_top - 1.0).abs();
    checks.push(NamedCheck {
        name: "scale-consistency",
        passed: scale_violation < tol.reconstruction,
        violation: scale_violation,
        error_code: "ParameterOutOfRange",
    });

    let passed = checks.iter().all(|c| c.passed);
    Ok(PairVerification { passed, checks })
}
