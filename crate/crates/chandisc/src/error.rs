// Copyright 2026 chandisc contributors
// SPDX-License-Identifier: Apache-2.0

//! Error type shared by every module in the crate.

use thiserror::Error;

/// Errors raised by matrix primitives, state/channel constructors, and the
/// discrimination pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (max |m - m†| = {violation:.3e})")]
    NotHermitian { violation: f64 },

    #[error("operator is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("trace is not 1 (got {trace:.12})")]
    TraceNotOne { trace: f64 },

    #[error("dimension mismatch: {detail}")]
    DimensionMismatch { detail: String },

    #[error("parameter {name} out of range (got {value})")]
    ParameterOutOfRange { name: &'static str, value: f64 },

    #[error("applier failed the linearity spot-check (violation {violation:.3e})")]
    NonLinearApplier { violation: f64 },

    #[error("map is not trace-preserving (max |Tr_Y J - 1| = {violation:.3e})")]
    MapNotTracePreserving { violation: f64 },

    #[error("no builtin positive maps for dimension {dim}")]
    UnsupportedDim { dim: usize },

    #[error("map annihilates all states (lambda = {lambda:.3e})")]
    DegenerateMap { lambda: f64 },

    #[error("superoperator is not trace-annihilating (max |Tr_Y J| = {violation:.3e})")]
    NotTa { violation: f64 },

    #[error("superoperator is not Hermiticity-preserving (max |J - J†| = {violation:.3e})")]
    NotHermiticityPreserving { violation: f64 },

    #[error("trace-annihilating part is numerically zero (|Q| = {norm:.3e}); the source map detects nothing")]
    DegenerateTa { norm: f64 },

    #[error("no registry map detects this state (not a proof of separability)")]
    NotDetected,

    #[error("invalid POVM: {detail}")]
    InvalidPovm { detail: String },

    #[error("channel pair and negativity come from different maps (pair {pair_hash}, negativity {negativity_hash})")]
    InconsistentProvenance {
        pair_hash: String,
        negativity_hash: String,
    },

    #[error("purified completion needs output dim >= {needed}, channel has {available}")]
    PurificationTooSmall { needed: usize, available: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("{detail}")]
    Format { detail: String },
}

impl Error {
    /// Stable machine-readable code, used by the CLI's error JSON.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NonSquare { .. } => "NonSquare",
            Error::NotHermitian { .. } => "NotHermitian",
            Error::NotPsd { .. } => "NotPSD",
            Error::TraceNotOne { .. } => "TraceNotOne",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::ParameterOutOfRange { .. } => "ParameterOutOfRange",
            Error::NonLinearApplier { .. } => "NonLinearApplier",
            Error::MapNotTracePreserving { .. } => "MapNotTracePreserving",
            Error::UnsupportedDim { .. } => "UnsupportedDim",
            Error::DegenerateMap { .. } => "DegenerateMap",
            Error::NotTa { .. } => "NotTA",
            Error::NotHermiticityPreserving { .. } => "NotHermiticityPreserving",
            Error::DegenerateTa { .. } => "DegenerateTA",
            Error::NotDetected => "NotDetected",
            Error::InvalidPovm { .. } => "InvalidPOVM",
            Error::InconsistentProvenance { .. } => "InconsistentProvenance",
            Error::PurificationTooSmall { .. } => "PurificationTooSmall",
            Error::Io(_) => "Io",
            Error::Json(_) => "Json",
            Error::Format { .. } => "Format",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn dim_mismatch<T>(detail: impl Into<String>) -> Result<T> {
    Err(Error::DimensionMismatch {
        detail: detail.into(),
    })
}
