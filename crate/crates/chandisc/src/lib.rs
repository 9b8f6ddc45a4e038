// Copyright 2026 chandisc contributors
// SPDX-License-Identifier: Apache-2.0

//! Channel discrimination toolkit.
//!
//! Given an entangled bipartite state, this crate constructs a pair of
//! quantum channels that the state tells apart strictly better than every
//! separable probe, then quantifies and simulates that advantage. The
//! pieces are usable on their own: dense complex linear algebra with a
//! deterministic Hermitian eigensolver, state and channel validation in
//! the Choi representation, entanglement detection through positive maps,
//! and discrimination bounds with a see-saw optimizer.

pub mod channel;
pub mod cli;
pub mod construct;
pub mod detect;
pub mod discriminate;
pub mod error;
pub mod io;
pub mod linalg;
pub mod rng;
pub mod state;
pub mod tol;

pub use error::{Error, Result};
pub use tol::Tolerances;
