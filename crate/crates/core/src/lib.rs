//! Core library for the Mean King's problem with three arbitrary spin
//! directions.
//!
//! Alice prepares a two-spin singlet and sends one particle to Bob; Bob
//! measures one of three observables `n_k·σ` (unit directions `n_k`, not
//! assumed orthogonal) and returns the particle; Alice then performs a single
//! eight-outcome measurement that lets her name Bob's result with certainty
//! once she is told `k`.
//!
//! The crate covers the full pipeline:
//!
//! - [`quantum`] — fixed-dimension complex linear algebra: spin eigenstates,
//!   tensor products, expectation values, and a 4×4 Hermitian eigensolver.
//! - [`states`] — the singlet, the symmetric-sector basis `X, Y, Z`, the
//!   direction kets `|n⟩`, and Bob's post-measurement states.
//! - [`povm`] — the eight-element measurement: sign table, coefficient
//!   family `C_K(r)`, feasibility condition `|n₁ ± n₂ ± n₃| ≥ 1`,
//!   construction, diagnostics, the orthogonal 4-element reduction, and
//!   degeneracy classification.
//! - [`protocol`] — a deterministic Monte Carlo runner for the three-step
//!   protocol with per-stream counter-based randomness.
//!
//! The crate is `no_std` (with `alloc` for protocol transcripts); IO, file
//! formats, and the command-line front end live in the companion CLI crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod error;
pub mod povm;
pub mod protocol;
pub mod quantum;
pub mod rng;
pub mod states;
pub mod vec3;

pub use error::{Error, Result};

/// Tolerance for state-level identities: norms, overlaps, orthogonality.
pub const TOL_STATE: f64 = 1e-12;

/// Tolerance for operator-level identities: completeness residuals,
/// eigenvalue positivity, row sums.
pub const TOL_OPERATOR: f64 = 1e-10;

/// Tolerance for input validation of direction vectors.
pub const TOL_INPUT: f64 = 1e-9;
