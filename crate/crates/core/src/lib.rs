//! Exact-arithmetic workbench for strong shift equivalence of nonnegative
//! integer matrices.
//!
//! The crate constructs state splittings of directed multigraphs and their
//! companion matrices, verifies elementary-equivalence witnesses and chains,
//! computes Bowen-Franks groups `Z^N / (I - A^t) Z^N` with the cokernel maps
//! a chain induces, transfers cylinder functions across a witness, and
//! checks transpose-free certificate chains.
//!
//! All arithmetic is exact and generic over a [`scalar::Scalar`]: checked
//! `i64` by default (overflow is an error, never a wrap) or `BigInt`.
//! Smith normal forms always run in arbitrary precision. Every construction
//! follows a fixed canonical order, so identical inputs give bit-identical
//! outputs.

pub mod cokernel;
pub mod error;
pub mod graph;
pub mod matrix;
pub mod scalar;
pub mod shift;
pub mod smith;
pub mod splitting;
pub mod sse;
pub mod textio;
pub mod transpose_free;
pub mod verdict;

pub use error::{Error, Result};
pub use verdict::Verdict;

/// Checked 64-bit matrices, the default CLI lane.
pub type Matrix64 = matrix::IntMatrix<i64>;
/// Arbitrary-precision matrices, the `--bigint` lane.
pub type BigMatrix = matrix::IntMatrix<num_bigint::BigInt>;
pub type Transition64 = graph::TransitionMatrix<i64>;
pub type TransitionBig = graph::TransitionMatrix<num_bigint::BigInt>;
