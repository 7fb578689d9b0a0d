//! Invariants of generalized real Bott manifolds.
//!
//! A generalized real Bott manifold is a small cover over a product of
//! simplices `Δ^{n_1} × ... × Δ^{n_k}`. It is determined by a `k × n` block
//! matrix over GF(2) (a [`VectorMatrix`]). From that matrix this crate
//! computes, with exact arithmetic throughout:
//!
//! - admissibility and the unipotent upper-triangular normal form ([`model`]),
//! - the mod-2 cohomology ring and Poincaré polynomial ([`cohomology`]),
//! - Stiefel–Whitney classes, orientability and spin ([`charclasses`]),
//! - a presentation of the fundamental group, its first homology and
//!   related group properties ([`fungroup`]),
//! - the associated fan ([`fan`]) and labeled multidigraph ([`digraph`]),
//! - exhaustive censuses over a fixed dimension vector ([`census`]),
//! - an aggregate [`Report`] with a stable JSON shape ([`report`]).
//!
//! Most routines expect the normalized (block upper-triangular, unipotent)
//! form produced by [`VectorMatrix::normalize`].

pub mod census;
pub mod charclasses;
pub mod cohomology;
pub mod digraph;
mod error;
pub mod fan;
pub mod fungroup;
pub mod linalg;
pub mod model;
pub mod report;

pub use error::{Error, Result};
pub use linalg::{Gf2Matrix, Gf2Vector, IntMatrix, IntScalar};
pub use model::{BlockPermutation, DimensionVector, TowerStage, ValidationMethod, VectorMatrix};
pub use report::Report;

/// Arbitrary-precision integer matrix, used for invariant factors.
pub type BigIntMatrix = IntMatrix<num_bigint::BigInt>;

/// Machine-integer matrix, used for fan ray determinants.
pub type SmallIntMatrix = IntMatrix<i64>;
