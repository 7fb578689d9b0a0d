//! Exact linear algebra: GF(2) bit matrices and integer matrices.

mod gf2;
mod int;

pub use gf2::{Gf2Matrix, Gf2Vector};
pub(crate) use gf2::independent_words;
pub use int::{IntMatrix, IntScalar};
