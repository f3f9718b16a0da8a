//! Exact certificates that shift equivalence of nonnegative integer matrices
//! yields flow equivalence of the associated shifts of finite type.
//!
//! The crate is organized bottom-up:
//!
//! * [`matrix`], [`poly`], [`det`], [`smith`]: exact linear algebra over `Z`
//!   and `Z[t]` on labeled index sets.
//! * [`poset`], [`components`]: irreducible components, component posets and
//!   poset-partitioned matrices.
//! * [`shift`]: shift equivalence witnesses, their composition, elimination
//!   of zero diagonal blocks, and the lift to a partitioned equivalence.
//! * [`pse`]: the polynomial shift equivalence built from a witness.
//! * [`flow`]: Bowen–Franks data, cycle analysis and the end-to-end flow
//!   equivalence certificate.
//! * [`generate`], [`batch`]: random witness generation and parallel sweeps.

#![allow(clippy::needless_range_loop)]

pub mod batch;
pub mod components;
pub mod det;
pub mod error;
pub mod flow;
pub mod generate;
pub mod json;
pub mod label;
pub mod matrix;
pub mod parallel;
pub mod poly;
pub mod poset;
pub mod pse;
pub mod shift;
pub mod smith;

pub use error::{Error, Result};
pub use label::Label;
pub use matrix::{IntMatrix, Matrix, PolyMatrix, Scalar};
pub use poly::Poly;
