//! Exact verification toolkit for the smallest eigenvalue of `YYᵀ` over unit
//! lower-triangular (0,1)-matrices `Y`.
//!
//! * [`pattern`]: packed elements of Kₙ and their Gram matrices.
//! * [`inverse`]: exact inverses, the nilpotent series and the Fibonacci entry bound.
//! * [`extremal`]: closed forms for `Y₀⁻¹`, `Z₀⁻¹` and the checks built on them.
//! * [`charpoly`]: power sums, Newton's identities, root finding and eigensolvers.
//! * [`search`]: the exhaustive parallel scan with checkpoint/resume.
//! * [`bounds`]: number-theoretic lower bounds and GCD-matrix checks.

// `!(x > 0.0)` is the NaN-rejecting form used for tolerance checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod charpoly;
pub mod error;
pub mod extremal;
pub mod inverse;
pub mod matrix;
pub mod pattern;
pub mod search;

pub use error::{Error, Result};
pub use matrix::{IntegerMatrix, SquareMatrix};
pub use pattern::{gram, GramMatrix, LowerUnitMatrix};
