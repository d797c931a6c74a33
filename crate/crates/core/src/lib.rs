//! Exact determinants by Dodgson condensation.
//!
//! The crate is organised bottom-up:
//!
//! - [`scalar`]: exact scalars over the integers, the rationals and prime fields.
//! - [`matrix`]: dense matrices with 1-based indexing, minors, the column and
//!   row replacement constructors `A(k)` / `B(l)`, the cofactor and Bareiss
//!   determinant oracles and a seeded random generator.
//! - [`io`]: the plain-text matrix file format.
//! - [`identity`]: exact residual checks for the Desnanot-Jacobi identity and
//!   the auxiliary identities around it, plus a seeded fuzz campaign.
//! - [`condensation`]: the condensation engine with its zero-divisor policies
//!   and the level pyramid it produces.

pub mod condensation;
pub mod identity;
pub mod io;
pub mod matrix;
pub mod scalar;

pub use condensation::{dodgson_det, CondensationError, CondensationTrace, ZeroPolicy};
pub use matrix::{Matrix, MatrixError, MinorSpec};
pub use scalar::{RingDomain, Scalar, ScalarError};
