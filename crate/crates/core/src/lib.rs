//! Certification of identifiable columns in exact nonnegative matrix
//! factorizations `R = C S^T`.
//!
//! Given nonnegative factors of size `r = rank(R)`, [`certify::certify_all`]
//! reports which columns of `C` (and, by transposition, of `S`) appear up to
//! scaling in every exact factorization of the same size, together with
//! re-checkable certificates. The [`npp`] module translates between
//! factorizations and nested polytopes and renders rank-3 instances as SVG.

pub mod certify;
pub mod cli;
pub mod error;
pub mod faces;
pub mod factorization;
pub mod io;
pub mod lp;
pub mod matrix;
pub mod npp;
pub mod tolerances;

pub use error::{Error, Result};
pub use factorization::{prune_and_normalize, StochasticFactorization};
pub use matrix::DenseMatrix;
pub use tolerances::Tolerances;
