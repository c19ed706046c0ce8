// Negated comparisons reject NaN inputs.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod eigensolver;
pub mod error;
pub mod fem;
pub mod geometry;
pub mod mesh;
pub mod verifier;

pub use error::{Error, Result};
