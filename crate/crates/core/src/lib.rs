//! Local asymptotic minimax lower bounds on parameter-estimation risk, built
//! from the error probability of optimal binary (and ternary) hypothesis tests.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod bounds;
pub mod error;
pub mod loss;
pub mod models;
pub mod numerics;
pub mod oracle;

pub use error::{Error, Result};
