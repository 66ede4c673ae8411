//! Exact rational scalars and dense linear algebra over the rationals.
//!
//! Everything downstream (system assembly, kernels, Lie brackets) goes through
//! this module; there is no floating point anywhere in the crate.

mod matrix;
mod rational;
mod reduce;
mod span;

pub use matrix::Matrix;
pub use rational::{format_rational, frac, int, one, parse_rational, zero, Rational};
pub use reduce::RowReducer;
pub use span::{span_contains, SpanBasis};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("cannot parse {0:?} as a rational (expected \"p/q\" or \"p\")")]
    ParseRational(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}
