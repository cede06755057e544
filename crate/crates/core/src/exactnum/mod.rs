//! Exact scalars: big rationals and rational functions in the formal group
//! generators `e2, e3, ...`.

mod parse;
mod poly;
mod rational;
mod scalar;

pub use poly::{Monomial, Poly};
pub use rational::Rational;
pub use scalar::Scalar;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("scalar grew to {terms} polynomial terms (ceiling {limit})")]
    TermCeiling { terms: usize, limit: usize },
}
