//! Exact scalars, polynomials in `c`, and dense rational matrices.

mod matrix;
mod poly;
mod rational;

pub use matrix::{primitive_integer_vector, RatMatrix};
pub use poly::{CPoly, Parity};
pub use rational::ExactRational;
