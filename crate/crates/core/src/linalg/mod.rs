//! Exact integer and rational matrix arithmetic.

mod matrix;
mod snf;

pub use matrix::ExactMatrix;
pub use snf::SnfDecomposition;
