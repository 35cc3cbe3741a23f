//! Exact field arithmetic and the matrix kernels every other module uses.

mod matrix;
mod scalar;

pub use matrix::{Echelon, Matrix};
pub use scalar::{Field, Scalar};
