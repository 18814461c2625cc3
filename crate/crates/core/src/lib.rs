//! Dense linear algebra over real and complex finite-dimensional spaces:
//! dual bases, tensors, unitary spaces and indefinite (Dirac) inner products.

pub mod duality;
pub mod error;
pub mod indefinite;
pub mod matrix;
pub mod tensor;
pub mod unitary;

pub use error::{Error, Result};
pub use matrix::{DenseMatrix, Field, MatrixClass, Scalar};
