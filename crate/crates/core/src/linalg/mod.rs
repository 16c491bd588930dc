//! Small dense complex linear algebra: Hermitian operators, a Jacobi
//! eigensolver and tensor-product helpers.

pub mod dense;
mod hermitian;
mod jacobi;

pub use dense::{inner, norm_sqr, ComplexMatrix};
pub use hermitian::{negative_eigenvalue_sum, partial_transpose, trace_norm, HermitianMatrix, TensorSplit};
pub use jacobi::{eigendecompose_hermitian, EigenDecomposition};
