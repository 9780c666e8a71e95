//! Numerical verification of Hlawka and Popoviciu type inequalities on
//! positive definite tensors.
//!
//! The crate is organised in four layers:
//!
//! - [`linalg`]: dense Hermitian matrices, Kronecker products and tensor
//!   powers, eigenvalue based Loewner-order certificates and seeded
//!   positive definite sampling.
//! - [`sums`]: builders for every operator inequality as a single
//!   difference matrix `LHS - RHS`, ready for certification.
//! - [`gmf`]: permutations, partitions, symmetric group characters and
//!   generalized matrix functions (determinant, permanent, immanants),
//!   plus the scalar images of the operator inequalities.
//! - [`convex`]: scalar and normed-space inequalities over a catalog of
//!   convex functions, and a seeded counterexample search.

pub mod convex;
pub mod error;
pub mod gmf;
pub mod linalg;
pub mod seed;
pub mod sums;

pub use error::{Error, Result};
pub use linalg::{Budget, ComplexMatrix, HermitianMatrix, LoewnerCertificate, Verdict};
pub use num_complex::Complex64;
