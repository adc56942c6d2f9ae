//! Maximal diagonal symmetry groups of quasihomogeneous polynomials.
//!
//! Given a polynomial with exponent matrix A, the group of diagonal
//! rescalings fixing it is `{ g in (Q/Z)^n | A*g integral }` -- finite and
//! Abelian whenever A has full column rank. This crate computes that group
//! two ways: by intersecting the groups generated by the inverses of the
//! invertible n-row submatrices of A, and by reading generators off the
//! Smith normal form of A. The first is exponential on adversarial inputs,
//! the second polynomial; both are exact (arbitrary-precision integer and
//! rational arithmetic throughout, no floating point).
//!
//! Modules:
//! - [`qz`]: arithmetic in (Q/Z)^n, subgroup closure, intersection
//! - [`polynomial`]: parsing, weights, admissibility, atomic types
//! - [`mat`]: exact integer matrices (determinant, rank, inverse)
//! - [`snf`]: Smith normal form with unimodular witnesses
//! - [`gmax`]: the two symmetry-group algorithms and the brute-force oracle

pub mod error;
pub mod gmax;
pub mod mat;
pub mod polynomial;
pub mod qz;
pub mod snf;

pub use error::{Error, Result};
