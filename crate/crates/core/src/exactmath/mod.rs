//! Sparse multivariate polynomials over exact rationals.

mod monomial;
mod polynomial;
mod rational;

pub use monomial::{monomial_basis, Monomial};
pub use polynomial::{basis_index, indexed_basis, Polynomial};
pub use rational::{
    binomial, bit_size, factorial, format_rational, parse_rational, primitive_scale, rat, ratio, Rational,
};
