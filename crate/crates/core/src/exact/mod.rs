//! Exact arithmetic: rationals, sparse multivariate polynomials, dense
//! univariate polynomials and polynomial matrices.

pub(crate) mod intpoly;
pub mod matrix;
pub mod monomial;
pub mod poly;
pub mod rational;
pub mod univariate;

pub use matrix::{jacobian, PolyMatrix};
pub use monomial::Monomial;
pub use poly::MultiPoly;
pub use rational::{frac, parse_rational, rat, Rational};
pub use univariate::UniPoly;
