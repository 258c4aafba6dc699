//! Exact arithmetic shared by every other module.

pub mod factored;
pub mod linear;
pub mod polynomial;
pub mod rational;
pub mod rational_function;
pub mod tensor;

pub use factored::FactoredFraction;
pub use linear::{determinant, kernel_basis, rank, solve_linear, LinearSolution};
pub use polynomial::{vars, Monomial, Polynomial, Vars};
pub use rational::{int, parse_rational, rat, Rational};
pub use rational_function::{rf_arith, rf_equal, RationalFunction, RfOp};
pub use tensor::DenseTensor;
