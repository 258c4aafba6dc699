//! Exact and numeric computations from positive geometry.
//!
//! Tree amplitudes, canonical functions of polytopes, CHY sums over critical
//! points of the scattering potential, dihedral coordinates, Gr(2,4)
//! amplituhedron membership, GKZ operators with Euler integrals, and path
//! signatures. Several quantities are computed along independent routes so
//! they can be checked against one another (see [`crosscheck`]).

#![allow(
    clippy::neg_cmp_op_on_partial_ord,
    clippy::needless_range_loop,
    clippy::large_enum_variant
)]

pub mod algebra;
pub mod chy;
pub mod crosscheck;
pub mod dihedral;
pub mod error;
pub mod gkz;
pub mod grassmann;
pub mod kinematics;
pub mod polytope;
pub mod signature;
pub mod tree;

pub use algebra::{Polynomial, Rational, RationalFunction};
pub use error::{Error, Result};
