//! Exact computation and machine verification of ternary derivations and
//! ternary automorphisms of finite-dimensional unital associative algebras
//! over the rationals, including triangular algebras built from a pair of
//! algebras and a connecting bimodule.
//!
//! Everything is computed over arbitrary-precision rationals: results are
//! exact, bases are canonical, and every structural claim the library exposes
//! is re-checked by direct evaluation rather than trusted.

// Structure-constant sums read as indexed loops over basis positions; iterator
// rewrites would obscure the i/j/k symmetry of the underlying formulas.
#![allow(clippy::needless_range_loop)]

pub mod algebra;
pub mod bimodule;
pub mod cli;
pub mod error;
pub mod matrix;
pub mod presets;
pub mod rational;
pub mod report;
pub mod ternary;
pub mod tri_ternary;
pub mod triangular;
pub mod verify;

pub use error::{Error, Result};
pub use matrix::{Matrix, Vector};
pub use rational::Rational;
