//! Exact exterior calculus on pseudo-Riemannian charts.
//!
//! Everything is computed over the field of multivariate rational functions
//! with arbitrary-precision rational coefficients, so every operator
//! (exterior derivative, Hodge star, codifferential, Lie derivative,
//! Schouten–Nijenhuis bracket, generalized interior product, Tulczyjew
//! operator) is exact and every identity between them is a decidable
//! equality. The [`verify`] module turns a catalog of such identities into
//! a seeded, deterministic check suite with zero tolerance.
//!
//! Metrics are specified through an oriented orthonormal coframe with a
//! constant signature, which keeps the Hodge star free of square roots.
//! Five chart fixtures ship with the crate (`euclid2/3/4`, `mink4`, and the
//! anholonomic `conf3`); see [`manifold::builtin_fixture_names`].
//!
//! The `examples/` directory of this crate walks through each capability;
//! the `excalc` binary exposes expression evaluation and the check suite on
//! the command line.

pub mod error;
pub mod rat;
pub mod manifold;
pub mod exterior;
pub mod hodge;
pub mod brackets;
pub mod verify;
pub mod dsl;

pub use error::{Error, Result};
pub use rat::{Poly, Rational, RationalFn};
