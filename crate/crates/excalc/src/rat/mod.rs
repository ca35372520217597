//! Exact scalar arithmetic: arbitrary-precision rationals, sparse
//! multivariate polynomials, and rational functions in canonical form.
//!
//! [`Rational`] is `num_rational::BigRational`, which already maintains the
//! reduced, positive-denominator normal form this crate relies on. [`Poly`]
//! and [`RationalFn`] are built on top of it; a [`RationalFn`] is always
//! gcd-reduced with a monic denominator, so equality is structural.

mod gcd;
mod poly;
mod ratfn;

pub use poly::Poly;
pub use ratfn::RationalFn;

/// Arbitrary-precision rational scalar; always reduced, denominator > 0.
pub type Rational = num_rational::BigRational;

/// Shorthand for an integer rational.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Shorthand for the fraction `p/q`. Panics if `q == 0`.
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(p.into(), q.into())
}
