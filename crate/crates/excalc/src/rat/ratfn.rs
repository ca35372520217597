//! Rational functions in canonical form.
//!
//! Invariants: the denominator is nonzero and monic under the canonical
//! monomial order, numerator and denominator are coprime, and zero is
//! `0/1`. Equality is therefore plain structural equality, which is what
//! makes every identity check in this crate a decidable comparison.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::gcd::poly_gcd;
use super::{Poly, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFn {
    num: Poly,
    den: Poly,
}

impl RationalFn {
    /// Build `num/den` and normalize. Panics if `den` is the zero polynomial.
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let mut rf = RationalFn { num, den };
        rf.normalize();
        rf
    }

    pub fn from_poly(p: Poly) -> Self {
        let n = p.nvars();
        RationalFn { num: p, den: Poly::one(n) }
    }

    pub fn zero(nvars: usize) -> Self {
        RationalFn::from_poly(Poly::zero(nvars))
    }

    pub fn one(nvars: usize) -> Self {
        RationalFn::from_poly(Poly::one(nvars))
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        RationalFn::from_poly(Poly::constant(nvars, c))
    }

    pub fn var(nvars: usize, v: usize) -> Self {
        RationalFn::from_poly(Poly::var(nvars, v))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        if !self.den.is_one() {
            return None;
        }
        self.num.as_constant()
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.den = Poly::one(self.num.nvars());
            return;
        }
        if !self.den.is_one() {
            let g = poly_gcd(&self.num, &self.den);
            if !g.is_one() {
                self.num = self.num.div_exact(&g);
                self.den = self.den.div_exact(&g);
            }
            // Make the denominator monic, folding the scale into the numerator.
            if let Some((_, lc)) = self.den.leading() {
                if !lc.is_one() {
                    let inv = Rational::one() / lc;
                    self.num = self.num.scale(&inv);
                    self.den = self.den.scale(&inv);
                }
            }
        }
    }

    /// Quotient-rule partial derivative; exact and normalized.
    pub fn partial(&self, var: usize) -> RationalFn {
        let dn = self.num.partial(var);
        if self.den.is_one() {
            return RationalFn::from_poly(dn);
        }
        let dd = self.den.partial(var);
        let num = &(&dn * &self.den) - &(&self.num * &dd);
        let den = &self.den * &self.den;
        RationalFn::new(num, den)
    }

    /// Exact evaluation; reports a pole when the denominator vanishes.
    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        let d = self.den.eval(point);
        if d.is_zero() {
            return Err(Error::PoleAtPoint);
        }
        Ok(self.num.eval(point) / d)
    }

    /// Checked division; `None` when `rhs` is zero.
    pub fn checked_div(&self, rhs: &RationalFn) -> Option<RationalFn> {
        if rhs.is_zero() {
            return None;
        }
        Some(self / rhs)
    }

    pub fn pow(&self, e: u32) -> RationalFn {
        RationalFn::new(self.num.pow(e), self.den.pow(e))
    }

    /// Render with variable names; output reparses to the same value.
    pub fn display(&self, names: &[&str]) -> String {
        if self.den.is_one() {
            self.num.display(names)
        } else {
            format!("({})/({})", self.num.display(names), self.den.display(names))
        }
    }
}

impl Add for &RationalFn {
    type Output = RationalFn;
    fn add(self, rhs: &RationalFn) -> RationalFn {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RationalFn::new(&self.num + &rhs.num, self.den.clone());
        }
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RationalFn::new(num, &self.den * &rhs.den)
    }
}

impl Sub for &RationalFn {
    type Output = RationalFn;
    fn sub(self, rhs: &RationalFn) -> RationalFn {
        self + &(-rhs)
    }
}

impl Mul for &RationalFn {
    type Output = RationalFn;
    fn mul(self, rhs: &RationalFn) -> RationalFn {
        if self.is_zero() || rhs.is_zero() {
            return RationalFn::zero(self.nvars());
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RationalFn::from_poly(&self.num * &rhs.num);
        }
        // Cross-cancel before multiplying to keep degrees down.
        let g1 = poly_gcd(&self.num, &rhs.den);
        let g2 = poly_gcd(&rhs.num, &self.den);
        let n1 = if g1.is_one() { self.num.clone() } else { self.num.div_exact(&g1) };
        let d2 = if g1.is_one() { rhs.den.clone() } else { rhs.den.div_exact(&g1) };
        let n2 = if g2.is_one() { rhs.num.clone() } else { rhs.num.div_exact(&g2) };
        let d1 = if g2.is_one() { self.den.clone() } else { self.den.div_exact(&g2) };
        RationalFn::new(&n1 * &n2, &d1 * &d2)
    }
}

impl Div for &RationalFn {
    type Output = RationalFn;
    fn div(self, rhs: &RationalFn) -> RationalFn {
        assert!(!rhs.is_zero(), "division by the zero rational function");
        let inv = RationalFn::new(rhs.den.clone(), rhs.num.clone());
        self * &inv
    }
}

impl Neg for &RationalFn {
    type Output = RationalFn;
    fn neg(self) -> RationalFn {
        RationalFn { num: -&self.num, den: self.den.clone() }
    }
}

impl fmt::Display for RationalFn {
    /// Anonymous-variable rendering (`x0`, `x1`, ...) for diagnostics.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars()).map(|i| format!("x{i}")).collect();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        write!(f, "{}", self.display(&refs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};

    fn x() -> RationalFn {
        RationalFn::var(1, 0)
    }

    #[test]
    fn common_denominator_collapse() {
        // x/(1+x) + 1/(1+x) = 1
        let one = RationalFn::one(1);
        let den = &one + &x();
        let a = &x() / &den;
        let b = &one / &den;
        assert_eq!(&a + &b, one);
    }

    #[test]
    fn gcd_reduction_through_mul_div() {
        // (x^2 - 1)/(x - 1) = x + 1
        let one = RationalFn::one(1);
        let num = &(&x() * &x()) - &one;
        let den = &x() - &one;
        assert_eq!(&num / &den, &x() + &one);
    }

    #[test]
    fn additive_inverse() {
        let f = &(&x() * &x()) + &RationalFn::constant(1, rat(2, 3));
        assert!((&f - &f).is_zero());
    }

    #[test]
    fn quotient_rule() {
        // d/dx (1/x) = -1/x^2
        let inv = &RationalFn::one(1) / &x();
        let expect = &(-&RationalFn::one(1)) / &(&x() * &x());
        assert_eq!(inv.partial(0), expect);
    }

    #[test]
    fn partial_of_constant_is_zero() {
        assert!(RationalFn::constant(1, rat_int(7)).partial(0).is_zero());
    }

    #[test]
    fn eval_and_pole() {
        let two_x = x().pow(1).checked_div(&RationalFn::one(1)).unwrap();
        assert_eq!(two_x.eval(&[rat_int(2)]).unwrap(), rat_int(2));
        let inv = &RationalFn::one(1) / &x();
        assert!(matches!(inv.eval(&[rat_int(0)]), Err(Error::PoleAtPoint)));
    }

    #[test]
    fn division_by_zero_is_checked() {
        assert!(x().checked_div(&RationalFn::zero(1)).is_none());
    }

    #[test]
    fn normal_form_is_unique_across_construction_orders() {
        // Build 2x/(2 + 2x) two ways; both must normalize identically.
        let one = RationalFn::one(1);
        let a = &x().pow(1).scale_int(2) / &(&one + &x()).scale_int(2);
        let b = &x() / &(&one + &x());
        assert_eq!(a, b);
    }

    impl RationalFn {
        fn scale_int(&self, k: i64) -> RationalFn {
            self * &RationalFn::constant(self.nvars(), rat_int(k))
        }
    }
}
