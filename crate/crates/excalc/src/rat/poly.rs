//! Sparse multivariate polynomials.
//!
//! Exponent vectors are packed into a `u64`, one byte per variable with
//! variable 0 in the lowest byte. Integer comparison of packed keys is then
//! a deterministic monomial order (lexicographic from the highest variable
//! down), and it is compatible with monomial multiplication, which is all
//! the division and gcd routines need.
//!
//! Invariants: no stored zero coefficients; all keys use exactly `nvars`
//! variables; per-variable exponents stay below 256.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::Rational;

pub(crate) const MAX_VARS: usize = 8;
const MAX_EXP: u32 = 255;

pub(crate) fn exp_get(key: u64, var: usize) -> u32 {
    ((key >> (8 * var)) & 0xff) as u32
}

pub(crate) fn exp_set(key: u64, var: usize, e: u32) -> u64 {
    assert!(e <= MAX_EXP, "monomial exponent overflow");
    (key & !(0xffu64 << (8 * var))) | ((e as u64) << (8 * var))
}

pub(crate) fn exp_add(a: u64, b: u64, nvars: usize) -> u64 {
    let mut out = 0u64;
    for v in 0..nvars {
        let e = exp_get(a, v) + exp_get(b, v);
        assert!(e <= MAX_EXP, "monomial exponent overflow");
        out |= (e as u64) << (8 * v);
    }
    out
}

/// `a - b` per variable; `None` when `b` does not divide `a`.
pub(crate) fn exp_sub_checked(a: u64, b: u64, nvars: usize) -> Option<u64> {
    let mut out = 0u64;
    for v in 0..nvars {
        let (ea, eb) = (exp_get(a, v), exp_get(b, v));
        if eb > ea {
            return None;
        }
        out |= (((ea - eb) as u64)) << (8 * v);
    }
    Some(out)
}

/// Sparse multivariate polynomial over [`Rational`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<u64, Rational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        assert!(nvars <= MAX_VARS, "at most {MAX_VARS} variables supported");
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Poly::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Poly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(0, c);
        }
        p
    }

    /// The coordinate monomial `x_var`.
    pub fn var(nvars: usize, var: usize) -> Self {
        assert!(var < nvars, "variable index out of range");
        let mut p = Poly::zero(nvars);
        p.terms.insert(exp_set(0, var, 1), Rational::one());
        p
    }

    pub fn monomial(nvars: usize, exps: &[u32], c: Rational) -> Self {
        assert_eq!(exps.len(), nvars);
        let mut key = 0u64;
        for (v, &e) in exps.iter().enumerate() {
            key = exp_set(key, v, e);
        }
        let mut p = Poly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(key, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).map(|c| c.is_one()).unwrap_or(false)
    }

    /// `Some(c)` when the polynomial is a constant (including zero).
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&0).cloned(),
            _ => None,
        }
    }

    pub(crate) fn terms(&self) -> impl Iterator<Item = (&u64, &Rational)> {
        self.terms.iter()
    }

    pub(crate) fn insert_term(&mut self, key: u64, c: Rational) {
        if !c.is_zero() {
            self.terms.insert(key, c);
        }
    }

    pub(crate) fn add_term(&mut self, key: u64, c: &Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(key).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    /// Leading term under the canonical monomial order.
    pub(crate) fn leading(&self) -> Option<(u64, &Rational)> {
        self.terms.iter().next_back().map(|(k, c)| (*k, c))
    }

    /// Degree in a single variable; zero polynomial has degree 0 here.
    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|&k| exp_get(k, var)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|&k| (0..self.nvars).map(|v| exp_get(k, v)).sum())
            .max()
            .unwrap_or(0)
    }

    /// Does the variable occur with a positive exponent anywhere?
    pub fn uses_var(&self, var: usize) -> bool {
        self.terms.keys().any(|&k| exp_get(k, var) > 0)
    }

    /// Coefficient of `x_var^k`, as a polynomial in the remaining variables
    /// (still represented in the full variable space).
    pub(crate) fn coeff_of(&self, var: usize, k: u32) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (&key, c) in &self.terms {
            if exp_get(key, var) == k {
                out.terms.insert(exp_set(key, var, 0), c.clone());
            }
        }
        out
    }

    pub fn map_coeffs(&self, f: impl Fn(&Rational) -> Rational) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (&k, c) in &self.terms {
            out.insert_term(k, f(c));
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        self.map_coeffs(|x| x * c)
    }

    /// Multiply by the monomial `x_var^k`.
    pub(crate) fn mul_var_pow(&self, var: usize, k: u32) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (&key, c) in &self.terms {
            out.terms.insert(exp_set(key, var, exp_get(key, var) + k), c.clone());
        }
        out
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(self.nvars);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Formal partial derivative with respect to coordinate `var`.
    ///
    /// Panics if `var` is out of range.
    pub fn partial(&self, var: usize) -> Poly {
        assert!(var < self.nvars, "coordinate index out of range");
        let mut out = Poly::zero(self.nvars);
        for (&key, c) in &self.terms {
            let e = exp_get(key, var);
            if e > 0 {
                out.add_term(exp_set(key, var, e - 1), &(c * Rational::from_integer(e.into())));
            }
        }
        out
    }

    /// Exact evaluation at a rational point.
    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars, "point dimension mismatch");
        let mut acc = Rational::zero();
        for (&key, c) in &self.terms {
            let mut m = c.clone();
            for (v, x) in point.iter().enumerate() {
                let e = exp_get(key, v);
                for _ in 0..e {
                    m *= x;
                }
            }
            acc += m;
        }
        acc
    }

    /// Exact multivariate division; panics unless `self` is a multiple of `d`.
    pub(crate) fn div_exact(&self, d: &Poly) -> Poly {
        assert_eq!(self.nvars, d.nvars);
        let (dk, dc) = d.leading().expect("division by zero polynomial");
        let mut rem = self.clone();
        let mut quot = Poly::zero(self.nvars);
        while let Some((rk, rc)) = rem.leading() {
            let qk = exp_sub_checked(rk, dk, self.nvars)
                .expect("inexact polynomial division");
            let qc = rc / dc;
            quot.add_term(qk, &qc);
            // rem -= (qc * x^qk) * d
            for (&k, c) in &d.terms {
                rem.add_term(exp_add(k, qk, self.nvars), &(-(c * &qc)));
            }
        }
        quot
    }

    /// Scale so the leading coefficient is 1. Zero stays zero.
    pub(crate) fn monic(&self) -> Poly {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) => {
                let inv = Rational::one() / c;
                self.scale(&inv)
            }
        }
    }

    /// Render with the given variable names; reparses to the same polynomial.
    pub fn display(&self, names: &[&str]) -> String {
        assert_eq!(names.len(), self.nvars);
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        // Leading term first.
        for (i, (&key, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let mut factors: Vec<String> = Vec::new();
            if !mag.is_one() || key == 0 {
                factors.push(mag.to_string());
            }
            for (v, name) in names.iter().enumerate() {
                let e = exp_get(key, v);
                match e {
                    0 => {}
                    1 => factors.push((*name).to_string()),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            let _ = write!(out, "{}", factors.join("*"));
        }
        out
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (&k, c) in &rhs.terms {
            out.add_term(k, c);
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (&k, c) in &rhs.terms {
            out.add_term(k, &(-c.clone()));
        }
        out
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = Poly::zero(self.nvars);
        for (&ka, ca) in &self.terms {
            for (&kb, cb) in &rhs.terms {
                out.add_term(exp_add(ka, kb, self.nvars), &(ca * cb));
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.map_coeffs(|c| -c.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};

    fn xy() -> (Poly, Poly) {
        (Poly::var(2, 0), Poly::var(2, 1))
    }

    #[test]
    fn partial_of_x2y_is_2xy() {
        let (x, y) = xy();
        let p = &(&x * &x) * &y;
        let expect = &(&x * &y).scale(&rat_int(2)) * &Poly::one(2);
        assert_eq!(p.partial(0), expect);
    }

    #[test]
    fn partial_absent_variable_is_zero() {
        let (x, _) = xy();
        let p = &x * &x;
        assert!(p.partial(1).is_zero());
    }

    #[test]
    fn partial_is_leibniz_on_x_times_x() {
        let (x, _) = xy();
        let prod = &x * &x;
        let lhs = prod.partial(0);
        let rhs = &(&x * &x.partial(0)) + &(&x.partial(0) * &x);
        assert_eq!(lhs, rhs);
        assert_eq!(lhs, x.scale(&rat_int(2)));
    }

    #[test]
    #[should_panic(expected = "coordinate index out of range")]
    fn partial_index_out_of_range_panics() {
        let (x, _) = xy();
        let _ = x.partial(5);
    }

    #[test]
    fn div_exact_recovers_factor() {
        let (x, y) = xy();
        let a = &(&x + &y) * &(&x - &y);
        let q = a.div_exact(&(&x + &y));
        assert_eq!(q, &x - &y);
    }

    #[test]
    fn display_roundtrip_shape() {
        let (x, y) = xy();
        let p = &(&(&x * &x) * &y).scale(&rat_int(2)) - &Poly::constant(2, rat(1, 3));
        assert_eq!(p.display(&["x", "y"]), "2*x^2*y - 1/3");
    }

    #[test]
    fn eval_exact() {
        let (x, y) = xy();
        let p = &x + &y;
        assert_eq!(p.eval(&[rat_int(1), rat_int(2)]), rat_int(3));
    }
}
