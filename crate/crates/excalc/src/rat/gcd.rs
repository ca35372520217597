//! Multivariate polynomial gcd over the rationals.
//!
//! Content/primitive-part recursion on the highest occurring variable, with
//! a primitive pseudo-remainder sequence for the univariate steps. The
//! result is normalized to be monic under the canonical monomial order, so
//! gcds are unique and [`RationalFn`](super::RationalFn) reduction is
//! deterministic. Degrees in this crate are tiny, so no modular or sparse
//! interpolation machinery is warranted.

use super::poly::{exp_get, Poly};

/// Monic gcd of two polynomials; `gcd(0, 0) = 0`.
pub(crate) fn poly_gcd(f: &Poly, g: &Poly) -> Poly {
    assert_eq!(f.nvars(), g.nvars(), "variable count mismatch");
    if f.is_zero() {
        return g.monic();
    }
    if g.is_zero() {
        return f.monic();
    }
    if f.as_constant().is_some() || g.as_constant().is_some() {
        return Poly::one(f.nvars());
    }
    let v = main_var(f, g);
    match (f.uses_var(v), g.uses_var(v)) {
        (true, false) => return poly_gcd(&content_in(f, v), g),
        (false, true) => return poly_gcd(f, &content_in(g, v)),
        (false, false) => unreachable!("main variable occurs in neither operand"),
        (true, true) => {}
    }

    let cf = content_in(f, v);
    let cg = content_in(g, v);
    let pf = f.div_exact(&cf);
    let pg = g.div_exact(&cg);
    let c = poly_gcd(&cf, &cg);

    let (mut a, mut b) = if pf.degree_in(v) >= pg.degree_in(v) {
        (pf, pg)
    } else {
        (pg, pf)
    };
    loop {
        let r = pseudo_rem(&a, &b, v);
        if r.is_zero() {
            let pb = b.div_exact(&content_in(&b, v));
            return (&c * &pb).monic();
        }
        if r.degree_in(v) == 0 {
            // Primitive parts are coprime in v.
            return c.monic();
        }
        a = b;
        b = r.div_exact(&content_in(&r, v));
    }
}

/// Highest variable index occurring in either polynomial.
fn main_var(f: &Poly, g: &Poly) -> usize {
    (0..f.nvars())
        .rev()
        .find(|&v| f.uses_var(v) || g.uses_var(v))
        .expect("non-constant polynomial without variables")
}

/// Gcd of the coefficients of `f` seen as univariate in `v`.
fn content_in(f: &Poly, v: usize) -> Poly {
    let mut cont = Poly::zero(f.nvars());
    let mut seen: Vec<u32> = f.terms().map(|(&k, _)| exp_get(k, v)).collect();
    seen.sort_unstable();
    seen.dedup();
    for k in seen {
        cont = poly_gcd(&cont, &f.coeff_of(v, k));
        if cont.is_one() {
            return cont;
        }
    }
    cont
}

/// Pseudo-remainder of `a` by `b` in the variable `v` (multiplies the
/// running remainder by the leading coefficient of `b` at each step, which
/// only perturbs content).
fn pseudo_rem(a: &Poly, b: &Poly, v: usize) -> Poly {
    let db = b.degree_in(v);
    let lcb = b.coeff_of(v, db);
    let mut r = a.clone();
    while !r.is_zero() {
        let dr = r.degree_in(v);
        if dr < db {
            break;
        }
        let lcr = r.coeff_of(v, dr);
        // r <- lcb * r - lcr * x_v^(dr-db) * b
        r = &(&r * &lcb) - &(&lcr * &b.mul_var_pow(v, dr - db));
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat_int;

    #[test]
    fn gcd_of_coprime_is_one() {
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        assert!(poly_gcd(&x, &y).is_one());
    }

    #[test]
    fn gcd_pulls_out_common_factor() {
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        let common = &x + &y;
        let f = &common * &x;
        let g = &common * &(&y + &Poly::one(2));
        assert_eq!(poly_gcd(&f, &g), common.monic());
    }

    #[test]
    fn gcd_univariate_difference_of_squares() {
        let x = Poly::var(1, 0);
        let one = Poly::one(1);
        let f = &(&x * &x) - &one; // x^2 - 1
        let g = &x - &one; // x - 1
        assert_eq!(poly_gcd(&f, &g), g.monic());
    }

    #[test]
    fn gcd_with_constant_is_one() {
        let x = Poly::var(1, 0);
        let two = Poly::constant(1, rat_int(2));
        assert!(poly_gcd(&x, &two).is_one());
    }

    #[test]
    fn gcd_is_monic_and_symmetric() {
        let x = Poly::var(3, 0);
        let z = Poly::var(3, 2);
        let f = (&x + &z).scale(&rat_int(4));
        let g = &(&x + &z) * &(&x + &z);
        let d1 = poly_gcd(&f, &g);
        let d2 = poly_gcd(&g, &f);
        assert_eq!(d1, d2);
        assert_eq!(d1, (&x + &z).monic());
    }
}
