//! Hodge star, inner product, codifferential, Laplace–de Rham operator,
//! and divergence.
//!
//! The star is evaluated in the orthonormal frame basis, where it is purely
//! combinatorial: `*(e^I) = eta_I sgn(I, I^c) e^(I^c)`. Inputs in the
//! coordinate basis are converted in and back out, so all public results
//! stay in the caller's basis and everything remains exact. The inverse
//! star is the closed-form sign `sgn(g) (-1)^(a(n+1))` times the star, never
//! a solve.

use crate::exterior::{complement, concat_perm_sign, subsets, Basis, Form, VectorField};
use crate::manifold::Space;
use crate::rat::{rat_int, RationalFn};

impl Space {
    /// The volume form `e^1 ^ ... ^ e^n`, in coordinate components.
    pub fn volume_form(&self) -> Form {
        let n = self.dim();
        let idx: Vec<u8> = (0..n as u8).collect();
        let frame_top = Form::from_comps(
            self.chart().clone(),
            Basis::Frame,
            n as i32,
            vec![(idx, RationalFn::one(n))],
        );
        self.to_basis(&frame_top, Basis::Coordinate)
    }

    /// Hodge star. `*1 = omega`, `*omega = sgn(g)`, and
    /// `**a = sgn(g) (-1)^(a(n+1)) a`.
    pub fn star(&self, a: &Form) -> Form {
        let n = self.dim();
        let out_degree = n as i32 - a.degree();
        let original = a.basis();
        if a.is_zero() {
            return Form::zero(self.chart().clone(), original, out_degree);
        }
        let fr = self.to_basis(a, Basis::Frame);
        let eta = self.eta();
        let mut entries: Vec<(Vec<u8>, RationalFn)> = Vec::new();
        for (idx, f) in fr.comps() {
            let comp = complement(idx, n);
            let mut sign: i8 = concat_perm_sign(idx, &comp);
            for &k in idx {
                sign *= eta[k as usize];
            }
            let val = if sign == 1 { f.clone() } else { -f };
            entries.push((comp, val));
        }
        let starred = Form::from_comps(self.chart().clone(), Basis::Frame, out_degree, entries);
        self.to_basis(&starred, original)
    }

    /// Inverse star via the sign law: `*^-1 b = sgn(g) (-1)^(b(n+1)) * b`.
    pub fn star_inv(&self, a: &Form) -> Form {
        let n = self.dim() as i32;
        let s = self.star(a);
        let mut parity = (a.degree().rem_euclid(2)) * ((n + 1).rem_euclid(2));
        if self.sgn() < 0 {
            parity += 1;
        }
        if parity % 2 == 0 {
            s
        } else {
            -&s
        }
    }

    /// Inner product on equal-degree forms: `(a, b) = *^-1(a ^ *b)`.
    pub fn form_inner(&self, a: &Form, b: &Form) -> RationalFn {
        assert_eq!(a.degree(), b.degree(), "inner product needs equal degrees");
        let a = self.to_basis(a, Basis::Coordinate);
        let sb = self.star(&self.to_basis(b, Basis::Coordinate));
        let w = a.wedge(&sb);
        let r = self.star_inv(&w);
        if r.degree() == 0 {
            r.scalar_part()
        } else {
            RationalFn::zero(self.dim())
        }
    }

    /// Componentwise inner product `(1/p!) a_{mu...} b_{nu...} g^{mu nu}...`,
    /// kept as an independent route for cross-checks.
    pub fn form_inner_contraction(&self, a: &Form, b: &Form) -> RationalFn {
        assert_eq!(a.degree(), b.degree());
        let n = self.dim();
        let p = a.degree();
        if !(0..=n as i32).contains(&p) {
            return RationalFn::zero(n);
        }
        let a = self.to_basis(a, Basis::Coordinate);
        let b = self.to_basis(b, Basis::Coordinate);
        if p == 0 {
            return &a.scalar_part() * &b.scalar_part();
        }
        let g_inv = &self.metric().g_inv;
        let mut acc = RationalFn::zero(n);
        // Both multi-indices increasing; the p! cancels against the sum
        // over permutations, leaving a determinant contraction.
        for i in subsets(n, p as usize) {
            let fa = a.comp(&i);
            if fa.is_zero() {
                continue;
            }
            for j in subsets(n, p as usize) {
                let fb = b.comp(&j);
                if fb.is_zero() {
                    continue;
                }
                let sub: Vec<Vec<RationalFn>> = i
                    .iter()
                    .map(|&r| j.iter().map(|&c| g_inv[r as usize][c as usize].clone()).collect())
                    .collect();
                let d = crate::manifold::det(&sub);
                if !d.is_zero() {
                    acc = &acc + &(&(&fa * &fb) * &d);
                }
            }
        }
        acc
    }

    /// Codifferential `delta a = (-1)^a *^-1 d * a`; degree `a - 1`.
    pub fn codifferential(&self, a: &Form) -> Form {
        let r = self.star_inv(&self.ext_d(&self.star(a)));
        if a.degree().rem_euclid(2) == 0 {
            r
        } else {
            -&r
        }
    }

    /// Covariant derivative of a form along the coordinate direction `mu`.
    pub fn covariant_derivative(&self, mu: usize, a: &Form) -> Form {
        let n = self.dim();
        let a = self.to_basis(a, Basis::Coordinate);
        let p = a.degree();
        if !(0..=n as i32).contains(&p) {
            return Form::zero(self.chart().clone(), Basis::Coordinate, p);
        }
        let gamma = &self.metric().gamma;
        let mut entries = Vec::new();
        for target in subsets(n, p as usize) {
            let mut s = a.comp(&target).partial(mu);
            for (j, &tj) in target.iter().enumerate() {
                for sig in 0..n {
                    let gam = &gamma[sig][mu][tj as usize];
                    if gam.is_zero() {
                        continue;
                    }
                    let mut replaced = target.clone();
                    replaced[j] = sig as u8;
                    let comp = a.full_comp(&replaced);
                    if !comp.is_zero() {
                        s = &s - &(gam * &comp);
                    }
                }
            }
            entries.push((target, s));
        }
        Form::from_comps(self.chart().clone(), Basis::Coordinate, p, entries)
    }

    /// Codifferential through the Levi-Civita connection:
    /// `(delta a)_{nu...} = -g^{mu nu_1} (nabla_mu a)_{nu_1 nu...}`.
    /// Must agree exactly with the Hodge route.
    pub fn codifferential_via_connection(&self, a: &Form) -> Form {
        let n = self.dim();
        let a = self.to_basis(a, Basis::Coordinate);
        let p = a.degree();
        let out_degree = p - 1;
        if !(1..=n as i32).contains(&p) {
            return Form::zero(self.chart().clone(), Basis::Coordinate, out_degree);
        }
        let g_inv = &self.metric().g_inv;
        let nablas: Vec<Form> = (0..n).map(|mu| self.covariant_derivative(mu, &a)).collect();
        let mut entries = Vec::new();
        for target in subsets(n, out_degree as usize) {
            let mut s = RationalFn::zero(n);
            for mu in 0..n {
                for nu in 0..n {
                    if g_inv[mu][nu].is_zero() {
                        continue;
                    }
                    let mut idx = Vec::with_capacity(p as usize);
                    idx.push(nu as u8);
                    idx.extend_from_slice(&target);
                    let comp = nablas[mu].full_comp(&idx);
                    if !comp.is_zero() {
                        s = &s - &(&g_inv[mu][nu] * &comp);
                    }
                }
            }
            entries.push((target, s));
        }
        Form::from_comps(self.chart().clone(), Basis::Coordinate, out_degree, entries)
    }

    /// Laplace–de Rham operator `box = -(d delta + delta d)`; on flat
    /// scalars this is the ordinary Laplacian (`box x^2 = 2` on euclid3).
    pub fn laplace_de_rham(&self, a: &Form) -> Form {
        let dd = self.ext_d(&self.codifferential(a));
        let deltad = self.codifferential(&self.ext_d(a));
        -&(&dd + &deltad)
    }

    /// Divergence `div v = -delta(flat v)`; satisfies `L_v omega = div(v) omega`.
    pub fn divergence(&self, v: &VectorField) -> RationalFn {
        let d = self.codifferential(&self.flat1(v));
        if d.degree() == 0 {
            -&d.scalar_part()
        } else {
            RationalFn::zero(self.dim())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::load_fixture;
    use crate::rat::rat;

    fn dx(sp: &Space, i: usize) -> Form {
        Form::basis_one_form(sp.chart().clone(), Basis::Coordinate, i)
    }

    #[test]
    fn star_of_dx_on_euclid3() {
        let sp = load_fixture("euclid3").unwrap();
        assert_eq!(sp.star(&dx(&sp, 0)), dx(&sp, 1).wedge(&dx(&sp, 2)));
    }

    #[test]
    fn star_is_coefficient_linear() {
        let sp = load_fixture("euclid3").unwrap();
        let x = RationalFn::var(3, 0);
        let a = dx(&sp, 0).wedge(&dx(&sp, 1)).scale(&x);
        assert_eq!(sp.star(&a), dx(&sp, 2).scale(&x));
    }

    #[test]
    fn star_star_sign_on_mink4() {
        let sp = load_fixture("mink4").unwrap();
        let n = 4i32;
        for deg in 0..=3usize {
            let mut a = dx(&sp, 0);
            for k in 1..deg {
                a = a.wedge(&dx(&sp, k));
            }
            if deg == 0 {
                a = Form::scalar(sp.chart().clone(), RationalFn::var(4, 1));
            }
            let twice = sp.star(&sp.star(&a));
            let parity = (a.degree() * (n + 1)).rem_euclid(2) + 1; // sgn(g) = -1
            let expect = if parity % 2 == 0 { a.clone() } else { -&a };
            assert_eq!(twice, expect, "degree {deg}");
        }
    }

    #[test]
    fn star_unit_and_volume() {
        for name in ["euclid2", "euclid3", "mink4", "conf3"] {
            let sp = load_fixture(name).unwrap();
            let one = Form::scalar(sp.chart().clone(), RationalFn::one(sp.dim()));
            assert_eq!(sp.star(&one), sp.volume_form(), "{name}: *1 = omega");
            let sgn = Form::scalar(
                sp.chart().clone(),
                RationalFn::constant(sp.dim(), rat(sp.sgn() as i64, 1)),
            );
            assert_eq!(sp.star(&sp.volume_form()), sgn, "{name}: *omega = sgn");
            assert_eq!(sp.star_inv(&sp.volume_form()), one, "{name}: *^-1 omega = 1");
        }
    }

    #[test]
    fn star_inv_is_neg_star_on_euclid2_one_forms() {
        let sp = load_fixture("euclid2").unwrap();
        let a = dx(&sp, 0).scale(&RationalFn::var(2, 1));
        assert_eq!(sp.star_inv(&a), -&sp.star(&a));
        assert_eq!(sp.star_inv(&sp.star(&a)), a);
    }

    #[test]
    fn inner_products() {
        let sp = load_fixture("euclid3").unwrap();
        assert_eq!(sp.form_inner(&dx(&sp, 0), &dx(&sp, 0)), RationalFn::one(3));

        let mink = load_fixture("mink4").unwrap();
        let dt = Form::basis_one_form(mink.chart().clone(), Basis::Coordinate, 0);
        // (dt, dt) = g^{tt} = -1.
        assert_eq!(mink.form_inner(&dt, &dt), -&RationalFn::one(4));
    }

    #[test]
    fn codifferential_examples() {
        let sp = load_fixture("euclid3").unwrap();
        // Oracle: on flat space delta(lambda) = -d_mu lambda^mu, so
        // delta(x dx) = -1.
        let x = RationalFn::var(3, 0);
        let a = dx(&sp, 0).scale(&x);
        let oracle = -&x.partial(0);
        let minus_one = Form::scalar(sp.chart().clone(), oracle);
        assert_eq!(sp.codifferential(&a), minus_one);

        // delta on 0-forms is the typed zero of degree -1.
        let phi = Form::scalar(sp.chart().clone(), x);
        let d = sp.codifferential(&phi);
        assert!(d.is_zero());
        assert_eq!(d.degree(), -1);
    }

    #[test]
    fn codifferential_squares_to_zero() {
        let sp = load_fixture("conf3").unwrap();
        let x = RationalFn::var(3, 0);
        let y = RationalFn::var(3, 1);
        let first = dx(&sp, 0).wedge(&dx(&sp, 1)).scale(&(&x * &y));
        let second = dx(&sp, 1).wedge(&dx(&sp, 2)).scale(&y);
        let a = &first + &second;
        assert!(sp.codifferential(&sp.codifferential(&a)).is_zero());
    }

    #[test]
    fn connection_route_matches_hodge_route() {
        for name in ["euclid3", "conf3", "mink4"] {
            let sp = load_fixture(name).unwrap();
            let n = sp.dim();
            let x = RationalFn::var(n, 0);
            let y = RationalFn::var(n, 1);
            let first = dx(&sp, 0).scale(&(&x * &x));
            let second = dx(&sp, 1).wedge(&dx(&sp, n - 1)).scale(&y);
            for a in [first, second] {
                assert_eq!(
                    sp.codifferential_via_connection(&a),
                    sp.codifferential(&a),
                    "{name}"
                );
            }
            let xdx = dx(&sp, 0).scale(&x);
            assert_eq!(
                sp.codifferential_via_connection(&xdx),
                sp.codifferential(&xdx)
            );
        }
    }

    #[test]
    fn laplacian_on_flat_scalars() {
        let sp = load_fixture("euclid3").unwrap();
        let x = RationalFn::var(3, 0);
        // box(x^2) = 2, via -delta d x^2 = -delta(2x dx) = 2.
        let phi = Form::scalar(sp.chart().clone(), &x * &x);
        let two = Form::scalar(sp.chart().clone(), RationalFn::constant(3, rat(2, 1)));
        assert_eq!(sp.laplace_de_rham(&phi), two);

        let c = Form::scalar(sp.chart().clone(), RationalFn::constant(3, rat(5, 7)));
        assert!(sp.laplace_de_rham(&c).is_zero());
    }

    #[test]
    fn box_commutes_with_d() {
        let sp = load_fixture("conf3").unwrap();
        let x = RationalFn::var(3, 0);
        let a = dx(&sp, 1).scale(&(&x * &x));
        let lhs = sp.laplace_de_rham(&sp.ext_d(&a));
        let rhs = sp.ext_d(&sp.laplace_de_rham(&a));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn divergence_examples() {
        let sp = load_fixture("euclid3").unwrap();
        let v = VectorField::coordinate(sp.chart().clone(), 0);
        assert!(sp.divergence(&v).is_zero());

        // div(x d/dx) = -delta(x dx) = 1.
        let x = RationalFn::var(3, 0);
        let xv = v.scale(&x);
        assert_eq!(sp.divergence(&xv), RationalFn::one(3));
    }

    #[test]
    fn lie_of_volume_is_divergence_times_volume() {
        let sp = load_fixture("conf3").unwrap();
        let x = RationalFn::var(3, 0);
        let z = RationalFn::var(3, 2);
        let v = VectorField::new(
            sp.chart().clone(),
            vec![&x * &z, RationalFn::one(3), x.clone()],
        );
        let omega = sp.volume_form();
        let lhs = sp.lie_form_components(&v, &omega);
        let rhs = omega.scale(&sp.divergence(&v));
        assert_eq!(lhs, rhs);
    }
}
