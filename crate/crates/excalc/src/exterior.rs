//! Forms, multivectors, and the metric-free part of the operator layer:
//! wedge, exterior derivative, insertions, musical isomorphisms, basis
//! changes, and component Lie derivatives.
//!
//! Components are stored on strictly increasing multi-indices. The degree
//! field is an `i32`: operators that land outside `0..=n` return the typed
//! zero of the arithmetic degree (empty component map), so degree edge
//! cases compose silently and two routes to the same identity always agree
//! on the type of their zeros.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use crate::manifold::{det, Chart, Space};
use crate::rat::RationalFn;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Basis {
    Coordinate,
    Frame,
}

// ---- multi-index helpers ----

/// Sort an index tuple, returning the permutation sign; `None` on repeats.
pub(crate) fn sort_with_sign(idx: &[u8]) -> Option<(Vec<u8>, i8)> {
    let mut v = idx.to_vec();
    let mut sign = 1i8;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, sign))
}

/// Merge two increasing tuples into one, with the wedge parity; `None` when
/// they overlap.
pub(crate) fn merge_sign(a: &[u8], b: &[u8]) -> Option<(Vec<u8>, i8)> {
    let mut joined = Vec::with_capacity(a.len() + b.len());
    joined.extend_from_slice(a);
    joined.extend_from_slice(b);
    sort_with_sign(&joined)
}

/// All strictly increasing `p`-tuples in `0..n`.
pub(crate) fn subsets(n: usize, p: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    if p > n {
        return out;
    }
    let mut cur: Vec<u8> = (0..p as u8).collect();
    loop {
        out.push(cur.clone());
        // Advance to the next combination.
        let mut i = p;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < (n - p + i) as u8 {
                cur[i] += 1;
                for j in i + 1..p {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

pub(crate) fn complement(idx: &[u8], n: usize) -> Vec<u8> {
    (0..n as u8).filter(|k| !idx.contains(k)).collect()
}

/// Sign of the permutation `(a ++ b)` of `0..n` relative to increasing
/// order (count of inversions).
pub(crate) fn concat_perm_sign(a: &[u8], b: &[u8]) -> i8 {
    let mut joined = Vec::with_capacity(a.len() + b.len());
    joined.extend_from_slice(a);
    joined.extend_from_slice(b);
    let mut inv = 0usize;
    for i in 0..joined.len() {
        for j in i + 1..joined.len() {
            if joined[i] > joined[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

/// All `p`-tuples (with repeats) over `0..n`, for full-component sums.
pub(crate) fn tuples(n: usize, p: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    for _ in 0..p {
        let mut next = Vec::with_capacity(out.len() * n);
        for t in &out {
            for k in 0..n as u8 {
                let mut t2 = t.clone();
                t2.push(k);
                next.push(t2);
            }
        }
        out = next;
    }
    out
}

fn lookup_full(
    comps: &BTreeMap<Vec<u8>, RationalFn>,
    idx: &[u8],
    nvars: usize,
) -> RationalFn {
    match sort_with_sign(idx) {
        None => RationalFn::zero(nvars),
        Some((key, sign)) => match comps.get(&key) {
            None => RationalFn::zero(nvars),
            Some(f) => {
                if sign == 1 {
                    f.clone()
                } else {
                    -f
                }
            }
        },
    }
}

// ---- forms ----

/// Degree-graded antisymmetric covariant tensor with rational-function
/// components on strictly increasing multi-indices.
#[derive(Clone, Debug, PartialEq)]
pub struct Form {
    chart: Arc<Chart>,
    basis: Basis,
    degree: i32,
    comps: BTreeMap<Vec<u8>, RationalFn>,
}

impl Form {
    pub fn zero(chart: Arc<Chart>, basis: Basis, degree: i32) -> Form {
        Form { chart, basis, degree, comps: BTreeMap::new() }
    }

    pub fn scalar(chart: Arc<Chart>, f: RationalFn) -> Form {
        let mut comps = BTreeMap::new();
        if !f.is_zero() {
            comps.insert(Vec::new(), f);
        }
        Form { chart, basis: Basis::Coordinate, degree: 0, comps }
    }

    /// `dx^idx` (coordinate) or `e^(idx+1)` (frame).
    pub fn basis_one_form(chart: Arc<Chart>, basis: Basis, idx: usize) -> Form {
        assert!(idx < chart.dim(), "basis index out of range");
        let n = chart.dim();
        let mut comps = BTreeMap::new();
        comps.insert(vec![idx as u8], RationalFn::one(n));
        Form { chart, basis, degree: 1, comps }
    }

    pub fn from_comps(
        chart: Arc<Chart>,
        basis: Basis,
        degree: i32,
        entries: Vec<(Vec<u8>, RationalFn)>,
    ) -> Form {
        let n = chart.dim() as i32;
        let mut comps = BTreeMap::new();
        if (0..=n).contains(&degree) {
            for (idx, f) in entries {
                assert_eq!(idx.len() as i32, degree, "index length must match degree");
                assert!(
                    idx.windows(2).all(|w| w[0] < w[1]),
                    "multi-index must be strictly increasing"
                );
                assert!(idx.iter().all(|&k| (k as usize) < chart.dim()));
                if !f.is_zero() {
                    comps.insert(idx, f);
                }
            }
        } else {
            assert!(entries.iter().all(|(_, f)| f.is_zero()));
        }
        Form { chart, basis, degree, comps }
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn comps(&self) -> impl Iterator<Item = (&Vec<u8>, &RationalFn)> {
        self.comps.iter()
    }

    /// Component on an increasing multi-index (zero when absent).
    pub fn comp(&self, idx: &[u8]) -> RationalFn {
        self.comps
            .get(idx)
            .cloned()
            .unwrap_or_else(|| RationalFn::zero(self.chart.dim()))
    }

    /// Fully antisymmetric component on an arbitrary index tuple.
    pub fn full_comp(&self, idx: &[u8]) -> RationalFn {
        lookup_full(&self.comps, idx, self.chart.dim())
    }

    /// The value of a 0-form (zero for the zero form).
    pub fn scalar_part(&self) -> RationalFn {
        assert_eq!(self.degree, 0, "scalar_part on a form of degree != 0");
        self.comp(&[])
    }

    pub fn scale(&self, f: &RationalFn) -> Form {
        let mut comps = BTreeMap::new();
        if !f.is_zero() {
            for (idx, c) in &self.comps {
                let v = c * f;
                if !v.is_zero() {
                    comps.insert(idx.clone(), v);
                }
            }
        }
        Form { chart: self.chart.clone(), basis: self.basis, degree: self.degree, comps }
    }

    pub fn scale_int(&self, k: i64) -> Form {
        self.scale(&RationalFn::constant(self.chart.dim(), crate::rat::rat_int(k)))
    }

    /// Exterior product. A degree-0 operand acts as a scalar regardless of
    /// basis; otherwise both operands must share chart and basis.
    pub fn wedge(&self, rhs: &Form) -> Form {
        assert_eq!(self.chart, rhs.chart, "chart mismatch in wedge");
        if self.degree == 0 {
            let out = rhs.scale(&self.comp(&[]));
            return out;
        }
        if rhs.degree == 0 {
            return self.scale(&rhs.comp(&[]));
        }
        assert_eq!(self.basis, rhs.basis, "basis mismatch in wedge");
        let degree = self.degree + rhs.degree;
        let mut out = Form::zero(self.chart.clone(), self.basis, degree);
        if degree > self.chart.dim() as i32 || self.degree < 0 || rhs.degree < 0 {
            return out;
        }
        for (ia, fa) in &self.comps {
            for (ib, fb) in &rhs.comps {
                if let Some((key, sign)) = merge_sign(ia, ib) {
                    let term = fa * fb;
                    let term = if sign == 1 { term } else { -&term };
                    add_into(&mut out.comps, key, term);
                }
            }
        }
        out
    }
}

fn add_into(map: &mut BTreeMap<Vec<u8>, RationalFn>, key: Vec<u8>, val: RationalFn) {
    if val.is_zero() {
        return;
    }
    match map.get_mut(&key) {
        Some(cur) => {
            let s = &*cur + &val;
            if s.is_zero() {
                map.remove(&key);
            } else {
                *cur = s;
            }
        }
        None => {
            map.insert(key, val);
        }
    }
}

impl Add for &Form {
    type Output = Form;
    fn add(self, rhs: &Form) -> Form {
        assert_eq!(self.chart, rhs.chart, "chart mismatch in +");
        assert_eq!(self.degree, rhs.degree, "degree mismatch in +");
        if !self.comps.is_empty() && !rhs.comps.is_empty() {
            assert_eq!(self.basis, rhs.basis, "basis mismatch in +");
        }
        let basis = if self.comps.is_empty() { rhs.basis } else { self.basis };
        let mut out = Form { chart: self.chart.clone(), basis, degree: self.degree, comps: self.comps.clone() };
        for (idx, f) in &rhs.comps {
            add_into(&mut out.comps, idx.clone(), f.clone());
        }
        out
    }
}

impl Sub for &Form {
    type Output = Form;
    fn sub(self, rhs: &Form) -> Form {
        self + &(-rhs)
    }
}

impl Neg for &Form {
    type Output = Form;
    fn neg(self) -> Form {
        let comps = self.comps.iter().map(|(k, f)| (k.clone(), -f)).collect();
        Form { chart: self.chart.clone(), basis: self.basis, degree: self.degree, comps }
    }
}

fn blade_name(chart: &Chart, basis: Basis, idx: &[u8]) -> String {
    let parts: Vec<String> = idx
        .iter()
        .map(|&k| match basis {
            Basis::Coordinate => format!("d{}", chart.coord_name(k as usize)),
            Basis::Frame => format!("e{}", k + 1),
        })
        .collect();
    parts.join("^")
}

fn fmt_graded(
    f: &mut fmt::Formatter<'_>,
    chart: &Chart,
    basis: Basis,
    comps: &BTreeMap<Vec<u8>, RationalFn>,
    blade: impl Fn(&Chart, Basis, &[u8]) -> String,
) -> fmt::Result {
    if comps.is_empty() {
        return write!(f, "0");
    }
    let names: Vec<&str> = chart.coord_names().iter().map(|s| s.as_str()).collect();
    for (i, (idx, c)) in comps.iter().enumerate() {
        let rendered = c.display(&names);
        // A coefficient prints bare when it is a single monomial; a leading
        // minus is pulled out so the printed sum stays readable.
        let (neg, body) = match rendered.strip_prefix('-') {
            Some(rest) if !rest.contains(" + ") && !rest.contains(" - ") => {
                (true, rest.to_string())
            }
            _ if !rendered.contains(" + ") && !rendered.contains(" - ") => {
                (false, rendered.clone())
            }
            _ => (false, format!("({rendered})")),
        };
        if i == 0 {
            if neg {
                write!(f, "-")?;
            }
        } else if neg {
            write!(f, " - ")?;
        } else {
            write!(f, " + ")?;
        }
        if idx.is_empty() {
            write!(f, "{body}")?;
        } else if body == "1" {
            write!(f, "{}", blade(chart, basis, idx))?;
        } else {
            write!(f, "{}*{}", body, blade(chart, basis, idx))?;
        }
    }
    Ok(())
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_graded(f, &self.chart, self.basis, &self.comps, blade_name)
    }
}

// ---- vector fields and multivectors ----

/// Contravariant rank-1 field in the coordinate basis.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorField {
    chart: Arc<Chart>,
    comps: Vec<RationalFn>,
}

impl VectorField {
    pub fn new(chart: Arc<Chart>, comps: Vec<RationalFn>) -> VectorField {
        assert_eq!(comps.len(), chart.dim());
        assert!(comps.iter().all(|f| f.nvars() == chart.dim()));
        VectorField { chart, comps }
    }

    /// The coordinate vector `d/dx^i`.
    pub fn coordinate(chart: Arc<Chart>, i: usize) -> VectorField {
        let n = chart.dim();
        let mut comps = vec![RationalFn::zero(n); n];
        comps[i] = RationalFn::one(n);
        VectorField::new(chart, comps)
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn comp(&self, i: usize) -> &RationalFn {
        &self.comps[i]
    }

    pub fn comps(&self) -> &[RationalFn] {
        &self.comps
    }

    pub fn as_multivector(&self) -> Multivector {
        let entries: Vec<(Vec<u8>, RationalFn)> = self
            .comps
            .iter()
            .enumerate()
            .map(|(i, f)| (vec![i as u8], f.clone()))
            .collect();
        Multivector::from_comps(self.chart.clone(), Basis::Coordinate, 1, entries)
    }

    pub fn add(&self, rhs: &VectorField) -> VectorField {
        assert_eq!(self.chart, rhs.chart);
        let comps = self
            .comps
            .iter()
            .zip(&rhs.comps)
            .map(|(a, b)| a + b)
            .collect();
        VectorField::new(self.chart.clone(), comps)
    }

    pub fn scale(&self, f: &RationalFn) -> VectorField {
        VectorField::new(
            self.chart.clone(),
            self.comps.iter().map(|c| c * f).collect(),
        )
    }
}

/// Antisymmetric contravariant tensor, stored like [`Form`].
#[derive(Clone, Debug, PartialEq)]
pub struct Multivector {
    chart: Arc<Chart>,
    basis: Basis,
    degree: i32,
    comps: BTreeMap<Vec<u8>, RationalFn>,
}

impl Multivector {
    pub fn zero(chart: Arc<Chart>, basis: Basis, degree: i32) -> Multivector {
        Multivector { chart, basis, degree, comps: BTreeMap::new() }
    }

    pub fn scalar(chart: Arc<Chart>, f: RationalFn) -> Multivector {
        let mut comps = BTreeMap::new();
        if !f.is_zero() {
            comps.insert(Vec::new(), f);
        }
        Multivector { chart, basis: Basis::Coordinate, degree: 0, comps }
    }

    pub fn from_comps(
        chart: Arc<Chart>,
        basis: Basis,
        degree: i32,
        entries: Vec<(Vec<u8>, RationalFn)>,
    ) -> Multivector {
        let n = chart.dim() as i32;
        let mut comps = BTreeMap::new();
        if (0..=n).contains(&degree) {
            for (idx, f) in entries {
                assert_eq!(idx.len() as i32, degree);
                assert!(idx.windows(2).all(|w| w[0] < w[1]));
                if !f.is_zero() {
                    comps.insert(idx, f);
                }
            }
        }
        Multivector { chart, basis, degree, comps }
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn comps(&self) -> impl Iterator<Item = (&Vec<u8>, &RationalFn)> {
        self.comps.iter()
    }

    pub fn comp(&self, idx: &[u8]) -> RationalFn {
        self.comps
            .get(idx)
            .cloned()
            .unwrap_or_else(|| RationalFn::zero(self.chart.dim()))
    }

    pub fn full_comp(&self, idx: &[u8]) -> RationalFn {
        lookup_full(&self.comps, idx, self.chart.dim())
    }

    pub fn scalar_part(&self) -> RationalFn {
        assert_eq!(self.degree, 0);
        self.comp(&[])
    }

    pub fn scale(&self, f: &RationalFn) -> Multivector {
        let mut comps = BTreeMap::new();
        if !f.is_zero() {
            for (idx, c) in &self.comps {
                let v = c * f;
                if !v.is_zero() {
                    comps.insert(idx.clone(), v);
                }
            }
        }
        Multivector { chart: self.chart.clone(), basis: self.basis, degree: self.degree, comps }
    }

    /// Reinterpret a degree-1 coordinate multivector as a [`VectorField`].
    pub fn as_vector_field(&self) -> VectorField {
        assert_eq!(self.degree, 1, "as_vector_field needs degree 1");
        assert_eq!(self.basis, Basis::Coordinate);
        let n = self.chart.dim();
        let comps = (0..n).map(|i| self.comp(&[i as u8])).collect();
        VectorField::new(self.chart.clone(), comps)
    }
}

impl Add for &Multivector {
    type Output = Multivector;
    fn add(self, rhs: &Multivector) -> Multivector {
        assert_eq!(self.chart, rhs.chart, "chart mismatch in +");
        assert_eq!(self.degree, rhs.degree, "degree mismatch in +");
        if !self.comps.is_empty() && !rhs.comps.is_empty() {
            assert_eq!(self.basis, rhs.basis, "basis mismatch in +");
        }
        let basis = if self.comps.is_empty() { rhs.basis } else { self.basis };
        let mut out = Multivector {
            chart: self.chart.clone(),
            basis,
            degree: self.degree,
            comps: self.comps.clone(),
        };
        for (idx, f) in &rhs.comps {
            add_into(&mut out.comps, idx.clone(), f.clone());
        }
        out
    }
}

impl Sub for &Multivector {
    type Output = Multivector;
    fn sub(self, rhs: &Multivector) -> Multivector {
        self + &(-rhs)
    }
}

impl Neg for &Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        let comps = self.comps.iter().map(|(k, f)| (k.clone(), -f)).collect();
        Multivector {
            chart: self.chart.clone(),
            basis: self.basis,
            degree: self.degree,
            comps,
        }
    }
}

impl fmt::Display for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_graded(f, &self.chart, self.basis, &self.comps, |chart, basis, idx| {
            let parts: Vec<String> = idx
                .iter()
                .map(|&k| match basis {
                    Basis::Coordinate => format!("D{}", chart.coord_name(k as usize)),
                    Basis::Frame => format!("E{}", k + 1),
                })
                .collect();
            parts.join("^")
        })
    }
}

// ---- metric-free and musical operators on Space ----

impl Space {
    /// Convert a form between coordinate and frame components.
    pub fn to_basis(&self, a: &Form, to: Basis) -> Form {
        if a.basis() == to || a.degree() == 0 {
            let mut out = a.clone();
            out.basis = to;
            return out;
        }
        let n = self.dim();
        let p = a.degree();
        let mut out = Form::zero(self.chart().clone(), to, p);
        if !(0..=n as i32).contains(&p) {
            return out;
        }
        let m = self.metric();
        // Covariant indices contract with Einv going to the frame and with
        // E coming back.
        let element: Box<dyn Fn(usize, usize) -> RationalFn + '_> = match (a.basis(), to) {
            (Basis::Coordinate, Basis::Frame) => Box::new(|row, col| m.e_inv[row][col].clone()),
            (Basis::Frame, Basis::Coordinate) => {
                Box::new(|row, col| self.frame().coframe()[row][col].clone())
            }
            _ => unreachable!(),
        };
        let targets = subsets(n, p as usize);
        for target in &targets {
            let mut acc = RationalFn::zero(n);
            for (src, f) in a.comps() {
                let sub: Vec<Vec<RationalFn>> = src
                    .iter()
                    .map(|&r| target.iter().map(|&c| element(r as usize, c as usize)).collect())
                    .collect();
                let d = det(&sub);
                if !d.is_zero() {
                    acc = &acc + &(f * &d);
                }
            }
            if !acc.is_zero() {
                out.comps.insert(target.clone(), acc);
            }
        }
        out
    }

    /// Convert a multivector between coordinate and frame components.
    pub fn multivector_to_basis(&self, a: &Multivector, to: Basis) -> Multivector {
        if a.basis() == to || a.degree() == 0 {
            let mut out = a.clone();
            out.basis = to;
            return out;
        }
        let n = self.dim();
        let p = a.degree();
        let mut out = Multivector::zero(self.chart().clone(), to, p);
        if !(0..=n as i32).contains(&p) {
            return out;
        }
        let m = self.metric();
        // Contravariant indices contract with E going to the frame and with
        // Einv coming back.
        let element: Box<dyn Fn(usize, usize) -> RationalFn + '_> = match (a.basis(), to) {
            (Basis::Coordinate, Basis::Frame) => {
                Box::new(|row, col| self.frame().coframe()[col][row].clone())
            }
            (Basis::Frame, Basis::Coordinate) => Box::new(|row, col| m.e_inv[col][row].clone()),
            _ => unreachable!(),
        };
        let targets = subsets(n, p as usize);
        for target in &targets {
            let mut acc = RationalFn::zero(n);
            for (src, f) in a.comps() {
                let sub: Vec<Vec<RationalFn>> = target
                    .iter()
                    .map(|&c| src.iter().map(|&r| element(r as usize, c as usize)).collect())
                    .collect();
                let d = det(&sub);
                if !d.is_zero() {
                    acc = &acc + &(f * &d);
                }
            }
            if !acc.is_zero() {
                out.comps.insert(target.clone(), acc);
            }
        }
        out
    }

    /// Exterior derivative. Frame-basis input is converted to coordinates,
    /// differentiated, and converted back.
    pub fn ext_d(&self, a: &Form) -> Form {
        if a.basis() == Basis::Frame {
            let coord = self.to_basis(a, Basis::Coordinate);
            return self.to_basis(&self.ext_d(&coord), Basis::Frame);
        }
        let n = self.dim();
        let mut out = Form::zero(self.chart().clone(), Basis::Coordinate, a.degree() + 1);
        if a.degree() < 0 || a.degree() + 1 > n as i32 {
            return out;
        }
        for (idx, f) in a.comps() {
            for mu in 0..n {
                let df = f.partial(mu);
                if df.is_zero() {
                    continue;
                }
                if let Some((key, sign)) = merge_sign(&[mu as u8], idx) {
                    let term = if sign == 1 { df } else { -&df };
                    add_into(&mut out.comps, key, term);
                }
            }
        }
        out
    }

    /// Classical interior product `i_v`.
    pub fn interior(&self, v: &VectorField, a: &Form) -> Form {
        let a = self.to_basis(a, Basis::Coordinate);
        let mut out = Form::zero(self.chart().clone(), Basis::Coordinate, a.degree() - 1);
        if a.degree() <= 0 {
            return out;
        }
        for (idx, f) in a.comps() {
            for (j, &ij) in idx.iter().enumerate() {
                let vf = v.comp(ij as usize);
                if vf.is_zero() {
                    continue;
                }
                let mut rest = idx.clone();
                rest.remove(j);
                let term = f * vf;
                let term = if j % 2 == 0 { term } else { -&term };
                add_into(&mut out.comps, rest, term);
            }
        }
        out
    }

    /// Creator operator `j_v a = (flat v) ^ a`.
    pub fn j_product(&self, v: &VectorField, a: &Form) -> Form {
        self.flat1(v).wedge(&self.to_basis(a, Basis::Coordinate))
    }

    /// Index-raising on a 1-form.
    pub fn sharp1(&self, a: &Form) -> VectorField {
        assert_eq!(a.degree(), 1, "sharp1 needs a 1-form");
        let a = self.to_basis(a, Basis::Coordinate);
        let n = self.dim();
        let g_inv = &self.metric().g_inv;
        let comps = (0..n)
            .map(|mu| {
                let mut s = RationalFn::zero(n);
                for nu in 0..n {
                    if g_inv[mu][nu].is_zero() {
                        continue;
                    }
                    s = &s + &(&g_inv[mu][nu] * &a.comp(&[nu as u8]));
                }
                s
            })
            .collect();
        VectorField::new(self.chart().clone(), comps)
    }

    /// Index-lowering on a vector field.
    pub fn flat1(&self, v: &VectorField) -> Form {
        let n = self.dim();
        let g = &self.metric().g;
        let entries = (0..n)
            .map(|mu| {
                let mut s = RationalFn::zero(n);
                for nu in 0..n {
                    if g[mu][nu].is_zero() {
                        continue;
                    }
                    s = &s + &(&g[mu][nu] * v.comp(nu));
                }
                (vec![mu as u8], s)
            })
            .collect();
        Form::from_comps(self.chart().clone(), Basis::Coordinate, 1, entries)
    }

    /// Raise every index: forms to multivectors.
    pub fn sharp(&self, a: &Form) -> Multivector {
        let a = self.to_basis(a, Basis::Coordinate);
        let n = self.dim();
        let p = a.degree();
        let mut out = Multivector::zero(self.chart().clone(), Basis::Coordinate, p);
        if !(0..=n as i32).contains(&p) {
            return out;
        }
        if p == 0 {
            return Multivector::scalar(self.chart().clone(), a.comp(&[]));
        }
        let g_inv = &self.metric().g_inv;
        for target in subsets(n, p as usize) {
            let mut acc = RationalFn::zero(n);
            for (src, f) in a.comps() {
                let sub: Vec<Vec<RationalFn>> = target
                    .iter()
                    .map(|&i| src.iter().map(|&j| g_inv[i as usize][j as usize].clone()).collect())
                    .collect();
                let d = det(&sub);
                if !d.is_zero() {
                    acc = &acc + &(f * &d);
                }
            }
            if !acc.is_zero() {
                out.comps.insert(target, acc);
            }
        }
        out
    }

    /// Lower every index: multivectors to forms.
    pub fn flat(&self, m: &Multivector) -> Form {
        let m = self.multivector_to_basis(m, Basis::Coordinate);
        let n = self.dim();
        let p = m.degree();
        let mut out = Form::zero(self.chart().clone(), Basis::Coordinate, p);
        if !(0..=n as i32).contains(&p) {
            return out;
        }
        if p == 0 {
            return Form::scalar(self.chart().clone(), m.comp(&[]));
        }
        let g = &self.metric().g;
        for target in subsets(n, p as usize) {
            let mut acc = RationalFn::zero(n);
            for (src, f) in m.comps() {
                let sub: Vec<Vec<RationalFn>> = target
                    .iter()
                    .map(|&i| src.iter().map(|&j| g[i as usize][j as usize].clone()).collect())
                    .collect();
                let d = det(&sub);
                if !d.is_zero() {
                    acc = &acc + &(f * &d);
                }
            }
            if !acc.is_zero() {
                out.comps.insert(target, acc);
            }
        }
        out
    }

    /// Component Lie derivative of a form along `v` (the cross-check for
    /// the Cartan route).
    pub fn lie_form_components(&self, v: &VectorField, a: &Form) -> Form {
        let a = self.to_basis(a, Basis::Coordinate);
        let n = self.dim();
        let p = a.degree();
        let mut out = Form::zero(self.chart().clone(), Basis::Coordinate, p);
        if !(0..=n as i32).contains(&p) {
            return out;
        }
        for target in subsets(n, p as usize) {
            let mut s = RationalFn::zero(n);
            let base = a.comp(&target);
            for sig in 0..n {
                if !v.comp(sig).is_zero() {
                    s = &s + &(v.comp(sig) * &base.partial(sig));
                }
            }
            for (j, &tj) in target.iter().enumerate() {
                for sig in 0..n {
                    let dv = v.comp(sig).partial(tj as usize);
                    if dv.is_zero() {
                        continue;
                    }
                    let mut replaced = target.clone();
                    replaced[j] = sig as u8;
                    let comp = a.full_comp(&replaced);
                    if !comp.is_zero() {
                        s = &s + &(&comp * &dv);
                    }
                }
            }
            if !s.is_zero() {
                out.comps.insert(target, s);
            }
        }
        out
    }

    /// Component Lie derivative of a multivector along `v`.
    pub fn lie_multivector(&self, v: &VectorField, m: &Multivector) -> Multivector {
        let m = self.multivector_to_basis(m, Basis::Coordinate);
        let n = self.dim();
        let p = m.degree();
        let mut out = Multivector::zero(self.chart().clone(), Basis::Coordinate, p);
        if !(0..=n as i32).contains(&p) {
            return out;
        }
        for target in subsets(n, p as usize) {
            let mut s = RationalFn::zero(n);
            let base = m.comp(&target);
            for sig in 0..n {
                if !v.comp(sig).is_zero() {
                    s = &s + &(v.comp(sig) * &base.partial(sig));
                }
            }
            for (j, &tj) in target.iter().enumerate() {
                for sig in 0..n {
                    let mut replaced = target.clone();
                    replaced[j] = sig as u8;
                    let comp = m.full_comp(&replaced);
                    if comp.is_zero() {
                        continue;
                    }
                    let dv = v.comp(tj as usize).partial(sig);
                    if !dv.is_zero() {
                        s = &s - &(&comp * &dv);
                    }
                }
            }
            if !s.is_zero() {
                out.comps.insert(target, s);
            }
        }
        out
    }

    /// `(L_v g~)^{mn}`: Lie derivative of the inverse metric, as a matrix.
    pub fn lie_inverse_metric(&self, v: &VectorField) -> Vec<Vec<RationalFn>> {
        let n = self.dim();
        let g_inv = &self.metric().g_inv;
        let mut out = vec![vec![RationalFn::zero(n); n]; n];
        for m in 0..n {
            for k in 0..n {
                let mut s = RationalFn::zero(n);
                for sig in 0..n {
                    if !v.comp(sig).is_zero() {
                        s = &s + &(v.comp(sig) * &g_inv[m][k].partial(sig));
                    }
                    if !g_inv[sig][k].is_zero() {
                        s = &s - &(&g_inv[sig][k] * &v.comp(m).partial(sig));
                    }
                    if !g_inv[m][sig].is_zero() {
                        s = &s - &(&g_inv[m][sig] * &v.comp(k).partial(sig));
                    }
                }
                out[m][k] = s;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::{load_fixture, Space};
    use crate::rat::RationalFn;

    fn euclid3() -> Space {
        load_fixture("euclid3").unwrap()
    }

    fn dx(sp: &Space, i: usize) -> Form {
        Form::basis_one_form(sp.chart().clone(), Basis::Coordinate, i)
    }

    #[test]
    fn wedge_antisymmetry() {
        let sp = euclid3();
        let (a, b) = (dx(&sp, 0), dx(&sp, 1));
        assert_eq!(a.wedge(&b), -&b.wedge(&a));
    }

    #[test]
    fn wedge_with_scalar_is_componentwise() {
        let sp = euclid3();
        let phi = Form::scalar(sp.chart().clone(), RationalFn::var(3, 0));
        let b = dx(&sp, 1).wedge(&dx(&sp, 2));
        let w = phi.wedge(&b);
        assert_eq!(w.comp(&[1, 2]), RationalFn::var(3, 0));
    }

    #[test]
    fn top_wedge_single_component() {
        let sp = euclid3();
        let w = dx(&sp, 0).wedge(&dx(&sp, 1)).wedge(&dx(&sp, 2));
        assert_eq!(w.comp(&[0, 1, 2]), RationalFn::one(3));
        assert_eq!(w.comps().count(), 1);
    }

    #[test]
    fn d_of_coordinate_is_basis_form() {
        let sp = euclid3();
        let x = Form::scalar(sp.chart().clone(), RationalFn::var(3, 0));
        assert_eq!(sp.ext_d(&x), dx(&sp, 0));
    }

    #[test]
    fn d_of_x_dy_is_dx_dy() {
        let sp = euclid3();
        let x = RationalFn::var(3, 0);
        let a = dx(&sp, 1).scale(&x);
        assert_eq!(sp.ext_d(&a), dx(&sp, 0).wedge(&dx(&sp, 1)));
    }

    #[test]
    fn d_squared_zero_on_product() {
        let sp = euclid3();
        let f = &RationalFn::var(3, 0) * &RationalFn::var(3, 1);
        let a = dx(&sp, 2).scale(&(&f + &RationalFn::var(3, 2)));
        let dda = sp.ext_d(&sp.ext_d(&a.scale(&f)));
        assert!(dda.is_zero());
    }

    #[test]
    fn interior_on_wedge_basis() {
        let sp = euclid3();
        let v = VectorField::coordinate(sp.chart().clone(), 0);
        let a = dx(&sp, 0).wedge(&dx(&sp, 1));
        assert_eq!(sp.interior(&v, &a), dx(&sp, 1));
    }

    #[test]
    fn interior_twice_vanishes() {
        let sp = euclid3();
        let x = RationalFn::var(3, 0);
        let v = VectorField::new(
            sp.chart().clone(),
            vec![x.clone(), RationalFn::one(3), RationalFn::zero(3)],
        );
        let a = dx(&sp, 0).wedge(&dx(&sp, 1)).wedge(&dx(&sp, 2)).scale(&x);
        assert!(sp.interior(&v, &sp.interior(&v, &a)).is_zero());
    }

    #[test]
    fn j_product_on_euclid3() {
        let sp = euclid3();
        let v = VectorField::coordinate(sp.chart().clone(), 0);
        assert_eq!(sp.j_product(&v, &dx(&sp, 1)), dx(&sp, 0).wedge(&dx(&sp, 1)));
    }

    #[test]
    fn sharp_on_euclid_and_minkowski() {
        let sp = euclid3();
        let v = sp.sharp1(&dx(&sp, 0));
        assert_eq!(v, VectorField::coordinate(sp.chart().clone(), 0));

        // Raising dt with g^{tt} = -1 flips the sign.
        let mink = load_fixture("mink4").unwrap();
        let dt = Form::basis_one_form(mink.chart().clone(), Basis::Coordinate, 0);
        let vt = mink.sharp1(&dt);
        assert_eq!(vt.comp(0), &-&RationalFn::one(4));
    }

    #[test]
    fn flat_sharp_roundtrip_on_conf3() {
        let sp = load_fixture("conf3").unwrap();
        let x = RationalFn::var(3, 0);
        let first = dx(&sp, 0).wedge(&dx(&sp, 1)).scale(&x);
        let second = dx(&sp, 1).wedge(&dx(&sp, 2)).scale(&RationalFn::var(3, 2));
        let a = &first + &second;
        assert_eq!(sp.flat(&sp.sharp(&a)), a);
    }

    #[test]
    fn basis_roundtrip_and_volume_component() {
        let sp = load_fixture("conf3").unwrap();
        let x = RationalFn::var(3, 0);
        let a = dx(&sp, 0).wedge(&dx(&sp, 2)).scale(&x);
        let there = sp.to_basis(&a, Basis::Frame);
        let back = sp.to_basis(&there, Basis::Coordinate);
        assert_eq!(back, a);

        // e^1^e^2^e^3 in coordinates carries det E.
        let mut top = Form::zero(sp.chart().clone(), Basis::Frame, 3);
        top.comps.insert(vec![0, 1, 2], RationalFn::one(3));
        let coord = sp.to_basis(&top, Basis::Coordinate);
        assert_eq!(coord.comp(&[0, 1, 2]), sp.metric().det_e);
    }

    #[test]
    fn identity_frame_conversion_is_identity() {
        let sp = euclid3();
        let a = dx(&sp, 0).wedge(&dx(&sp, 1)).scale(&RationalFn::var(3, 1));
        let conv = sp.to_basis(&a, Basis::Frame);
        assert_eq!(conv.comp(&[0, 1]), a.comp(&[0, 1]));
    }

    #[test]
    fn lie_component_examples() {
        let sp = euclid3();
        let x = RationalFn::var(3, 0);
        // L_{d/dx}(x dx) = dx, by the component formula worked by hand.
        let v = VectorField::coordinate(sp.chart().clone(), 0);
        let a = dx(&sp, 0).scale(&x);
        assert_eq!(sp.lie_form_components(&v, &a), dx(&sp, 0));
    }

    #[test]
    fn lie_multivector_matches_bracket_oracle() {
        // [x d/dy, d/dx] = -d/dy, computed by hand.
        let sp = euclid3();
        let x = RationalFn::var(3, 0);
        let u = VectorField::new(
            sp.chart().clone(),
            vec![RationalFn::zero(3), x, RationalFn::zero(3)],
        );
        let w = VectorField::coordinate(sp.chart().clone(), 0);
        let lie = sp.lie_multivector(&u, &w.as_multivector());
        let expect = -&VectorField::coordinate(sp.chart().clone(), 1).as_multivector();
        assert_eq!(lie, expect);
    }

    #[test]
    fn killing_fixture_annihilates_inverse_metric() {
        let sp = load_fixture("conf3").unwrap();
        for (name, v) in sp.killing_vectors() {
            let lg = sp.lie_inverse_metric(v);
            for row in &lg {
                for entry in row {
                    assert!(entry.is_zero(), "L_v g~ != 0 for {name}");
                }
            }
        }
    }

    #[test]
    fn subsets_and_signs() {
        assert_eq!(subsets(4, 2).len(), 6);
        assert_eq!(concat_perm_sign(&[0, 1], &[2]), 1);
        assert_eq!(concat_perm_sign(&[1], &[0, 2]), -1);
        assert_eq!(sort_with_sign(&[2, 0]), Some((vec![0, 2], -1)));
        assert_eq!(sort_with_sign(&[1, 1]), None);
        assert_eq!(complement(&[1], 3), vec![0, 2]);
        assert_eq!(tuples(2, 2).len(), 4);
    }
}
