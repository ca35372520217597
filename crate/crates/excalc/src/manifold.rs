//! Charts, orthonormal coframes, and everything derived from them.
//!
//! A metric is only ever specified through an oriented orthonormal coframe
//! `e^a = E^a_mu dx^mu` together with a constant signature `eta`, so the
//! volume form has rational-function coefficients and the Hodge star never
//! needs square roots. [`MetricData`] caches the metric, its inverse, the
//! inverse coframe, anholonomy coefficients, and Christoffel symbols; all
//! of it is computed exactly and eagerly at construction time.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::dsl;
use crate::error::{Error, Result};
use crate::exterior::VectorField;
use crate::rat::{rat_int, Rational, RationalFn};

/// A coordinate chart: a dimension and distinct coordinate names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chart {
    names: Vec<String>,
}

impl Chart {
    pub fn new(names: &[&str]) -> Arc<Chart> {
        let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        let mut dedup = names.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), names.len(), "coordinate names must be distinct");
        assert!(!names.is_empty(), "dimension must be at least 1");
        Arc::new(Chart { names })
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn coord_names(&self) -> &[String] {
        &self.names
    }

    pub fn coord_name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn coord_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|c| c == name)
    }
}

/// Oriented orthonormal coframe `e^a = E^a_mu dx^mu` with constant
/// signature; the single source of the metric.
#[derive(Clone, Debug)]
pub struct FrameField {
    chart: Arc<Chart>,
    /// `e[a][mu]`
    e: Vec<Vec<RationalFn>>,
    eta: Vec<i8>,
}

impl FrameField {
    pub fn new(chart: Arc<Chart>, e: Vec<Vec<RationalFn>>, eta: Vec<i8>) -> Result<FrameField> {
        let n = chart.dim();
        if e.len() != n || e.iter().any(|row| row.len() != n) {
            return Err(Error::Fixture(format!("coframe must be a {n}x{n} matrix")));
        }
        if eta.len() != n || eta.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::Fixture("eta must be a list of +1/-1 entries".into()));
        }
        let frame = FrameField { chart, e, eta };
        if det(&frame.e).is_zero() {
            return Err(Error::Fixture("coframe determinant is identically zero".into()));
        }
        Ok(frame)
    }

    /// Identity coframe with the given signature.
    pub fn orthonormal_flat(chart: Arc<Chart>, eta: Vec<i8>) -> Result<FrameField> {
        let n = chart.dim();
        let mut e = vec![vec![RationalFn::zero(n); n]; n];
        for (a, row) in e.iter_mut().enumerate() {
            row[a] = RationalFn::one(n);
        }
        FrameField::new(chart, e, eta)
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn coframe(&self) -> &Vec<Vec<RationalFn>> {
        &self.e
    }

    pub fn eta(&self) -> &[i8] {
        &self.eta
    }
}

/// Everything derivable from a frame, cached eagerly.
#[derive(Clone, Debug)]
pub struct MetricData {
    /// `g[mu][nu]`
    pub g: Vec<Vec<RationalFn>>,
    /// `g_inv[mu][nu]`
    pub g_inv: Vec<Vec<RationalFn>>,
    /// Inverse coframe, `e_inv[mu][a]`, so frame vector `e_a = e_inv[mu][a] d/dx^mu`.
    pub e_inv: Vec<Vec<RationalFn>>,
    /// Anholonomy coefficients `c[a][b][c]` from `de^a = -1/2 c^a_{bc} e^b ^ e^c`.
    pub c: Vec<Vec<Vec<RationalFn>>>,
    /// Metrically dressed anholonomy `c_tilde[r][s][k]` (frame indices).
    pub c_tilde: Vec<Vec<Vec<RationalFn>>>,
    /// Christoffel symbols of the Levi-Civita connection, `gamma[lam][mu][nu]`.
    pub gamma: Vec<Vec<Vec<RationalFn>>>,
    /// Product of the signature entries.
    pub sgn: i8,
    /// Determinant of the coframe matrix.
    pub det_e: RationalFn,
}

fn metric_from_frame(frame: &FrameField) -> MetricData {
    let n = frame.chart.dim();
    let e = &frame.e;
    let eta = &frame.eta;

    let det_e = det(e);
    assert!(!det_e.is_zero(), "frame invariant violated: det E = 0");
    let e_inv = inverse(e).expect("coframe is invertible");

    let mut g = vec![vec![RationalFn::zero(n); n]; n];
    for mu in 0..n {
        for nu in 0..n {
            let mut s = RationalFn::zero(n);
            for a in 0..n {
                let term = &e[a][mu] * &e[a][nu];
                s = if eta[a] == 1 { &s + &term } else { &s - &term };
            }
            g[mu][nu] = s;
        }
    }
    let g_inv = inverse(&g).expect("metric is invertible where the frame is");

    // de^a = (d_mu E^a_nu - d_nu E^a_mu) dx^mu (x) dx^nu, contracted back
    // into the frame: c^a_{bc} = -(de^a)_{mu nu} Einv^mu_b Einv^nu_c.
    let mut c = vec![vec![vec![RationalFn::zero(n); n]; n]; n];
    for a in 0..n {
        let mut de = vec![vec![RationalFn::zero(n); n]; n];
        for mu in 0..n {
            for nu in 0..n {
                de[mu][nu] = &e[a][nu].partial(mu) - &e[a][mu].partial(nu);
            }
        }
        for b in 0..n {
            for cc in 0..n {
                let mut s = RationalFn::zero(n);
                for mu in 0..n {
                    for nu in 0..n {
                        if de[mu][nu].is_zero() {
                            continue;
                        }
                        s = &s + &(&(&de[mu][nu] * &e_inv[mu][b]) * &e_inv[nu][cc]);
                    }
                }
                c[a][b][cc] = -&s;
            }
        }
    }

    // c_tilde^{rs}_k = eta^{ri} eta^{sj} eta_{kl} c^l_{ij} with diagonal eta.
    let mut c_tilde = vec![vec![vec![RationalFn::zero(n); n]; n]; n];
    for r in 0..n {
        for s in 0..n {
            for k in 0..n {
                let sign = (eta[r] * eta[s] * eta[k]) as i64;
                c_tilde[r][s][k] =
                    &c[k][r][s] * &RationalFn::constant(n, rat_int(sign));
            }
        }
    }

    let mut gamma = vec![vec![vec![RationalFn::zero(n); n]; n]; n];
    let half = RationalFn::constant(n, Rational::new(1.into(), 2.into()));
    for lam in 0..n {
        for mu in 0..n {
            for nu in 0..=mu {
                let mut s = RationalFn::zero(n);
                for sig in 0..n {
                    if g_inv[lam][sig].is_zero() {
                        continue;
                    }
                    let inner = &(&g[sig][nu].partial(mu) + &g[sig][mu].partial(nu))
                        - &g[mu][nu].partial(sig);
                    s = &s + &(&g_inv[lam][sig] * &inner);
                }
                let val = &half * &s;
                gamma[lam][mu][nu] = val.clone();
                gamma[lam][nu][mu] = val;
            }
        }
    }

    let sgn = eta.iter().product::<i8>();
    MetricData { g, g_inv, e_inv, c, c_tilde, gamma, sgn, det_e }
}

/// A chart with its frame, derived metric data, and validated Killing
/// vectors: the evaluation context for every operator in the crate.
#[derive(Clone, Debug)]
pub struct Space {
    name: String,
    chart: Arc<Chart>,
    frame: FrameField,
    metric: MetricData,
    killing: Vec<(String, VectorField)>,
}

impl Space {
    pub fn new(name: &str, frame: FrameField) -> Space {
        let metric = metric_from_frame(&frame);
        Space {
            name: name.to_string(),
            chart: frame.chart().clone(),
            frame,
            metric,
            killing: Vec::new(),
        }
    }

    /// Flat space with identity coframe and all-plus signature.
    pub fn euclidean(names: &[&str]) -> Space {
        let chart = Chart::new(names);
        let n = chart.dim();
        let frame = FrameField::orthonormal_flat(chart, vec![1; n]).expect("valid frame");
        Space::new("euclidean", frame)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    pub fn frame(&self) -> &FrameField {
        &self.frame
    }

    pub fn metric(&self) -> &MetricData {
        &self.metric
    }

    pub fn eta(&self) -> &[i8] {
        self.frame.eta()
    }

    /// Signature sign `sgn(g)`.
    pub fn sgn(&self) -> i8 {
        self.metric.sgn
    }

    /// Is every coframe entry constant? When true the coordinate coframe is
    /// itself rigid (the metric has constant coordinate components), which
    /// is the validity domain of the coordinate-coframe component formula
    /// for the bracket.
    pub fn has_constant_coframe(&self) -> bool {
        self.frame
            .coframe()
            .iter()
            .flatten()
            .all(|f| f.as_constant().is_some())
    }

    pub fn killing_vectors(&self) -> &[(String, VectorField)] {
        &self.killing
    }

    pub fn add_killing_vector(&mut self, name: &str, v: VectorField) -> Result<()> {
        if !self.is_killing(&v) {
            return Err(Error::Fixture(format!(
                "declared Killing vector `{name}` does not satisfy L_v g = 0"
            )));
        }
        self.killing.push((name.to_string(), v));
        Ok(())
    }

    /// Does the flow of `v` preserve the metric (`L_v g = 0` identically)?
    pub fn is_killing(&self, v: &VectorField) -> bool {
        let n = self.dim();
        let g = &self.metric.g;
        for mu in 0..n {
            for nu in 0..=mu {
                let mut s = RationalFn::zero(n);
                for sig in 0..n {
                    s = &s + &(v.comp(sig) * &g[mu][nu].partial(sig));
                    s = &s + &(&g[sig][nu] * &v.comp(sig).partial(mu));
                    s = &s + &(&g[mu][sig] * &v.comp(sig).partial(nu));
                }
                if !s.is_zero() {
                    return false;
                }
            }
        }
        true
    }

    pub fn from_fixture(fix: &Fixture) -> Result<Space> {
        fix.validate()?;
        let name_refs: Vec<&str> = fix.coords.iter().map(|s| s.as_str()).collect();
        let chart = Chart::new(&name_refs);
        let mut e = Vec::with_capacity(fix.dim);
        for row in &fix.coframe {
            let mut out = Vec::with_capacity(fix.dim);
            for entry in row {
                out.push(dsl::eval_scalar(&fix.coords, entry)?);
            }
            e.push(out);
        }
        let frame = FrameField::new(chart.clone(), e, fix.eta.clone())?;
        let mut space = Space::new(&fix.name, frame);
        for (kname, comps) in &fix.killing_vectors {
            let mut v = Vec::with_capacity(fix.dim);
            for entry in comps {
                v.push(dsl::eval_scalar(&fix.coords, entry)?);
            }
            space.add_killing_vector(kname, VectorField::new(chart.clone(), v))?;
        }
        Ok(space)
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (dim {})", self.name, self.dim())
    }
}

/// On-disk fixture document.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Fixture {
    pub name: String,
    pub dim: usize,
    pub coords: Vec<String>,
    pub eta: Vec<i8>,
    pub coframe: Vec<Vec<String>>,
    #[serde(default)]
    pub killing_vectors: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub notes: String,
}

impl Fixture {
    fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::Fixture("dim must be at least 1".into()));
        }
        if self.coords.len() != self.dim {
            return Err(Error::Fixture("coords length must equal dim".into()));
        }
        let mut dedup = self.coords.clone();
        dedup.sort();
        dedup.dedup();
        if dedup.len() != self.coords.len() {
            return Err(Error::Fixture("coordinate names must be distinct".into()));
        }
        if self.eta.len() != self.dim || self.eta.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::Fixture("eta must be dim entries of +1/-1".into()));
        }
        if self.coframe.len() != self.dim
            || self.coframe.iter().any(|r| r.len() != self.dim)
        {
            return Err(Error::Fixture("coframe must be a dim x dim matrix".into()));
        }
        for comps in self.killing_vectors.values() {
            if comps.len() != self.dim {
                return Err(Error::Fixture(
                    "killing vector components must have dim entries".into(),
                ));
            }
        }
        Ok(())
    }
}

const BUILTIN_FIXTURES: &[(&str, &str)] = &[
    ("euclid2", include_str!("../fixtures/euclid2.json")),
    ("euclid3", include_str!("../fixtures/euclid3.json")),
    ("euclid4", include_str!("../fixtures/euclid4.json")),
    ("mink4", include_str!("../fixtures/mink4.json")),
    ("conf3", include_str!("../fixtures/conf3.json")),
];

pub fn builtin_fixture_names() -> Vec<&'static str> {
    BUILTIN_FIXTURES.iter().map(|(n, _)| *n).collect()
}

pub fn builtin_fixture(name: &str) -> Result<Fixture> {
    let (_, body) = BUILTIN_FIXTURES
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::UnknownFixture(name.to_string()))?;
    Ok(serde_json::from_str(body)?)
}

/// Load a fixture by builtin name, or from a JSON file path.
pub fn load_fixture(name_or_path: &str) -> Result<Space> {
    let fix = if BUILTIN_FIXTURES.iter().any(|(n, _)| *n == name_or_path) {
        builtin_fixture(name_or_path)?
    } else if Path::new(name_or_path).exists() {
        let body = std::fs::read_to_string(name_or_path)?;
        serde_json::from_str(&body)?
    } else {
        return Err(Error::UnknownFixture(name_or_path.to_string()));
    };
    Space::from_fixture(&fix)
}

/// Load every builtin fixture.
pub fn all_builtin_spaces() -> Vec<Space> {
    builtin_fixture_names()
        .iter()
        .map(|n| Space::from_fixture(&builtin_fixture(n).unwrap()).unwrap())
        .collect()
}

// ---- small exact matrix helpers ----

pub(crate) fn det(m: &[Vec<RationalFn>]) -> RationalFn {
    let n = m.len();
    let nv = m[0][0].nvars();
    match n {
        1 => m[0][0].clone(),
        _ => {
            let mut acc = RationalFn::zero(nv);
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let sub = strike(m, 0, j);
                let term = &m[0][j] * &det(&sub);
                acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            acc
        }
    }
}

fn strike(m: &[Vec<RationalFn>], row: usize, col: usize) -> Vec<Vec<RationalFn>> {
    m.iter()
        .enumerate()
        .filter(|(i, _)| *i != row)
        .map(|(_, r)| {
            r.iter()
                .enumerate()
                .filter(|(j, _)| *j != col)
                .map(|(_, v)| v.clone())
                .collect()
        })
        .collect()
}

/// Exact inverse via the adjugate; `None` when the determinant vanishes.
pub(crate) fn inverse(m: &[Vec<RationalFn>]) -> Option<Vec<Vec<RationalFn>>> {
    let n = m.len();
    let d = det(m);
    if d.is_zero() {
        return None;
    }
    let mut out = vec![Vec::with_capacity(n); n];
    for i in 0..n {
        for j in 0..n {
            // adj[i][j] = (-1)^(i+j) det(strike(m, j, i))
            let cof = if n == 1 {
                RationalFn::one(m[0][0].nvars())
            } else {
                det(&strike(m, j, i))
            };
            let signed = if (i + j) % 2 == 0 { cof } else { -&cof };
            out[i].push(&signed / &d);
        }
    }
    Some(out)
}
