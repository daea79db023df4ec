//! Exact convex geometry of up-closed polyhedra `conv(E) + ℝⁿ₊`.
//!
//! A [`NewtonPolyhedron`] is stored by its vertex set (lexicographically
//! sorted, so structural equality is equality of regions) together with its
//! facet inequalities `⟨normal, b⟩ ≥ offset`. Coordinate constraints
//! `b_k ≥ 0` are implicit and never stored. Facets are computed eagerly at
//! construction.

mod dd;
pub(crate) mod linalg;
mod volume;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{int, JsonRational, Rational, RationalVec, Extended};
use dd::extreme_rays;
use linalg::{primitive, rank};

pub use volume::BoundedCell;

/// A facet inequality `⟨normal, b⟩ ≥ offset` with a primitive integer normal.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Facet {
    pub normal: RationalVec,
    pub offset: Rational,
}

impl Facet {
    pub fn new(normal: RationalVec, offset: Rational) -> Self {
        Facet { normal, offset }
    }

    pub fn contains(&self, b: &RationalVec) -> bool {
        self.normal.dot(b) >= self.offset
    }

    pub fn is_tight(&self, b: &RationalVec) -> bool {
        self.normal.dot(b) == self.offset
    }
}

impl fmt::Display for Facet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}, b> >= {}", self.normal, self.offset)
    }
}

#[derive(Clone, Debug)]
pub struct NewtonPolyhedron {
    n: usize,
    generators: Vec<RationalVec>,
    facets: Vec<Facet>,
}

impl PartialEq for NewtonPolyhedron {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.generators == other.generators
    }
}

impl Eq for NewtonPolyhedron {}

impl std::hash::Hash for NewtonPolyhedron {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.generators.hash(state);
    }
}

impl NewtonPolyhedron {
    /// Builds the canonical (vertex) representation of `conv(generators) + ℝⁿ₊`.
    pub fn canonicalize(generators: impl IntoIterator<Item = RationalVec>) -> Result<Self> {
        let mut points: Vec<RationalVec> = generators.into_iter().collect();
        let n = points.first().ok_or(Error::EmptyGenerators)?.dim();
        if n == 0 {
            return Err(Error::InvalidExponent("()".into()));
        }
        for p in &points {
            if p.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: p.dim(),
                });
            }
            if !p.is_nonnegative() {
                return Err(Error::InvalidExponent(p.to_string()));
            }
        }
        points.sort();
        points.dedup();
        let points = prune_dominated(points);

        if points.iter().any(RationalVec::is_zero) {
            return Ok(NewtonPolyhedron {
                n,
                generators: vec![RationalVec::zeros(n)],
                facets: Vec::new(),
            });
        }

        let facets = facets_of(n, &points);
        let vertices: Vec<RationalVec> = points
            .into_iter()
            .filter(|v| is_vertex(n, v, &facets))
            .collect();
        Ok(NewtonPolyhedron {
            n,
            generators: vertices,
            facets,
        })
    }

    /// Convenience constructor from integer exponent tuples.
    pub fn from_int_points(points: &[&[i64]]) -> Result<Self> {
        Self::canonicalize(points.iter().map(|p| RationalVec::from_ints(p)))
    }

    /// The whole orthant `ℝⁿ₊`, i.e. the polyhedron of a bounded germ.
    pub fn orthant(n: usize) -> Self {
        NewtonPolyhedron {
            n,
            generators: vec![RationalVec::zeros(n)],
            facets: Vec::new(),
        }
    }

    /// `c·Δ` where `Δ = conv{e₁,…,eₙ} + ℝⁿ₊`.
    pub fn simplex(n: usize, c: &Rational) -> Result<Self> {
        Self::canonicalize((0..n).map(|k| RationalVec::unit(n, k).scale(c)))
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[RationalVec] {
        &self.generators
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// True when the polyhedron is the full orthant (origin is a vertex).
    pub fn contains_origin(&self) -> bool {
        self.generators.iter().any(RationalVec::is_zero)
    }

    fn check_dim(&self, found: usize) -> Result<()> {
        if found != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found,
            });
        }
        Ok(())
    }

    /// `min_{α ∈ generators} ⟨a, α⟩`.
    pub fn support_min(&self, a: &RationalVec) -> Result<Rational> {
        self.check_dim(a.dim())?;
        if !a.is_nonnegative() {
            return Err(Error::InvalidDirection(a.to_string()));
        }
        Ok(self
            .generators
            .iter()
            .map(|g| a.dot(g))
            .min()
            .expect("generators are nonempty"))
    }

    pub fn minkowski_sum(&self, other: &Self) -> Result<Self> {
        self.check_dim(other.n)?;
        let sums = self
            .generators
            .iter()
            .flat_map(|p| other.generators.iter().map(move |q| p + q));
        Self::canonicalize(sums)
    }

    pub fn union_hull(&self, other: &Self) -> Result<Self> {
        self.check_dim(other.n)?;
        Self::canonicalize(self.generators.iter().chain(&other.generators).cloned())
    }

    /// `c·P` for `c ≥ 0`; `0·P` is the orthant.
    pub fn scale(&self, c: &Rational) -> Self {
        assert!(!c.is_negative(), "scale factor must be nonnegative");
        if c.is_zero() {
            return Self::orthant(self.n);
        }
        NewtonPolyhedron {
            n: self.n,
            generators: self.generators.iter().map(|g| g.scale(c)).collect(),
            facets: self
                .facets
                .iter()
                .map(|f| Facet::new(f.normal.clone(), &f.offset * c))
                .collect(),
        }
    }

    pub fn contains(&self, b: &RationalVec) -> bool {
        b.dim() == self.n && b.is_nonnegative() && self.facets.iter().all(|f| f.contains(b))
    }

    /// `P ⊆ Q` for up-closed polyhedra: every vertex of `P` lies in `Q`.
    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.generators.iter().all(|g| other.contains(g))
    }

    /// `sup{s > 0 : v ∈ s·P}`, which equals `min_F ⟨n_F, v⟩ / c_F`; `+∞` for
    /// the orthant.
    pub fn gauge(&self, v: &RationalVec) -> Result<Extended> {
        self.check_dim(v.dim())?;
        if !v.is_nonnegative() {
            return Err(Error::InvalidDirection(v.to_string()));
        }
        if v.is_zero() {
            return Err(Error::ZeroPoint);
        }
        Ok(self
            .facets
            .iter()
            .map(|f| f.normal.dot(v) / &f.offset)
            .min()
            .map_or(Extended::Infinite, Extended::Finite))
    }

    /// Canonical polyhedron `{b ≥ 0 : ⟨normal, b⟩ ≥ offset for every constraint}`.
    ///
    /// Constraints with nonpositive offset hold on the whole orthant and are
    /// ignored; normals must be nonnegative.
    pub fn from_halfspaces(n: usize, constraints: &[Facet]) -> Result<Self> {
        let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(n + 1 + constraints.len());
        for k in 0..=n {
            let mut r = vec![BigInt::zero(); n + 1];
            r[k] = BigInt::one();
            rows.push(r);
        }
        for c in constraints {
            if c.normal.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: c.normal.dim(),
                });
            }
            if !c.normal.is_nonnegative() {
                return Err(Error::InvalidDirection(c.normal.to_string()));
            }
            if !c.offset.is_positive() {
                continue;
            }
            let mut r: Vec<Rational> = c.normal.coords().to_vec();
            r.push(-c.offset.clone());
            rows.push(primitive(&r));
        }
        if rows.len() == n + 1 {
            return Ok(Self::orthant(n));
        }
        let vertices = homogeneous_vertices(n, &rows);
        Self::canonicalize(vertices)
    }

    /// Meets every coordinate axis (the origin counts).
    pub fn is_convenient(&self) -> bool {
        (0..self.n).all(|k| self.axis_intercept(k).is_some())
    }

    /// Smallest `m ≥ 0` with `m·e_k ∈ P`, if the axis is met.
    pub fn axis_intercept(&self, k: usize) -> Option<Rational> {
        self.generators
            .iter()
            .filter(|g| g.iter().enumerate().all(|(j, x)| j == k || x.is_zero()))
            .map(|g| g[k].clone())
            .min()
    }

    /// `Vol(ℝⁿ₊ ∖ P)`, infinite unless `P` is convenient.
    ///
    /// Computed as `Mⁿ − Vol([0, M]ⁿ ∩ P)` with `M` the largest axis
    /// intercept; the bounded cell is enumerated exactly and decomposed into
    /// pyramids.
    pub fn covolume(&self) -> Extended {
        if self.contains_origin() {
            return Extended::Finite(Rational::zero());
        }
        let intercepts: Option<Vec<Rational>> = (0..self.n).map(|k| self.axis_intercept(k)).collect();
        let Some(intercepts) = intercepts else {
            return Extended::Infinite;
        };
        let m = intercepts.into_iter().max().expect("n >= 1");
        let cell = self.truncated_cell(&m);
        let box_volume = num_traits::pow(m, self.n);
        Extended::Finite(box_volume - cell.volume())
    }

    /// `[0, M]ⁿ ∩ P` as a bounded cell.
    pub fn truncated_cell(&self, m: &Rational) -> BoundedCell {
        let n = self.n;
        let mut rows: Vec<Vec<BigInt>> = Vec::new();
        for k in 0..=n {
            let mut r = vec![BigInt::zero(); n + 1];
            r[k] = BigInt::one();
            rows.push(r);
        }
        for f in &self.facets {
            let mut r: Vec<Rational> = f.normal.coords().to_vec();
            r.push(-f.offset.clone());
            rows.push(primitive(&r));
        }
        for k in 0..n {
            let mut r = vec![Rational::zero(); n + 1];
            r[k] = -Rational::one();
            r[n] = m.clone();
            rows.push(primitive(&r));
        }
        BoundedCell::new(homogeneous_vertices(n, &rows))
    }

    pub fn to_json(&self) -> PolyhedronJson {
        PolyhedronJson {
            n: self.n,
            generators: self
                .generators
                .iter()
                .map(|g| g.iter().cloned().map(JsonRational).collect())
                .collect(),
        }
    }

    pub fn from_json(json: &PolyhedronJson) -> Result<Self> {
        let gens: Vec<RationalVec> = json
            .generators
            .iter()
            .map(|g| RationalVec::new(g.iter().map(|q| q.0.clone()).collect()))
            .collect();
        for g in &gens {
            if g.dim() != json.n {
                return Err(Error::DimensionMismatch {
                    expected: json.n,
                    found: g.dim(),
                });
            }
        }
        Self::canonicalize(gens)
    }
}

impl fmt::Display for NewtonPolyhedron {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, "}}")
    }
}

/// JSON form `{"n": 2, "generators": [["1","0"], …]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyhedronJson {
    pub n: usize,
    pub generators: Vec<Vec<JsonRational>>,
}

impl Serialize for NewtonPolyhedron {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for NewtonPolyhedron {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let json = PolyhedronJson::deserialize(d)?;
        NewtonPolyhedron::from_json(&json).map_err(serde::de::Error::custom)
    }
}

fn prune_dominated(points: Vec<RationalVec>) -> Vec<RationalVec> {
    points
        .iter()
        .filter(|p| !points.iter().any(|q| q != *p && p.dominates(q)))
        .cloned()
        .collect()
}

/// Facets of `conv(points) + ℝⁿ₊` via the extreme rays of
/// `{(a, c) : a ≥ 0, ⟨a, v⟩ ≥ c}`; rays with `c > 0` are the facets.
fn facets_of(n: usize, points: &[RationalVec]) -> Vec<Facet> {
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(n + points.len());
    for k in 0..n {
        let mut r = vec![BigInt::zero(); n + 1];
        r[k] = BigInt::one();
        rows.push(r);
    }
    for p in points {
        let mut r: Vec<Rational> = p.coords().to_vec();
        r.push(-Rational::one());
        rows.push(primitive(&r));
    }
    let rays = extreme_rays(&rows).expect("coordinate rows make the cone pointed");
    let mut facets: Vec<Facet> = rays
        .into_iter()
        .filter(|r| r[n].is_positive())
        .map(|r| {
            let normal_q: Vec<Rational> = r[..n].iter().map(|x| Rational::from_integer(x.clone())).collect();
            let normal_int = primitive(&normal_q);
            let g = if normal_int.iter().all(Zero::is_zero) {
                Rational::one()
            } else {
                // ratio between the stored normal and its primitive form
                let k = normal_q.iter().position(|x| !x.is_zero()).expect("nonzero");
                &normal_q[k] / Rational::from_integer(normal_int[k].clone())
            };
            Facet::new(
                RationalVec::new(normal_int.into_iter().map(Rational::from_integer).collect()),
                Rational::from_integer(r[n].clone()) / g,
            )
        })
        .collect();
    facets.sort();
    facets
}

fn is_vertex(n: usize, v: &RationalVec, facets: &[Facet]) -> bool {
    let mut tight: Vec<Vec<Rational>> = facets
        .iter()
        .filter(|f| f.is_tight(v))
        .map(|f| f.normal.coords().to_vec())
        .collect();
    for k in 0..n {
        if v[k].is_zero() {
            tight.push(RationalVec::unit(n, k).into_coords());
        }
    }
    tight.len() >= n && rank(&tight) == n
}

/// Dehomogenised extreme rays `(b, λ)` with `λ > 0` of the cone cut out by
/// `rows` in `ℝⁿ⁺¹`.
fn homogeneous_vertices(n: usize, rows: &[Vec<BigInt>]) -> Vec<RationalVec> {
    let rays = extreme_rays(rows).expect("coordinate rows make the cone pointed");
    rays.into_iter()
        .filter(|r| r[n].is_positive())
        .map(|r| {
            let lambda = Rational::from_integer(r[n].clone());
            RationalVec::new(
                r[..n]
                    .iter()
                    .map(|x| Rational::from_integer(x.clone()) / &lambda)
                    .collect(),
            )
        })
        .collect()
}

/// `n!` as a rational.
pub fn factorial(n: usize) -> Rational {
    (1..=n as i64).fold(Rational::one(), |acc, k| acc * int(k))
}
