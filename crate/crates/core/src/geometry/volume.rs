//! Exact volumes of bounded convex polytopes given by their vertices.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::dd::extreme_rays;
use super::linalg::primitive;
use crate::rational::{Rational, RationalVec};

/// A bounded convex polytope described by a vertex list (redundant points are
/// tolerated).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundedCell {
    vertices: Vec<RationalVec>,
}

impl BoundedCell {
    pub fn new(vertices: Vec<RationalVec>) -> Self {
        BoundedCell { vertices }
    }

    pub fn vertices(&self) -> &[RationalVec] {
        &self.vertices
    }

    /// Exact d-dimensional volume; zero for lower-dimensional cells.
    pub fn volume(&self) -> Rational {
        let points: Vec<Vec<Rational>> = self
            .vertices
            .iter()
            .map(|v| v.coords().to_vec())
            .collect();
        polytope_volume(points)
    }
}

/// Facets `⟨a, x⟩ ≥ c` of the hull of `points`, as integer rows `(a, c)`.
/// `None` when the hull is not full-dimensional.
fn hull_facets(points: &[Vec<Rational>]) -> Option<Vec<(Vec<BigInt>, BigInt)>> {
    let rows: Vec<Vec<BigInt>> = points
        .iter()
        .map(|p| {
            let mut r: Vec<Rational> = p.clone();
            r.push(-Rational::from_integer(1.into()));
            primitive(&r)
        })
        .collect();
    let rays = extreme_rays(&rows)?;
    Some(
        rays.into_iter()
            .map(|mut r| {
                let c = r.pop().expect("homogeneous coordinate");
                (r, c)
            })
            .collect(),
    )
}

/// Cone decomposition from the first vertex: each facet not containing the
/// apex contributes a pyramid whose base volume is obtained recursively from
/// the projection of the facet onto a coordinate hyperplane.
pub(crate) fn polytope_volume(mut points: Vec<Vec<Rational>>) -> Rational {
    points.sort();
    points.dedup();
    let Some(first) = points.first() else {
        return Rational::zero();
    };
    let d = first.len();
    if d == 0 {
        return Rational::from_integer(1.into());
    }
    if d == 1 {
        let lo = points.iter().map(|p| &p[0]).min().expect("nonempty");
        let hi = points.iter().map(|p| &p[0]).max().expect("nonempty");
        return hi - lo;
    }
    if points.len() <= d {
        return Rational::zero();
    }
    let Some(facets) = hull_facets(&points) else {
        return Rational::zero();
    };
    let apex = points[0].clone();
    let mut total = Rational::zero();
    for (normal, offset) in facets {
        let normal_q: Vec<Rational> = normal.iter().map(|x| Rational::from_integer(x.clone())).collect();
        let offset_q = Rational::from_integer(offset);
        let height = dot(&normal_q, &apex) - &offset_q;
        if height.is_zero() {
            continue;
        }
        // Project along the coordinate with the largest normal component.
        let (j, aj) = normal_q
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .max_by(|a, b| a.1.abs().cmp(&b.1.abs()))
            .expect("facet normal is nonzero");
        let aj = aj.abs();
        let face: Vec<Vec<Rational>> = points
            .iter()
            .filter(|p| dot(&normal_q, p) == offset_q)
            .map(|p| {
                p.iter()
                    .enumerate()
                    .filter(|&(k, _)| k != j)
                    .map(|(_, x)| x.clone())
                    .collect()
            })
            .collect();
        let base = polytope_volume(face);
        total += height * base / (aj * Rational::from_integer(BigInt::from(d)));
    }
    total
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}
