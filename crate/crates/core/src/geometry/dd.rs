//! Double description: extreme rays of a pointed cone `{x : Hx ≥ 0}`.
//!
//! All arithmetic is on primitive integer vectors. The cone is seeded with a
//! simplicial cone cut out by `d` independent rows and refined one row at a
//! time; new rays come from pairs of adjacent rays on opposite sides of the
//! incoming hyperplane, with adjacency decided combinatorially.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::linalg::{dot_int, independent_rows, inverse, primitive, primitive_int, to_rationals};

#[derive(Clone, Debug, PartialEq, Eq)]
struct BitSet(Vec<u64>);

impl BitSet {
    fn new(len: usize) -> Self {
        BitSet(vec![0; len.div_ceil(64)])
    }

    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn and(&self, other: &BitSet) -> BitSet {
        BitSet(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn is_subset(&self, other: &BitSet) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }
}

#[derive(Clone, Debug)]
struct Ray {
    coords: Vec<BigInt>,
    zeros: BitSet,
}

/// Extreme rays of `{x ∈ ℝᵈ : ⟨h, x⟩ ≥ 0 for every row h}`, each as a
/// primitive integer vector.
///
/// Returns `None` when the rows have rank below `d`, i.e. the cone is not
/// pointed.
pub(crate) fn extreme_rays(rows: &[Vec<BigInt>]) -> Option<Vec<Vec<BigInt>>> {
    let d = rows.first()?.len();
    let rational_rows: Vec<_> = rows.iter().map(|r| to_rationals(r)).collect();
    let basis = independent_rows(&rational_rows);
    if basis.len() < d {
        return None;
    }
    let square: Vec<_> = basis.iter().map(|&i| rational_rows[i].clone()).collect();
    let inv = inverse(&square)?;

    // Column i of the inverse is tight on every basis row except basis[i].
    let mut rays: Vec<Ray> = (0..d)
        .map(|i| {
            let column: Vec<_> = inv.iter().map(|row| row[i].clone()).collect();
            let mut zeros = BitSet::new(rows.len());
            for (j, &b) in basis.iter().enumerate() {
                if j != i {
                    zeros.insert(b);
                }
            }
            Ray {
                coords: primitive(&column),
                zeros,
            }
        })
        .collect();

    let in_basis: Vec<bool> = {
        let mut v = vec![false; rows.len()];
        for &b in &basis {
            v[b] = true;
        }
        v
    };

    for (idx, row) in rows.iter().enumerate() {
        if in_basis[idx] {
            continue;
        }
        rays = add_constraint(rays, row, idx, d);
        if rays.is_empty() {
            break;
        }
    }
    Some(rays.into_iter().map(|r| r.coords).collect())
}

fn add_constraint(rays: Vec<Ray>, row: &[BigInt], idx: usize, d: usize) -> Vec<Ray> {
    let values: Vec<BigInt> = rays.iter().map(|r| dot_int(row, &r.coords)).collect();
    let pos: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_positive()).collect();
    let neg: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_negative()).collect();
    if neg.is_empty() {
        return rays
            .into_iter()
            .zip(&values)
            .map(|(mut r, v)| {
                if v.is_zero() {
                    r.zeros.insert(idx);
                }
                r
            })
            .collect();
    }

    let mut created: Vec<Ray> = Vec::new();
    for &p in &pos {
        for &q in &neg {
            let common = rays[p].zeros.and(&rays[q].zeros);
            if d >= 2 && common.len() < d - 2 {
                continue;
            }
            let adjacent = rays
                .iter()
                .enumerate()
                .all(|(k, r)| k == p || k == q || !common.is_subset(&r.zeros));
            if !adjacent {
                continue;
            }
            let vp = &values[p];
            let vq = -&values[q];
            let coords: Vec<BigInt> = rays[q]
                .coords
                .iter()
                .zip(&rays[p].coords)
                .map(|(xq, xp)| vp * xq + &vq * xp)
                .collect();
            let mut zeros = common;
            zeros.insert(idx);
            created.push(Ray {
                coords: primitive_int(coords),
                zeros,
            });
        }
    }

    let mut next: Vec<Ray> = Vec::with_capacity(rays.len() + created.len());
    for (mut r, v) in rays.into_iter().zip(values) {
        if v.is_negative() {
            continue;
        }
        if v.is_zero() {
            r.zeros.insert(idx);
        }
        next.push(r);
    }
    next.extend(created);
    next
}
