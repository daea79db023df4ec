#![allow(dead_code)]

use lelong_core::rational::{int, rat};
use lelong_core::{NewtonPolyhedron, Rational, RationalVec, TropicalGerm};
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn coord(rng: &mut ChaCha8Rng, max: i64, fractions: bool) -> Rational {
    let q = if fractions { rng.gen_range(1..=3) } else { 1 };
    rat(rng.gen_range(0..=max * q), q)
}

/// 1 to 5 nonzero points with coordinates in `[0, max]`.
pub fn random_points(rng: &mut ChaCha8Rng, n: usize, max: i64, fractions: bool) -> Vec<RationalVec> {
    let k = rng.gen_range(1..=5);
    let mut points = Vec::with_capacity(k);
    while points.len() < k {
        let p = RationalVec::new((0..n).map(|_| coord(rng, max, fractions)).collect());
        if !p.is_zero() {
            points.push(p);
        }
    }
    points
}

/// A germ without the origin among its generators.
pub fn random_germ(rng: &mut ChaCha8Rng, n: usize) -> TropicalGerm {
    let fractions = rng.gen_bool(0.3);
    TropicalGerm::new(NewtonPolyhedron::canonicalize(random_points(rng, n, 5, fractions)).unwrap())
}

/// A weight with a point on every coordinate axis.
pub fn random_convenient(rng: &mut ChaCha8Rng, n: usize) -> TropicalGerm {
    let fractions = rng.gen_bool(0.3);
    let mut points = random_points(rng, n, 4, fractions);
    for k in 0..n {
        let c = if fractions { rat(rng.gen_range(2..=18), 3) } else { int(rng.gen_range(1..=6)) };
        points.push(RationalVec::unit(n, k).scale(&c));
    }
    TropicalGerm::new(NewtonPolyhedron::canonicalize(points).unwrap())
}

pub fn random_direction(rng: &mut ChaCha8Rng, n: usize) -> RationalVec {
    RationalVec::new((0..n).map(|_| rat(rng.gen_range(1..=7), rng.gen_range(1..=4))).collect())
}

pub fn random_positive_rational(rng: &mut ChaCha8Rng) -> Rational {
    rat(rng.gen_range(1..=12), rng.gen_range(1..=5))
}

/// `min_α ⟨a, α⟩` straight from the generator list.
pub fn min_pairing(points: &[RationalVec], a: &RationalVec) -> Rational {
    points.iter().map(|p| p.dot(a)).min().expect("nonempty")
}

fn det(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut d = int(1);
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            m.swap(p, c);
            d = -d;
        }
        d *= m[c][c].clone();
        for r in c + 1..n {
            let f = &m[r][c] / &m[c][c];
            for k in c..n {
                let v = &m[c][k] * &f;
                m[r][k] -= v;
            }
        }
    }
    d
}

/// Normal of the hyperplane spanned by `n − 1` rows, by cofactors.
fn cofactor_normal(rows: &[Vec<Rational>], n: usize) -> Vec<Rational> {
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<Rational>> = rows
                .iter()
                .map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, v)| v.clone()).collect())
                .collect();
            let d = if minor.is_empty() { int(1) } else { det(minor) };
            if j % 2 == 0 {
                d
            } else {
                -d
            }
        })
        .collect()
}

fn subsets(len: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(start: usize, len: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..len {
            cur.push(i);
            go(i + 1, len, size, cur, out);
            cur.pop();
        }
    }
    go(0, len, size, &mut cur, &mut out);
    out
}

/// Every supporting halfspace `⟨a, x⟩ ≥ c` of `conv(points) + ℝⁿ₊` with
/// `a ≥ 0` spanned by generators and coordinate directions, found by brute
/// force. The list may contain redundant entries; their intersection with
/// the orthant is the polyhedron.
pub fn brute_force_halfspaces(points: &[RationalVec], n: usize) -> Vec<(RationalVec, Rational)> {
    let mut out: Vec<(RationalVec, Rational)> = Vec::new();
    for s in 1..=points.len().min(n) {
        for gens in subsets(points.len(), s) {
            for dirs in subsets(n, n - s) {
                let base = &points[gens[0]];
                let mut rows: Vec<Vec<Rational>> = gens[1..]
                    .iter()
                    .map(|&g| (&points[g] - base).into_coords())
                    .collect();
                rows.extend(dirs.iter().map(|&k| RationalVec::unit(n, k).into_coords()));
                let mut a = cofactor_normal(&rows, n);
                if a.iter().all(Zero::is_zero) {
                    continue;
                }
                if a.iter().any(Signed::is_negative) {
                    if a.iter().any(Signed::is_positive) {
                        continue;
                    }
                    a.iter_mut().for_each(|v| *v = -v.clone());
                }
                let a = RationalVec::new(a);
                let c = base.dot(&a);
                if points.iter().all(|p| p.dot(&a) >= c) && c.is_positive() {
                    let total = a.sum();
                    out.push((a.scale(&(int(1) / &total)), c / total));
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// `σ(u, φ) = min_F ν_u(a_F)/c_F` over the brute-force halfspaces of `P_φ`.
pub fn oracle_relative_type(u: &TropicalGerm, phi: &TropicalGerm) -> Rational {
    let n = phi.dim();
    brute_force_halfspaces(phi.polyhedron().generators(), n)
        .iter()
        .map(|(a, c)| min_pairing(u.polyhedron().generators(), a) / c)
        .min()
        .unwrap_or_else(Rational::zero)
}

/// Grid resolution of the Monte-Carlo oracle per dimension.
pub fn monte_carlo_cells(n: usize) -> usize {
    if n == 2 {
        2000
    } else {
        220
    }
}

/// Stratified Monte-Carlo estimate of `Vol(ℝⁿ₊ ∖ P)` for convenient `P`
/// (one jittered point per grid cell, membership by brute-force halfspaces).
pub fn monte_carlo_covolume(points: &[RationalVec], n: usize, cells_per_axis: usize, seed: u64) -> f64 {
    let halfspaces: Vec<(Vec<f64>, f64)> = brute_force_halfspaces(points, n)
        .iter()
        .map(|(a, c)| (a.to_f64(), lelong_core::rational::to_f64(c)))
        .collect();
    let side = points
        .iter()
        .flat_map(|p| p.to_f64())
        .fold(0.0f64, f64::max);
    let h = side / cells_per_axis as f64;
    let cells = cells_per_axis.pow(n as u32);
    let outside: usize = (0..cells_per_axis)
        .into_par_iter()
        .map(|slab| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(slab as u64);
            let per_slab = cells / cells_per_axis;
            let mut count = 0;
            let mut x = vec![0.0; n];
            for cell in 0..per_slab {
                let mut idx = cell;
                x[0] = (slab as f64 + rng.gen::<f64>()) * h;
                for xk in x.iter_mut().skip(1) {
                    *xk = ((idx % cells_per_axis) as f64 + rng.gen::<f64>()) * h;
                    idx /= cells_per_axis;
                }
                let inside = halfspaces
                    .iter()
                    .all(|(a, c)| a.iter().zip(&x).map(|(ai, xi)| ai * xi).sum::<f64>() >= *c);
                if !inside {
                    count += 1;
                }
            }
            count
        })
        .sum();
    outside as f64 / cells as f64 * side.powi(n as i32)
}
