//! Deterministic inputs for the benchmarks.

use lelong_core::rational::rat;
use lelong_core::{NewtonPolyhedron, PolynomialMap, RationalVec, SamplerConfig, TropicalGerm};

/// A convenient germ in dimension `n` with `k` interior generators on a
/// fixed pseudo-random pattern.
pub fn convenient_germ(n: usize, k: usize, salt: i64) -> TropicalGerm {
    let mut points: Vec<RationalVec> = (0..n)
        .map(|i| RationalVec::unit(n, i).scale(&rat(5 + ((salt + i as i64) % 4), 1)))
        .collect();
    for j in 0..k {
        let coords = (0..n)
            .map(|i| rat(((salt + 3 * j as i64 + 5 * i as i64) % 7) + 1, 1 + (j as i64 % 3)))
            .collect();
        points.push(RationalVec::new(coords));
    }
    TropicalGerm::new(NewtonPolyhedron::canonicalize(points).expect("nonempty"))
}

pub fn cusp_map() -> PolynomialMap {
    PolynomialMap::parse(2, &["z1^2 + z2^3"]).expect("valid map")
}

/// A short grid for timing the sampler.
pub fn sampler_config() -> SamplerConfig {
    SamplerConfig {
        r_grid: (2..=7).map(|k| -f64::from(k)).collect(),
        samples_per_shell: 1024,
        ..SamplerConfig::default()
    }
}
