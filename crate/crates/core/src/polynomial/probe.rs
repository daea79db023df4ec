//! Heuristic check of whether `log|f(x)| − Ψ(log|x − ζ|)` stays bounded near
//! `ζ`, `Ψ` the indicator of `log|f|`.
//!
//! On each shell `|x − ζ| = 2^{−j}` the discrepancy `d` is sampled at random
//! points and then pushed towards larger `|d|` by a short local search. The
//! shell statistic is the largest `|d|` seen. With `W` the 5%–95% spread of
//! raw `d` on the first three shells and `B` their largest statistic:
//!
//! * `consistent`: every shell stays within `B + W`;
//! * `inconsistent`: three consecutive shells exceed `B + W + drift_margin`;
//! * `indeterminate`: anything else.
//!
//! No finite sample decides an `O(1)` statement, so every report carries a
//! heuristic label.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::PolynomialMap;
use crate::error::{Error, Result};
use crate::rational::{Extended, RationalVec};
use crate::sampling::{Evaluator, MapEvaluator};
use crate::tropical::TropicalGerm;

pub const HEURISTIC_LABEL: &str =
    "heuristic: finite sampling cannot certify boundedness; verdict reflects observed drift only";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeConfig {
    pub first_shell: u32,
    pub last_shell: u32,
    pub samples_per_shell: usize,
    pub seed: u64,
    /// Number of raw samples used as local-search starting points.
    pub refine_starts: usize,
    pub refine_steps: usize,
    /// Added to the window to form the drift threshold, in log units.
    pub drift_margin: f64,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig {
            first_shell: 4,
            last_shell: 16,
            samples_per_shell: 2048,
            seed: 0,
            refine_starts: 4,
            refine_steps: 300,
            drift_margin: 1.0,
        }
    }
}

impl ProbeConfig {
    pub fn validate(&self) -> Result<()> {
        if self.last_shell < self.first_shell + 3 {
            return Err(Error::InvalidConfig("probe needs at least four shells".into()));
        }
        if self.last_shell > 40 {
            return Err(Error::InvalidConfig("shell index above 40 underflows the evaluator".into()));
        }
        if self.samples_per_shell < 20 {
            return Err(Error::InvalidConfig("samples_per_shell must be at least 20".into()));
        }
        if !(self.drift_margin.is_finite() && self.drift_margin >= 0.0) {
            return Err(Error::InvalidConfig("drift_margin must be nonnegative".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeVerdict {
    Consistent,
    Inconsistent,
    Indeterminate,
}

impl std::fmt::Display for ProbeVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ProbeVerdict::Consistent => "consistent",
            ProbeVerdict::Inconsistent => "inconsistent",
            ProbeVerdict::Indeterminate => "indeterminate",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShellStat {
    pub shell: u32,
    pub radius: f64,
    pub raw_min: f64,
    pub raw_max: f64,
    /// Largest `|d|` after local search.
    pub max_abs: f64,
    /// `max_abs − baseline`.
    pub excess: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub verdict: ProbeVerdict,
    pub label: String,
    pub window: f64,
    pub baseline: f64,
    pub drift_threshold: f64,
    pub shells: Vec<ShellStat>,
    pub config: ProbeConfig,
}

struct Discrepancy<'a> {
    map: MapEvaluator,
    indicator: &'a TropicalGerm,
    n: usize,
}

impl Discrepancy<'_> {
    /// `d` at `x ∈ ℝ^{2n}` read as `(Re w, Im w)`.
    fn at(&self, x: &[f64]) -> f64 {
        let (re, im) = x.split_at(self.n);
        let t: Vec<f64> = re.iter().zip(im).map(|(a, b)| a.hypot(*b).ln()).collect();
        let theta: Vec<f64> = re.iter().zip(im).map(|(a, b)| b.atan2(*a)).collect();
        self.map.log_value(&t, &theta) - self.indicator.eval(&t)
    }
}

fn sphere_point(rng: &mut ChaCha8Rng, dim: usize, radius: f64) -> Vec<f64> {
    loop {
        let x: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 1e-300 {
            return x.into_iter().map(|v| v * radius / norm).collect();
        }
    }
}

fn magnitude(d: f64) -> f64 {
    if d.is_nan() {
        f64::INFINITY
    } else {
        d.abs()
    }
}

struct ShellSamples {
    raw: Vec<f64>,
    max_abs: f64,
}

fn sample_shell(disc: &Discrepancy<'_>, cfg: &ProbeConfig, shell: u32) -> ShellSamples {
    let dim = 2 * disc.n;
    let radius = (-f64::from(shell)).exp2();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(u64::from(shell));

    let points: Vec<Vec<f64>> = (0..cfg.samples_per_shell)
        .map(|_| sphere_point(&mut rng, dim, radius))
        .collect();
    let raw: Vec<f64> = points.iter().map(|x| disc.at(x)).collect();

    let mut order: Vec<usize> = (0..raw.len()).collect();
    order.sort_by(|&a, &b| magnitude(raw[b]).total_cmp(&magnitude(raw[a])));
    let mut best = order.first().map_or(0.0, |&i| magnitude(raw[i]));

    for &start in order.iter().take(cfg.refine_starts) {
        let mut x = points[start].clone();
        let mut fx = magnitude(raw[start]);
        let mut step = 0.1;
        for _ in 0..cfg.refine_steps {
            let mut y: Vec<f64> = x
                .iter()
                .map(|v| v + step * radius * rng.sample::<f64, _>(StandardNormal))
                .collect();
            let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
            y.iter_mut().for_each(|v| *v *= radius / norm);
            let fy = magnitude(disc.at(&y));
            if fy.is_finite() && fy >= fx {
                x = y;
                fx = fy;
                step = (step * 1.5).min(1.0);
            } else {
                step = (step * 0.85).max(1e-9);
            }
        }
        best = best.max(fx);
    }
    ShellSamples { raw, max_abs: best }
}

fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Samples `log|f| − Ψ` on shells `2^{−j}` around `ζ` and classifies the drift.
pub fn cor62_probe(f: &PolynomialMap, zeta: &RationalVec, cfg: &ProbeConfig) -> Result<ProbeReport> {
    cfg.validate()?;
    let g = f.recentered_at_zero(zeta)?;
    let indicator = f.indicator(zeta)?;
    if !matches!(indicator.polyhedron().covolume(), Extended::Finite(_)) {
        return Err(Error::NotConvenient);
    }
    let disc = Discrepancy {
        map: MapEvaluator::new(&g),
        indicator: &indicator,
        n: f.dim(),
    };
    let shells: Vec<u32> = (cfg.first_shell..=cfg.last_shell).collect();
    let samples: Vec<ShellSamples> = shells
        .par_iter()
        .map(|&j| sample_shell(&disc, cfg, j))
        .collect();

    let mut pooled: Vec<f64> = samples[..3]
        .iter()
        .flat_map(|s| s.raw.iter().copied())
        .filter(|d| d.is_finite())
        .collect();
    pooled.sort_by(f64::total_cmp);
    let window = if pooled.is_empty() {
        0.0
    } else {
        quantile(&pooled, 0.95) - quantile(&pooled, 0.05)
    };
    let baseline = samples[..3].iter().map(|s| s.max_abs).fold(f64::NEG_INFINITY, f64::max);
    let drift_threshold = window + cfg.drift_margin;

    let stats: Vec<ShellStat> = shells
        .iter()
        .zip(&samples)
        .map(|(&j, s)| {
            let finite = s.raw.iter().copied().filter(|d| d.is_finite());
            ShellStat {
                shell: j,
                radius: (-f64::from(j)).exp2(),
                raw_min: finite.clone().fold(f64::INFINITY, f64::min),
                raw_max: finite.fold(f64::NEG_INFINITY, f64::max),
                max_abs: s.max_abs,
                excess: s.max_abs - baseline,
            }
        })
        .collect();

    let drifting = stats
        .windows(3)
        .any(|w| w.iter().all(|s| s.excess > drift_threshold));
    let verdict = if stats.iter().all(|s| s.excess <= window) {
        ProbeVerdict::Consistent
    } else if drifting {
        ProbeVerdict::Inconsistent
    } else {
        ProbeVerdict::Indeterminate
    };

    Ok(ProbeReport {
        verdict,
        label: HEURISTIC_LABEL.to_string(),
        window,
        baseline,
        drift_threshold,
        shells: stats,
        config: cfg.clone(),
    })
}
