//! Sampled growth functions `Λ(u, φ, r) = sup{u(z) : φ(z) < r}` and slope
//! estimates of relative types.
//!
//! Points are drawn in logarithmic coordinates `t = log|z|` from the box
//! `[−C|r|, 0]ⁿ`, kept when `φ(t) < r`, pushed radially onto the level set
//! `φ = r` (the supremum of a psh function over a sublevel set is attained on
//! its boundary) and given independent uniform phases. Every draw is keyed by
//! `(seed, shell, attempt)` through a ChaCha stream, so results do not depend
//! on how the work is scheduled.
//!
//! This module is floating point only; nothing here feeds back into the
//! exact core.

use std::f64::consts::TAU;

use num_complex::Complex64;
use num_traits::Signed;
use rand::{Rng, RngCore, SeedableRng};
use rand_distr::StandardNormal;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polynomial::PolynomialMap;
use crate::rational::to_f64;
use crate::tropical::TropicalGerm;

/// A function evaluated in log-polar coordinates: `t_k = log|z_k|`,
/// `θ_k = arg z_k`.
pub trait Evaluator: Sync {
    fn dim(&self) -> usize;
    fn log_value(&self, t: &[f64], theta: &[f64]) -> f64;
}

/// `log|f(z)|` with `|f|` the Euclidean norm of the component values.
#[derive(Clone, Debug)]
pub struct MapEvaluator {
    n: usize,
    /// Per component: (log|c|, arg c, exponents).
    components: Vec<Vec<(f64, f64, Vec<f64>)>>,
}

impl MapEvaluator {
    pub fn new(map: &PolynomialMap) -> Self {
        let components = map
            .components()
            .iter()
            .map(|p| {
                p.terms()
                    .map(|(e, c)| {
                        let value = to_f64(c);
                        let phase = if c.is_negative() { std::f64::consts::PI } else { 0.0 };
                        (
                            value.abs().ln(),
                            phase,
                            e.iter().map(|&k| f64::from(k)).collect(),
                        )
                    })
                    .collect()
            })
            .collect();
        MapEvaluator {
            n: map.dim(),
            components,
        }
    }

    fn component_log_abs(terms: &[(f64, f64, Vec<f64>)], t: &[f64], theta: &[f64]) -> f64 {
        let logs: Vec<(f64, f64)> = terms
            .iter()
            .map(|(log_c, arg_c, e)| {
                let mut modulus = *log_c;
                let mut arg = *arg_c;
                for ((ek, tk), thk) in e.iter().zip(t).zip(theta) {
                    if *ek != 0.0 {
                        modulus += ek * tk;
                        arg += ek * thk;
                    }
                }
                (modulus, arg)
            })
            .collect();
        let top = logs.iter().map(|l| l.0).fold(f64::NEG_INFINITY, f64::max);
        if top == f64::NEG_INFINITY {
            return top;
        }
        let sum: Complex64 = logs
            .iter()
            .map(|&(m, a)| Complex64::from_polar((m - top).exp(), a))
            .sum();
        top + sum.norm().ln()
    }
}

impl Evaluator for MapEvaluator {
    fn dim(&self) -> usize {
        self.n
    }

    fn log_value(&self, t: &[f64], theta: &[f64]) -> f64 {
        let logs: Vec<f64> = self
            .components
            .iter()
            .map(|c| Self::component_log_abs(c, t, theta))
            .collect();
        let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if top == f64::NEG_INFINITY {
            return top;
        }
        let s: f64 = logs.iter().map(|l| (2.0 * (l - top)).exp()).sum();
        top + 0.5 * s.ln()
    }
}

/// `max_α ⟨α, t⟩` for a tropical germ; phases are irrelevant.
#[derive(Clone, Debug)]
pub struct GermEvaluator {
    germ: TropicalGerm,
}

impl GermEvaluator {
    pub fn new(germ: &TropicalGerm) -> Self {
        GermEvaluator { germ: germ.clone() }
    }
}

impl Evaluator for GermEvaluator {
    fn dim(&self) -> usize {
        self.germ.dim()
    }

    fn log_value(&self, t: &[f64], _theta: &[f64]) -> f64 {
        self.germ.eval(t)
    }
}

#[derive(Clone, Debug)]
pub struct ConstantEvaluator {
    pub n: usize,
    pub value: f64,
}

impl Evaluator for ConstantEvaluator {
    fn dim(&self) -> usize {
        self.n
    }

    fn log_value(&self, _t: &[f64], _theta: &[f64]) -> f64 {
        self.value
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    /// Strictly decreasing negative levels.
    pub r_grid: Vec<f64>,
    pub samples_per_shell: usize,
    pub seed: u64,
    /// `C` in the sampling box `[−C|r|, 0]ⁿ`.
    pub box_depth: f64,
    /// Evaluate shells on the rayon pool; results are identical either way.
    #[serde(default = "default_parallel")]
    pub parallel: bool,
    /// Best accepted samples of each half (even and odd attempts) used as
    /// starting points of a local search on the level set; 0 disables it.
    #[serde(default = "default_refine_starts")]
    pub refine_starts: usize,
    #[serde(default = "default_refine_steps")]
    pub refine_steps: usize,
}

fn default_parallel() -> bool {
    true
}

fn default_refine_starts() -> usize {
    4
}

fn default_refine_steps() -> usize {
    150
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            r_grid: (2..=12).map(|k| -f64::from(k)).collect(),
            samples_per_shell: 4096,
            seed: 0,
            box_depth: 4.0,
            parallel: true,
            refine_starts: default_refine_starts(),
            refine_steps: default_refine_steps(),
        }
    }
}

impl SamplerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.r_grid.is_empty() {
            return Err(Error::InvalidConfig("r_grid is empty".into()));
        }
        if self.r_grid.iter().any(|r| !(r.is_finite() && *r < 0.0)) {
            return Err(Error::InvalidConfig("r_grid values must be finite and negative".into()));
        }
        if self.r_grid.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::InvalidConfig("r_grid must be strictly decreasing".into()));
        }
        if self.samples_per_shell == 0 {
            return Err(Error::InvalidConfig("samples_per_shell must be positive".into()));
        }
        if !(self.box_depth.is_finite() && self.box_depth > 0.0) {
            return Err(Error::InvalidConfig("box_depth must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub r: f64,
    pub lambda: f64,
    pub count: usize,
    /// `lambda` minus the smaller of the maxima over even and odd attempts;
    /// a data-driven size of the sampling error of this level.
    pub noise: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthCurve {
    pub points: Vec<CurvePoint>,
}

/// Rounds to 9 significant digits and prints the shortest representation.
pub fn format_sig9(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let rounded: f64 = format!("{x:.8e}").parse().expect("valid float");
    format!("{rounded}")
}

impl GrowthCurve {
    /// `r,lambda,count` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("r,lambda,count\n");
        for p in &self.points {
            out.push_str(&format!(
                "{},{},{}\n",
                format_sig9(p.r),
                format_sig9(p.lambda),
                p.count
            ));
        }
        out
    }

    /// Points sorted by increasing `r`.
    fn ascending(&self) -> Vec<&CurvePoint> {
        let mut pts: Vec<&CurvePoint> = self.points.iter().collect();
        pts.sort_by(|a, b| a.r.total_cmp(&b.r));
        pts
    }

    /// Number of adjacent pairs where `Λ` decreases as `r` increases by more
    /// than `tol` plus the noise band of the two levels.
    pub fn monotonicity_violations(&self, tol: f64) -> usize {
        self.ascending()
            .windows(2)
            .filter(|w| w[1].lambda < w[0].lambda - tol - NOISE_FACTOR * (w[0].noise + w[1].noise))
            .count()
    }
}

fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// An accepted point pushed onto the level set `φ = r`.
struct Sample {
    attempt: usize,
    value: f64,
    t: Vec<f64>,
    theta: Vec<f64>,
}

/// `t·r/φ(t)` for `t` in the open negative orthant.
fn project(phi: &TropicalGerm, t: &[f64], r: f64) -> Option<Vec<f64>> {
    if t.iter().any(|x| !(*x < 0.0)) {
        return None;
    }
    let s = r / phi.eval(t);
    Some(t.iter().map(|x| x * s).collect())
}

fn shell_rng(cfg: &SamplerConfig, shell: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(shell as u64);
    rng
}

/// Word offset of the local-search streams, far beyond the sampling words.
const REFINE_WORDS: u128 = 1 << 80;

/// One draw of shell `shell`, attempt `attempt`, if it lands in `{φ < r}`.
fn draw(
    eval: &dyn Evaluator,
    phi: &TropicalGerm,
    cfg: &SamplerConfig,
    shell: usize,
    attempt: usize,
    r: f64,
) -> Option<Sample> {
    let n = phi.dim();
    let mut rng = shell_rng(cfg, shell);
    // two 32-bit words per f64, 2n values per attempt
    rng.set_word_pos((attempt as u128) * (4 * n as u128));
    let depth = cfg.box_depth * r.abs();
    let t: Vec<f64> = (0..n).map(|_| -depth * uniform(&mut rng)).collect();
    let theta: Vec<f64> = (0..n).map(|_| TAU * uniform(&mut rng)).collect();
    if !(phi.eval(&t) < r) {
        return None;
    }
    let t = project(phi, &t, r)?;
    Some(Sample {
        attempt,
        value: eval.log_value(&t, &theta),
        t,
        theta,
    })
}

/// (1+1) evolution strategy on the level set started from `start`.
fn refine(eval: &dyn Evaluator, phi: &TropicalGerm, cfg: &SamplerConfig, shell: usize, r: f64, start: &Sample) -> f64 {
    let mut rng = shell_rng(cfg, shell);
    rng.set_word_pos(REFINE_WORDS * (1 + start.attempt as u128));
    let (mut t, mut theta, mut best) = (start.t.clone(), start.theta.clone(), start.value);
    let mut step = 0.05;
    for _ in 0..cfg.refine_steps {
        let trial_t: Vec<f64> = t
            .iter()
            .map(|x| x + step * r.abs() * rng.sample::<f64, _>(StandardNormal))
            .collect();
        let trial_theta: Vec<f64> = theta
            .iter()
            .map(|x| x + step * TAU * rng.sample::<f64, _>(StandardNormal))
            .collect();
        let accepted = project(phi, &trial_t, r).and_then(|pt| {
            let v = eval.log_value(&pt, &trial_theta);
            (v >= best).then_some((pt, v))
        });
        match accepted {
            Some((pt, v)) => {
                t = pt;
                theta = trial_theta;
                best = v;
                step = (step * 1.5).min(0.5);
            }
            None => step = (step * 0.85).max(1e-9),
        }
    }
    best
}

fn check_weight(phi: &TropicalGerm) -> Result<()> {
    if !phi.is_weight() {
        return Err(Error::NotAWeight);
    }
    if !phi.is_convenient() {
        return Err(Error::NotConvenient);
    }
    Ok(())
}

/// Sampled `Λ(F, φ, r)` on every level of the grid.
pub fn growth_curve(eval: &dyn Evaluator, phi: &TropicalGerm, cfg: &SamplerConfig) -> Result<GrowthCurve> {
    cfg.validate()?;
    check_weight(phi)?;
    if eval.dim() != phi.dim() {
        return Err(Error::DimensionMismatch {
            expected: phi.dim(),
            found: eval.dim(),
        });
    }
    let shell = |(index, &r): (usize, &f64)| -> Result<CurvePoint> {
        let draw_at = |i: usize| draw(eval, phi, cfg, index, i, r);
        let samples: Vec<Sample> = if cfg.parallel {
            (0..cfg.samples_per_shell)
                .into_par_iter()
                .filter_map(draw_at)
                .collect()
        } else {
            (0..cfg.samples_per_shell).filter_map(draw_at).collect()
        };
        if samples.is_empty() {
            return Err(Error::EmptyShell(r));
        }
        let mut halves = [f64::NEG_INFINITY; 2];
        for half in 0..2 {
            let mut own: Vec<&Sample> = samples.iter().filter(|s| s.attempt % 2 == half).collect();
            own.sort_by(|a, b| b.value.total_cmp(&a.value).then(a.attempt.cmp(&b.attempt)));
            let raw = own.first().map_or(f64::NEG_INFINITY, |s| s.value);
            let starts = &own[..own.len().min(cfg.refine_starts)];
            let refined = if cfg.parallel {
                starts
                    .par_iter()
                    .map(|s| refine(eval, phi, cfg, index, r, s))
                    .reduce(|| f64::NEG_INFINITY, f64::max)
            } else {
                starts
                    .iter()
                    .map(|s| refine(eval, phi, cfg, index, r, s))
                    .fold(f64::NEG_INFINITY, f64::max)
            };
            halves[half] = raw.max(refined);
        }
        let lambda = halves[0].max(halves[1]);
        let weaker = halves[0].min(halves[1]);
        let noise = if weaker.is_finite() { lambda - weaker } else { lambda.abs().max(1.0) };
        Ok(CurvePoint {
            r,
            lambda,
            count: samples.len(),
            noise,
        })
    };
    let points = cfg
        .r_grid
        .iter()
        .enumerate()
        .map(shell)
        .collect::<Result<Vec<_>>>()?;
    Ok(GrowthCurve { points })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TypeEstimate {
    pub sigma_hat: f64,
    /// Standard error of the fitted slope; zero for exact two-point fits.
    pub std_error: f64,
    /// `(r_min, r_max)` of the fitted levels.
    pub fit_range: (f64, f64),
    /// Root-mean-square residual of the linear fit.
    pub residual: f64,
    /// Places where `g(r, r₀)` fails to increase with `r` beyond tolerance.
    pub monotonicity_violations: usize,
    /// Smallest observed difference quotient `g(r, r₀)`, `r₀` the top level.
    pub min_quotient: f64,
    /// `sigma_hat ≤ g(r, r₀) + tolerance` at every level.
    pub one_sided_ok: bool,
    /// Largest per-level noise estimate on the curve.
    pub noise_band: f64,
}

/// Multiplier turning per-level noise estimates into tolerances.
pub const NOISE_FACTOR: f64 = 3.0;

/// Least-squares slope of `Λ` over the most negative third of the grid,
/// with diagnostics of the monotone difference quotient.
pub fn estimate_type(eval: &dyn Evaluator, phi: &TropicalGerm, cfg: &SamplerConfig) -> Result<TypeEstimate> {
    let curve = growth_curve(eval, phi, cfg)?;
    Ok(type_from_curve(&curve))
}

pub fn type_from_curve(curve: &GrowthCurve) -> TypeEstimate {
    let pts = curve.ascending();
    let len = pts.len();
    let k = len.div_ceil(3).max(2).min(len);
    let fit = &pts[..k];

    let (sigma_hat, residual, std_error, fit_tol) = if fit.len() < 2 {
        (0.0, 0.0, 0.0, 0.0)
    } else {
        let m = fit.len() as f64;
        let mean_r = fit.iter().map(|p| p.r).sum::<f64>() / m;
        let mean_l = fit.iter().map(|p| p.lambda).sum::<f64>() / m;
        let sxy: f64 = fit.iter().map(|p| (p.r - mean_r) * (p.lambda - mean_l)).sum();
        let sxx: f64 = fit.iter().map(|p| (p.r - mean_r).powi(2)).sum();
        let slope = sxy / sxx;
        let sse: f64 = fit
            .iter()
            .map(|p| (p.lambda - mean_l - slope * (p.r - mean_r)).powi(2))
            .sum();
        let se = if fit.len() > 2 { (sse / (m - 2.0) / sxx).sqrt() } else { 0.0 };
        let span = fit[fit.len() - 1].r - fit[0].r;
        let worst = fit.iter().map(|p| p.noise).fold(0.0, f64::max);
        (slope, (sse / m).sqrt(), se, 2.0 * NOISE_FACTOR * worst / span)
    };

    let top = pts[len - 1];
    // (g(r, r₀), its tolerance) for every level below the top one
    let quotients: Vec<(f64, f64)> = pts[..len - 1]
        .iter()
        .map(|p| {
            let gap = top.r - p.r;
            (
                (top.lambda - p.lambda) / gap,
                1e-6 + NOISE_FACTOR * (p.noise + top.noise) / gap,
            )
        })
        .collect();
    let monotonicity_violations = quotients
        .windows(2)
        .filter(|w| w[0].0 > w[1].0 + w[0].1 + w[1].1)
        .count();
    let min_quotient = quotients.iter().map(|q| q.0).fold(f64::INFINITY, f64::min);
    let one_sided_ok = quotients
        .iter()
        .all(|(g, tol)| sigma_hat <= g + tol + fit_tol);

    TypeEstimate {
        sigma_hat,
        std_error,
        fit_range: (fit[0].r, fit[fit.len() - 1].r),
        residual,
        monotonicity_violations,
        min_quotient: if quotients.is_empty() { sigma_hat } else { min_quotient },
        one_sided_ok,
        noise_band: pts.iter().map(|p| p.noise).fold(0.0, f64::max),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvexityViolation {
    /// Level at which the slope drops.
    pub r: f64,
    pub magnitude: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvexityReport {
    pub tol: f64,
    pub violations: Vec<ConvexityViolation>,
}

impl ConvexityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks that successive slopes of `Λ` are nondecreasing in `r` up to `tol`.
pub fn convexity_check(curve: &GrowthCurve, tol: f64) -> Result<ConvexityReport> {
    let pts = curve.ascending();
    if pts.len() < 3 {
        return Err(Error::TooFewPoints {
            needed: 3,
            got: pts.len(),
        });
    }
    let slopes: Vec<f64> = pts
        .windows(2)
        .map(|w| (w[1].lambda - w[0].lambda) / (w[1].r - w[0].r))
        .collect();
    let violations = slopes
        .windows(2)
        .zip(&pts[1..])
        .filter_map(|(s, p)| {
            let drop = s[0] - s[1];
            (drop > tol).then_some(ConvexityViolation {
                r: p.r,
                magnitude: drop,
            })
        })
        .collect();
    Ok(ConvexityReport { tol, violations })
}
