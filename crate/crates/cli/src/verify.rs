use std::collections::BTreeMap;
use std::time::Instant;

use lelong_core::rational::{int, rat, to_f64};
use lelong_core::sampling::format_sig9;
use lelong_core::{
    estimate_type, mass_lower_bound, Evaluator, GermEvaluator, MapEvaluator, PolynomialMap, Rational,
    RationalVec, Result, SamplerConfig, TropicalGerm,
};
use serde::Serialize;

use crate::CliError;

pub const SAMPLED_TOLERANCE: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RowKind {
    Exact,
    Sampled,
}

#[derive(Clone, Debug, Serialize)]
pub struct Row {
    pub id: &'static str,
    pub kind: RowKind,
    pub claim: &'static str,
    pub expected: String,
    pub computed: String,
    pub pass: bool,
}

fn phi() -> TropicalGerm {
    TropicalGerm::from_int_points(&[&[3, 0], &[0, 3], &[1, 1]]).expect("valid weight")
}

fn germ(points: &[&[i64]]) -> TropicalGerm {
    TropicalGerm::from_int_points(points).expect("valid germ")
}

fn exact(id: &'static str, claim: &'static str, expected: &str, computed: Result<String>) -> Row {
    let computed = computed.unwrap_or_else(|e| format!("error: {e}"));
    Row { id, kind: RowKind::Exact, claim, expected: expected.to_string(), computed, pass: false }
}

pub fn exact_rows() -> Vec<Row> {
    let phi = phi();
    let z1 = germ(&[&[1, 0]]);
    let z2 = germ(&[&[0, 1]]);
    let z1z2 = germ(&[&[1, 1]]);
    let max = germ(&[&[2, 0], &[0, 1]]);
    let u = germ(&[&[2, 0], &[0, 3]]);
    let a = RationalVec::from_ints(&[1, 2]);
    let zero = RationalVec::zeros(2);

    vec![
        exact("type_z1", "type of log|z1| relative to phi", "1/3", z1.relative_type(&phi).map(|q| q.to_string())),
        exact("type_z2", "type of log|z2| relative to phi", "1/3", z2.relative_type(&phi).map(|q| q.to_string())),
        exact("type_z1z2", "type of log|z1 z2| relative to phi", "1", z1z2.relative_type(&phi).map(|q| q.to_string())),
        exact("type_max", "type of max(2log|z1|, log|z2|) relative to phi", "1/3", max.relative_type(&phi).map(|q| q.to_string())),
        exact("demailly_max", "Lelong-Demailly number of max(2log|z1|, log|z2|) against phi", "3", max.demailly_number(&phi).map(|q| q.to_string())),
        exact("mass_phi", "residual mass of phi", "6", Ok(phi.residual_mass().to_string())),
        exact("strict_gap", "type is strictly below nu(u, phi) / mass", "1/3 < 1/2", (|| {
            let sigma = max.relative_type(&phi)?;
            let ratio = max.demailly_number(&phi)? / phi.residual_mass().finite().cloned().unwrap_or_else(|| int(1));
            let rel = if sigma < ratio { "<" } else { ">=" };
            Ok(format!("{sigma} {rel} {ratio}"))
        })()),
        exact("directional_identity", "nu_u(a) = a1 a2 nu(u, phi_a) for u = {(2,0),(0,3)}, a = (1,2)", "2 = 2", (|| {
            let lhs = u.directional_lelong(&a)?;
            let rhs: Rational = a.coords().iter().product::<Rational>() * u.demailly_number(&TropicalGerm::directional_weight(&a)?)?;
            Ok(format!("{lhs} {} {rhs}", if lhs == rhs { "=" } else { "!=" }))
        })()),
        exact("worked_bound", "mass bound of u = {(2,0),(0,3)} from A = {(1,1)} against its residual mass", "4 <= 6", (|| {
            let bound = mass_lower_bound(&u, &[RationalVec::from_ints(&[1, 1])])?;
            Ok(format!("{bound} <= {}", u.residual_mass()))
        })()),
        exact("newton_pure", "Newton number of (z1^2, z2^3)", "6", map(&["z1^2", "z2^3"]).and_then(|f| f.newton_number(&zero)).map(|n| n.to_string())),
        exact("newton_mixed", "Newton number of (z1^2 + z2^3, z2^2 + z1^3)", "4", map(&["z1^2 + z2^3", "z2^2 + z1^3"]).and_then(|f| f.newton_number(&zero)).map(|n| n.to_string())),
        exact("newton_nonconvenient", "Newton number of (z1^2, z1 z2)", "inf", map(&["z1^2", "z1*z2"]).and_then(|f| f.newton_number(&zero)).map(|n| n.to_string())),
        exact("indicator_mass", "residual mass of the indicator of (z1^2 + z2^3, z2^2 + z1^3)", "4", map(&["z1^2 + z2^3", "z2^2 + z1^3"]).and_then(|f| f.indicator(&zero)).map(|g| g.residual_mass().to_string())),
    ]
}

fn map(components: &[&str]) -> Result<PolynomialMap> {
    PolynomialMap::parse(2, components)
}

fn sampled(id: &'static str, claim: &'static str, exact: Rational, eval: &dyn Evaluator, phi: &TropicalGerm, cfg: &SamplerConfig) -> Row {
    let target = to_f64(&exact);
    let computed = match estimate_type(eval, phi, cfg) {
        Ok(est) => format_sig9(est.sigma_hat),
        Err(e) => format!("error: {e}"),
    };
    Row { id, kind: RowKind::Sampled, claim, expected: format_sig9(target), computed, pass: false }
}

pub fn sampled_rows(cfg: &SamplerConfig) -> Result<Vec<Row>> {
    let phi = phi();
    let ell = TropicalGerm::log_norm(2);
    let z1 = germ(&[&[1, 0]]);
    let cusp = map(&["z1^2 + z2^3"])?;
    let line = map(&["z1"])?;
    let phi_a = TropicalGerm::directional_weight(&RationalVec::from_ints(&[1, 2]))?;
    Ok(vec![
        sampled("sampled_type_z1", "sampled type of log|z1| relative to phi", rat(1, 3), &GermEvaluator::new(&z1), &phi, cfg),
        sampled("sampled_cusp", "sampled Lelong number of log|z1^2 + z2^3|", int(2), &MapEvaluator::new(&cusp), &ell, cfg),
        sampled("sampled_directional", "sampled type of log|z1| relative to phi_(1,2)", int(1), &MapEvaluator::new(&line), &phi_a, cfg),
    ])
}

/// Applies an override file and grades every row.
pub fn grade(rows: &mut [Row], overrides: &BTreeMap<String, String>) -> std::result::Result<(), CliError> {
    for id in overrides.keys() {
        if !rows.iter().any(|r| r.id == id) {
            return Err(CliError::Usage(format!("unknown row `{id}` in expected-value file")));
        }
    }
    for row in rows.iter_mut() {
        if let Some(e) = overrides.get(row.id) {
            row.expected = e.clone();
        }
        row.pass = match row.kind {
            RowKind::Exact => row.expected == row.computed,
            RowKind::Sampled => match (row.expected.parse::<f64>(), row.computed.parse::<f64>()) {
                (Ok(e), Ok(c)) => (c - e).abs() <= SAMPLED_TOLERANCE * e.abs(),
                _ => false,
            },
        };
    }
    Ok(())
}

pub struct Run {
    pub rows: Vec<Row>,
    pub exact_seconds: f64,
}

pub fn run(sampled: Option<&SamplerConfig>, overrides: &BTreeMap<String, String>) -> std::result::Result<Run, CliError> {
    let start = Instant::now();
    let mut rows = exact_rows();
    let exact_seconds = start.elapsed().as_secs_f64();
    if let Some(cfg) = sampled {
        rows.extend(sampled_rows(cfg)?);
    }
    grade(&mut rows, overrides)?;
    Ok(Run { rows, exact_seconds })
}
