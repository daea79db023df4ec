use std::fs;

use lelong_core::{Error, MapSpec, NewtonPolyhedron, PolyhedronJson, TropicalGerm, WeightFamily};

use crate::CliError;

/// Inline JSON, or the contents of a file when the argument starts with `@`.
pub fn load(arg: &str) -> Result<String, CliError> {
    match arg.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {path}: {e}"))),
        None => Ok(arg.to_string()),
    }
}

pub fn germ(arg: &str) -> Result<TropicalGerm, CliError> {
    let text = load(arg)?;
    let json: PolyhedronJson = serde_json::from_str(&text).map_err(|e| Error::Json(e.to_string()))?;
    Ok(TropicalGerm::new(NewtonPolyhedron::from_json(&json)?))
}

pub fn map(arg: &str) -> Result<MapSpec, CliError> {
    Ok(MapSpec::from_json_str(&load(arg)?)?)
}

pub fn family(arg: &str) -> Result<WeightFamily, CliError> {
    Ok(WeightFamily::from_json_str(&load(arg)?)?)
}

/// `a:b` (integer steps, either direction) or a comma-separated list.
pub fn grid(spec: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::Usage(format!("cannot parse shells `{spec}`; use `a:b` or `x,y,z`"));
    if let Some((a, b)) = spec.split_once(':') {
        let a: i64 = a.trim().parse().map_err(|_| bad())?;
        let b: i64 = b.trim().parse().map_err(|_| bad())?;
        let values: Vec<i64> = if a <= b { (a..=b).collect() } else { (b..=a).rev().collect() };
        return Ok(values.into_iter().map(|k| k as f64).collect());
    }
    spec.split(',').map(|s| s.trim().parse::<f64>().map_err(|_| bad())).collect()
}

/// Inclusive integer range `a:b` with `a ≤ b`.
pub fn shell_range(spec: &str) -> Result<(u32, u32), CliError> {
    let bad = || CliError::Usage(format!("cannot parse shells `{spec}`; use `first:last`"));
    let (a, b) = spec.split_once(':').ok_or_else(bad)?;
    let a: u32 = a.trim().parse().map_err(|_| bad())?;
    let b: u32 = b.trim().parse().map_err(|_| bad())?;
    Ok((a, b))
}
