//! One PASS/FAIL line per acceptance criterion; exits nonzero on any failure.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use lelong_core::rational::{int, rat, to_f64};
use lelong_core::{
    convexity_check, estimate_type, growth_curve, mass_lower_bound, mixed_mass, Extended,
    GermEvaluator, MapEvaluator, MassBound, PolynomialMap, Rational, RationalVec, SamplerConfig,
    TropicalGerm,
};
use rand::Rng;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn finite(e: Extended) -> Result<Rational, String> {
    e.finite().cloned().ok_or_else(|| "unexpected infinite value".to_string())
}

fn pow(q: &Rational, n: usize) -> Rational {
    num_traits::pow(q.clone(), n)
}

fn germ(points: &[&[i64]]) -> TropicalGerm {
    TropicalGerm::from_int_points(points).expect("valid germ")
}

fn reference_weight() -> TropicalGerm {
    germ(&[&[3, 0], &[0, 3], &[1, 1]])
}

/// Exact reference values; zero tolerance and a one second budget.
fn reference_values() -> Check {
    let start = Instant::now();
    let phi = reference_weight();
    let s = |u: &TropicalGerm| u.relative_type(&phi).map_err(|e| e.to_string());
    let z1 = germ(&[&[1, 0]]);
    let z1z2 = germ(&[&[1, 1]]);
    let u = germ(&[&[2, 0], &[0, 1]]);
    ensure(s(&z1)? == rat(1, 3), || format!("sigma(log|z1|) = {}", s(&z1).unwrap()))?;
    ensure(s(&z1z2)? == int(1), || format!("sigma(log|z1 z2|) = {}", s(&z1z2).unwrap()))?;
    ensure(s(&u)? == rat(1, 3), || format!("sigma(u) = {}", s(&u).unwrap()))?;
    let nu = u.demailly_number(&phi).map_err(|e| e.to_string())?;
    let tau = finite(phi.residual_mass())?;
    ensure(nu == int(3), || format!("nu(u, phi) = {nu}"))?;
    ensure(tau == int(6), || format!("tau = {tau}"))?;
    let ratio = &nu / &tau;
    ensure(ratio == rat(1, 2) && s(&u)? < ratio, || format!("gap {} < {ratio}", s(&u).unwrap()))?;
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!("1/3, 1, 1/3, 3, 6, 1/3 < 1/2 in {elapsed:.1?}"))
}

/// `ν_u(a) = a₁⋯aₙ·ν(u, φ_a)` with `ν_u(a)` taken straight from the generators.
fn directional_identity() -> Check {
    let mut r = rng(1001);
    for i in 0..100 {
        let n = 2 + i % 2;
        let u = random_germ(&mut r, n);
        let a = random_direction(&mut r, n);
        let phi_a = TropicalGerm::directional_weight(&a).map_err(|e| e.to_string())?;
        let lhs = min_pairing(u.polyhedron().generators(), &a);
        let prod = a.iter().fold(int(1), |p, x| p * x);
        let rhs = prod * u.demailly_number(&phi_a).map_err(|e| e.to_string())?;
        ensure(lhs == rhs, || format!("{u} at {a}: {lhs} != {rhs}"))?;
    }
    Ok("100 pairs exact".into())
}

/// Homogeneity, max-additivity, superadditivity and the chain rule.
fn calculus_laws() -> Check {
    let mut r = rng(1002);
    let (mut strict_sum, mut strict_chain) = (0, 0);
    for i in 0..500 {
        let n = 2 + i % 2;
        let u = random_germ(&mut r, n);
        let v = random_convenient(&mut r, n);
        let w = random_convenient(&mut r, n);
        let c = random_positive_rational(&mut r);
        let s = |g: &TropicalGerm, h: &TropicalGerm| g.relative_type(h).map_err(|e| e.to_string());
        let (su, sv) = (s(&u, &w)?, s(&v, &w)?);
        ensure(s(&u.scale(&c), &w)? == &c * &su, || format!("homogeneity fails for {u}"))?;
        let max_uv = u.oplus(&v).map_err(|e| e.to_string())?;
        ensure(s(&max_uv, &w)? == su.clone().min(sv.clone()), || format!("max law fails for {u}, {v}"))?;
        let sum_uv = u.otimes(&v).map_err(|e| e.to_string())?;
        let lhs = s(&sum_uv, &w)?;
        ensure(lhs >= &su + &sv, || format!("superadditivity fails for {u}, {v}, {w}"))?;
        strict_sum += usize::from(lhs > &su + &sv);
        let chain = s(&u, &v)? * &sv;
        ensure(su >= chain, || format!("chain rule fails for {u}, {v}, {w}"))?;
        strict_chain += usize::from(su > chain);
    }
    ensure(strict_sum > 0 && strict_chain > 0, || {
        format!("no strict case recorded ({strict_sum}, {strict_chain})")
    })?;
    Ok(format!(
        "500 triples; strict superadditivity {strict_sum}, strict chain rule {strict_chain}"
    ))
}

/// Type bounds through `ν`, `α` and `τ`, and equality for directional weights.
fn bound_suite() -> Check {
    let mut r = rng(1003);
    for i in 0..200 {
        let n = 2 + i % 2;
        let u = random_convenient(&mut r, n);
        let phi = random_convenient(&mut r, n);
        let sigma = u.relative_type(&phi).map_err(|e| e.to_string())?;
        let nu_u = u.lelong_number();
        let nu_phi = phi.lelong_number();
        let alpha = finite(phi.lojasiewicz_alpha().map_err(|e| e.to_string())?)?;
        let tau = finite(phi.residual_mass())?;
        let mixed = u.demailly_number(&phi).map_err(|e| e.to_string())?;
        let ctx = || format!("{u} vs {phi}");
        ensure(&nu_u / &alpha <= sigma && sigma <= &nu_u / &nu_phi, ctx)?;
        ensure(tau <= pow(&alpha, n - 1) * &nu_phi, ctx)?;
        ensure(&sigma * &tau <= mixed, ctx)?;
        ensure(pow(&nu_phi, n) <= tau && tau <= pow(&alpha, n), ctx)?;
    }
    for i in 0..50 {
        let n = 2 + i % 2;
        let u = random_germ(&mut r, n);
        let a = random_direction(&mut r, n);
        let phi_a = TropicalGerm::directional_weight(&a).map_err(|e| e.to_string())?;
        let tau = finite(phi_a.residual_mass())?;
        let lhs = u.relative_type(&phi_a).map_err(|e| e.to_string())? * tau;
        let rhs = u.demailly_number(&phi_a).map_err(|e| e.to_string())?;
        ensure(lhs == rhs, || format!("{u} at {a}: {lhs} != {rhs}"))?;
    }
    Ok("200 convenient pairs, 50 directional equalities".into())
}

/// Diagonal of the mixed mass and linearity in one slot.
fn polarization() -> Check {
    let mut r = rng(1004);
    for i in 0..100 {
        let n = 2 + i % 2;
        let germs: Vec<TropicalGerm> = (0..n).map(|_| random_convenient(&mut r, n)).collect();
        let extra = random_convenient(&mut r, n);
        let mm = |g: &[TropicalGerm]| mixed_mass(g).map_err(|e| e.to_string());
        let diag = vec![germs[0].clone(); n];
        ensure(mm(&diag)? == finite(germs[0].residual_mass())?, || format!("diagonal fails for {}", germs[0]))?;
        let slot = r.gen_range(0..n);
        let mut summed = germs.clone();
        summed[slot] = germs[slot].otimes(&extra).map_err(|e| e.to_string())?;
        let mut swapped = germs.clone();
        swapped[slot] = extra;
        ensure(mm(&summed)? == mm(&germs)? + mm(&swapped)?, || format!("linearity fails in slot {slot}"))?;
    }
    Ok("100 tuples exact".into())
}

/// Newton numbers of model maps and covolume against Monte-Carlo.
fn newton_numbers() -> Check {
    let zero = RationalVec::zeros(2);
    for a in 1..=6i64 {
        for b in 1..=6i64 {
            let f = PolynomialMap::parse(2, &[&format!("z1^{a}"), &format!("z2^{b}")]).map_err(|e| e.to_string())?;
            let value = f.newton_number(&zero).map_err(|e| e.to_string())?;
            ensure(value == Extended::Finite(int(a * b)), || format!("({a},{b}) gives {value}"))?;
        }
    }
    let f = PolynomialMap::parse(2, &["z1^2 + z2^3", "z2^2 + z1^3"]).map_err(|e| e.to_string())?;
    let value = f.newton_number(&zero).map_err(|e| e.to_string())?;
    ensure(value == Extended::Finite(int(4)), || format!("mixed map gives {value}"))?;

    let mut r = rng(1005);
    let mut worst: f64 = 0.0;
    for i in 0..50 {
        let n = 2 + i % 2;
        let p = random_convenient(&mut r, n).polyhedron().clone();
        let exact = to_f64(&finite(p.covolume())?);
        let estimate = monte_carlo_covolume(p.generators(), n, monte_carlo_cells(n), 5000 + i as u64);
        let rel = (estimate - exact).abs() / exact;
        worst = worst.max(rel);
        ensure(rel < 1e-3, || format!("{p}: exact {exact}, Monte-Carlo {estimate}"))?;
    }
    Ok(format!("36 monomial maps, N = 4, worst Monte-Carlo deviation {worst:.1e}"))
}

/// Residual-mass bounds from directional data.
fn greenification() -> Check {
    let mut r = rng(1006);
    let bound = |u: &TropicalGerm, a: &[RationalVec]| match mass_lower_bound(u, a) {
        Ok(MassBound::Finite(q)) => Ok(Some(q)),
        Ok(MassBound::NoFiniteBound) => Ok(None),
        Err(e) => Err(e.to_string()),
    };
    for i in 0..200 {
        let n = 2 + i % 2;
        let u = if i % 2 == 0 { random_convenient(&mut r, n) } else { random_germ(&mut r, n) };
        let k = r.gen_range(1..=3);
        let small: Vec<RationalVec> = (0..k).map(|_| random_direction(&mut r, n)).collect();
        let mut large = small.clone();
        large.push(random_direction(&mut r, n));
        let (b_small, b_large) = (bound(&u, &small)?, bound(&u, &large)?);
        if let (Some(s), Some(l)) = (&b_small, &b_large) {
            ensure(s <= l, || format!("{u}: bound drops from {s} to {l}"))?;
        }
        if let (Some(l), Extended::Finite(m)) = (&b_large, u.residual_mass()) {
            ensure(*l <= m, || format!("{u}: bound {l} exceeds mass {m}"))?;
        }
        if u.is_convenient() {
            let normals: Vec<RationalVec> = u.polyhedron().facets().iter().map(|f| f.normal.clone()).collect();
            let full = bound(&u, &normals)?;
            ensure(full == u.residual_mass().finite().cloned(), || format!("{u}: no exhaustion"))?;
        }
    }
    let u = germ(&[&[2, 0], &[0, 3]]);
    let worked = bound(&u, &[RationalVec::from_ints(&[1, 1])])?;
    ensure(worked == Some(int(4)) && u.residual_mass() == Extended::Finite(int(6)), || {
        format!("worked example gives {worked:?}")
    })?;
    Ok("200 (u, A) pairs; worked bound 4 <= 6".into())
}

/// Sampled slopes against exact types, with the default configuration.
fn sampler_vs_oracle() -> Check {
    let cfg = SamplerConfig::default();
    let mut r = rng(1007);
    let mut worst: f64 = 0.0;
    let mut slowest = Duration::ZERO;
    for i in 0..20 {
        let n = 2 + i % 2;
        let u = random_germ(&mut r, n);
        let phi = random_convenient(&mut r, n);
        let exact = to_f64(&u.relative_type(&phi).map_err(|e| e.to_string())?);
        let start = Instant::now();
        let est = estimate_type(&GermEvaluator::new(&u), &phi, &cfg).map_err(|e| e.to_string())?;
        slowest = slowest.max(start.elapsed());
        let rel = (est.sigma_hat - exact).abs() / exact;
        worst = worst.max(rel);
        ensure(rel <= 0.05, || format!("{u} vs {phi}: {} vs {exact}", est.sigma_hat))?;
        ensure(est.one_sided_ok, || format!("{u} vs {phi}: one-sided bound fails {est:?}"))?;
        ensure(est.sigma_hat >= -est.std_error, || format!("negative slope {est:?}"))?;
    }
    let ell = TropicalGerm::log_norm(2);
    let f = PolynomialMap::parse(2, &["z1^2 + z2^3"]).map_err(|e| e.to_string())?;
    let eval = MapEvaluator::new(&f);
    let start = Instant::now();
    let est = estimate_type(&eval, &ell, &cfg).map_err(|e| e.to_string())?;
    slowest = slowest.max(start.elapsed());
    let rel = (est.sigma_hat - 2.0).abs() / 2.0;
    ensure(rel <= 0.05, || format!("log|z1^2 + z2^3| slope {}", est.sigma_hat))?;
    ensure(slowest < Duration::from_secs(30), || format!("slowest estimate {slowest:?}"))?;
    let curve = growth_curve(&eval, &ell, &cfg).map_err(|e| e.to_string())?;
    let report = convexity_check(&curve, 1e-2).map_err(|e| e.to_string())?;
    ensure(report.passed(), || format!("convexity violations {:?}", report.violations))?;
    let phi = reference_weight();
    let own = growth_curve(&GermEvaluator::new(&phi), &phi, &cfg).map_err(|e| e.to_string())?;
    let report = convexity_check(&own, 1e-2).map_err(|e| e.to_string())?;
    ensure(report.passed(), || format!("own-weight curve not convex {:?}", report.violations))?;
    Ok(format!(
        "worst relative error {worst:.2e}, polynomial slope {:.4}, slowest {slowest:.1?}",
        est.sigma_hat
    ))
}

/// Byte-identical curves and estimates across runs and thread pools.
fn determinism() -> Check {
    let u = germ(&[&[2, 1], &[0, 3], &[4, 0]]);
    let phi = reference_weight();
    let f = PolynomialMap::parse(2, &["z1^2 + z2^3"]).map_err(|e| e.to_string())?;
    let cfg = SamplerConfig { seed: 42, ..SamplerConfig::default() };
    let run = |threads: usize, parallel: bool| -> Result<String, String> {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(|e| e.to_string())?;
        pool.install(|| {
            let cfg = SamplerConfig { parallel, ..cfg.clone() };
            let germ_curve = growth_curve(&GermEvaluator::new(&u), &phi, &cfg).map_err(|e| e.to_string())?;
            let map_est = estimate_type(&MapEvaluator::new(&f), &TropicalGerm::log_norm(2), &cfg)
                .map_err(|e| e.to_string())?;
            Ok(format!(
                "{}{}{}",
                germ_curve.to_csv(),
                serde_json::to_string(&germ_curve).map_err(|e| e.to_string())?,
                serde_json::to_string(&map_est).map_err(|e| e.to_string())?
            ))
        })
    };
    let reference = run(1, false)?;
    for (threads, parallel) in [(1, true), (4, true), (8, true), (4, true)] {
        let other = run(threads, parallel)?;
        ensure(other == reference, || format!("output differs with {threads} threads"))?;
    }
    Ok(format!("{} bytes identical over 5 runs", reference.len()))
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, fn() -> Check); 9] = [
        (1, "exact reference values", reference_values),
        (2, "directional Lelong identity", directional_identity),
        (3, "relative type calculus", calculus_laws),
        (4, "type and mass bounds", bound_suite),
        (5, "mixed mass polarization", polarization),
        (6, "Newton numbers and covolume", newton_numbers),
        (7, "greenification bounds", greenification),
        (8, "sampled slopes vs exact types", sampler_vs_oracle),
        (9, "sampler determinism", determinism),
    ];
    let mut failed = 0;
    for (id, name, check) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {id} PASS {name}: {detail} [{elapsed:.2?}]"),
            Err(detail) => {
                failed += 1;
                println!("criterion {id} FAIL {name}: {detail} [{elapsed:.2?}]");
            }
        }
    }
    if failed == 0 {
        println!("acceptance: all 9 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} of 9 criteria failed");
        ExitCode::FAILURE
    }
}
