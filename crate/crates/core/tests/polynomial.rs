mod common;

use common::*;
use lelong_core::rational::{int, rat};
use lelong_core::{Error, Extended, MapSpec, Polynomial, PolynomialMap, Rational, RationalVec};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn random_poly(r: &mut ChaCha8Rng, n: usize, allow_constant: bool) -> Polynomial {
    loop {
        let terms: Vec<(Vec<u32>, Rational)> = (0..r.gen_range(1..=4))
            .map(|_| {
                let e: Vec<u32> = (0..n).map(|_| r.gen_range(0..=4)).collect();
                let mut c = rat(r.gen_range(1..=9), r.gen_range(1..=3));
                if r.gen_bool(0.5) {
                    c = -c;
                }
                (e, c)
            })
            .filter(|(e, _)| allow_constant || e.iter().any(|&k| k > 0))
            .collect();
        let p = Polynomial::from_terms(n, terms).unwrap();
        if !p.is_zero() {
            return p;
        }
    }
}

/// A map vanishing at the origin whose support meets every axis.
fn random_convenient_map(r: &mut ChaCha8Rng, n: usize) -> PolynomialMap {
    let p = r.gen_range(1..=3);
    let mut comps: Vec<Polynomial> = (0..p).map(|_| random_poly(r, n, false)).collect();
    for k in 0..n {
        let mut e = vec![0u32; n];
        e[k] = r.gen_range(1..=5);
        let i = r.gen_range(0..p);
        let pure = Polynomial::from_terms(n, [(e, int(r.gen_range(1..=4)))]).unwrap();
        comps[i] = comps[i].add(&pure);
        if comps[i].is_zero() {
            comps[i] = pure;
        }
    }
    PolynomialMap::new(comps).unwrap()
}

fn random_zeta(r: &mut ChaCha8Rng, n: usize) -> RationalVec {
    RationalVec::new((0..n).map(|_| rat(r.gen_range(-6..=6), r.gen_range(1..=4))).collect())
}

#[test]
fn recentering_is_a_group_action() {
    let mut r = rng(41);
    for i in 0..100 {
        let n = 2 + i % 2;
        let p = random_poly(&mut r, n, true);
        let (z, x) = (random_zeta(&mut r, n), random_zeta(&mut r, n));
        let once = p.recenter(&(&z + &x)).unwrap();
        let twice = p.recenter(&z).unwrap().recenter(&x).unwrap();
        assert_eq!(once, twice);
        assert_eq!(p.recenter(&RationalVec::zeros(n)).unwrap(), p);
        let back = p.recenter(&z).unwrap().recenter(&z.scale(&int(-1))).unwrap();
        assert_eq!(back, p);
    }
}

#[test]
fn newton_data_is_invariant_under_permutation_and_scaling() {
    let mut r = rng(42);
    for i in 0..100 {
        let n = 2 + i % 2;
        let f = random_convenient_map(&mut r, n);
        let zero = RationalVec::zeros(n);
        let base = f.newton_number(&zero).unwrap();
        let mut comps = f.components().to_vec();
        comps.shuffle(&mut r);
        let k = r.gen_range(0..comps.len());
        comps[k] = comps[k].scale(&rat(-r.gen_range(1..=7), r.gen_range(1..=5)));
        let g = PolynomialMap::new(comps).unwrap();
        assert_eq!(g.newton_number(&zero).unwrap(), base);
    }
}

#[test]
fn indicator_matches_monomial_minima() {
    let mut r = rng(43);
    for i in 0..100 {
        let n = 2 + i % 2;
        let f = random_convenient_map(&mut r, n);
        let zero = RationalVec::zeros(n);
        let psi = f.indicator(&zero).unwrap();
        let support: Vec<RationalVec> = f.components().iter().flat_map(|p| p.support()).collect();
        for _ in 0..5 {
            let a = random_direction(&mut r, n);
            assert_eq!(psi.directional_lelong(&a).unwrap(), min_pairing(&support, &a));
        }
        assert_eq!(psi.residual_mass(), f.newton_number(&zero).unwrap());
        assert!(matches!(f.newton_number(&zero).unwrap(), Extended::Finite(_)));
    }
}

#[test]
fn newton_number_at_a_rational_zero() {
    // f(z) = ((z1 − 1/2)^2, (z2 + 1)^3) has a monomial zero at (1/2, −1)
    let f = PolynomialMap::parse(2, &["z1^2 - z1 + 1/4", "z2^3 + 3*z2^2 + 3*z2 + 1"]).unwrap();
    let zeta = RationalVec::new(vec![rat(1, 2), int(-1)]);
    assert_eq!(f.newton_number(&zeta).unwrap(), Extended::Finite(int(6)));
    assert_eq!(f.newton_number(&RationalVec::zeros(2)).unwrap_err(), Error::NotAZero(0));
}

#[test]
fn pure_power_maps() {
    for a in 1..=6i64 {
        for b in 1..=6i64 {
            let f = PolynomialMap::parse(2, &[&format!("z1^{a}"), &format!("z2^{b}")]).unwrap();
            assert_eq!(f.newton_number(&RationalVec::zeros(2)).unwrap(), Extended::Finite(int(a * b)));
        }
    }
}

#[test]
fn map_files_parse() {
    let spec = MapSpec::from_json_str(r#"{"n":2,"components":["z1^2 + z2^3","z2^2 + z1^3"],"zeta":["0","0"]}"#)
        .unwrap();
    assert_eq!(spec.map.newton_number(&spec.zeta).unwrap(), Extended::Finite(int(4)));
    assert!(matches!(
        MapSpec::from_json_str(r#"{"n":2,"components":["z1 +"]}"#),
        Err(Error::Parse { .. })
    ));
}

proptest! {
    #[test]
    fn display_round_trips(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(1..=3);
        let p = random_poly(&mut r, n, true);
        let text = p.to_string();
        prop_assert_eq!(Polynomial::parse(&text, n).unwrap(), p);
    }

    #[test]
    fn product_supports_add(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = 2;
        let p = random_poly(&mut r, n, false);
        let q = random_poly(&mut r, n, false);
        let f = PolynomialMap::new(vec![p.clone()]).unwrap();
        let g = PolynomialMap::new(vec![q.clone()]).unwrap();
        let fg = PolynomialMap::new(vec![p.mul(&q)]).unwrap();
        let zero = RationalVec::zeros(n);
        let sum = f.indicator(&zero).unwrap().otimes(&g.indicator(&zero).unwrap()).unwrap();
        prop_assert_eq!(fg.indicator(&zero).unwrap(), sum);
    }
}
