//! Polynomial maps with exact coefficients: parsing, recentering, Newton
//! polyhedra, indicators and Newton numbers.

mod parse;
mod probe;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{factorial, NewtonPolyhedron};
use crate::rational::{JsonRational, Rational, RationalVec, Extended};
use crate::sampling::{estimate_type, MapEvaluator, SamplerConfig, TypeEstimate};
use crate::tropical::{TropicalGerm, WeightProfile};

pub use probe::{cor62_probe, ProbeConfig, ProbeReport, ProbeVerdict, ShellStat};

/// A polynomial in `z₁,…,zₙ` stored as exponent vector → nonzero coefficient,
/// in lexicographic exponent order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    n: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl Polynomial {
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        parse::parse(text, n)
    }

    pub fn zero(n: usize) -> Self {
        Polynomial {
            n,
            terms: BTreeMap::new(),
        }
    }

    /// Builds a polynomial from terms, dropping zero coefficients and merging
    /// repeated exponents.
    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Vec<u32>, Rational)>) -> Result<Self> {
        let mut map: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
        for (e, c) in terms {
            if e.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: e.len(),
                });
            }
            *map.entry(e).or_insert_with(Rational::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        Ok(Polynomial { n, terms: map })
    }

    pub(crate) fn from_terms_unchecked(n: usize, terms: BTreeMap<Vec<u32>, Rational>) -> Self {
        Polynomial { n, terms }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &Rational)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn constant_term(&self) -> Rational {
        self.terms
            .get(&vec![0; self.n])
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = RationalVec> + '_ {
        self.terms.keys().map(|e| {
            RationalVec::new(e.iter().map(|&k| Rational::from_integer(BigInt::from(k))).collect())
        })
    }

    /// `c·p`.
    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        Polynomial {
            n: self.n,
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            *terms.entry(e.clone()).or_insert_with(Rational::zero) += c;
        }
        terms.retain(|_, c| !c.is_zero());
        Polynomial { n: self.n, terms }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut terms: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                *terms.entry(e).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Polynomial { n: self.n, terms }
    }

    /// `q(w) = p(w + ζ)`, expanded exactly.
    pub fn recenter(&self, zeta: &RationalVec) -> Result<Self> {
        if zeta.dim() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: zeta.dim(),
            });
        }
        if zeta.is_zero() {
            return Ok(self.clone());
        }
        let n = self.n;
        // (w_k + ζ_k)^j for every needed power, cached per variable
        let shifted_var = |k: usize| {
            let mut e = vec![0; n];
            e[k] = 1;
            let mut t = BTreeMap::new();
            t.insert(e, Rational::one());
            if !zeta[k].is_zero() {
                t.insert(vec![0; n], zeta[k].clone());
            }
            Polynomial { n, terms: t }
        };
        let mut result = Polynomial::zero(n);
        let mut power_cache: Vec<Vec<Polynomial>> = (0..n).map(|_| vec![Polynomial::one(n)]).collect();
        for (e, c) in &self.terms {
            let mut term = Polynomial::one(n).scale(c);
            for k in 0..n {
                let need = e[k] as usize;
                while power_cache[k].len() <= need {
                    let next = power_cache[k].last().expect("nonempty").mul(&shifted_var(k));
                    power_cache[k].push(next);
                }
                if need > 0 {
                    term = term.mul(&power_cache[k][need]);
                }
            }
            result = result.add(&term);
        }
        Ok(result)
    }

    pub fn one(n: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![0; n], Rational::one());
        Polynomial { n, terms }
    }
}

impl fmt::Display for Polynomial {
    /// Canonical text form, highest exponent (lexicographically) first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let magnitude = c.abs();
            let monomial: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &p)| p > 0)
                .map(|(k, &p)| {
                    if p == 1 {
                        format!("z{}", k + 1)
                    } else {
                        format!("z{}^{}", k + 1, p)
                    }
                })
                .collect();
            if monomial.is_empty() {
                write!(f, "{magnitude}")?;
            } else {
                if !magnitude.is_one() {
                    write!(f, "{magnitude}*")?;
                }
                f.write_str(&monomial.join("*"))?;
            }
        }
        Ok(())
    }
}

/// `f = (f₁, …, f_p)` with a common number of variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolynomialMap {
    n: usize,
    components: Vec<Polynomial>,
}

impl PolynomialMap {
    /// Rejects empty maps and identically-zero components.
    pub fn new(components: Vec<Polynomial>) -> Result<Self> {
        let n = components.first().ok_or(Error::ZeroPolynomial(0))?.dim();
        for (i, p) in components.iter().enumerate() {
            if p.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: p.dim(),
                });
            }
            if p.is_zero() {
                return Err(Error::ZeroPolynomial(i));
            }
        }
        Ok(PolynomialMap { n, components })
    }

    pub fn parse(n: usize, components: &[&str]) -> Result<Self> {
        let polys = components
            .iter()
            .map(|c| Polynomial::parse(c, n))
            .collect::<Result<Vec<_>>>()?;
        Self::new(polys)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    pub fn recenter(&self, zeta: &RationalVec) -> Result<Self> {
        let components = self
            .components
            .iter()
            .map(|p| p.recenter(zeta))
            .collect::<Result<Vec<_>>>()?;
        Ok(PolynomialMap {
            n: self.n,
            components,
        })
    }

    /// Recenters at `ζ` and checks that every component vanishes there.
    fn recentered_at_zero(&self, zeta: &RationalVec) -> Result<Self> {
        let g = self.recenter(zeta)?;
        for (i, p) in g.components.iter().enumerate() {
            if !p.constant_term().is_zero() {
                return Err(Error::NotAZero(i));
            }
        }
        Ok(g)
    }

    /// `Γ₊(f, ζ)`: hull of the union of all recentered supports plus `ℝⁿ₊`.
    pub fn newton_polyhedron(&self, zeta: &RationalVec) -> Result<NewtonPolyhedron> {
        let g = self.recentered_at_zero(zeta)?;
        NewtonPolyhedron::canonicalize(g.components.iter().flat_map(Polynomial::support))
    }

    /// `N_ζ = n!·Vol(ℝⁿ₊ ∖ Γ₊(f, ζ))`, infinite when `Γ₊` is not convenient.
    pub fn newton_number(&self, zeta: &RationalVec) -> Result<Extended> {
        let gamma = self.newton_polyhedron(zeta)?;
        Ok(match gamma.covolume() {
            Extended::Finite(c) => Extended::Finite(factorial(self.n) * c),
            Extended::Infinite => Extended::Infinite,
        })
    }

    /// Indicator of `log|f|` at `ζ`: the germ of `Γ₊(f, ζ)`.
    pub fn indicator(&self, zeta: &RationalVec) -> Result<TropicalGerm> {
        self.newton_polyhedron(zeta).map(TropicalGerm::new)
    }

    /// Kouchnirenko data at `ζ`; the multiplicity itself is not computed.
    pub fn kouchnirenko_report(&self, zeta: &RationalVec) -> Result<KouchnirenkoReport> {
        let indicator = self.indicator(zeta)?;
        let newton_number = self.newton_number(zeta)?;
        let convenient = indicator.is_convenient();
        let statement = match &newton_number {
            Extended::Finite(nz) => format!("m_zeta(f) >= N_zeta = {nz} (multiplicity not computed)"),
            Extended::Infinite => {
                "no isolated-zero bound: Newton polyhedron is not convenient".to_string()
            }
        };
        Ok(KouchnirenkoReport {
            newton_number,
            convenient,
            profile: indicator.weight_profile(),
            indicator,
            statement,
            type_diagnostics: None,
        })
    }

    /// Report with a sampled estimate of the Lelong number of `log|f|` at `ζ`
    /// next to the exact one from the indicator.
    pub fn kouchnirenko_report_sampled(
        &self,
        zeta: &RationalVec,
        cfg: &SamplerConfig,
    ) -> Result<KouchnirenkoReport> {
        let mut report = self.kouchnirenko_report(zeta)?;
        let g = self.recentered_at_zero(zeta)?;
        let estimate = estimate_type(&MapEvaluator::new(&g), &TropicalGerm::log_norm(self.n), cfg)?;
        report.type_diagnostics = Some(TypeDiagnostics {
            exact_lelong: report.profile.lelong.clone(),
            estimate,
        });
        Ok(report)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TypeDiagnostics {
    #[serde(with = "crate::rational::serde_rational")]
    pub exact_lelong: Rational,
    pub estimate: TypeEstimate,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KouchnirenkoReport {
    pub newton_number: Extended,
    pub convenient: bool,
    pub indicator: TropicalGerm,
    pub profile: WeightProfile,
    pub statement: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub type_diagnostics: Option<TypeDiagnostics>,
}

/// A map file: `{"n": 2, "components": ["z1^2", "z2^3"], "zeta": ["0", "0"]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapJson {
    pub n: usize,
    pub components: Vec<String>,
    #[serde(default)]
    pub zeta: Option<Vec<JsonRational>>,
}

/// A parsed map together with its center.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapSpec {
    pub map: PolynomialMap,
    pub zeta: RationalVec,
}

impl MapSpec {
    pub fn from_json(json: &MapJson) -> Result<Self> {
        let comps: Vec<&str> = json.components.iter().map(String::as_str).collect();
        let map = PolynomialMap::parse(json.n, &comps)?;
        let zeta = match &json.zeta {
            Some(z) => RationalVec::new(z.iter().map(|q| q.0.clone()).collect()),
            None => RationalVec::zeros(json.n),
        };
        if zeta.dim() != json.n {
            return Err(Error::DimensionMismatch {
                expected: json.n,
                found: zeta.dim(),
            });
        }
        Ok(MapSpec { map, zeta })
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let json: MapJson = serde_json::from_str(s).map_err(|e| Error::Json(e.to_string()))?;
        Self::from_json(&json)
    }
}
