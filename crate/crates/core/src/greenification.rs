//! Largest tropical minorants with prescribed singularity data.
//!
//! From finitely many directional Lelong numbers `ν_u(0, a)`, `a ∈ A`, the
//! region `H_{u,A} = ∩_a {b ≥ 0 : ⟨a, b⟩ ≥ ν_u(0, a)}` is the Newton
//! polyhedron of the largest germ with at least those directional numbers,
//! and `n!·Vol(ℝⁿ₊ ∖ H_{u,A})` bounds the residual mass of `u` from below.
//! Against a general finite family of weights the same construction uses the
//! scaled polyhedra `σ(u, φ)·P_φ`.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{factorial, Facet, NewtonPolyhedron, PolyhedronJson};
use crate::rational::{Extended, JsonRational, Rational, RationalVec};
use crate::tropical::TropicalGerm;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyMember {
    pub weight: TropicalGerm,
    /// Prescribed type; `None` means "take σ(u, φ) from the germ".
    pub type_value: Option<Rational>,
}

/// A finite set of weights, either general germs or directional weights
/// `φ_a` given by their directions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WeightFamily {
    Directions(Vec<RationalVec>),
    Weights(Vec<FamilyMember>),
}

impl WeightFamily {
    pub fn directions(directions: Vec<RationalVec>) -> Result<Self> {
        check_directions(&directions)?;
        Ok(WeightFamily::Directions(directions))
    }

    pub fn weights(members: Vec<FamilyMember>) -> Result<Self> {
        for m in &members {
            if !m.weight.is_weight() {
                return Err(Error::NotAWeight);
            }
            if m.type_value.as_ref().is_some_and(|t| t < &Rational::zero()) {
                return Err(Error::Json("type values must be nonnegative".into()));
            }
        }
        Ok(WeightFamily::Weights(members))
    }

    /// The family as explicit weights: `φ_a` for each direction.
    pub fn members(&self) -> Result<Vec<FamilyMember>> {
        match self {
            WeightFamily::Weights(m) => Ok(m.clone()),
            WeightFamily::Directions(a) => a
                .iter()
                .map(|a| {
                    Ok(FamilyMember {
                        weight: TropicalGerm::directional_weight(a)?,
                        type_value: None,
                    })
                })
                .collect(),
        }
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let json: FamilyJson = serde_json::from_str(s).map_err(|e| Error::Json(e.to_string()))?;
        match json {
            FamilyJson::Directions { directions } => Self::directions(
                directions
                    .into_iter()
                    .map(|d| RationalVec::new(d.into_iter().map(|q| q.0).collect()))
                    .collect(),
            ),
            FamilyJson::Weights { weights } => {
                let members = weights
                    .into_iter()
                    .map(|m| {
                        Ok(FamilyMember {
                            weight: TropicalGerm::new(NewtonPolyhedron::from_json(&m.germ)?),
                            type_value: m.type_value.map(|q| q.0),
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Self::weights(members)
            }
        }
    }
}

#[derive(Deserialize, Serialize)]
#[serde(untagged)]
enum FamilyJson {
    Directions { directions: Vec<Vec<JsonRational>> },
    Weights { weights: Vec<MemberJson> },
}

#[derive(Deserialize, Serialize)]
struct MemberJson {
    #[serde(flatten)]
    germ: PolyhedronJson,
    #[serde(rename = "type", default)]
    type_value: Option<JsonRational>,
}

fn check_directions(directions: &[RationalVec]) -> Result<()> {
    for a in directions {
        if !a.is_positive() {
            return Err(Error::InvalidDirection(a.to_string()));
        }
    }
    Ok(())
}

/// Outcome of the residual-mass bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MassBound {
    Finite(Rational),
    /// `H_{u,A}` is not convenient; the data carry no finite information.
    NoFiniteBound,
}

impl std::fmt::Display for MassBound {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MassBound::Finite(q) => write!(f, "{q}"),
            MassBound::NoFiniteBound => f.write_str("no finite bound"),
        }
    }
}

/// `H_{u,A}` as a canonical polyhedron.
pub fn h_polytope(u: &TropicalGerm, directions: &[RationalVec]) -> Result<NewtonPolyhedron> {
    check_directions(directions)?;
    let n = u.dim();
    let constraints = directions
        .iter()
        .map(|a| Ok(Facet::new(a.clone(), u.directional_lelong(a)?)))
        .collect::<Result<Vec<_>>>()?;
    NewtonPolyhedron::from_halfspaces(n, &constraints)
}

/// The germ `ψ_{u,A}` whose polyhedron is `H_{u,A}`.
pub fn greenify_directional(u: &TropicalGerm, directions: &[RationalVec]) -> Result<TropicalGerm> {
    h_polytope(u, directions).map(TropicalGerm::new)
}

/// `n!·Vol(ℝⁿ₊ ∖ H_{u,A}) ≤ (dd^c u)ⁿ(0)`.
pub fn mass_lower_bound(u: &TropicalGerm, directions: &[RationalVec]) -> Result<MassBound> {
    let h = h_polytope(u, directions)?;
    Ok(match h.covolume() {
        Extended::Finite(c) => MassBound::Finite(factorial(u.dim()) * c),
        Extended::Infinite => MassBound::NoFiniteBound,
    })
}

/// Largest germ `v` with `σ(v, φ) ≥ σ(u, φ)` for every `φ` in the family;
/// its polyhedron is `∩_φ σ(u, φ)·P_φ`.
pub fn greenify_weights(u: &TropicalGerm, family: &WeightFamily) -> Result<TropicalGerm> {
    if let WeightFamily::Directions(a) = family {
        return greenify_directional(u, a);
    }
    let mut prescribed = Vec::new();
    for m in family.members()? {
        let sigma = u.relative_type(&m.weight)?;
        prescribed.push(FamilyMember {
            weight: m.weight,
            type_value: Some(sigma),
        });
    }
    greenify_prescribed(u.dim(), &prescribed)
}

/// `∩_φ t_φ·P_φ` for explicitly prescribed types `t_φ`; zero types impose
/// nothing.
pub fn greenify_prescribed(n: usize, members: &[FamilyMember]) -> Result<TropicalGerm> {
    let mut constraints = Vec::new();
    for m in members {
        if m.weight.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: m.weight.dim(),
            });
        }
        if !m.weight.is_weight() {
            return Err(Error::NotAWeight);
        }
        let t = m
            .type_value
            .clone()
            .ok_or_else(|| Error::InvalidConfig("family member without a type value".into()))?;
        if t.is_zero() {
            continue;
        }
        constraints.extend(
            m.weight
                .polyhedron()
                .facets()
                .iter()
                .map(|f| Facet::new(f.normal.clone(), &f.offset * &t)),
        );
    }
    NewtonPolyhedron::from_halfspaces(n, &constraints).map(TropicalGerm::new)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn germ(points: &[&[i64]]) -> TropicalGerm {
        TropicalGerm::from_int_points(points).unwrap()
    }

    fn phi() -> TropicalGerm {
        germ(&[&[3, 0], &[0, 3], &[1, 1]])
    }

    fn dirs(d: &[&[i64]]) -> Vec<RationalVec> {
        d.iter().map(|a| RationalVec::from_ints(a)).collect()
    }

    #[test]
    fn h_polytope_examples() {
        let u = germ(&[&[2, 0], &[0, 3]]);
        assert_eq!(
            h_polytope(&u, &dirs(&[&[1, 1]])).unwrap(),
            *germ(&[&[2, 0], &[0, 2]]).polyhedron()
        );
        let a = RationalVec::from_ints(&[2, 5]);
        let phi_a = TropicalGerm::directional_weight(&a).unwrap();
        assert_eq!(h_polytope(&phi_a, &[a]).unwrap(), *phi_a.polyhedron());
        assert_eq!(
            h_polytope(&phi(), &dirs(&[&[1, 1], &[1, 2], &[2, 1]])).unwrap(),
            *phi().polyhedron()
        );
        assert_eq!(
            h_polytope(&u, &dirs(&[&[1, 0]])).unwrap_err().name(),
            "InvalidDirection"
        );
    }

    #[test]
    fn greenify_directional_examples() {
        let u = germ(&[&[2, 0], &[0, 3]]);
        assert_eq!(greenify_directional(&u, &dirs(&[&[1, 1]])).unwrap(), germ(&[&[2, 0], &[0, 2]]));
        // all facet normals of P_φ plus the diagonal recover φ
        assert_eq!(greenify_directional(&phi(), &dirs(&[&[1, 2], &[2, 1], &[1, 1]])).unwrap(), phi());
        let c = TropicalGerm::log_norm(2).scale(&int(4));
        assert_eq!(greenify_directional(&c, &dirs(&[&[1, 1]])).unwrap(), c);
    }

    #[test]
    fn mass_lower_bound_examples() {
        let u = germ(&[&[2, 0], &[0, 3]]);
        assert_eq!(mass_lower_bound(&u, &dirs(&[&[1, 1]])).unwrap(), MassBound::Finite(int(4)));
        assert_eq!(u.residual_mass(), Extended::Finite(int(6)));
        assert_eq!(
            mass_lower_bound(&phi(), &dirs(&[&[1, 2], &[2, 1]])).unwrap(),
            MassBound::Finite(int(6))
        );
        // ν_u((1,1)) = c gives the simplex bound c²
        let w = germ(&[&[5, 0], &[1, 2], &[0, 4]]);
        assert_eq!(mass_lower_bound(&w, &dirs(&[&[1, 1]])).unwrap(), MassBound::Finite(int(9)));
    }

    #[test]
    fn greenify_weights_examples() {
        let u = germ(&[&[2, 0], &[0, 1]]);
        let single = WeightFamily::weights(vec![FamilyMember {
            weight: phi(),
            type_value: None,
        }])
        .unwrap();
        let sigma = u.relative_type(&phi()).unwrap();
        assert_eq!(greenify_weights(&u, &single).unwrap(), phi().scale(&sigma));

        let a = dirs(&[&[1, 1], &[1, 3], &[2, 1]]);
        let as_weights = WeightFamily::weights(
            WeightFamily::directions(a.clone()).unwrap().members().unwrap(),
        )
        .unwrap();
        assert_eq!(
            greenify_weights(&u, &as_weights).unwrap(),
            greenify_directional(&u, &a).unwrap()
        );

        let own = WeightFamily::weights(vec![FamilyMember {
            weight: phi(),
            type_value: None,
        }])
        .unwrap();
        assert_eq!(greenify_weights(&phi(), &own).unwrap(), phi());
        assert_eq!(
            WeightFamily::weights(vec![FamilyMember {
                weight: TropicalGerm::bounded(2),
                type_value: None
            }])
            .unwrap_err(),
            Error::NotAWeight
        );
    }

    #[test]
    fn family_json_forms() {
        let d = WeightFamily::from_json_str(r#"{"directions": [[1, 2], ["1/2", 1]]}"#).unwrap();
        assert!(matches!(d, WeightFamily::Directions(ref v) if v.len() == 2));
        let w = WeightFamily::from_json_str(
            r#"{"weights": [{"n": 2, "generators": [[3,0],[0,3],[1,1]], "type": "1/3"}]}"#,
        )
        .unwrap();
        let WeightFamily::Weights(m) = w else { panic!("expected weights") };
        assert_eq!(m[0].weight, phi());
        assert_eq!(m[0].type_value, Some(crate::rational::rat(1, 3)));
        assert!(WeightFamily::from_json_str(r#"{"directions": [[0, 1]]}"#).is_err());
    }
}
