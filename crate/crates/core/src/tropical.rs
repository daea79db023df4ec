//! Toric singularity germs and their invariants.
//!
//! A [`TropicalGerm`] is `u(t) = max_{α ∈ P_u} ⟨α, t⟩` on the negative
//! orthant, `t = log|z|`. Tropical addition is the hull of the union of the
//! Newton polyhedra, tropical multiplication is the Minkowski sum, and every
//! invariant below reduces to exact rational geometry on those polyhedra.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{factorial, NewtonPolyhedron};
use crate::rational::{int, Extended, Rational, RationalVec};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TropicalGerm {
    polyhedron: NewtonPolyhedron,
}

impl From<NewtonPolyhedron> for TropicalGerm {
    fn from(polyhedron: NewtonPolyhedron) -> Self {
        TropicalGerm { polyhedron }
    }
}

impl fmt::Display for TropicalGerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "germ{}", self.polyhedron)
    }
}

impl TropicalGerm {
    pub fn new(polyhedron: NewtonPolyhedron) -> Self {
        TropicalGerm { polyhedron }
    }

    pub fn from_int_points(points: &[&[i64]]) -> Result<Self> {
        NewtonPolyhedron::from_int_points(points).map(Self::new)
    }

    /// `log|z|`, the germ of the unit simplex.
    pub fn log_norm(n: usize) -> Self {
        Self::new(NewtonPolyhedron::simplex(n, &Rational::one()).expect("n >= 1"))
    }

    /// The directional weight `max_k a_k⁻¹ log|z_k|`, generated by `e_k / a_k`.
    pub fn directional_weight(a: &RationalVec) -> Result<Self> {
        if !a.is_positive() {
            return Err(Error::InvalidDirection(a.to_string()));
        }
        let n = a.dim();
        NewtonPolyhedron::canonicalize((0..n).map(|k| RationalVec::unit(n, k).scale(&a[k].recip())))
            .map(Self::new)
    }

    /// A bounded germ (the class of `0`).
    pub fn bounded(n: usize) -> Self {
        Self::new(NewtonPolyhedron::orthant(n))
    }

    pub fn polyhedron(&self) -> &NewtonPolyhedron {
        &self.polyhedron
    }

    pub fn dim(&self) -> usize {
        self.polyhedron.dim()
    }

    /// Evaluates `max ⟨α, t⟩` at a point `t` of the negative orthant.
    pub fn eval(&self, t: &[f64]) -> f64 {
        self.polyhedron
            .generators()
            .iter()
            .map(|g| {
                g.iter()
                    .zip(t)
                    .filter(|(a, _)| !a.is_zero())
                    .map(|(a, x)| crate::rational::to_f64(a) * x)
                    .sum::<f64>()
            })
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// The origin is not a generator, i.e. the germ has a pole.
    pub fn is_weight(&self) -> bool {
        !self.polyhedron.contains_origin()
    }

    pub fn is_convenient(&self) -> bool {
        self.polyhedron.is_convenient()
    }

    fn require_weight(&self) -> Result<()> {
        if self.is_weight() {
            Ok(())
        } else {
            Err(Error::NotAWeight)
        }
    }

    /// `u ⊕ v = max{u, v}`.
    pub fn oplus(&self, other: &Self) -> Result<Self> {
        self.polyhedron.union_hull(&other.polyhedron).map(Self::new)
    }

    /// `u ⊗ v = u + v`.
    pub fn otimes(&self, other: &Self) -> Result<Self> {
        self.polyhedron.minkowski_sum(&other.polyhedron).map(Self::new)
    }

    /// `c·u` for rational `c ≥ 0`.
    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.polyhedron.scale(c))
    }

    /// Kiselman's directional Lelong number `ν_u(0, a)`.
    pub fn directional_lelong(&self, a: &RationalVec) -> Result<Rational> {
        self.polyhedron.support_min(a)
    }

    /// `σ(u, φ) = max{s : P_u ⊆ s·P_φ}`, the minimum of the gauge of `P_φ`
    /// over the vertices of `P_u`.
    pub fn relative_type(&self, phi: &TropicalGerm) -> Result<Rational> {
        phi.require_weight()?;
        if self.dim() != phi.dim() {
            return Err(Error::DimensionMismatch {
                expected: phi.dim(),
                found: self.dim(),
            });
        }
        if !self.is_weight() {
            return Ok(Rational::zero());
        }
        let mut best: Option<Rational> = None;
        for v in self.polyhedron.generators() {
            match phi.polyhedron.gauge(v)? {
                Extended::Finite(g) => {
                    if best.as_ref().is_none_or(|b| g < *b) {
                        best = Some(g);
                    }
                }
                Extended::Infinite => unreachable!("weights have facets"),
            }
        }
        Ok(best.expect("generators are nonempty"))
    }

    /// The classical Lelong number, `σ(u, log|z|)`.
    pub fn lelong_number(&self) -> Rational {
        self.relative_type(&Self::log_norm(self.dim()))
            .expect("log|z| is a weight")
    }

    /// `α_u = limsup u / log|z| = 1 / σ(log|z|, u)`; infinite iff `P_u` misses
    /// an axis.
    pub fn lojasiewicz_alpha(&self) -> Result<Extended> {
        self.require_weight()?;
        let t = Self::log_norm(self.dim()).relative_type(self)?;
        if t.is_zero() {
            Ok(Extended::Infinite)
        } else {
            Ok(Extended::Finite(t.recip()))
        }
    }

    /// Residual Monge–Ampère mass `(dd^c u)ⁿ(0) = n!·covolume(P_u)`.
    pub fn residual_mass(&self) -> Extended {
        match self.polyhedron.covolume() {
            Extended::Finite(c) => Extended::Finite(factorial(self.dim()) * c),
            Extended::Infinite => Extended::Infinite,
        }
    }

    /// The invariant triple `(ν, τ, α)` with class flags.
    pub fn weight_profile(&self) -> WeightProfile {
        let is_weight = self.is_weight();
        let lojasiewicz = if is_weight {
            self.lojasiewicz_alpha().expect("checked weight")
        } else {
            // limsup of a bounded function over log|z| → −∞ is zero
            Extended::Finite(Rational::zero())
        };
        WeightProfile {
            lelong: self.lelong_number(),
            mass: self.residual_mass(),
            lojasiewicz,
            is_weight,
            is_convenient: is_weight && self.is_convenient(),
        }
    }

    /// `ν(u, φ) = (dd^c u ∧ (dd^c φ)ⁿ⁻¹)(0)` for a convenient weight `φ`.
    ///
    /// Non-convenient `u` is truncated to `u ⊕ N·log|z|` for `N = 1, 2, 4, …`
    /// until two consecutive values agree.
    pub fn demailly_number(&self, phi: &TropicalGerm) -> Result<Rational> {
        phi.require_weight()?;
        if !phi.is_convenient() {
            return Err(Error::NotConvenient);
        }
        if self.dim() != phi.dim() {
            return Err(Error::DimensionMismatch {
                expected: phi.dim(),
                found: self.dim(),
            });
        }
        let n = self.dim();
        let slots = |u: &TropicalGerm| {
            let mut args = vec![u.clone()];
            args.extend(std::iter::repeat_n(phi.clone(), n - 1));
            args
        };
        if self.is_convenient() {
            return mixed_mass(&slots(self));
        }
        let ell = Self::log_norm(n);
        let mut previous: Option<Rational> = None;
        let mut big_n: u64 = 1;
        while big_n <= 1 << 16 {
            let truncated = self.oplus(&ell.scale(&int(big_n as i64)))?;
            let value = mixed_mass(&slots(&truncated))?;
            if previous.as_ref() == Some(&value) {
                return Ok(value);
            }
            previous = Some(value);
            big_n *= 2;
        }
        Err(Error::NoStabilization(1 << 16))
    }

    /// Partial order on weights: `φ ⪯ ψ` iff `σ(φ, ψ) ≥ 1`.
    pub fn weight_order(&self, psi: &TropicalGerm) -> Result<WeightOrder> {
        self.require_weight()?;
        psi.require_weight()?;
        let one = Rational::one();
        let le = self.relative_type(psi)? >= one;
        let ge = psi.relative_type(self)? >= one;
        Ok(match (le, ge) {
            (true, true) => WeightOrder::Equal,
            (true, false) => WeightOrder::LessEqual,
            (false, true) => WeightOrder::GreaterEqual,
            (false, false) => WeightOrder::Incomparable,
        })
    }
}

/// Mixed residual mass `dd^c u₁ ∧ … ∧ dd^c uₙ (0)` by Minkowski polarization
/// of covolumes:
/// `Σ_{∅ ≠ S ⊆ [n]} (−1)^{n−|S|} covolume(Σ_{i∈S} P_{u_i})`.
pub fn mixed_mass(germs: &[TropicalGerm]) -> Result<Rational> {
    let n = germs.first().ok_or(Error::EmptyGenerators)?.dim();
    if germs.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: germs.len(),
        });
    }
    for (i, g) in germs.iter().enumerate() {
        if g.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: g.dim(),
            });
        }
        if !g.is_convenient() {
            return Err(Error::NonConvenientArgument(i));
        }
    }
    let mut total = Rational::zero();
    for mask in 1u32..(1 << n) {
        let mut members = (0..n).filter(|i| mask & (1 << i) != 0);
        let first = members.next().expect("mask is nonzero");
        let mut sum = germs[first].polyhedron.clone();
        for i in members {
            sum = sum.minkowski_sum(&germs[i].polyhedron)?;
        }
        let covolume = sum
            .covolume()
            .finite()
            .cloned()
            .expect("sums of convenient polyhedra are convenient");
        if (n - mask.count_ones() as usize).is_multiple_of(2) {
            total += covolume;
        } else {
            total -= covolume;
        }
    }
    Ok(total)
}

/// `(ν_φ, τ_φ, α_φ)` and the toric class flags.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightProfile {
    #[serde(with = "crate::rational::serde_rational")]
    pub lelong: Rational,
    pub mass: Extended,
    pub lojasiewicz: Extended,
    pub is_weight: bool,
    pub is_convenient: bool,
}

impl WeightProfile {
    /// `νⁿ ≤ τ ≤ αⁿ` (when finite) and `convenient ⟹ weight`.
    pub fn is_consistent(&self, n: usize) -> bool {
        let pow = |q: &Rational| num_traits::pow(q.clone(), n);
        let lower = match &self.mass {
            Extended::Finite(t) => pow(&self.lelong) <= *t,
            Extended::Infinite => true,
        };
        let upper = match (&self.mass, &self.lojasiewicz) {
            (Extended::Finite(t), Extended::Finite(a)) => *t <= pow(a),
            (Extended::Infinite, Extended::Finite(_)) => false,
            _ => true,
        };
        lower && upper && (!self.is_convenient || self.is_weight) && !self.lelong.is_negative()
    }
}

impl fmt::Display for WeightProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "nu={} tau={} alpha={} weight={} convenient={}",
            self.lelong, self.mass, self.lojasiewicz, self.is_weight, self.is_convenient
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightOrder {
    LessEqual,
    GreaterEqual,
    Equal,
    Incomparable,
}

impl fmt::Display for WeightOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WeightOrder::LessEqual => "less_equal",
            WeightOrder::GreaterEqual => "greater_equal",
            WeightOrder::Equal => "equal",
            WeightOrder::Incomparable => "incomparable",
        })
    }
}
