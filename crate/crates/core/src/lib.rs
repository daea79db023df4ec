//! Exact singularity invariants of toric plurisubharmonic germs.

pub mod error;
pub mod geometry;
pub mod greenification;
pub mod polynomial;
pub mod rational;
pub mod sampling;
pub mod tropical;

pub use error::{Error, Result};
pub use geometry::{factorial, BoundedCell, Facet, NewtonPolyhedron, PolyhedronJson};
pub use rational::{Extended, Rational, RationalVec};
pub use tropical::{mixed_mass, TropicalGerm, WeightOrder, WeightProfile};
pub use greenification::{
    greenify_directional, greenify_prescribed, greenify_weights, h_polytope, mass_lower_bound,
    FamilyMember, MassBound, WeightFamily,
};
pub use polynomial::{
    cor62_probe, KouchnirenkoReport, MapSpec, Polynomial, PolynomialMap, ProbeConfig, ProbeReport,
    ProbeVerdict, ShellStat,
};
pub use sampling::{
    convexity_check, estimate_type, growth_curve, ConvexityReport, Evaluator, GermEvaluator,
    GrowthCurve, MapEvaluator, SamplerConfig, TypeEstimate,
};
