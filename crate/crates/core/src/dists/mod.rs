//! Document and channel laws.
//!
//! [`DistSpec`] covers the parametric families, [`BoundedDoc`] applies the truncation
//! `P[L_b ≤ x] = P[L ≤ x] / P[L ≤ b]`, and [`CoupledModel`] ties a channel law to a document law
//! through `F̄(x) = Ḡ(x)^α / ℓ(Ḡ(x)⁻¹)`.

mod bounded;
mod coupled;
mod family;
mod slowvary;

use thiserror::Error;

pub use bounded::{Bound, BoundedDoc, DerivedLaw, DocLaw, MIN_TRUNCATION_MASS};
pub use coupled::{
    derive_doc_law, CoupledModel, CouplingMode, CouplingReport, COUPLING_TOLERANCE,
    MONOTONE_GRID_POINTS, RESIDUAL_GBAR_START, RESIDUAL_GRID_POINTS,
};
pub use family::{DistSpec, QUANTILE_MAX_ITER};
pub use slowvary::SlowVarySpec;

use crate::gammafn::GammaError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DistError {
    #[error("parameter `{name}` must be positive and finite, got {value}")]
    InvalidParameter { name: &'static str, value: f64 },
    #[error("probability {0} outside the admissible range")]
    InvalidProbability(f64),
    #[error("quantile root finder did not converge within {iterations} iterations")]
    NonConvergence { iterations: usize },
    #[error("P[L <= b] = {mass:e} is too small to truncate")]
    DegenerateTruncation { mass: f64 },
    #[error("derived document CCDF increases near x = {x}")]
    NotMonotone { x: f64 },
    #[error(transparent)]
    Gamma(#[from] GammaError),
}
