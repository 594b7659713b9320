#![allow(dead_code)]

use retrans::asym::ApproxParams;
use retrans::dists::{Bound, CoupledModel, DistSpec, SlowVarySpec};

pub fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

/// Exponential(alpha) document over an Exponential(1) channel.
pub fn exp_model(alpha: f64, b: Bound) -> CoupledModel {
    CoupledModel::parametric(
        DistSpec::Exponential { rate: 1.0 },
        DistSpec::Exponential { rate: alpha },
        b,
        alpha,
        SlowVarySpec::One,
    )
    .unwrap()
}

pub fn ex1a(b: f64) -> CoupledModel {
    exp_model(2.0, Bound::Finite(b))
}

pub fn ex4(b: f64) -> CoupledModel {
    CoupledModel::parametric(
        DistSpec::Exponential { rate: 2.0 },
        DistSpec::Gamma { rate: 2.0, shape: 2.0 },
        Bound::Finite(b),
        1.0,
        SlowVarySpec::GammaDocExact { rate: 2.0, shape: 2.0, channel_rate: 2.0 },
    )
    .unwrap()
}

pub fn params(m: &CoupledModel) -> ApproxParams {
    ApproxParams::from_model(m)
}
