use std::f64::consts::E;

use serde::{Deserialize, Serialize};

use super::DistError;
use crate::gammafn::ln_regularized_upper_gamma;

fn default_x_min() -> f64 {
    E
}

/// A slowly varying function `ℓ`, i.e. `ℓ(λx)/ℓ(x) → 1` for every fixed `λ > 0`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SlowVarySpec {
    /// `ℓ ≡ 1`.
    #[default]
    One,
    /// `ℓ(x) = coeff · (ln x)^exponent`, held constant below `x_min`.
    LogPower {
        coeff: f64,
        exponent: f64,
        #[serde(default = "default_x_min")]
        x_min: f64,
    },
    /// `ℓ(x) = 1 / f(ln(x) / channel_rate)` with
    /// `f(y) = rate^(shape−1) Γ(shape)⁻¹ ∫₀^∞ e^(−z) (z/rate + y)^(shape−1) dz`,
    /// which makes a Gamma(rate, shape) document law exactly proportional-hazard coupled to an
    /// Exponential(channel_rate) channel.
    GammaDocExact { rate: f64, shape: f64, channel_rate: f64 },
}

impl SlowVarySpec {
    pub fn log_power(coeff: f64, exponent: f64) -> Result<Self, DistError> {
        let s = SlowVarySpec::LogPower { coeff, exponent, x_min: E };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<(), DistError> {
        let positive = |name: &'static str, value: f64| {
            if value > 0.0 && value.is_finite() {
                Ok(())
            } else {
                Err(DistError::InvalidParameter { name, value })
            }
        };
        match *self {
            SlowVarySpec::One => Ok(()),
            SlowVarySpec::LogPower { coeff, exponent, x_min } => {
                positive("coeff", coeff)?;
                if !exponent.is_finite() {
                    return Err(DistError::InvalidParameter { name: "exponent", value: exponent });
                }
                if !(x_min >= E) || !x_min.is_finite() {
                    return Err(DistError::InvalidParameter { name: "x_min", value: x_min });
                }
                Ok(())
            }
            SlowVarySpec::GammaDocExact { rate, shape, channel_rate } => {
                positive("rate", rate)?;
                positive("shape", shape)?;
                positive("channel_rate", channel_rate)
            }
        }
    }

    pub fn is_one(&self) -> bool {
        matches!(self, SlowVarySpec::One)
    }

    /// Lower end of the domain; arguments below it are clamped.
    pub fn domain_min(&self) -> f64 {
        match *self {
            SlowVarySpec::One => 0.0,
            SlowVarySpec::LogPower { x_min, .. } => x_min,
            SlowVarySpec::GammaDocExact { .. } => 1.0,
        }
    }

    /// `ln ℓ(x)` expressed through `ln x`, so arguments like `1/Ḡ(x)` never need to be formed.
    pub fn ln_value_at_ln(&self, ln_x: f64) -> f64 {
        match *self {
            SlowVarySpec::One => 0.0,
            SlowVarySpec::LogPower { coeff, exponent, x_min } => {
                coeff.ln() + exponent * ln_x.max(x_min.ln()).ln()
            }
            SlowVarySpec::GammaDocExact { rate, shape, channel_rate } => {
                -ln_gamma_doc_f(rate, shape, ln_x.max(0.0) / channel_rate)
            }
        }
    }

    pub fn ln_value(&self, x: f64) -> f64 {
        self.ln_value_at_ln(x.ln())
    }

    pub fn value(&self, x: f64) -> f64 {
        self.ln_value(x).exp()
    }

    /// `|ℓ(λx)/ℓ(x) − 1|` at each grid point.
    pub fn variation_profile(&self, lambda: f64, grid: &[f64]) -> Vec<f64> {
        grid.iter()
            .map(|&x| ((self.ln_value(lambda * x) - self.ln_value(x)).exp() - 1.0).abs())
            .collect()
    }
}

/// `ln f(y)` where `f(y) = e^(rate·y) Q(shape, rate·y)`; equals `1 + rate·y` when `shape = 2`.
fn ln_gamma_doc_f(rate: f64, shape: f64, y: f64) -> f64 {
    let t = rate * y;
    t + ln_regularized_upper_gamma(t, shape).expect("validated gamma-doc parameters")
}
