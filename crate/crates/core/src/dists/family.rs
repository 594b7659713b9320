use rand::Rng;
use serde::{Deserialize, Serialize};

use super::DistError;
use crate::gammafn::{ln_gamma_unchecked, ln_regularized_upper_gamma, ln_upper_incomplete_gamma};
use crate::rng::open_unit;

/// Iteration cap for the Gamma quantile root finder.
pub const QUANTILE_MAX_ITER: usize = 200;

/// A parametric law with infinite support on `[0, ∞)`.
///
/// Parameter naming follows the usual conventions: `Exponential { rate }` has CCDF `e^(−rate·x)`,
/// `Weibull { shape, scale }` has CCDF `e^(−(x/scale)^shape)`, and `Gamma { rate, shape }` has CCDF
/// `Γ(rate·x, shape) / Γ(shape)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum DistSpec {
    Exponential { rate: f64 },
    Weibull { shape: f64, scale: f64 },
    Gamma { rate: f64, shape: f64 },
}

fn positive(name: &'static str, value: f64) -> Result<(), DistError> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(DistError::InvalidParameter { name, value })
    }
}

impl DistSpec {
    pub fn exponential(rate: f64) -> Result<Self, DistError> {
        let d = DistSpec::Exponential { rate };
        d.validate()?;
        Ok(d)
    }

    pub fn weibull(shape: f64, scale: f64) -> Result<Self, DistError> {
        let d = DistSpec::Weibull { shape, scale };
        d.validate()?;
        Ok(d)
    }

    pub fn gamma(rate: f64, shape: f64) -> Result<Self, DistError> {
        let d = DistSpec::Gamma { rate, shape };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<(), DistError> {
        match *self {
            DistSpec::Exponential { rate } => positive("rate", rate),
            DistSpec::Weibull { shape, scale } => {
                positive("shape", shape)?;
                positive("scale", scale)
            }
            DistSpec::Gamma { rate, shape } => {
                positive("rate", rate)?;
                positive("shape", shape)?;
                if shape > crate::gammafn::MAX_SHAPE {
                    return Err(DistError::InvalidParameter { name: "shape", value: shape });
                }
                Ok(())
            }
        }
    }

    pub fn family_name(&self) -> &'static str {
        match self {
            DistSpec::Exponential { .. } => "exponential",
            DistSpec::Weibull { .. } => "weibull",
            DistSpec::Gamma { .. } => "gamma",
        }
    }

    /// `ln P[X > x]`; stays finite far beyond the point where the CCDF itself underflows.
    pub fn ln_ccdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        if x == f64::INFINITY {
            return f64::NEG_INFINITY;
        }
        match *self {
            DistSpec::Exponential { rate } => -rate * x,
            DistSpec::Weibull { shape, scale } => -(x / scale).powf(shape),
            DistSpec::Gamma { rate, shape } => {
                ln_regularized_upper_gamma(rate * x, shape).expect("validated gamma parameters")
            }
        }
    }

    /// `P[X > x]`.
    pub fn ccdf(&self, x: f64) -> f64 {
        self.ln_ccdf(x).exp()
    }

    /// `P[X ≤ x]`, computed from the log-CCDF so small values keep full relative precision.
    pub fn cdf(&self, x: f64) -> f64 {
        -self.ln_ccdf(x).exp_m1()
    }

    pub fn density(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        match *self {
            DistSpec::Exponential { rate } => rate * (-rate * x).exp(),
            DistSpec::Weibull { shape, scale } => {
                let z = x / scale;
                shape / scale * z.powf(shape - 1.0) * (-z.powf(shape)).exp()
            }
            DistSpec::Gamma { rate, shape } => {
                if x == 0.0 {
                    return if shape < 1.0 {
                        f64::INFINITY
                    } else if shape == 1.0 {
                        rate
                    } else {
                        0.0
                    };
                }
                let t = rate * x;
                (rate.ln() + (shape - 1.0) * t.ln() - t - ln_gamma_unchecked(shape)).exp()
            }
        }
    }

    /// The `x ≥ 0` with `P[X > x] = q`, for `0 < q ≤ 1`.
    pub fn quantile_ccdf(&self, q: f64) -> Result<f64, DistError> {
        if !(q > 0.0 && q <= 1.0) {
            return Err(DistError::InvalidProbability(q));
        }
        if q == 1.0 {
            return Ok(0.0);
        }
        match *self {
            DistSpec::Exponential { rate } => Ok(-q.ln() / rate),
            DistSpec::Weibull { shape, scale } => Ok(scale * (-q.ln()).powf(1.0 / shape)),
            DistSpec::Gamma { rate, shape } => Ok(gamma_upper_quantile(shape, q.ln())? / rate),
        }
    }

    /// Inverse-transform draw.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u = open_unit(rng);
        self.quantile_ccdf(u).expect("open_unit lies in (0, 1]")
    }
}

/// Solves `ln Q(shape, t) = ln_q` for `t` by Newton steps safeguarded with a bisection bracket.
pub(crate) fn gamma_upper_quantile(shape: f64, ln_q: f64) -> Result<f64, DistError> {
    let g = |t: f64| -> Result<f64, DistError> {
        Ok(ln_regularized_upper_gamma(t, shape)? - ln_q)
    };
    // g(0) = -ln_q > 0 and g decreases to -inf
    let mut lo = 0.0_f64;
    let mut hi = shape.max(1.0);
    let mut iterations = 0usize;
    while g(hi)? > 0.0 {
        lo = hi;
        hi *= 2.0;
        iterations += 1;
        if iterations > QUANTILE_MAX_ITER {
            return Err(DistError::NonConvergence { iterations });
        }
    }
    let mut t = 0.5 * (lo + hi);
    while iterations < QUANTILE_MAX_ITER {
        iterations += 1;
        let gt = g(t)?;
        if gt == 0.0 {
            return Ok(t);
        }
        if gt > 0.0 {
            lo = t;
        } else {
            hi = t;
        }
        // d/dt ln Γ(t, shape) = −t^(shape−1) e^(−t) / Γ(t, shape)
        let slope = -((shape - 1.0) * t.ln() - t - ln_upper_incomplete_gamma(t, shape)?).exp();
        let mut next = t - gt / slope;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = 0.5 * (lo + hi);
        }
        let converged = (next - t).abs() <= 1e-15 * t.max(f64::MIN_POSITIVE)
            || (hi - lo) <= 4.0 * f64::EPSILON * hi;
        t = next;
        if converged {
            return Ok(t);
        }
    }
    Err(DistError::NonConvergence { iterations })
}
