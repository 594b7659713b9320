use std::fmt;

use rand::Rng;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{DistError, DistSpec, SlowVarySpec};
use crate::rng::open_unit;

/// Smallest admissible `P[L ≤ b]`.
pub const MIN_TRUNCATION_MASS: f64 = 1e-300;

/// Upper bound `b` on document sizes; [`Bound::Unbounded`] makes `L_b ≡ L`.
///
/// Serialized as a number, or as the string `"inf"` for the unbounded sentinel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bound {
    Finite(f64),
    Unbounded,
}

impl Bound {
    pub fn new(b: f64) -> Result<Self, DistError> {
        if b == f64::INFINITY {
            Ok(Bound::Unbounded)
        } else if b > 0.0 && b.is_finite() {
            Ok(Bound::Finite(b))
        } else {
            Err(DistError::InvalidParameter { name: "bound", value: b })
        }
    }

    pub fn value(&self) -> f64 {
        match *self {
            Bound::Finite(b) => b,
            Bound::Unbounded => f64::INFINITY,
        }
    }

    pub fn is_unbounded(&self) -> bool {
        matches!(self, Bound::Unbounded)
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Finite(b) => write!(f, "{b}"),
            Bound::Unbounded => f.write_str("inf"),
        }
    }
}

impl Serialize for Bound {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match *self {
            Bound::Finite(b) => s.serialize_f64(b),
            Bound::Unbounded => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Bound {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct BoundVisitor;
        impl Visitor<'_> for BoundVisitor {
            type Value = Bound;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a positive number or \"inf\"")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Bound, E> {
                Bound::new(v).map_err(E::custom)
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Bound, E> {
                self.visit_f64(v as f64)
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Bound, E> {
                self.visit_f64(v as f64)
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Bound, E> {
                match v {
                    "inf" | "infinity" | "unbounded" => Ok(Bound::Unbounded),
                    other => other
                        .parse::<f64>()
                        .map_err(E::custom)
                        .and_then(|b| Bound::new(b).map_err(E::custom)),
                }
            }
        }
        d.deserialize_any(BoundVisitor)
    }
}

/// A document law defined from the channel law through `F̄(x) = min(1, Ḡ(x)^α / ℓ(Ḡ(x)⁻¹))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedLaw {
    pub channel: DistSpec,
    pub alpha: f64,
    pub ell: SlowVarySpec,
    /// Smallest checked grid point where the unclamped expression is at most one.
    pub anchor: f64,
}

impl DerivedLaw {
    /// Unclamped `ln(Ḡ(x)^α / ℓ(Ḡ(x)⁻¹))`.
    pub fn ln_raw(&self, x: f64) -> f64 {
        let ln_g = self.channel.ln_ccdf(x);
        if ln_g == f64::NEG_INFINITY {
            return f64::NEG_INFINITY;
        }
        self.alpha * ln_g - self.ell.ln_value_at_ln(-ln_g)
    }

    pub fn ln_ccdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        self.ln_raw(x).min(0.0)
    }

    fn quantile_ccdf(&self, q: f64) -> Result<f64, DistError> {
        let ln_q = q.ln();
        let mut hi = self.channel.quantile_ccdf(q.powf(1.0 / self.alpha))?.max(1e-12);
        let mut iterations = 0usize;
        while self.ln_ccdf(hi) > ln_q {
            hi *= 2.0;
            iterations += 1;
            if iterations > super::family::QUANTILE_MAX_ITER || !hi.is_finite() {
                return Err(DistError::NonConvergence { iterations });
            }
        }
        let mut lo = 0.0_f64;
        while iterations < super::family::QUANTILE_MAX_ITER {
            iterations += 1;
            let mid = 0.5 * (lo + hi);
            if !(mid > lo && mid < hi) || hi - lo <= 2.0 * f64::EPSILON * hi {
                return Ok(hi);
            }
            if self.ln_ccdf(mid) > ln_q {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Err(DistError::NonConvergence { iterations })
    }
}

/// Law of the (untruncated) document size `L`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DocLaw {
    Parametric(DistSpec),
    Derived(DerivedLaw),
}

impl DocLaw {
    pub fn ln_ccdf(&self, x: f64) -> f64 {
        match self {
            DocLaw::Parametric(d) => d.ln_ccdf(x),
            DocLaw::Derived(d) => d.ln_ccdf(x),
        }
    }

    pub fn ccdf(&self, x: f64) -> f64 {
        self.ln_ccdf(x).exp()
    }

    pub fn cdf(&self, x: f64) -> f64 {
        -self.ln_ccdf(x).exp_m1()
    }

    pub fn quantile_ccdf(&self, q: f64) -> Result<f64, DistError> {
        match self {
            DocLaw::Parametric(d) => d.quantile_ccdf(q),
            DocLaw::Derived(d) => {
                if !(q > 0.0 && q <= 1.0) {
                    return Err(DistError::InvalidProbability(q));
                }
                if q == 1.0 {
                    return Ok(0.0);
                }
                d.quantile_ccdf(q)
            }
        }
    }

    /// Exact for parametric laws; a central difference (`h = max(1e−6, 1e−6·x)`) for derived ones.
    pub fn density(&self, x: f64) -> f64 {
        match self {
            DocLaw::Parametric(d) => d.density(x),
            DocLaw::Derived(_) => {
                let h = (1e-6 * x).max(1e-6);
                if x < h {
                    (self.cdf(x + h) - self.cdf(x)) / h
                } else {
                    (self.cdf(x + h) - self.cdf(x - h)) / (2.0 * h)
                }
            }
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.quantile_ccdf(open_unit(rng)).expect("open_unit lies in (0, 1]")
    }
}

impl From<DistSpec> for DocLaw {
    fn from(d: DistSpec) -> Self {
        DocLaw::Parametric(d)
    }
}

/// The truncated document `L_b` with `P[L_b ≤ x] = P[L ≤ x] / P[L ≤ b]` on `[0, b]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundedDoc {
    law: DocLaw,
    bound: Bound,
    mass: f64,
    tail: f64,
}

impl BoundedDoc {
    pub fn new(law: impl Into<DocLaw>, bound: Bound) -> Result<Self, DistError> {
        let law = law.into();
        let (mass, tail) = match bound {
            Bound::Unbounded => (1.0, 0.0),
            Bound::Finite(b) => (law.cdf(b), law.ccdf(b)),
        };
        if !(mass >= MIN_TRUNCATION_MASS) {
            return Err(DistError::DegenerateTruncation { mass });
        }
        Ok(BoundedDoc { law, bound, mass, tail })
    }

    pub fn law(&self) -> &DocLaw {
        &self.law
    }

    pub fn bound(&self) -> Bound {
        self.bound
    }

    /// `F(b) = P[L ≤ b]`.
    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// `F̄(b) = P[L > b]`.
    pub fn tail(&self) -> f64 {
        self.tail
    }

    /// `P[L_b > x] = (F(b) − F(x)) / F(b)`.
    pub fn ccdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 1.0;
        }
        if x >= self.bound.value() {
            return 0.0;
        }
        ((self.law.ccdf(x) - self.tail) / self.mass).clamp(0.0, 1.0)
    }

    /// `P[L_b ≤ x] = F(x) / F(b)`.
    pub fn cdf(&self, x: f64) -> f64 {
        if x >= self.bound.value() {
            return 1.0;
        }
        (self.law.cdf(x) / self.mass).clamp(0.0, 1.0)
    }

    /// The `x ∈ [0, b]` with `P[L_b > x] = v`, for `v ∈ [0, 1]`.
    pub fn quantile_ccdf(&self, v: f64) -> Result<f64, DistError> {
        if !(0.0..=1.0).contains(&v) {
            return Err(DistError::InvalidProbability(v));
        }
        if v == 0.0 {
            return Ok(self.bound.value());
        }
        let q = (self.tail + v * self.mass).min(1.0);
        Ok(self.law.quantile_ccdf(q)?.min(self.bound.value()))
    }

    /// Inverse-transform draw from the truncated law.
    ///
    /// Uses `P[L_b > x] = V` with `V` uniform on `(0, 1]`, which keeps full relative precision
    /// near the bound.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let v = open_unit(rng);
        self.quantile_ccdf(v).expect("open_unit lies in (0, 1]")
    }
}
