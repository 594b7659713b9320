//! Closed-form approximations and bounds for `P[N_b > n]`.
//!
//! Every quantity is available both directly and as a natural log (`ln_*`); the log forms stay
//! finite in the geometric tail where the values themselves underflow.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dists::{CoupledModel, SlowVarySpec};
use crate::gammafn::{ln_gamma_unchecked, ln_upper_incomplete_gamma};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AsymError {
    #[error("alpha = {0} is not a positive integer")]
    NotInteger(f64),
    #[error("the exact formula requires a trivial slowly varying factor")]
    EllNotOne,
    #[error("n·Ḡ(b) = α·ln n has no root above α/Ḡ(b) for Ḡ(b) = {gbar_b:e}, α = {alpha}")]
    NoRoot { gbar_b: f64, alpha: f64 },
    #[error("the geometric tail needs a finite bound (Ḡ(b) > 0)")]
    Unbounded,
    #[error("invalid approximation parameter `{name}` = {value}")]
    InvalidParameter { name: &'static str, value: f64 },
}

/// Whether the uniform approximation carries the `1 / P[L ≤ b]` factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrefactorMode {
    Plain,
    #[default]
    TruncationCorrected,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApproxParams {
    pub alpha: f64,
    pub ell: SlowVarySpec,
    /// `Ḡ(b) = P[A > b]`; zero for an unbounded document.
    pub gbar_b: f64,
    /// `F_b = P[L ≤ b]`.
    pub f_b: f64,
    pub prefactor_mode: PrefactorMode,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransitionReport {
    /// `α / Ḡ(b)`.
    pub n_heuristic: f64,
    /// Larger root of `n·Ḡ(b) = α·ln n`.
    pub n_fixed_point: f64,
    /// Final bisection bracket.
    pub bracket: (f64, f64),
}

impl ApproxParams {
    pub fn new(
        alpha: f64,
        ell: SlowVarySpec,
        gbar_b: f64,
        f_b: f64,
        prefactor_mode: PrefactorMode,
    ) -> Result<Self, AsymError> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(AsymError::InvalidParameter { name: "alpha", value: alpha });
        }
        if !(0.0..1.0).contains(&gbar_b) {
            return Err(AsymError::InvalidParameter { name: "gbar_b", value: gbar_b });
        }
        if !(f_b > 0.0 && f_b <= 1.0) {
            return Err(AsymError::InvalidParameter { name: "f_b", value: f_b });
        }
        Ok(ApproxParams { alpha, ell, gbar_b, f_b, prefactor_mode })
    }

    pub fn from_model(m: &CoupledModel) -> Self {
        ApproxParams {
            alpha: m.alpha(),
            ell: *m.ell(),
            gbar_b: m.gbar_bound(),
            f_b: m.doc().mass(),
            prefactor_mode: PrefactorMode::default(),
        }
    }

    pub fn with_mode(self, prefactor_mode: PrefactorMode) -> Self {
        ApproxParams { prefactor_mode, ..self }
    }

    fn ln_prefactor(&self) -> f64 {
        match self.prefactor_mode {
            PrefactorMode::Plain => 0.0,
            PrefactorMode::TruncationCorrected => -self.f_b.ln(),
        }
    }

    /// `ln(1 − Ḡ(b))`.
    fn ln_keep(&self) -> f64 {
        (-self.gbar_b).ln_1p()
    }

    /// `−n·ln(1 − Ḡ(b))`, by series when `Ḡ(b)` is tiny.
    pub fn gamma_argument(&self, n: f64) -> f64 {
        let g = self.gbar_b;
        if g < 1e-8 {
            n * (g + 0.5 * g * g)
        } else {
            -n * self.ln_keep()
        }
    }

    /// `ln` of `c·α / (n^α ℓ(min(n, 1/Ḡ(b)))) · Γ(−n ln(1 − Ḡ(b)), α)`.
    pub fn ln_uniform_approx(&self, n: u64) -> f64 {
        let nf = n as f64;
        let ln_n = nf.ln();
        let ln_ell_arg = if self.gbar_b > 0.0 { ln_n.min(-self.gbar_b.ln()) } else { ln_n };
        let ln_gamma_part = ln_upper_incomplete_gamma(self.gamma_argument(nf), self.alpha)
            .expect("alpha validated");
        self.ln_prefactor() + self.alpha.ln() - self.alpha * ln_n
            - self.ell.ln_value_at_ln(ln_ell_arg)
            + ln_gamma_part
    }

    pub fn uniform_approx(&self, n: u64) -> f64 {
        self.ln_uniform_approx(n).exp()
    }

    /// `ln(Γ(α+1) / (ℓ(n) n^α))`.
    pub fn ln_power_law_limit(&self, n: u64) -> f64 {
        let ln_n = (n as f64).ln();
        ln_gamma_unchecked(self.alpha + 1.0) - self.ell.ln_value(n as f64) - self.alpha * ln_n
    }

    pub fn power_law_limit(&self, n: u64) -> f64 {
        self.ln_power_law_limit(n).exp()
    }

    fn integer_alpha(&self) -> Result<u64, AsymError> {
        let k = self.alpha.round();
        if (self.alpha - k).abs() > 1e-12 || k < 1.0 {
            return Err(AsymError::NotInteger(self.alpha));
        }
        if !self.ell.is_one() {
            return Err(AsymError::EllNotOne);
        }
        Ok(k as u64)
    }

    /// `ln` of the exact mixture-of-geometrics value for integer `α` and `ℓ ≡ 1`:
    /// `(1/F_b) Σᵢ α! n! Ḡ^(α−i) (1−Ḡ)^(n+i) / ((α−i)! (n+i)!)`, `i = 1..α`.
    pub fn ln_exact_integer_ccdf(&self, n: u64) -> Result<f64, AsymError> {
        let a = self.integer_alpha()?;
        let nf = n as f64;
        let ln_g = self.gbar_b.ln();
        let ln_keep = self.ln_keep();
        let mut terms = Vec::with_capacity(a as usize);
        // ln(α!/(α−i)!) and ln(n!/(n+i)!) accumulated as i grows
        let (mut ln_falling, mut ln_rising) = (0.0, 0.0);
        for i in 1..=a {
            ln_falling += ((a - i + 1) as f64).ln();
            ln_rising -= (nf + i as f64).ln();
            let power = if i == a { 0.0 } else { (a - i) as f64 * ln_g };
            terms.push(ln_falling + ln_rising + power + (nf + i as f64) * ln_keep);
        }
        Ok(log_sum_exp(&terms) - self.f_b.ln())
    }

    pub fn exact_integer_ccdf(&self, n: u64) -> Result<f64, AsymError> {
        Ok(self.ln_exact_integer_ccdf(n)?.exp())
    }

    /// Fixed-`b` geometric tail. With `ℓ ≡ 1` this is
    /// `α Ḡ^(α−1) (1−Ḡ)^(n+1) / (F_b (n+1))`; otherwise [`ApproxParams::ln_exp_tail_general`].
    pub fn ln_exp_tail_asymptote(&self, n: u64) -> Result<f64, AsymError> {
        if self.gbar_b <= 0.0 {
            return Err(AsymError::Unbounded);
        }
        if !self.ell.is_one() {
            return self.ln_exp_tail_general(n);
        }
        let m = n as f64 + 1.0;
        Ok(self.alpha.ln() + (self.alpha - 1.0) * self.gbar_b.ln() - self.f_b.ln()
            + m * self.ln_keep()
            - m.ln())
    }

    pub fn exp_tail_asymptote(&self, n: u64) -> Result<f64, AsymError> {
        Ok(self.ln_exp_tail_asymptote(n)?.exp())
    }

    /// Geometric tail for general `ℓ`: `c·α Ḡ^(α−1) (1−Ḡ)ⁿ / (ℓ(1/Ḡ) n)`, with the same
    /// prefactor `c` as the uniform approximation.
    pub fn ln_exp_tail_general(&self, n: u64) -> Result<f64, AsymError> {
        if self.gbar_b <= 0.0 {
            return Err(AsymError::Unbounded);
        }
        let nf = n as f64;
        let ln_g = self.gbar_b.ln();
        Ok(self.ln_prefactor() + self.alpha.ln() - self.ell.ln_value_at_ln(-ln_g) - nf.ln()
            + (self.alpha - 1.0) * ln_g
            + nf * self.ln_keep())
    }

    pub fn exp_tail_general(&self, n: u64) -> Result<f64, AsymError> {
        Ok(self.ln_exp_tail_general(n)?.exp())
    }

    /// `n ln(1 − Ḡ(b)) − α ln n`, the log-scale body approximation of `ln P[N_b > n]`.
    pub fn log_body(&self, n: u64) -> f64 {
        let nf = n as f64;
        nf * self.ln_keep() - self.alpha * nf.ln()
    }

    /// `(1 − ε)·log_body(n)`.
    pub fn log_upper_bound(&self, n: u64, eps: f64) -> f64 {
        (1.0 - eps) * self.log_body(n)
    }

    /// `n^(1+ε) Ḡ(b) ≤ 1`.
    pub fn power_law_region_check(&self, n: u64, eps: f64) -> bool {
        self.gbar_b == 0.0 || (1.0 + eps) * (n as f64).ln() + self.gbar_b.ln() <= 0.0
    }

    /// Heuristic onset `α/Ḡ(b)` and the larger root of `n Ḡ(b) = α ln n`.
    ///
    /// `n Ḡ − α ln n` is convex with its minimum at `α/Ḡ`, so the larger root is bracketed by
    /// `α/Ḡ` and a doubled upper end; a root exists iff `α/Ḡ > e`.
    pub fn transition_point(&self) -> Result<TransitionReport, AsymError> {
        let (g, a) = (self.gbar_b, self.alpha);
        let no_root = AsymError::NoRoot { gbar_b: g, alpha: a };
        if !(g > 0.0) || g * std::f64::consts::E >= a {
            return Err(no_root);
        }
        let f = |n: f64| n * g - a * n.ln();
        let n_heuristic = a / g;
        let mut lo = n_heuristic;
        let mut hi = 2.0 * lo;
        while f(hi) < 0.0 {
            lo = hi;
            hi *= 2.0;
            if !hi.is_finite() {
                return Err(no_root);
            }
        }
        let bracket = (lo, hi);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if !(mid > lo && mid < hi) {
                break;
            }
            if f(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let root = if f(lo).abs() < f(hi).abs() { lo } else { hi };
        Ok(TransitionReport { n_heuristic, n_fixed_point: root, bracket })
    }
}

fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + xs.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex1a(b: f64) -> ApproxParams {
        let g = (-b).exp();
        ApproxParams::new(2.0, SlowVarySpec::One, g, -(-2.0 * b).exp_m1(), PrefactorMode::default())
            .unwrap()
    }

    #[test]
    fn uniform_plain_unbounded_alpha_one() {
        let p = ApproxParams::new(1.0, SlowVarySpec::One, 0.0, 1.0, PrefactorMode::Plain).unwrap();
        assert!((p.uniform_approx(7) - 1.0 / 7.0).abs() < 1e-15);
    }

    #[test]
    fn uniform_example_value() {
        assert!((ex1a(2.0).uniform_approx(10) - 0.011679758806024372).abs() < 1e-15);
    }

    #[test]
    fn power_law_values() {
        let p = ApproxParams::new(1.0, SlowVarySpec::One, 0.0, 1.0, PrefactorMode::Plain).unwrap();
        assert!((p.power_law_limit(9) - 1.0 / 9.0).abs() < 1e-15);
        assert!((ex1a(4.0).power_law_limit(10) - 0.02).abs() < 1e-15);
    }

    #[test]
    fn exact_integer_reference_and_telescoping() {
        let v = ex1a(1.0).exact_integer_ccdf(5).unwrap();
        assert!(((v - 0.011268571947507303) / v).abs() < 1e-13, "{v}");
        for a in [1.0, 2.0, 3.0] {
            for b in [0.5f64, 1.0, 3.0] {
                let p = ApproxParams::new(
                    a,
                    SlowVarySpec::One,
                    (-b).exp(),
                    -(-a * b).exp_m1(),
                    PrefactorMode::default(),
                )
                .unwrap();
                assert!((p.exact_integer_ccdf(0).unwrap() - 1.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn exact_integer_errors() {
        let mut p = ex1a(1.0);
        p.alpha = 2.5;
        assert_eq!(p.exact_integer_ccdf(3), Err(AsymError::NotInteger(2.5)));
        p.alpha = 2.0;
        p.ell = SlowVarySpec::log_power(1.0, 1.0).unwrap();
        assert_eq!(p.exact_integer_ccdf(3), Err(AsymError::EllNotOne));
    }

    #[test]
    fn exp_tail_alpha_one_equals_exact() {
        let g = (-2.0f64).exp();
        let p = ApproxParams::new(1.0, SlowVarySpec::One, g, 1.0 - g, PrefactorMode::default())
            .unwrap();
        for n in [1, 10, 100] {
            let a = p.exp_tail_asymptote(n).unwrap();
            let b = p.exact_integer_ccdf(n).unwrap();
            assert!(((a - b) / b).abs() < 1e-13);
        }
    }

    #[test]
    fn log_body_and_bound() {
        let p = ex1a(4.0);
        let want = 100.0 * (-(-4.0f64).exp()).ln_1p() - 2.0 * 100f64.ln();
        assert!((p.log_body(100) - want).abs() < 1e-12);
        assert_eq!(p.log_upper_bound(100, 0.0), p.log_body(100));
    }

    #[test]
    fn transition_points() {
        let cases = [
            (1.0, 5.43656365691809, 14.561003906540537),
            (2.0, 14.7781121978613, 60.67104571243219),
            (4.0, 109.19630006628847, 718.1487672039828),
        ];
        for (b, h, fp) in cases {
            let t = ex1a(b).transition_point().unwrap();
            assert!(((t.n_heuristic - h) / h).abs() < 1e-13);
            assert!(((t.n_fixed_point - fp) / fp).abs() < 1e-10, "{b}: {}", t.n_fixed_point);
            let resid = t.n_fixed_point * (-b).exp() - 2.0 * t.n_fixed_point.ln();
            assert!(resid.abs() <= 1e-9 * 2.0 * t.n_fixed_point.ln());
        }
    }

    #[test]
    fn transition_no_root() {
        let p = ApproxParams::new(0.5, SlowVarySpec::One, 0.5, 0.5, PrefactorMode::Plain).unwrap();
        assert!(matches!(p.transition_point(), Err(AsymError::NoRoot { .. })));
    }

    #[test]
    fn region_check() {
        assert!(ex1a(4.0).power_law_region_check(10, 0.5));
        assert!(!ex1a(1.0).power_law_region_check(100, 0.1));
    }
}
