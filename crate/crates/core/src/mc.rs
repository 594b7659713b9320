//! Monte Carlo simulation of the retransmission count.
//!
//! Given the document size `x`, the count is geometric with success probability `Ḡ(x)`, so one
//! document draw and one uniform suffice per sample. The literal attempt-by-attempt loop is kept
//! for equivalence checks.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};
use thiserror::Error;

use crate::dists::CoupledModel;
use crate::rng::{open_unit, RandomStream};

/// Success probabilities at or above this level yield a single attempt.
pub const SURE_SUCCESS: f64 = 1.0 - 1e-15;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TallyError {
    #[error("tally grids differ")]
    GridMismatch,
}

/// Geometric count `⌈ln U / ln(1 − p)⌉ ≥ 1` with `U` uniform on `(0, 1]`.
///
/// Saturates at `u64::MAX` when `p` is so small that the count overflows.
pub fn geometric_count<R: Rng + ?Sized>(p: f64, rng: &mut R) -> u64 {
    if p >= SURE_SUCCESS {
        return 1;
    }
    if p <= 0.0 {
        return u64::MAX;
    }
    let u = open_unit(rng);
    let n = (u.ln() / (-p).ln_1p()).ceil();
    // `as` saturates for out-of-range floats
    (n as u64).max(1)
}

/// Count for a document of known size `x`.
pub fn conditional_count<R: Rng + ?Sized>(m: &CoupledModel, x: f64, rng: &mut R) -> u64 {
    geometric_count(m.gbar(x), rng)
}

/// One draw of `N_b`: sample `L_b`, then the geometric count.
pub fn sample_n<R: Rng + ?Sized>(m: &CoupledModel, rng: &mut R) -> u64 {
    let x = m.doc().sample(rng);
    conditional_count(m, x, rng)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NaiveDraw {
    pub count: u64,
    /// The loop stopped at `cap` without a success.
    pub capped: bool,
}

/// Attempt-by-attempt count for a document of known size `x`, stopping at `cap`.
pub fn conditional_count_naive<R: Rng + ?Sized>(
    m: &CoupledModel,
    x: f64,
    rng: &mut R,
    cap: u64,
) -> NaiveDraw {
    let cap = cap.max(1);
    for n in 1..=cap {
        if m.channel().sample(rng) > x {
            return NaiveDraw { count: n, capped: false };
        }
    }
    NaiveDraw { count: cap, capped: true }
}

/// One draw of `N_b = inf{n : A_n > L_b}` by literally drawing `A₁, A₂, …`.
pub fn sample_n_naive<R: Rng + ?Sized>(m: &CoupledModel, rng: &mut R, cap: u64) -> NaiveDraw {
    let x = m.doc().sample(rng);
    conditional_count_naive(m, x, rng, cap)
}

/// Exceedance counts `#{N_b > n}` over a grid.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub grid: Vec<u64>,
    pub exceed_counts: Vec<u64>,
    pub total: u64,
}

impl Tally {
    pub fn new(grid: Vec<u64>) -> Self {
        let exceed_counts = vec![0; grid.len()];
        Tally { grid, exceed_counts, total: 0 }
    }

    /// Adds per-sample counts; `grid` must be sorted ascending.
    pub fn from_counts(grid: Vec<u64>, counts: impl IntoIterator<Item = u64>) -> Self {
        // hist[k] = #samples exceeding exactly the first k grid points
        let mut hist = vec![0u64; grid.len() + 1];
        let mut total = 0;
        for c in counts {
            hist[grid.partition_point(|&g| g < c)] += 1;
            total += 1;
        }
        let mut exceed_counts = vec![0; grid.len()];
        let mut acc = 0;
        for j in (0..grid.len()).rev() {
            acc += hist[j + 1];
            exceed_counts[j] = acc;
        }
        Tally { grid, exceed_counts, total }
    }

    pub fn merge(mut self, other: &Tally) -> Result<Tally, TallyError> {
        if self.grid != other.grid {
            return Err(TallyError::GridMismatch);
        }
        for (a, b) in self.exceed_counts.iter_mut().zip(&other.exceed_counts) {
            *a += b;
        }
        self.total += other.total;
        Ok(self)
    }
}

/// Simulates `samples` draws split over `workers` independent streams `0..workers`.
///
/// The first `samples % workers` streams take one extra draw. The result depends only on
/// `(seed, workers)`, not on thread scheduling.
pub fn run_tally(m: &CoupledModel, grid: &[u64], samples: u64, seed: u64, workers: usize) -> Tally {
    let workers = workers.max(1) as u64;
    let (base, rem) = (samples / workers, samples % workers);
    (0..workers)
        .into_par_iter()
        .map(|w| {
            let mut rng = RandomStream::new(seed, w);
            let count = base + u64::from(w < rem);
            Tally::from_counts(grid.to_vec(), (0..count).map(|_| sample_n(m, &mut rng)))
        })
        .collect::<Vec<_>>()
        .into_iter()
        .try_fold(Tally::new(grid.to_vec()), |acc, t| acc.merge(&t))
        .expect("identical grids")
}

/// Origin of a curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    MonteCarlo,
    Oracle,
    UniformApprox,
    PowerLawLimit,
    ExpTail,
    ExactInteger,
    LogBody,
}

impl Source {
    pub const ALL: [Source; 7] = [
        Source::MonteCarlo,
        Source::Oracle,
        Source::UniformApprox,
        Source::PowerLawLimit,
        Source::ExpTail,
        Source::ExactInteger,
        Source::LogBody,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Source::MonteCarlo => "monte_carlo",
            Source::Oracle => "oracle",
            Source::UniformApprox => "uniform_approx",
            Source::PowerLawLimit => "power_law",
            Source::ExpTail => "exp_tail",
            Source::ExactInteger => "exact_integer",
            Source::LogBody => "log_body",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CcdfPoint {
    pub n: u64,
    pub value: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CcdfCurve {
    pub source: Source,
    pub points: Vec<CcdfPoint>,
}

impl CcdfCurve {
    /// A curve without interval information (`ci_lo = ci_hi = value`).
    pub fn exact(source: Source, points: impl IntoIterator<Item = (u64, f64)>) -> Self {
        let points = points
            .into_iter()
            .map(|(n, value)| CcdfPoint { n, value, ci_lo: value, ci_hi: value })
            .collect();
        CcdfCurve { source, points }
    }

    pub fn value_at(&self, n: u64) -> Option<f64> {
        self.points.iter().find(|p| p.n == n).map(|p| p.value)
    }
}

/// Two-sided standard normal quantile for the given confidence.
pub fn z_score(confidence: f64) -> f64 {
    Normal::standard().inverse_cdf(0.5 + 0.5 * confidence)
}

/// Wilson score interval for `k` successes in `n` trials.
pub fn wilson_interval(k: u64, n: u64, confidence: f64) -> (f64, f64) {
    let z = z_score(confidence);
    let nf = n as f64;
    let p = k as f64 / nf;
    let z2 = z * z;
    let denom = 1.0 + z2 / nf;
    let center = (p + z2 / (2.0 * nf)) / denom;
    let half = z / denom * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt();
    let lo = if k == 0 { 0.0 } else { (center - half).max(0.0) };
    let hi = if k == n { 1.0 } else { (center + half).min(1.0) };
    (lo.min(p), hi.max(p))
}

/// Empirical CCDF `exceed/total` with Wilson intervals.
pub fn empirical_ccdf(t: &Tally, confidence: f64) -> CcdfCurve {
    assert!(t.total > 0, "empty tally");
    let points = t
        .grid
        .iter()
        .zip(&t.exceed_counts)
        .map(|(&n, &k)| {
            let (ci_lo, ci_hi) = wilson_interval(k, t.total, confidence);
            CcdfPoint { n, value: k as f64 / t.total as f64, ci_lo, ci_hi }
        })
        .collect();
    CcdfCurve { source: Source::MonteCarlo, points }
}
