use std::collections::BTreeMap;

use serde::Serialize;

use super::{ExperimentConfig, ExperimentError, ModelBlock};
use crate::asym::{ApproxParams, TransitionReport};
use crate::dists::{derive_doc_law, Bound, CoupledModel, COUPLING_TOLERANCE};
use crate::mc::{empirical_ccdf, run_tally, CcdfCurve, Source};
use crate::oracle::ccdf_exact_curve;

/// Relative errors are only reported where the oracle is at least this large.
pub const ERROR_THRESHOLD: f64 = 1e-6;
/// Relative errors are only reported from this `n` on.
pub const ERROR_N_MIN: u64 = 10;
/// Grid points need this many expected exceedances to count towards coverage.
pub const COVERAGE_MIN_COUNT: f64 = 100.0;
/// Grid end used when no transition fixed point exists and `n_max` is not given.
pub const FALLBACK_N_MAX: u64 = 100_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub bound: Bound,
    pub alpha: f64,
    pub gbar_b: f64,
    pub f_b: f64,
    /// Hazard-proportionality residual; absent for derived documents.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coupling_residual: Option<f64>,
    /// Largest relative error against the oracle over grid points with `n ≥ 10` and
    /// oracle `≥ 1e−6`. For `log_body` the error is taken between logarithms.
    pub max_rel_err: BTreeMap<Source, f64>,
    /// Fraction of grid points with at least 100 expected exceedances whose Monte Carlo
    /// interval contains the oracle value.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coverage: Option<f64>,
    pub coverage_points: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub transition: Option<TransitionReport>,
}

/// Curves and report for one model at one bound.
#[derive(Debug, Clone)]
pub struct BoundRun {
    pub label: Option<String>,
    pub bound: Bound,
    pub model: CoupledModel,
    pub grid: Vec<u64>,
    pub curves: Vec<CcdfCurve>,
    pub report: ComparisonReport,
}

impl BoundRun {
    pub fn curve(&self, source: Source) -> Option<&CcdfCurve> {
        self.curves.iter().find(|c| c.source == source)
    }
}

/// Rounded log-spaced integers from `n_min` to `n_max` inclusive, duplicates removed.
pub fn log_grid(n_min: u64, n_max: u64, points_per_decade: u32) -> Vec<u64> {
    let n_min = n_min.max(1);
    let step = 10f64.powf(1.0 / points_per_decade as f64);
    let mut out = Vec::new();
    let mut k = 0i32;
    loop {
        let x = (n_min as f64 * step.powi(k)).round();
        if x > n_max as f64 {
            break;
        }
        let n = x as u64;
        if out.last() != Some(&n) {
            out.push(n);
        }
        k += 1;
    }
    if out.last() != Some(&n_max) {
        out.push(n_max);
    }
    out
}

/// Builds the coupled model of one block at one bound, checking the coupling if required.
pub fn build_model(
    block: &ModelBlock,
    bound: Bound,
    allow_invalid: bool,
) -> Result<(CoupledModel, Option<f64>), ExperimentError> {
    let alpha = block.resolve_alpha()?;
    let cfg_err = |e: crate::dists::DistError| ExperimentError::ConfigInvalid(e.to_string());
    match block.doc {
        Some(doc) => {
            let m = CoupledModel::parametric(block.channel, doc, bound, alpha, block.ell)
                .map_err(cfg_err)?;
            let residual = m.validate_coupling().max_residual;
            if residual > COUPLING_TOLERANCE && !allow_invalid {
                return Err(ExperimentError::CouplingInvalid {
                    label: block.label.clone().unwrap_or_default(),
                    bound,
                    residual,
                });
            }
            Ok((m, Some(residual)))
        }
        None => Ok((derive_doc_law(block.channel, alpha, block.ell, bound).map_err(cfg_err)?, None)),
    }
}

/// The `n_max` for one bound: the configured value or ten times the transition fixed point.
pub fn resolve_n_max(cfg: &ExperimentConfig, transition: Option<&TransitionReport>) -> u64 {
    cfg.grid.n_max.unwrap_or_else(|| match transition {
        Some(t) => (10.0 * t.n_fixed_point).ceil() as u64,
        None => FALLBACK_N_MAX,
    })
    .max(cfg.grid.n_min)
}

fn run_bound(
    cfg: &ExperimentConfig,
    block: &ModelBlock,
    bound: Bound,
) -> Result<BoundRun, ExperimentError> {
    let (model, coupling_residual) = build_model(block, bound, cfg.allow_invalid_coupling)?;
    let params = ApproxParams::from_model(&model).with_mode(cfg.prefactor);
    let transition = params.transition_point().ok();
    let mut grid =
        log_grid(cfg.grid.n_min, resolve_n_max(cfg, transition.as_ref()), cfg.grid.points_per_decade);
    let wants = |s: Source| cfg.curves.contains(&s);
    let mut curves = Vec::new();

    let oracle = if wants(Source::Oracle) {
        let with_zero: Vec<u64> = std::iter::once(0).chain(grid.iter().copied()).collect();
        let mut vals = ccdf_exact_curve(&model, &with_zero)?;
        if vals[0].value != 1.0 {
            return Err(ExperimentError::Numeric(format!("oracle at n = 0 is {}", vals[0].value)));
        }
        vals.remove(0);
        // on an automatic grid, drop the deep tail that the sample budget cannot resolve
        if cfg.grid.n_max.is_none() && wants(Source::MonteCarlo) {
            let floor = 10.0 / cfg.samples as f64;
            let keep = vals.iter().take_while(|r| r.value >= floor).count().max(1);
            vals.truncate(keep);
            grid.truncate(keep);
        }
        let c = CcdfCurve::exact(Source::Oracle, vals.iter().map(|r| (r.n, r.value)));
        curves.push(c.clone());
        Some(c)
    } else {
        None
    };

    if wants(Source::MonteCarlo) {
        let with_zero: Vec<u64> = std::iter::once(0).chain(grid.iter().copied()).collect();
        let mut tally = run_tally(&model, &with_zero, cfg.samples, cfg.seed, cfg.workers);
        if tally.exceed_counts[0] != tally.total {
            return Err(ExperimentError::Numeric("simulated count below one".into()));
        }
        tally.grid.remove(0);
        tally.exceed_counts.remove(0);
        curves.push(empirical_ccdf(&tally, cfg.confidence));
    }
    if wants(Source::UniformApprox) {
        curves.push(CcdfCurve::exact(
            Source::UniformApprox,
            grid.iter().map(|&n| (n, params.uniform_approx(n))),
        ));
    }
    if wants(Source::PowerLawLimit) {
        curves.push(CcdfCurve::exact(
            Source::PowerLawLimit,
            grid.iter().map(|&n| (n, params.power_law_limit(n))),
        ));
    }
    if wants(Source::ExpTail) && params.gbar_b > 0.0 {
        let pts: Vec<(u64, f64)> = grid
            .iter()
            .filter_map(|&n| params.exp_tail_asymptote(n).ok().map(|v| (n, v)))
            .collect();
        curves.push(CcdfCurve::exact(Source::ExpTail, pts));
    }
    if wants(Source::ExactInteger) && params.exact_integer_ccdf(1).is_ok() {
        let pts: Vec<(u64, f64)> = grid
            .iter()
            .filter_map(|&n| params.exact_integer_ccdf(n).ok().map(|v| (n, v)))
            .collect();
        curves.push(CcdfCurve::exact(Source::ExactInteger, pts));
    }
    if wants(Source::LogBody) {
        curves.push(CcdfCurve::exact(
            Source::LogBody,
            grid.iter().filter(|&&n| n >= 2).map(|&n| (n, params.log_body(n))),
        ));
    }
    curves.sort_by_key(|c| c.source);

    let report = compare(
        &curves,
        oracle.as_ref(),
        cfg,
        ReportHead {
            label: block.label.clone(),
            bound,
            alpha: params.alpha,
            gbar_b: params.gbar_b,
            f_b: params.f_b,
            coupling_residual,
            transition,
        },
    );
    Ok(BoundRun { label: block.label.clone(), bound, model, grid, curves, report })
}

struct ReportHead {
    label: Option<String>,
    bound: Bound,
    alpha: f64,
    gbar_b: f64,
    f_b: f64,
    coupling_residual: Option<f64>,
    transition: Option<TransitionReport>,
}

fn compare(
    curves: &[CcdfCurve],
    oracle: Option<&CcdfCurve>,
    cfg: &ExperimentConfig,
    head: ReportHead,
) -> ComparisonReport {
    let mut max_rel_err = BTreeMap::new();
    let mut coverage = None;
    let mut coverage_points = 0;
    if let Some(oracle) = oracle {
        let truth: BTreeMap<u64, f64> = oracle.points.iter().map(|p| (p.n, p.value)).collect();
        for c in curves.iter().filter(|c| c.source != Source::Oracle) {
            let err = c
                .points
                .iter()
                .filter(|p| p.n >= ERROR_N_MIN)
                .filter_map(|p| truth.get(&p.n).map(|&o| (p.value, o)))
                .filter(|&(_, o)| o >= ERROR_THRESHOLD)
                .map(|(v, o)| {
                    if c.source == Source::LogBody {
                        (o.ln() / v - 1.0).abs()
                    } else {
                        ((v - o) / o).abs()
                    }
                })
                .fold(None, |acc: Option<f64>, e| Some(acc.map_or(e, |a| a.max(e))));
            if let Some(e) = err {
                max_rel_err.insert(c.source, e);
            }
        }
        if let Some(mc) = curves.iter().find(|c| c.source == Source::MonteCarlo) {
            let eligible: Vec<bool> = mc
                .points
                .iter()
                .filter_map(|p| truth.get(&p.n).map(|&o| (p, o)))
                .filter(|&(_, o)| o * cfg.samples as f64 >= COVERAGE_MIN_COUNT)
                .map(|(p, o)| p.ci_lo <= o && o <= p.ci_hi)
                .collect();
            coverage_points = eligible.len();
            if coverage_points > 0 {
                coverage =
                    Some(eligible.iter().filter(|&&b| b).count() as f64 / coverage_points as f64);
            }
        }
    }
    ComparisonReport {
        label: head.label,
        bound: head.bound,
        alpha: head.alpha,
        gbar_b: head.gbar_b,
        f_b: head.f_b,
        coupling_residual: head.coupling_residual,
        max_rel_err,
        coverage,
        coverage_points,
        transition: head.transition,
    }
}

/// Evaluates every requested curve for every model and bound.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<BoundRun>, ExperimentError> {
    cfg.validate()?;
    let mut runs = Vec::new();
    for block in &cfg.model {
        for &bound in &block.bounds {
            runs.push(run_bound(cfg, block, bound)?);
        }
    }
    Ok(runs)
}
