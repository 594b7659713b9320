//! Exact CCDF of the retransmission count by quadrature of `P[N_b > n] = E[(1 − Ḡ(L_b))ⁿ]`.
//!
//! The integral is taken over `v = P[L_b > x] ∈ [0, 1]`, so the measure is uniform and only the
//! document quantile is needed. The integrand is divided by `(1 − Ḡ(b))ⁿ`, which keeps it in
//! `[0, 1]` with value one at `v = 0`; the factor is restored in log space, so deep-tail values
//! never underflow before the final exponentiation.

use rayon::prelude::*;
use thiserror::Error;

use crate::dists::CoupledModel;
use crate::quad::{integrate, QuadError};

/// Relative accuracy requested from the quadrature while `n` is moderate.
pub const ORACLE_REL_TOL: f64 = 1e-12;
/// Loosest tolerance accepted; beyond it the integrand is mostly rounding noise.
pub const MAX_REL_TOL: f64 = 1e-6;
/// Subdivision budget before [`OracleError::QuadratureFailure`].
pub const MAX_SUBDIVISIONS: usize = 1_000_000;
/// Breakpoints `v = 10^(−k)` for `k = 1..=BREAKPOINT_DECADES`.
const BREAKPOINT_DECADES: i32 = 40;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("quadrature failed at n = {n}: {source}")]
    QuadratureFailure { n: u64, source: QuadError },
    #[error("oracle CCDF increases between n = {prev} and n = {n}")]
    NotMonotone { prev: u64, n: u64 },
    #[error("grid must be strictly increasing (at n = {0})")]
    GridNotIncreasing(u64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleResult {
    pub n: u64,
    pub value: f64,
    /// `ln P[N_b > n]`, finite even where `value` underflows.
    pub ln_value: f64,
    pub est_abs_err: f64,
    pub subdivisions: usize,
}

fn breakpoints() -> Vec<f64> {
    let mut pts: Vec<f64> = (1..=BREAKPOINT_DECADES).rev().map(|k| 10f64.powi(-k)).collect();
    pts.insert(0, 0.0);
    pts.push(1.0);
    pts
}

/// [`ORACLE_REL_TOL`], raised to the rounding noise of the scaled integrand when `n` is huge.
///
/// Near `x = b` the exponent `n (ln(1 − Ḡ(x)) − ln(1 − Ḡ(b)))` carries an absolute error of
/// roughly `n ε (|ln(1 − Ḡ(b))| + b g(b) / (1 − Ḡ(b)))`, from the subtraction and from rounding
/// in `x`; no quadrature can resolve the integral more finely than that.
fn rel_tol(m: &CoupledModel, nf: f64, ln_keep_b: f64) -> f64 {
    let b = m.bound().value();
    let slope = if b.is_finite() { b * m.channel().density(b) / (-ln_keep_b).exp() } else { 0.0 };
    ORACLE_REL_TOL.max(8.0 * nf * f64::EPSILON * (ln_keep_b.abs() + slope)).min(MAX_REL_TOL)
}

/// `P[N_b > n]` for one `n`.
pub fn ccdf_exact(m: &CoupledModel, n: u64) -> Result<OracleResult, OracleError> {
    if n == 0 {
        return Ok(OracleResult { n, value: 1.0, ln_value: 0.0, est_abs_err: 0.0, subdivisions: 0 });
    }
    let nf = n as f64;
    let doc = m.doc();
    let channel = m.channel();
    let ln_keep_b = (-m.gbar_bound()).ln_1p();
    let h = |v: f64| -> f64 {
        match doc.quantile_ccdf(v) {
            Ok(x) => (nf * ((-channel.ccdf(x)).ln_1p() - ln_keep_b)).min(0.0).exp(),
            Err(_) => f64::NAN,
        }
    };
    let r = integrate(h, &breakpoints(), rel_tol(m, nf, ln_keep_b), 0.0, MAX_SUBDIVISIONS)
        .map_err(|source| OracleError::QuadratureFailure { n, source })?;
    let ln_scale = nf * ln_keep_b;
    let ln_value = (ln_scale + r.value.ln()).min(0.0);
    Ok(OracleResult {
        n,
        value: ln_value.exp(),
        ln_value,
        est_abs_err: r.abs_err * ln_scale.exp(),
        subdivisions: r.subdivisions,
    })
}

/// [`ccdf_exact`] over a strictly increasing grid, evaluated in parallel.
///
/// Fails if the results are not nonincreasing in `n`.
pub fn ccdf_exact_curve(m: &CoupledModel, grid: &[u64]) -> Result<Vec<OracleResult>, OracleError> {
    if let Some(w) = grid.windows(2).find(|w| w[1] <= w[0]) {
        return Err(OracleError::GridNotIncreasing(w[1]));
    }
    let out: Vec<OracleResult> =
        grid.par_iter().map(|&n| ccdf_exact(m, n)).collect::<Result<_, _>>()?;
    for w in out.windows(2) {
        if w[1].ln_value > w[0].ln_value + 1e-10 {
            return Err(OracleError::NotMonotone { prev: w[0].n, n: w[1].n });
        }
    }
    Ok(out)
}
