//! Declarative experiment runs: configuration, presets, evaluation and file output.

mod config;
mod emit;
mod preset;
mod run;

use std::path::PathBuf;

use thiserror::Error;

pub use config::{
    ExperimentConfig, Format, GridSpec, ModelBlock, DEFAULT_SAMPLES, DEFAULT_WORKERS, MIN_SAMPLES,
    OUTPUT_DIR_ENV,
};
pub use emit::{emit_curves, file_stem, read_csv, read_json, rows, write_csv, write_json, CurveRow, COLUMNS};
pub use preset::{preset, PRESET_NAMES};
pub use run::{
    build_model, log_grid, resolve_n_max, run_experiment, BoundRun, ComparisonReport,
    COVERAGE_MIN_COUNT, ERROR_N_MIN, ERROR_THRESHOLD, FALLBACK_N_MAX,
};

use crate::dists::Bound;
use crate::oracle::OracleError;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
    #[error("coupling residual {residual:.3e} exceeds tolerance for model `{label}` at b = {bound}")]
    CouplingInvalid { label: String, bound: Bound, residual: f64 },
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("i/o failure on {}: {source}", path.display())]
    IoFailure { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("numeric failure: {0}")]
    Numeric(String),
}

impl ExperimentError {
    /// Process exit code: 2 for configuration problems, 3 for numeric failures, 1 for i/o.
    pub fn exit_code(&self) -> i32 {
        match self {
            ExperimentError::ConfigInvalid(_)
            | ExperimentError::CouplingInvalid { .. }
            | ExperimentError::UnknownPreset(_) => 2,
            ExperimentError::Oracle(_) | ExperimentError::Numeric(_) => 3,
            ExperimentError::IoFailure { .. } => 1,
        }
    }
}
