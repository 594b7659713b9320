use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{BoundRun, ComparisonReport, ExperimentConfig, ExperimentError, Format};
use crate::mc::Source;

/// Column order of the CSV output; frozen.
pub const COLUMNS: [&str; 10] = [
    "n",
    "mc_ccdf",
    "mc_ci_lo",
    "mc_ci_hi",
    "oracle",
    "uniform_approx",
    "power_law",
    "exp_tail",
    "exact_integer",
    "log_body",
];

/// One output row; absent sources are `None`. `log_body` holds a natural logarithm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub n: u64,
    pub mc_ccdf: Option<f64>,
    pub mc_ci_lo: Option<f64>,
    pub mc_ci_hi: Option<f64>,
    pub oracle: Option<f64>,
    pub uniform_approx: Option<f64>,
    pub power_law: Option<f64>,
    pub exp_tail: Option<f64>,
    pub exact_integer: Option<f64>,
    pub log_body: Option<f64>,
}

impl CurveRow {
    fn fields(&self) -> [Option<f64>; 9] {
        [
            self.mc_ccdf,
            self.mc_ci_lo,
            self.mc_ci_hi,
            self.oracle,
            self.uniform_approx,
            self.power_law,
            self.exp_tail,
            self.exact_integer,
            self.log_body,
        ]
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct JsonTable {
    columns: Vec<String>,
    rows: Vec<CurveRow>,
}

#[derive(Debug, Serialize)]
struct Meta<'a> {
    artifact: &'static str,
    version: &'static str,
    seed: u64,
    data_file: String,
    config: &'a ExperimentConfig,
    report: &'a ComparisonReport,
}

/// Rows of one run over its shared grid.
pub fn rows(run: &BoundRun) -> Vec<CurveRow> {
    let at = |s: Source, n: u64| run.curve(s).and_then(|c| c.points.iter().find(|p| p.n == n));
    run.grid
        .iter()
        .map(|&n| {
            let mc = at(Source::MonteCarlo, n);
            let val = |s| at(s, n).map(|p| p.value);
            CurveRow {
                n,
                mc_ccdf: mc.map(|p| p.value),
                mc_ci_lo: mc.map(|p| p.ci_lo),
                mc_ci_hi: mc.map(|p| p.ci_hi),
                oracle: val(Source::Oracle),
                uniform_approx: val(Source::UniformApprox),
                power_law: val(Source::PowerLawLimit),
                exp_tail: val(Source::ExpTail),
                exact_integer: val(Source::ExactInteger),
                log_body: val(Source::LogBody),
            }
        })
        .collect()
}

/// `<prefix>[_<label>]_b<bound>`.
pub fn file_stem(prefix: &Path, run: &BoundRun) -> PathBuf {
    let mut name = prefix.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    if let Some(label) = &run.label {
        name.push('_');
        name.push_str(label);
    }
    name.push_str(&format!("_b{}", run.bound));
    prefix.with_file_name(name)
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> ExperimentError + '_ {
    move |source| ExperimentError::IoFailure { path: path.to_path_buf(), source }
}

pub fn write_csv(path: &Path, rows: &[CurveRow]) -> Result<(), ExperimentError> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_err(path, e))?;
    w.write_record(COLUMNS).map_err(|e| csv_err(path, e))?;
    for r in rows {
        let mut rec = vec![r.n.to_string()];
        rec.extend(r.fields().iter().map(|f| f.map_or(String::new(), |v| format!("{v:.16e}"))));
        w.write_record(&rec).map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(io_err(path))
}

pub fn read_csv(path: &Path) -> Result<Vec<CurveRow>, ExperimentError> {
    let mut r = csv::Reader::from_path(path).map_err(|e| csv_err(path, e))?;
    let header: Vec<String> =
        r.headers().map_err(|e| csv_err(path, e))?.iter().map(str::to_owned).collect();
    if header != COLUMNS {
        return Err(ExperimentError::ConfigInvalid(format!(
            "{}: unexpected header {header:?}",
            path.display()
        )));
    }
    r.deserialize().collect::<Result<_, _>>().map_err(|e| csv_err(path, e))
}

pub fn write_json(path: &Path, rows: &[CurveRow]) -> Result<(), ExperimentError> {
    let table =
        JsonTable { columns: COLUMNS.iter().map(|s| s.to_string()).collect(), rows: rows.to_vec() };
    let text = serde_json::to_string_pretty(&table).expect("rows serialize");
    fs::write(path, text + "\n").map_err(io_err(path))
}

pub fn read_json(path: &Path) -> Result<Vec<CurveRow>, ExperimentError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    let table: JsonTable = serde_json::from_str(&text)
        .map_err(|e| ExperimentError::ConfigInvalid(format!("{}: {e}", path.display())))?;
    Ok(table.rows)
}

fn csv_err(path: &Path, e: csv::Error) -> ExperimentError {
    match e.into_kind() {
        csv::ErrorKind::Io(source) => ExperimentError::IoFailure { path: path.to_path_buf(), source },
        other => ExperimentError::IoFailure {
            path: path.to_path_buf(),
            source: std::io::Error::new(std::io::ErrorKind::InvalidData, format!("{other:?}")),
        },
    }
}

/// Writes one data file and one `.meta.json` sidecar per run; returns the data file paths.
pub fn emit_curves(runs: &[BoundRun], cfg: &ExperimentConfig) -> Result<Vec<PathBuf>, ExperimentError> {
    let prefix = cfg.output_prefix();
    if let Some(dir) = prefix.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(io_err(dir))?;
    }
    let mut written = Vec::new();
    for run in runs {
        let stem = file_stem(&prefix, run);
        let ext = match cfg.format {
            Format::Csv => "csv",
            Format::Json => "json",
        };
        let data = stem.with_file_name(format!(
            "{}.{ext}",
            stem.file_name().expect("stem has a name").to_string_lossy()
        ));
        let table = rows(run);
        match cfg.format {
            Format::Csv => write_csv(&data, &table)?,
            Format::Json => write_json(&data, &table)?,
        }
        let meta_path = stem.with_file_name(format!(
            "{}.meta.json",
            stem.file_name().expect("stem has a name").to_string_lossy()
        ));
        let meta = Meta {
            artifact: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            seed: cfg.seed,
            data_file: data.file_name().expect("data file name").to_string_lossy().into_owned(),
            config: cfg,
            report: &run.report,
        };
        let text = serde_json::to_string_pretty(&meta).expect("metadata serializes");
        fs::write(&meta_path, text + "\n").map_err(io_err(&meta_path))?;
        written.push(data);
    }
    Ok(written)
}
