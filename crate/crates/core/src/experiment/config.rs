use std::collections::BTreeSet;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use super::ExperimentError;
use crate::asym::PrefactorMode;
use crate::dists::{Bound, DistSpec, SlowVarySpec};
use crate::mc::Source;

/// Environment variable naming the default output directory.
pub const OUTPUT_DIR_ENV: &str = "RETRANS_OUTPUT_DIR";
pub const DEFAULT_SAMPLES: u64 = 10_000_000;
pub const MIN_SAMPLES: u64 = 1_000;
pub const DEFAULT_WORKERS: usize = 8;
pub const DEFAULT_POINTS_PER_DECADE: u32 = 24;

fn default_samples() -> u64 {
    DEFAULT_SAMPLES
}
fn default_seed() -> u64 {
    1
}
fn default_workers() -> usize {
    DEFAULT_WORKERS
}
fn default_confidence() -> f64 {
    0.95
}
fn default_n_min() -> u64 {
    1
}
fn default_ppd() -> u32 {
    DEFAULT_POINTS_PER_DECADE
}
fn default_curves() -> BTreeSet<Source> {
    Source::ALL.into_iter().collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// One channel/document pair, evaluated at each listed bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelBlock {
    /// Distinguishes output files when a config holds several models.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub channel: DistSpec,
    /// Parametric document law; when absent the law is derived from the channel, `alpha` and
    /// `ell`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub doc: Option<DistSpec>,
    /// Required for derived documents; inferred for matching parametric pairs when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default)]
    pub ell: SlowVarySpec,
    pub bounds: Vec<Bound>,
}

impl ModelBlock {
    /// The given `alpha`, or the hazard ratio of a pair whose tails are exact powers of each other.
    pub fn resolve_alpha(&self) -> Result<f64, ExperimentError> {
        if let Some(a) = self.alpha {
            return Ok(a);
        }
        match (self.channel, self.doc) {
            (DistSpec::Exponential { rate: mu }, Some(DistSpec::Exponential { rate: lambda })) => {
                Ok(lambda / mu)
            }
            (
                DistSpec::Weibull { shape: ka, scale: mu_a },
                Some(DistSpec::Weibull { shape: kl, scale: mu_l }),
            ) if ka == kl => Ok((mu_a / mu_l).powf(ka)),
            (DistSpec::Exponential { rate: mu }, Some(DistSpec::Gamma { rate: lambda, .. })) => {
                Ok(lambda / mu)
            }
            _ => Err(ExperimentError::ConfigInvalid(
                "`alpha` is required for this channel/document combination".into(),
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    #[serde(default = "default_n_min")]
    pub n_min: u64,
    /// Defaults to ten times the transition fixed point of each bound.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<u64>,
    #[serde(default = "default_ppd")]
    pub points_per_decade: u32,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { n_min: 1, n_max: None, points_per_decade: DEFAULT_POINTS_PER_DECADE }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    pub model: Vec<ModelBlock>,
    #[serde(default)]
    pub grid: GridSpec,
    #[serde(default = "default_samples")]
    pub samples: u64,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_workers")]
    pub workers: usize,
    #[serde(default = "default_confidence")]
    pub confidence: f64,
    #[serde(default = "default_curves")]
    pub curves: BTreeSet<Source>,
    #[serde(default)]
    pub prefactor: PrefactorMode,
    /// Path prefix for output files; defaults to `$RETRANS_OUTPUT_DIR/<name>` or `./<name>`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
    /// Run even when a parametric pair fails the coupling check.
    #[serde(default)]
    pub allow_invalid_coupling: bool,
}

impl ExperimentConfig {
    /// A config with every optional field at its default.
    pub fn new(name: impl Into<String>, model: Vec<ModelBlock>) -> Self {
        ExperimentConfig {
            name: name.into(),
            model,
            grid: GridSpec::default(),
            samples: DEFAULT_SAMPLES,
            seed: default_seed(),
            workers: DEFAULT_WORKERS,
            confidence: default_confidence(),
            curves: default_curves(),
            prefactor: PrefactorMode::default(),
            output: None,
            format: Format::default(),
            allow_invalid_coupling: false,
        }
    }

    pub fn from_toml(text: &str) -> Result<Self, ExperimentError> {
        let cfg: ExperimentConfig =
            toml::from_str(text).map_err(|e| ExperimentError::ConfigInvalid(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        let invalid = |msg: String| Err(ExperimentError::ConfigInvalid(msg));
        if self.model.is_empty() {
            return invalid("at least one [[model]] block is required".into());
        }
        if self.grid.n_min < 1 {
            return invalid("grid.n_min must be at least 1".into());
        }
        if let Some(n_max) = self.grid.n_max {
            if n_max < self.grid.n_min {
                return invalid(format!("grid.n_max = {n_max} is below grid.n_min"));
            }
        }
        if self.grid.points_per_decade == 0 {
            return invalid("grid.points_per_decade must be positive".into());
        }
        if self.samples < MIN_SAMPLES {
            return invalid(format!("samples = {} is below {MIN_SAMPLES}", self.samples));
        }
        if self.workers == 0 {
            return invalid("workers must be positive".into());
        }
        if !(self.confidence > 0.5 && self.confidence < 1.0) {
            return invalid(format!("confidence = {} outside (0.5, 1)", self.confidence));
        }
        for (i, m) in self.model.iter().enumerate() {
            if m.bounds.is_empty() {
                return invalid(format!("model {i} lists no bounds"));
            }
            m.channel.validate().map_err(|e| ExperimentError::ConfigInvalid(e.to_string()))?;
            if let Some(d) = m.doc {
                d.validate().map_err(|e| ExperimentError::ConfigInvalid(e.to_string()))?;
            } else if m.alpha.is_none() {
                return invalid(format!("model {i}: a derived document law needs `alpha`"));
            }
            m.ell.validate().map_err(|e| ExperimentError::ConfigInvalid(e.to_string()))?;
            let alpha = m.resolve_alpha()?;
            if !(alpha > 0.0 && alpha.is_finite()) {
                return invalid(format!("model {i}: alpha = {alpha} must be positive"));
            }
        }
        let mut labels = BTreeSet::new();
        if self.model.len() > 1 {
            for m in &self.model {
                match &m.label {
                    Some(l) if labels.insert(l.clone()) => {}
                    _ => return invalid("several models need distinct labels".into()),
                }
            }
        }
        Ok(())
    }

    /// The output path prefix after applying the environment default.
    pub fn output_prefix(&self) -> PathBuf {
        match &self.output {
            Some(p) => p.clone(),
            None => std::env::var_os(OUTPUT_DIR_ENV)
                .map(PathBuf::from)
                .unwrap_or_else(|| PathBuf::from("."))
                .join(&self.name),
        }
    }
}
