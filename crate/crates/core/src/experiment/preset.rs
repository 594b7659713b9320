use super::{ExperimentConfig, ExperimentError, ModelBlock};
use crate::dists::{Bound, DistSpec, SlowVarySpec};
use crate::mc::Source;

pub const PRESET_NAMES: [&str; 5] = ["example1a", "example1b", "example2", "example3", "example4"];

fn bounds(bs: &[f64]) -> Vec<Bound> {
    bs.iter().map(|&b| Bound::Finite(b)).collect()
}

fn exp_pair(doc_rate: f64, channel_rate: f64, bs: &[f64]) -> ModelBlock {
    ModelBlock {
        label: None,
        channel: DistSpec::Exponential { rate: channel_rate },
        doc: Some(DistSpec::Exponential { rate: doc_rate }),
        alpha: Some(doc_rate / channel_rate),
        ell: SlowVarySpec::One,
        bounds: bounds(bs),
    }
}

fn config(name: &str, model: Vec<ModelBlock>, curves: &[Source]) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(name, model);
    cfg.curves = curves.iter().copied().collect();
    cfg
}

/// Parameters of the published experiments.
pub fn preset(name: &str) -> Result<ExperimentConfig, ExperimentError> {
    use Source::*;
    let body = [MonteCarlo, Oracle, UniformApprox, PowerLawLimit, ExactInteger, LogBody];
    let cfg = match name {
        "example1a" => config(name, vec![exp_pair(2.0, 1.0, &[1.0, 2.0, 4.0])], &body),
        "example1b" => config(name, vec![exp_pair(1.0, 2.0, &[1.0, 2.0, 4.0])], &body),
        "example2" => config(name, vec![exp_pair(2.0, 1.0, &[1.0, 2.0, 4.0])], &Source::ALL),
        "example3" => {
            let model = [(0.5, 16.0), (1.0, 4.0), (2.0, 2.0)]
                .into_iter()
                .map(|(k, mu_a)| ModelBlock {
                    label: Some(format!("k{k}")),
                    channel: DistSpec::Weibull { shape: k, scale: mu_a },
                    doc: Some(DistSpec::Weibull { shape: k, scale: 1.0 }),
                    alpha: Some(4.0),
                    ell: SlowVarySpec::One,
                    bounds: bounds(&[8.0]),
                })
                .collect();
            config(name, model, &Source::ALL)
        }
        "example4" => {
            let model = ModelBlock {
                label: None,
                channel: DistSpec::Exponential { rate: 2.0 },
                doc: Some(DistSpec::Gamma { rate: 2.0, shape: 2.0 }),
                alpha: Some(1.0),
                ell: SlowVarySpec::GammaDocExact { rate: 2.0, shape: 2.0, channel_rate: 2.0 },
                bounds: bounds(&[2.0, 3.0, 4.0]),
            };
            config(name, vec![model], &[MonteCarlo, Oracle, UniformApprox, PowerLawLimit, ExpTail])
        }
        other => return Err(ExperimentError::UnknownPreset(other.to_string())),
    };
    cfg.validate()?;
    Ok(cfg)
}
