use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use retrans::asym::ApproxParams;
use retrans::experiment::{
    build_model, emit_curves, preset, run_experiment, ExperimentConfig, ExperimentError, Format,
};
use retrans::oracle::ccdf_exact;

#[derive(Parser)]
#[command(name = "retrans", version, about = "Retransmission-count distributions for bounded documents")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment and write curve files.
    Run(Source),
    /// Print the TOML config of a named preset.
    Preset { name: String },
    /// Exact CCDF by quadrature at the given counts.
    Oracle {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<u64>,
    },
    /// Closed-form approximations at the given counts.
    Approx {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<u64>,
    },
    /// Transition points per model and bound.
    Transition(Source),
    /// Check the config and the coupling residual of every model and bound.
    Validate(Source),
}

#[derive(Args)]
struct Source {
    /// TOML experiment config.
    #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
    config: Option<PathBuf>,
    /// Named preset instead of a config file.
    #[arg(long)]
    preset: Option<String>,
    /// Monte Carlo sample count (at least 1000).
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Independent random streams; part of the reproducibility key.
    #[arg(long)]
    workers: Option<usize>,
    /// Confidence level of the Wilson intervals, in (0.5, 1).
    #[arg(long)]
    confidence: Option<f64>,
    #[arg(long)]
    n_min: Option<u64>,
    /// Last grid point; defaults to ten times the transition fixed point.
    #[arg(long)]
    n_max: Option<u64>,
    #[arg(long)]
    points_per_decade: Option<u32>,
    /// Output path prefix.
    #[arg(long)]
    output: Option<PathBuf>,
    /// csv or json.
    #[arg(long, value_parser = parse_format)]
    format: Option<Format>,
    /// Run even if a model's coupling residual exceeds tolerance.
    #[arg(long)]
    allow_invalid_coupling: bool,
}

fn parse_format(s: &str) -> Result<Format, String> {
    match s {
        "csv" => Ok(Format::Csv),
        "json" => Ok(Format::Json),
        _ => Err(format!("unknown format `{s}` (expected csv or json)")),
    }
}

impl Source {
    fn load(&self) -> Result<ExperimentConfig, ExperimentError> {
        let mut cfg = match (&self.config, &self.preset) {
            (Some(path), _) => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    ExperimentError::ConfigInvalid(format!("{}: {e}", path.display()))
                })?;
                ExperimentConfig::from_toml(&text)?
            }
            (None, Some(name)) => preset(name)?,
            (None, None) => unreachable!("clap requires one source"),
        };
        if let Some(v) = self.samples {
            cfg.samples = v;
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(v) = self.workers {
            cfg.workers = v;
        }
        if let Some(v) = self.confidence {
            cfg.confidence = v;
        }
        if let Some(v) = self.n_min {
            cfg.grid.n_min = v;
        }
        if let Some(v) = self.n_max {
            cfg.grid.n_max = Some(v);
        }
        if let Some(v) = self.points_per_decade {
            cfg.grid.points_per_decade = v;
        }
        if let Some(v) = &self.output {
            cfg.output = Some(v.clone());
        }
        if let Some(v) = self.format {
            cfg.format = v;
        }
        cfg.allow_invalid_coupling |= self.allow_invalid_coupling;
        cfg.validate()?;
        Ok(cfg)
    }
}

fn opt(v: Option<f64>) -> String {
    v.map_or(String::new(), |v| format!("{v:.16e}"))
}

fn label(l: &Option<String>) -> &str {
    l.as_deref().unwrap_or("")
}

fn execute(cmd: Command) -> Result<(), ExperimentError> {
    match cmd {
        Command::Preset { name } => print!("{}", preset(&name)?.to_toml()),
        Command::Run(src) => {
            let cfg = src.load()?;
            let runs = run_experiment(&cfg)?;
            let files = emit_curves(&runs, &cfg)?;
            for (run, file) in runs.iter().zip(files) {
                println!("{}", file.display());
                let r = &run.report;
                for (s, e) in &r.max_rel_err {
                    println!("  {:<15} max rel err {e:.4}", s.name());
                }
                if let Some(c) = r.coverage {
                    println!("  CI coverage     {c:.4} over {} points", r.coverage_points);
                }
            }
        }
        Command::Oracle { source, n } => {
            let cfg = source.load()?;
            println!("label,b,n,value,ln_value,est_abs_err,subdivisions");
            for block in &cfg.model {
                for &b in &block.bounds {
                    let (m, _) = build_model(block, b, true)?;
                    for &k in &n {
                        let r = ccdf_exact(&m, k)?;
                        println!(
                            "{},{b},{k},{:.16e},{:.16e},{:.3e},{}",
                            label(&block.label),
                            r.value,
                            r.ln_value,
                            r.est_abs_err,
                            r.subdivisions
                        );
                    }
                }
            }
        }
        Command::Approx { source, n } => {
            let cfg = source.load()?;
            println!("label,b,n,uniform_approx,power_law,exp_tail,exact_integer,log_body");
            for block in &cfg.model {
                for &b in &block.bounds {
                    let (m, _) = build_model(block, b, true)?;
                    let p = ApproxParams::from_model(&m).with_mode(cfg.prefactor);
                    for &k in n.iter().filter(|&&k| k >= 1) {
                        println!(
                            "{},{b},{k},{},{},{},{},{}",
                            label(&block.label),
                            opt(Some(p.uniform_approx(k))),
                            opt(Some(p.power_law_limit(k))),
                            opt(p.exp_tail_asymptote(k).ok()),
                            opt(p.exact_integer_ccdf(k).ok()),
                            opt((k >= 2).then(|| p.log_body(k))),
                        );
                    }
                }
            }
        }
        Command::Transition(src) => {
            let cfg = src.load()?;
            println!("label,b,gbar_b,n_heuristic,n_fixed_point");
            for block in &cfg.model {
                for &b in &block.bounds {
                    let (m, _) = build_model(block, b, true)?;
                    let p = ApproxParams::from_model(&m);
                    let t = p.transition_point().ok();
                    println!(
                        "{},{b},{:.16e},{},{}",
                        label(&block.label),
                        p.gbar_b,
                        opt(t.map(|t| t.n_heuristic)),
                        opt(t.map(|t| t.n_fixed_point))
                    );
                }
            }
        }
        Command::Validate(src) => {
            let cfg = src.load()?;
            let mut first_err = None;
            for block in &cfg.model {
                for &b in &block.bounds {
                    match build_model(block, b, cfg.allow_invalid_coupling) {
                        Ok((_, residual)) => println!(
                            "{} b={b}: ok (residual {})",
                            label(&block.label),
                            residual.map_or("n/a, derived".into(), |r| format!("{r:.3e}"))
                        ),
                        Err(e) => {
                            println!("{} b={b}: {e}", label(&block.label));
                            first_err.get_or_insert(e);
                        }
                    }
                }
            }
            if let Some(e) = first_err {
                return Err(e);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
