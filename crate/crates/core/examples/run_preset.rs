//! Runs a named preset at a reduced sample budget and prints its comparison report.
//!
//! ```text
//! cargo run --release --example run_preset -- example4
//! ```

use retrans::experiment::{preset, run_experiment};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "example1a".into());
    let mut cfg = preset(&name)?;
    cfg.samples = 1_000_000;
    for run in run_experiment(&cfg)? {
        let r = &run.report;
        println!(
            "{}b = {}: Ḡ(b) = {:.3e}, grid 1..{}",
            run.label.as_deref().map(|l| format!("{l} ")).unwrap_or_default(),
            run.bound,
            r.gbar_b,
            run.grid.last().copied().unwrap_or(0)
        );
        if let Some(t) = &r.transition {
            println!("  transition: heuristic {:.1}, fixed point {:.1}", t.n_heuristic, t.n_fixed_point);
        }
        for (s, e) in &r.max_rel_err {
            println!("  {:<16} {e:.3e}", s.name());
        }
    }
    Ok(())
}
