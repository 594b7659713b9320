//! Seeded parallel simulation of retransmission counts with Wilson intervals.

use retrans::dists::{Bound, CoupledModel, DistSpec, SlowVarySpec};
use retrans::mc::{empirical_ccdf, run_tally};
use retrans::oracle::ccdf_exact;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // α = 0.5: heavy tail, the naive loop would be hopeless here
    let m = CoupledModel::parametric(
        DistSpec::exponential(2.0)?,
        DistSpec::exponential(1.0)?,
        Bound::new(4.0)?,
        0.5,
        SlowVarySpec::One,
    )?;
    let grid = [1, 10, 100, 1_000, 10_000];
    let tally = run_tally(&m, &grid, 1_000_000, 42, 8);
    let curve = empirical_ccdf(&tally, 0.95);
    for p in &curve.points {
        let o = ccdf_exact(&m, p.n)?.value;
        let hit = if p.ci_lo <= o && o <= p.ci_hi { "inside" } else { "outside" };
        println!(
            "n = {:>6}: simulated {:.5} [{:.5}, {:.5}], exact {o:.5} ({hit})",
            p.n, p.value, p.ci_lo, p.ci_hi
        );
    }
    Ok(())
}
