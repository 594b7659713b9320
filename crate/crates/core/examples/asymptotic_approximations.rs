//! The closed-form approximations side by side with the exact CCDF.

use retrans::asym::{ApproxParams, PrefactorMode};
use retrans::dists::{Bound, CoupledModel, DistSpec, SlowVarySpec};
use retrans::oracle::ccdf_exact;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let m = CoupledModel::parametric(
        DistSpec::exponential(1.0)?,
        DistSpec::exponential(2.0)?,
        Bound::new(4.0)?,
        2.0,
        SlowVarySpec::One,
    )?;
    let p = ApproxParams::from_model(&m);
    let plain = p.with_mode(PrefactorMode::Plain);
    println!(
        "{:>6} {:>11} {:>11} {:>11} {:>11} {:>11} {:>9}",
        "n", "exact", "uniform", "plain", "power law", "exp tail", "log body"
    );
    for n in [10, 30, 100, 300, 1_000, 3_000] {
        let o = ccdf_exact(&m, n)?;
        println!(
            "{n:>6} {:>11.4e} {:>11.4e} {:>11.4e} {:>11.4e} {:>11.4e} {:>9.3}",
            o.value,
            p.uniform_approx(n),
            plain.uniform_approx(n),
            p.power_law_limit(n),
            p.exp_tail_asymptote(n)?,
            o.ln_value / p.log_body(n),
        );
    }
    println!("(last column: ln P / log body)");
    Ok(())
}
