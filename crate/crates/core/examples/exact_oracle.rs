//! Exact `P[N_b > n]` by quadrature, compared with the closed form for integer α.

use retrans::asym::ApproxParams;
use retrans::dists::{Bound, CoupledModel, DistSpec, SlowVarySpec};
use retrans::experiment::log_grid;
use retrans::oracle::ccdf_exact_curve;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let m = CoupledModel::parametric(
        DistSpec::exponential(1.0)?,
        DistSpec::exponential(2.0)?,
        Bound::new(2.0)?,
        2.0,
        SlowVarySpec::One,
    )?;
    let p = ApproxParams::from_model(&m);
    println!("{:>7} {:>22} {:>10} {:>6}", "n", "P[N_b > n]", "vs exact", "panels");
    for r in ccdf_exact_curve(&m, &log_grid(1, 100_000, 2))? {
        let exact = p.ln_exact_integer_ccdf(r.n)?;
        println!(
            "{:>7} {:>22} {:>10.1e} {:>6}",
            r.n,
            format!("exp({:.6})", r.ln_value),
            (r.ln_value - exact).exp_m1().abs(),
            r.subdivisions
        );
    }
    Ok(())
}
