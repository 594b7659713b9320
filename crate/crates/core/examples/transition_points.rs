//! Where the power-law body hands over to the geometric tail.

use retrans::asym::ApproxParams;
use retrans::dists::{Bound, CoupledModel, DistSpec, SlowVarySpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for b in [1.0, 2.0, 4.0, 8.0] {
        let m = CoupledModel::parametric(
            DistSpec::exponential(1.0)?,
            DistSpec::exponential(2.0)?,
            Bound::new(b)?,
            2.0,
            SlowVarySpec::One,
        )?;
        let p = ApproxParams::from_model(&m);
        let t = p.transition_point()?;
        println!(
            "b = {b}: heuristic α/Ḡ(b) = {:>9.2}, fixed point of nḠ(b) = α ln n: {:>9.2}",
            t.n_heuristic, t.n_fixed_point
        );
    }
    Ok(())
}
