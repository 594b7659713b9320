//! Building coupled channel/document models, checking the coupling and deriving a document law.

use retrans::dists::{derive_doc_law, Bound, CoupledModel, DistSpec, SlowVarySpec, COUPLING_TOLERANCE};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let channel = DistSpec::exponential(2.0)?;
    let doc = DistSpec::gamma(2.0, 2.0)?;
    let ell = SlowVarySpec::GammaDocExact { rate: 2.0, shape: 2.0, channel_rate: 2.0 };
    for b in [2.0, 3.0, 4.0] {
        let m = CoupledModel::parametric(channel, doc, Bound::new(b)?, 1.0, ell)?;
        let r = m.validate_coupling();
        println!(
            "gamma doc, b = {b}: Ḡ(b) = {:.3e}, residual {:.2e}, within {COUPLING_TOLERANCE}: {}",
            m.gbar_bound(),
            r.max_residual,
            r.within(COUPLING_TOLERANCE)
        );
    }

    // the wrong tail index is caught
    let wrong = CoupledModel::parametric(
        DistSpec::exponential(1.0)?,
        DistSpec::exponential(2.0)?,
        Bound::new(4.0)?,
        1.5,
        SlowVarySpec::One,
    )?;
    println!("alpha = 1.5 for an alpha = 2 pair: residual {:.3}", wrong.validate_coupling().max_residual);

    let ell = SlowVarySpec::log_power(1.0, -1.0)?;
    let derived = derive_doc_law(DistSpec::weibull(0.5, 4.0)?, 1.5, ell, Bound::Unbounded)?;
    for x in [1.0, 10.0, 100.0] {
        println!("derived doc: P[L > {x}] = {:.4e}", derived.doc().ccdf(x));
    }
    Ok(())
}
