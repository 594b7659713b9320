//! Upper incomplete gamma: closed forms, the recurrence, and the large-x expansion.
//!
//! ```text
//! cargo run --example gamma_functions
//! ```

use retrans::gammafn::{
    gamma, incomplete_gamma_asymptotic, regularized_upper_gamma, upper_gamma_eval,
    upper_incomplete_gamma,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("Γ(4.5) = {:.15}", gamma(4.5)?);
    for x in [0.5, 2.0, 20.0] {
        let e = upper_gamma_eval(x, 2.5)?;
        println!(
            "Γ({x}, 2.5) = {:.15e} via {:?} (est. rel err {:.1e}), Q = {:.6}",
            e.value,
            e.method,
            e.est_rel_err,
            regularized_upper_gamma(x, 2.5)?
        );
    }
    let x = 3.0;
    println!("Γ(x,2) vs (1+x)e^-x: {:.3e}", upper_incomplete_gamma(x, 2.0)? - (1.0 + x) * (-x).exp());
    println!("\nlarge-x expansion against the converged value at α = 3.5:");
    for x in [10.0, 20.0, 40.0, 80.0] {
        let exact = upper_incomplete_gamma(x, 3.5)?;
        let approx = incomplete_gamma_asymptotic(x, 3.5, 4);
        println!("  x = {x:>4}: rel err {:.2e}", (approx / exact - 1.0).abs());
    }
    Ok(())
}
