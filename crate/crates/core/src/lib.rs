//! Distribution of the number of retransmissions `N_b` needed to send a document of random size
//! `L_b ≤ b` over a channel whose availability periods `A` are i.i.d.
//!
//! Three independent routes to `P[N_b > n]`:
//!
//! - [`mc`]: seeded, parallel Monte Carlo with Wilson intervals;
//! - [`oracle`]: adaptive quadrature of `E[(1 − Ḡ(L_b))ⁿ]`;
//! - [`asym`]: closed-form approximations (uniform, power law, geometric tail, log scale).
//!
//! [`experiment`] ties them together into config-driven runs with CSV/JSON output.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dists;
pub mod gammafn;
pub mod quad;
pub mod rng;
pub mod oracle;
pub mod asym;
pub mod mc;
pub mod stats;
pub mod experiment;
