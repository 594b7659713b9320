use super::{Bound, BoundedDoc, DerivedLaw, DistError, DistSpec, DocLaw, SlowVarySpec};

/// Grid size for the hazard-proportionality residual.
pub const RESIDUAL_GRID_POINTS: usize = 64;
/// Grid size for the monotonicity check of a derived document law.
pub const MONOTONE_GRID_POINTS: usize = 256;
/// Residuals are only assessed where `Ḡ(x)` has dropped to this level.
pub const RESIDUAL_GBAR_START: f64 = 0.9;
/// Accepted hazard-proportionality residual.
pub const COUPLING_TOLERANCE: f64 = 0.05;
/// Channel survival level used to cap grids when `b` is unbounded.
const UNBOUNDED_GBAR_END: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CouplingMode {
    /// Both laws given explicitly; the relation is checked.
    Parametric,
    /// Document law constructed from the channel, `α` and `ℓ`.
    Derived,
}

/// Channel law `A`, bounded document law `L_b`, and the coupling
/// `F̄(x) = Ḡ(x)^α / ℓ(Ḡ(x)⁻¹)` between them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoupledModel {
    channel: DistSpec,
    doc: BoundedDoc,
    alpha: f64,
    ell: SlowVarySpec,
    mode: CouplingMode,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CouplingReport {
    pub max_residual: f64,
    /// `(x, |F̄(x) ℓ(Ḡ(x)⁻¹) Ḡ(x)^(−α) − 1|)` pairs.
    pub grid: Vec<(f64, f64)>,
}

impl CouplingReport {
    pub fn within(&self, tolerance: f64) -> bool {
        self.max_residual <= tolerance
    }
}

fn check_alpha(alpha: f64) -> Result<(), DistError> {
    if alpha > 0.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(DistError::InvalidParameter { name: "alpha", value: alpha })
    }
}

fn grid_end(channel: &DistSpec, bound: Bound) -> Result<f64, DistError> {
    match bound {
        Bound::Finite(b) => Ok(b),
        Bound::Unbounded => channel.quantile_ccdf(UNBOUNDED_GBAR_END),
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| {
        if i + 1 == n {
            hi
        } else {
            lo + (hi - lo) * i as f64 / (n - 1) as f64
        }
    })
}

impl CoupledModel {
    /// Both laws supplied; call [`CoupledModel::validate_coupling`] to check the relation.
    pub fn parametric(
        channel: DistSpec,
        doc: DistSpec,
        bound: Bound,
        alpha: f64,
        ell: SlowVarySpec,
    ) -> Result<Self, DistError> {
        channel.validate()?;
        doc.validate()?;
        ell.validate()?;
        check_alpha(alpha)?;
        Ok(CoupledModel {
            channel,
            doc: BoundedDoc::new(doc, bound)?,
            alpha,
            ell,
            mode: CouplingMode::Parametric,
        })
    }

    pub fn channel(&self) -> &DistSpec {
        &self.channel
    }

    pub fn doc(&self) -> &BoundedDoc {
        &self.doc
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn ell(&self) -> &SlowVarySpec {
        &self.ell
    }

    pub fn mode(&self) -> CouplingMode {
        self.mode
    }

    pub fn bound(&self) -> Bound {
        self.doc.bound()
    }

    /// `Ḡ(x) = P[A > x]`.
    pub fn gbar(&self, x: f64) -> f64 {
        self.channel.ccdf(x)
    }

    /// `Ḡ(b)`; zero when unbounded.
    pub fn gbar_bound(&self) -> f64 {
        self.channel.ccdf(self.bound().value())
    }

    /// The same model with a different bound.
    pub fn with_bound(&self, bound: Bound) -> Result<Self, DistError> {
        Ok(CoupledModel { doc: BoundedDoc::new(*self.doc.law(), bound)?, ..*self })
    }

    /// Hazard-proportionality residual on a 64-point grid from the point where `Ḡ = 0.9` up to
    /// `b` (or to `Ḡ = 1e−12` when unbounded).
    pub fn validate_coupling(&self) -> CouplingReport {
        let x_lo = self
            .channel
            .quantile_ccdf(RESIDUAL_GBAR_START)
            .expect("0.9 is a valid probability");
        let x_hi = grid_end(&self.channel, self.bound()).expect("valid tail probability");
        let x_hi = x_hi.max(x_lo);
        let law = self.doc.law();
        let grid: Vec<(f64, f64)> = linspace(x_lo, x_hi, RESIDUAL_GRID_POINTS)
            .map(|x| {
                let ln_g = self.channel.ln_ccdf(x);
                let ln_ratio = law.ln_ccdf(x) + self.ell.ln_value_at_ln(-ln_g) - self.alpha * ln_g;
                (x, ln_ratio.exp_m1().abs())
            })
            .collect();
        let max_residual = grid.iter().map(|&(_, r)| r).fold(0.0, f64::max);
        CouplingReport { max_residual, grid }
    }
}

/// Builds the document law `F̄(x) = min(1, Ḡ(x)^α / ℓ(Ḡ(x)⁻¹))` from the channel law.
///
/// The expression is only asymptotically meaningful, so it is clamped at one near the origin;
/// the first grid point where the raw value drops to at most one is recorded as the anchor.
pub fn derive_doc_law(
    channel: DistSpec,
    alpha: f64,
    ell: SlowVarySpec,
    bound: Bound,
) -> Result<CoupledModel, DistError> {
    channel.validate()?;
    ell.validate()?;
    check_alpha(alpha)?;
    let mut law = DerivedLaw { channel, alpha, ell, anchor: 0.0 };
    let x_hi = grid_end(&channel, bound)?;
    let mut anchor = None;
    let mut prev = f64::INFINITY;
    for x in linspace(0.0, x_hi, MONOTONE_GRID_POINTS) {
        let raw = law.ln_raw(x);
        if anchor.is_none() && raw <= 0.0 {
            anchor = Some(x);
        }
        let clamped = raw.min(0.0);
        if clamped > prev + 1e-12 {
            return Err(DistError::NotMonotone { x });
        }
        prev = clamped;
    }
    law.anchor = anchor.unwrap_or(x_hi);
    Ok(CoupledModel {
        channel,
        doc: BoundedDoc::new(DocLaw::Derived(law), bound)?,
        alpha,
        ell,
        mode: CouplingMode::Derived,
    })
}
