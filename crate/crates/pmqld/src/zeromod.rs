//! Zero modification of a discrete base distribution.
//!
//! The wrapper reweights the probability at zero by a parameter φ and scales
//! the rest of the mass by 1 − φ. Negative φ deflates zeros down to the
//! zero-truncated limit, positive φ inflates them, φ = 1 degenerates at
//! zero. Because φ may be negative this is not a finite mixture; it stays a
//! valid distribution exactly on the interval reported by
//! [`phi_lower_bound`].

use crate::dist::CountDistribution;
use crate::error::{Error, Result};
use serde::Serialize;

/// Zero-modification regimes, classified from φ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ZmRegime {
    ZeroTruncated,
    ZeroDeflated,
    Unmodified,
    ZeroInflated,
    Degenerate,
}

/// Tightest admissible φ: −f(0)/(1 − f(0)), at which the zero probability
/// vanishes.
pub fn phi_lower_bound<D: CountDistribution>(base: &D) -> Result<f64> {
    let f0 = base.pmf(0);
    if f0.is_nan() {
        return Err(Error::Numeric(
            "base mass function is improper at zero".into(),
        ));
    }
    if f0 >= 1.0 {
        return Err(Error::Domain(
            "base distribution is degenerate at zero; no zero modification exists".into(),
        ));
    }
    Ok(-f0 / (1.0 - f0))
}

/// A base distribution with its mass at zero reweighted by φ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZeroModified<D> {
    phi: f64,
    base: D,
}

/// Boundary tolerance for regime classification and φ validation.
const PHI_TOL: f64 = 1e-12;

impl<D: CountDistribution> ZeroModified<D> {
    pub fn new(phi: f64, base: D) -> Result<Self> {
        if !phi.is_finite() {
            return Err(Error::Parameter(format!("phi must be finite, got {phi}")));
        }
        let lower = phi_lower_bound(&base)?;
        if phi < lower - PHI_TOL || phi > 1.0 + PHI_TOL {
            return Err(Error::Parameter(format!(
                "phi must lie in [{lower}, 1], got {phi}"
            )));
        }
        Ok(Self {
            phi: phi.clamp(lower, 1.0),
            base,
        })
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn base(&self) -> &D {
        &self.base
    }

    pub fn pmf(&self, x: u64) -> f64 {
        if x == 0 {
            (self.phi + (1.0 - self.phi) * self.base.pmf(0)).max(0.0)
        } else {
            (1.0 - self.phi) * self.base.pmf(x)
        }
    }

    pub fn log_pmf(&self, x: u64) -> f64 {
        if x == 0 {
            self.pmf(0).ln()
        } else {
            (1.0 - self.phi).ln() + self.base.log_pmf(x)
        }
    }

    /// F_zm(x) = φ + (1 − φ) F(x), clipped to [0, 1]; a valid distribution
    /// function for every admissible φ including negative values.
    pub fn cdf(&self, x: u64) -> Result<f64> {
        let f = self.base.cdf(x)?;
        Ok((self.phi + (1.0 - self.phi) * f).clamp(0.0, 1.0))
    }

    pub fn classify_regime(&self) -> Result<ZmRegime> {
        let lower = phi_lower_bound(&self.base)?;
        Ok(if (self.phi - lower).abs() <= PHI_TOL {
            ZmRegime::ZeroTruncated
        } else if (self.phi - 1.0).abs() <= PHI_TOL {
            ZmRegime::Degenerate
        } else if self.phi.abs() <= PHI_TOL {
            ZmRegime::Unmodified
        } else if self.phi < 0.0 {
            ZmRegime::ZeroDeflated
        } else {
            ZmRegime::ZeroInflated
        })
    }
}

impl<D: CountDistribution> CountDistribution for ZeroModified<D> {
    fn log_pmf(&self, x: u64) -> f64 {
        ZeroModified::log_pmf(self, x)
    }

    fn cdf(&self, x: u64) -> Result<f64> {
        ZeroModified::cdf(self, x)
    }
}
