use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Numerical thresholds shared by every predicate in the crate.
///
/// Each threshold is applied relative to a spectral norm, falling back to an
/// absolute threshold when that norm is below one (see [`Tolerances::scale`]).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Smallest admissible eigenvalue for a "positive" matrix, relative.
    pub psd: f64,
    /// Eigenvalue / singular value cut-off used for numerical rank.
    pub rank: f64,
    /// Residual cut-off for range membership of unit vectors.
    pub range: f64,
    /// Reconstruction residual bound for decompositions.
    pub recon: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        psd: 1e-9,
        rank: 1e-8,
        range: 1e-8,
        recon: 1e-10,
    };

    pub fn new(psd: f64, rank: f64, range: f64, recon: f64) -> Result<Self> {
        let tol = Tolerances {
            psd,
            rank,
            range,
            recon,
        };
        tol.validate()?;
        Ok(tol)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("psd", self.psd),
            ("rank", self.rank),
            ("range", self.range),
            ("recon", self.recon),
        ] {
            if !(value > 0.0 && value < 1.0) {
                return Err(Error::InvalidTolerances(format!(
                    "{name} must lie in (0, 1), got {value}"
                )));
            }
        }
        Ok(())
    }

    /// Norm used to turn a relative tolerance into an absolute one.
    #[inline]
    pub fn scale(norm: f64) -> f64 {
        norm.max(1.0)
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}
