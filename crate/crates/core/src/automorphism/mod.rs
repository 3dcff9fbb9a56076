//! Order-automorphisms `A ↦ T A T* + X` and `A ↦ T Ā T* + X` of the
//! Hermitian matrices, and their recovery from a black box.

mod check;
pub mod oracle;
mod reconstruct;

pub use check::{check_order_automorphism, OrderCheckReport, OrderViolation};
pub use oracle::{AutomorphismOracle, CountingOracle, FnOracle, Oracle, SubprocessOracle};
pub use reconstruct::{
    reconstruct, reconstruct_with, ReconstructOptions, ReconstructionReport, PHASE_GAUGE_RULE,
    RECONSTRUCTION_RESIDUAL_LIMIT, VALIDATION_PROBES,
};

use crate::error::{Error, Result};
use crate::hermitian::{check_same_dim, check_square_finite, CMatrix, HermitianMatrix};
use crate::tolerance::Tolerances;

/// `(T, conjugate, X)` with `T` invertible.
///
/// The conjugate-linear branch is the matrix `T` composed with entrywise
/// conjugation in the standard basis.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderAutomorphism {
    t: CMatrix,
    conjugate: bool,
    x: HermitianMatrix,
}

impl OrderAutomorphism {
    /// Checks `σ_min(T) > tol.rank · σ_max(T)` and matching dimensions.
    pub fn new(t: CMatrix, conjugate: bool, x: HermitianMatrix, tol: &Tolerances) -> Result<Self> {
        check_square_finite(&t)?;
        check_same_dim(t.nrows(), x.dim())?;
        let sv = t.clone().singular_values();
        let sigma_max = sv.iter().copied().fold(0.0, f64::max);
        let sigma_min = sv.iter().copied().fold(f64::INFINITY, f64::min);
        if !(sigma_min > tol.rank * sigma_max) {
            return Err(Error::Singular { sigma_min });
        }
        Ok(OrderAutomorphism { t, conjugate, x })
    }

    pub fn identity(dim: usize) -> Self {
        OrderAutomorphism {
            t: CMatrix::identity(dim, dim),
            conjugate: false,
            x: HermitianMatrix::zeros(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.t.nrows()
    }

    pub fn t(&self) -> &CMatrix {
        &self.t
    }

    pub fn conjugate(&self) -> bool {
        self.conjugate
    }

    pub fn x(&self) -> &HermitianMatrix {
        &self.x
    }

    /// The homogeneous part `A ↦ T A T*` (or `T Ā T*`), without `X`.
    pub fn apply_linear_part(&self, a: &HermitianMatrix) -> Result<HermitianMatrix> {
        check_same_dim(self.dim(), a.dim())?;
        Ok(if self.conjugate {
            a.conjugate().congruence(&self.t)
        } else {
            a.congruence(&self.t)
        })
    }

    pub fn apply(&self, a: &HermitianMatrix) -> Result<HermitianMatrix> {
        Ok(&self.apply_linear_part(a)? + &self.x)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &OrderAutomorphism) -> Result<OrderAutomorphism> {
        check_same_dim(self.dim(), other.dim())?;
        let inner_t = if self.conjugate {
            other.t.map(|z| z.conj())
        } else {
            other.t.clone()
        };
        Ok(OrderAutomorphism {
            t: &self.t * inner_t,
            conjugate: self.conjugate ^ other.conjugate,
            x: self.apply(&other.x)?,
        })
    }

    pub fn invert(&self) -> Result<OrderAutomorphism> {
        let inv = self
            .t
            .clone()
            .try_inverse()
            .ok_or(Error::Singular { sigma_min: 0.0 })?;
        let t = if self.conjugate { inv.map(|z| z.conj()) } else { inv };
        let linear = OrderAutomorphism {
            t,
            conjugate: self.conjugate,
            x: HermitianMatrix::zeros(self.dim()),
        };
        let x = -&linear.apply_linear_part(&self.x)?;
        Ok(OrderAutomorphism { x, ..linear })
    }
}
