//! The Loewner order `A ≤ B ⟺ B − A ⪰ 0`, with witnesses for failures.
//!
//! A witness is a unit vector `x` with `⟨Ax,x⟩ > ⟨Bx,x⟩`. It is taken from
//! the eigenvector of the most negative eigenvalue of `B − A`, which is the
//! vector maximizing the gap.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermitian::{
    check_same_dim, eig, inner, range_basis, rank_numeric, CVector, HermitianMatrix, PsdMatrix,
};
use crate::tolerance::Tolerances;

/// Allowed deviation of an input vector's norm from one.
pub const UNIT_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Relation {
    Leq,
    Geq,
    Equal,
    Incomparable,
}

/// A unit vector `x` refuting `A ≤ B`, with `gap = ⟨Ax,x⟩ − ⟨Bx,x⟩ > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderWitness {
    pub x: CVector,
    pub gap: f64,
}

impl OrderWitness {
    /// Recomputes the gap from the quadratic forms.
    pub fn evaluate(&self, a: &HermitianMatrix, b: &HermitianMatrix) -> f64 {
        a.quadratic_form(&self.x) - b.quadratic_form(&self.x)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrderResult {
    pub relation: Relation,
    /// Refutes `A ≤ B`.
    pub witness_ab: Option<OrderWitness>,
    /// Refutes `B ≤ A`.
    pub witness_ba: Option<OrderWitness>,
}

/// Absolute eigenvalue slack used when comparing `a` and `b`.
pub fn order_threshold(a: &HermitianMatrix, b: &HermitianMatrix, tol: &Tolerances) -> f64 {
    tol.psd * a.spectral_norm().max(b.spectral_norm()).max(1.0)
}

/// Returns a witness against `a ≤ b`, or `None` when `b − a` is PSD within
/// `threshold`.
fn refute_leq(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    threshold: f64,
) -> Result<Option<OrderWitness>> {
    let e = eig(&(b - a))?;
    if e.min_eigenvalue() >= -threshold {
        return Ok(None);
    }
    let x = e.vector(0);
    let gap = a.quadratic_form(&x) - b.quadratic_form(&x);
    Ok(Some(OrderWitness { x, gap }))
}

/// `A ≤ B` up to `tol.psd` relative to `max(‖A‖, ‖B‖, 1)`.
pub fn leq(a: &HermitianMatrix, b: &HermitianMatrix, tol: &Tolerances) -> Result<bool> {
    check_same_dim(a.dim(), b.dim())?;
    let threshold = order_threshold(a, b, tol);
    Ok(eig(&(b - a))?.min_eigenvalue() >= -threshold)
}

pub fn compare(a: &HermitianMatrix, b: &HermitianMatrix, tol: &Tolerances) -> Result<OrderResult> {
    check_same_dim(a.dim(), b.dim())?;
    let threshold = order_threshold(a, b, tol);
    let witness_ab = refute_leq(a, b, threshold)?;
    let witness_ba = refute_leq(b, a, threshold)?;
    let relation = match (&witness_ab, &witness_ba) {
        (None, None) => Relation::Equal,
        (None, Some(_)) => Relation::Leq,
        (Some(_), None) => Relation::Geq,
        (Some(_), Some(_)) => Relation::Incomparable,
    };
    Ok(OrderResult {
        relation,
        witness_ab,
        witness_ba,
    })
}

fn check_unit(x: &CVector) -> Result<()> {
    let norm = x.norm();
    if !norm.is_finite() || (norm - 1.0).abs() > UNIT_TOLERANCE {
        return Err(Error::NotUnit { norm });
    }
    Ok(())
}

/// Largest `λ > 0` with `λ·(x ⊗ x) ≤ B`, or `None` when `x ∉ rng √B`.
///
/// Range membership uses the least-squares residual `‖√B (√B)⁺ x − x‖`
/// against `tol.range`; the extremal value is `1 / ‖(√B)⁺ x‖²`. Both
/// pseudoinverses are cut at the same rank threshold as
/// [`rank_numeric`]. The closed form is then checked against the order
/// predicate: `λ` must be feasible, and `(1 + η)·λ` infeasible, where
/// `η ≥ 10·tol.psd` is the smallest relative step whose eigenvalue drop
/// is guaranteed to clear the order threshold.
pub fn max_lambda(x: &CVector, b: &PsdMatrix, tol: &Tolerances) -> Result<Option<f64>> {
    check_same_dim(b.dim(), x.len())?;
    check_unit(x)?;

    let e = eig(b)?;
    let significant = e.significant_indices(tol);
    let mut projected = CVector::zeros(x.len());
    let mut root_pinv_sq = 0.0;
    let mut pinv_sq = 0.0;
    for &k in &significant {
        let v = e.vector(k);
        let coeff = inner(x, &v);
        let eigenvalue = e.eigenvalues[k];
        projected += &v * coeff;
        root_pinv_sq += coeff.norm_sqr() / eigenvalue;
        pinv_sq += coeff.norm_sqr() / (eigenvalue * eigenvalue);
    }
    if (&projected - x).norm() > tol.range || root_pinv_sq <= 0.0 {
        return Ok(None);
    }
    let lambda = 1.0 / root_pinv_sq;

    let candidate = HermitianMatrix::outer(x).scale(lambda);
    if !leq(&candidate, b, tol)? {
        return Err(Error::InternalInconsistency(format!(
            "closed-form lambda {lambda:e} is infeasible"
        )));
    }
    let threshold = tol.psd * e.spectral_norm().max(lambda).max(1.0);
    let step = (10.0 * threshold * lambda * pinv_sq).max(10.0 * tol.psd);
    if step <= 1.0 {
        let beyond = HermitianMatrix::outer(x).scale((1.0 + step) * lambda);
        if leq(&beyond, b, tol)? {
            return Err(Error::InternalInconsistency(format!(
                "lambda {lambda:e} is not extremal: (1 + {step:e})·lambda is still feasible"
            )));
        }
    }
    Ok(Some(lambda))
}

/// For rank-one `A`: whether `λA ≤ B` for some `λ > 0`, decided as
/// `rng A ⊂ rng B` and cross-checked through [`max_lambda`].
pub fn range_dominates(a: &PsdMatrix, b: &PsdMatrix, tol: &Tolerances) -> Result<bool> {
    check_same_dim(a.dim(), b.dim())?;
    let rank = rank_numeric(a, tol)?;
    if rank != 1 {
        return Err(Error::RankPrecondition {
            expected: 1,
            found: rank,
        });
    }
    let u = range_basis(a, tol)?.remove(0);
    let basis = range_basis(b, tol)?;
    let mut projected = CVector::zeros(u.len());
    for v in &basis {
        projected += v * inner(&u, v);
    }
    let by_range = (&projected - &u).norm() <= tol.range;
    let by_lambda = max_lambda(&u, b, tol)?.is_some();
    if by_range != by_lambda {
        return Err(Error::InternalInconsistency(
            "range test and extremal-lambda test disagree".into(),
        ));
    }
    Ok(by_range)
}
