//! Matrix, vector and automorphism JSON formats.
//!
//! A matrix is `{"dim": d, "entries": [[[re, im], ...], ...]}` with `d` rows
//! of `d` entries. Floats are written by `serde_json`, which emits the
//! shortest decimal that round-trips to the same `f64` (at most 17
//! significant digits), so stored values survive a write/read cycle exactly.

use serde::{Deserialize, Serialize};

use crate::automorphism::OrderAutomorphism;
use crate::error::{Error, Result};
use crate::hermitian::{check_square_finite, CMatrix, CVector, HermitianMatrix, C64};
use crate::tolerance::Tolerances;

/// Maps `-0.0` to `0.0` so output does not depend on the sign of zero.
fn unsigned_zero(x: f64) -> f64 {
    x + 0.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub dim: usize,
    pub entries: Vec<Vec<[f64; 2]>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &CMatrix) -> Self {
        MatrixJson {
            dim: m.nrows(),
            entries: (0..m.nrows())
                .map(|i| (0..m.ncols()).map(|j| [unsigned_zero(m[(i, j)].re), unsigned_zero(m[(i, j)].im)]).collect())
                .collect(),
        }
    }

    pub fn from_hermitian(h: &HermitianMatrix) -> Self {
        Self::from_matrix(h.matrix())
    }

    /// A general square matrix; no symmetry requirement.
    pub fn to_matrix(&self) -> Result<CMatrix> {
        if self.entries.len() != self.dim {
            return Err(Error::NotSquare {
                rows: self.entries.len(),
                cols: self.dim,
            });
        }
        if let Some(row) = self.entries.iter().find(|r| r.len() != self.dim) {
            return Err(Error::NotSquare {
                rows: self.dim,
                cols: row.len(),
            });
        }
        let m = CMatrix::from_fn(self.dim, self.dim, |i, j| {
            let [re, im] = self.entries[i][j];
            C64::new(re, im)
        });
        check_square_finite(&m)?;
        Ok(m)
    }

    pub fn to_hermitian(&self) -> Result<HermitianMatrix> {
        HermitianMatrix::new(self.to_matrix()?)
    }
}

/// A complex vector as `[[re, im], ...]`. Bare real numbers are accepted
/// on input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VectorJson(pub Vec<ComplexJson>);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComplexJson {
    Pair([f64; 2]),
    Real(f64),
}

impl VectorJson {
    pub fn from_vector(v: &CVector) -> Self {
        VectorJson(v.iter().map(|z| ComplexJson::Pair([unsigned_zero(z.re), unsigned_zero(z.im)])).collect())
    }

    pub fn to_vector(&self) -> Result<CVector> {
        let v = CVector::from_iterator(
            self.0.len(),
            self.0.iter().map(|z| match *z {
                ComplexJson::Pair([re, im]) => C64::new(re, im),
                ComplexJson::Real(re) => C64::new(re, 0.0),
            }),
        );
        if let Some(i) = v.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite { row: i, col: 0 });
        }
        Ok(v)
    }
}

/// `{"T": matrix, "conjugate": bool, "X": matrix}`; `T` need not be Hermitian.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AutomorphismJson {
    #[serde(rename = "T")]
    pub t: MatrixJson,
    pub conjugate: bool,
    #[serde(rename = "X")]
    pub x: MatrixJson,
}

impl AutomorphismJson {
    pub fn from_automorphism(phi: &OrderAutomorphism) -> Self {
        AutomorphismJson {
            t: MatrixJson::from_matrix(phi.t()),
            conjugate: phi.conjugate(),
            x: MatrixJson::from_hermitian(phi.x()),
        }
    }

    pub fn to_automorphism(&self, tol: &Tolerances) -> Result<OrderAutomorphism> {
        OrderAutomorphism::new(self.t.to_matrix()?, self.conjugate, self.x.to_hermitian()?, tol)
    }
}

pub fn parse_hermitian(text: &str) -> Result<HermitianMatrix> {
    serde_json::from_str::<MatrixJson>(text)?.to_hermitian()
}

pub fn hermitian_to_string(h: &HermitianMatrix) -> String {
    serde_json::to_string(&MatrixJson::from_hermitian(h)).expect("matrix JSON is always serializable")
}
