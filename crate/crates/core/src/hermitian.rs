//! Dense complex Hermitian matrices and the spectral toolkit built on them.
//!
//! Everything downstream (order predicates, rank tests, automorphisms) goes
//! through [`eig`], so its output is made deterministic: eigenvalues ascend
//! and each eigenvector is rotated so that its largest-magnitude entry is
//! real and positive.

use std::ops::{Add, Deref, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tolerance::Tolerances;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Relative asymmetry absorbed by symmetrization; anything larger is rejected.
pub const ASYMMETRY_LIMIT: f64 = 1e-12;

/// Largest supported dimension.
pub const MAX_DIM: usize = 64;

const EIG_MAX_SWEEPS_PER_DIM: usize = 1000;

#[inline]
pub(crate) fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// `⟨x, y⟩`, linear in the first argument.
#[inline]
pub fn inner(x: &CVector, y: &CVector) -> C64 {
    y.dotc(x)
}

/// Largest singular value of an arbitrary square matrix.
pub fn operator_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone()
        .singular_values()
        .iter()
        .copied()
        .fold(0.0, f64::max)
}

pub(crate) fn check_square_finite(m: &CMatrix) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    if m.nrows() == 0 {
        return Err(Error::DimensionTooSmall { dim: 0, min: 1 });
    }
    if m.nrows() > MAX_DIM {
        return Err(Error::DimensionTooLarge {
            dim: m.nrows(),
            max: MAX_DIM,
        });
    }
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let z = m[(i, j)];
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFinite { row: i, col: j });
            }
        }
    }
    Ok(())
}

pub(crate) fn check_same_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// A square complex matrix equal to its conjugate transpose, entry for entry.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    entries: CMatrix,
    correction: f64,
}

impl HermitianMatrix {
    /// Validates `m` and symmetrizes it as `(m + m*) / 2`.
    ///
    /// Inputs whose asymmetry `‖m − m*‖_F / max(1, ‖m‖_F)` exceeds
    /// [`ASYMMETRY_LIMIT`] are rejected. The Frobenius norm of the applied
    /// correction is kept in [`HermitianMatrix::correction`].
    pub fn new(m: CMatrix) -> Result<Self> {
        check_square_finite(&m)?;
        let skew = &m - m.adjoint();
        let asymmetry = skew.norm() / m.norm().max(1.0);
        if asymmetry > ASYMMETRY_LIMIT {
            return Err(Error::NotHermitian { asymmetry });
        }
        Ok(Self::symmetrized(m))
    }

    /// Symmetrizes without the asymmetry check. For results of operations
    /// that are Hermitian in exact arithmetic.
    pub(crate) fn symmetrized(m: CMatrix) -> Self {
        let d = m.nrows();
        let mut entries = CMatrix::zeros(d, d);
        let mut correction = 0.0;
        for i in 0..d {
            let diag = m[(i, i)];
            entries[(i, i)] = c(diag.re);
            correction += diag.im * diag.im;
            for j in (i + 1)..d {
                let upper = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
                let delta = m[(i, j)] - upper;
                correction += 2.0 * delta.norm_sqr();
                entries[(i, j)] = upper;
                entries[(j, i)] = upper.conj();
            }
        }
        HermitianMatrix {
            entries,
            correction: correction.sqrt(),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self::symmetrized(CMatrix::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        Self::scalar(dim, 1.0)
    }

    pub fn scalar(dim: usize, value: f64) -> Self {
        Self::symmetrized(CMatrix::from_diagonal_element(dim, dim, c(value)))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Result<Self> {
        let d = CVector::from_iterator(diag.len(), diag.iter().map(|&x| c(x)));
        Self::new(CMatrix::from_diagonal(&d))
    }

    /// Builds a Hermitian matrix from rows of complex entries.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let d = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != d) {
            return Err(Error::NotSquare {
                rows: d,
                cols: bad.len(),
            });
        }
        Self::new(CMatrix::from_fn(d, d, |i, j| rows[i][j]))
    }

    /// The rank-one projector `x ⊗ x` (no normalization applied).
    pub fn outer(x: &CVector) -> Self {
        Self::symmetrized(x * x.adjoint())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    #[inline]
    pub fn matrix(&self) -> &CMatrix {
        &self.entries
    }

    pub fn into_matrix(self) -> CMatrix {
        self.entries
    }

    /// Frobenius norm of the symmetrization applied at construction.
    pub fn correction(&self) -> f64 {
        self.correction
    }

    pub fn spectral_norm(&self) -> f64 {
        self.entries
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .fold(0.0, |acc: f64, x| acc.max(x.abs()))
    }

    /// `⟨Mx, x⟩`, real for Hermitian `M`.
    pub fn quadratic_form(&self, x: &CVector) -> f64 {
        inner(&(&self.entries * x), x).re
    }

    /// Entrywise complex conjugate in the standard basis.
    pub fn conjugate(&self) -> Self {
        HermitianMatrix {
            entries: self.entries.map(|z| z.conj()),
            correction: 0.0,
        }
    }

    /// `T M T*`.
    pub fn congruence(&self, t: &CMatrix) -> Self {
        Self::symmetrized(t * &self.entries * t.adjoint())
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::symmetrized(&self.entries * c(s))
    }

    pub fn trace(&self) -> f64 {
        self.entries.trace().re
    }

    pub fn is_finite(&self) -> bool {
        self.entries
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl Add for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn add(self, rhs: &HermitianMatrix) -> HermitianMatrix {
        HermitianMatrix::symmetrized(&self.entries + &rhs.entries)
    }
}

impl Sub for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn sub(self, rhs: &HermitianMatrix) -> HermitianMatrix {
        HermitianMatrix::symmetrized(&self.entries - &rhs.entries)
    }
}

impl Neg for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn neg(self) -> HermitianMatrix {
        HermitianMatrix::symmetrized(-&self.entries)
    }
}

impl Mul<f64> for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn mul(self, rhs: f64) -> HermitianMatrix {
        self.scale(rhs)
    }
}

/// Ascending eigenvalues with orthonormal eigenvectors stored column-wise.
#[derive(Debug, Clone)]
pub struct Eigendecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
}

impl Eigendecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn spectral_norm(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0, |acc: f64, x| acc.max(x.abs()))
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    pub fn vector(&self, k: usize) -> CVector {
        self.eigenvectors.column(k).into_owned()
    }

    /// Rebuilds `V f(Λ) V*` for a spectral function `f`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let scaled = CMatrix::from_fn(self.dim(), self.dim(), |i, k| {
            self.eigenvectors[(i, k)] * f(self.eigenvalues[k])
        });
        scaled * self.eigenvectors.adjoint()
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.map_spectrum(|x| x)
    }

    /// Absolute eigenvalue cut-off for numerical rank.
    pub fn rank_threshold(&self, tol: &Tolerances) -> f64 {
        tol.rank * Tolerances::scale(self.spectral_norm())
    }

    /// Indices of eigenvalues above the rank threshold in absolute value,
    /// ordered by descending magnitude.
    pub fn significant_indices(&self, tol: &Tolerances) -> Vec<usize> {
        let threshold = self.rank_threshold(tol);
        let mut idx: Vec<usize> = (0..self.dim())
            .filter(|&k| self.eigenvalues[k].abs() > threshold)
            .collect();
        idx.sort_by(|&a, &b| {
            self.eigenvalues[b]
                .abs()
                .total_cmp(&self.eigenvalues[a].abs())
                .then(a.cmp(&b))
        });
        idx
    }
}

/// Rotates `v` so its largest-magnitude entry (first on ties) is real positive.
pub(crate) fn fix_phase(v: &mut CVector) {
    let mut best = 0;
    let mut best_abs = -1.0;
    for (i, z) in v.iter().enumerate() {
        let a = z.norm();
        if a > best_abs {
            best = i;
            best_abs = a;
        }
    }
    if best_abs <= 0.0 {
        return;
    }
    let phase = v[best].conj() / best_abs;
    for z in v.iter_mut() {
        *z *= phase;
    }
    v[best] = c(best_abs);
}

/// Hermitian eigendecomposition with deterministic ordering and phases.
pub fn eig(m: &HermitianMatrix) -> Result<Eigendecomposition> {
    let d = m.dim();
    let decomposition = SymmetricEigen::try_new(
        m.matrix().clone(),
        f64::EPSILON,
        EIG_MAX_SWEEPS_PER_DIM * d.max(1),
    )
    .ok_or_else(|| Error::NumericalFailure("eigenvalue iteration did not converge".into()))?;

    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| {
        decomposition.eigenvalues[a]
            .total_cmp(&decomposition.eigenvalues[b])
            .then(a.cmp(&b))
    });

    let mut eigenvectors = CMatrix::zeros(d, d);
    let mut eigenvalues = Vec::with_capacity(d);
    for (k, &src) in order.iter().enumerate() {
        let mut v = decomposition.eigenvectors.column(src).into_owned();
        fix_phase(&mut v);
        eigenvectors.set_column(k, &v);
        eigenvalues.push(decomposition.eigenvalues[src]);
    }
    Ok(Eigendecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// A Hermitian matrix certified positive semidefinite at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct PsdMatrix {
    base: HermitianMatrix,
    min_eig: f64,
}

impl PsdMatrix {
    pub fn new(base: HermitianMatrix, tol: &Tolerances) -> Result<Self> {
        let e = eig(&base)?;
        Self::from_decomposition(base, &e, tol)
    }

    pub(crate) fn from_decomposition(
        base: HermitianMatrix,
        e: &Eigendecomposition,
        tol: &Tolerances,
    ) -> Result<Self> {
        let min_eig = e.min_eigenvalue();
        if min_eig < -tol.psd * Tolerances::scale(e.spectral_norm()) {
            return Err(Error::NotPsd { min_eig });
        }
        Ok(PsdMatrix { base, min_eig })
    }

    pub fn min_eig(&self) -> f64 {
        self.min_eig
    }

    pub fn as_hermitian(&self) -> &HermitianMatrix {
        &self.base
    }

    pub fn into_hermitian(self) -> HermitianMatrix {
        self.base
    }
}

impl Deref for PsdMatrix {
    type Target = HermitianMatrix;
    fn deref(&self) -> &HermitianMatrix {
        &self.base
    }
}

impl AsRef<HermitianMatrix> for PsdMatrix {
    fn as_ref(&self) -> &HermitianMatrix {
        &self.base
    }
}

/// The positive square root. Negative eigenvalues admitted by the PSD
/// certificate are clamped to zero before rooting.
pub fn sqrt_psd(a: &PsdMatrix) -> Result<PsdMatrix> {
    let e = eig(a)?;
    let root = HermitianMatrix::symmetrized(e.map_spectrum(|x| x.max(0.0).sqrt()));
    let min_eig = e.min_eigenvalue().max(0.0).sqrt();
    Ok(PsdMatrix {
        base: root,
        min_eig,
    })
}

/// Moore–Penrose pseudoinverse via the eigenbasis.
pub fn pinv(m: &HermitianMatrix, tol: &Tolerances) -> Result<HermitianMatrix> {
    let e = eig(m)?;
    let threshold = e.rank_threshold(tol);
    Ok(HermitianMatrix::symmetrized(e.map_spectrum(|x| {
        if x.abs() > threshold {
            1.0 / x
        } else {
            0.0
        }
    })))
}

pub fn rank_numeric(m: &HermitianMatrix, tol: &Tolerances) -> Result<usize> {
    Ok(eig(m)?.significant_indices(tol).len())
}

/// Orthonormal eigenvectors spanning the numerical range, largest
/// eigenvalue magnitude first.
pub fn range_basis(m: &HermitianMatrix, tol: &Tolerances) -> Result<Vec<CVector>> {
    let e = eig(m)?;
    Ok(e.significant_indices(tol)
        .into_iter()
        .map(|k| e.vector(k))
        .collect())
}

/// `x ⊗ y`, the operator `z ↦ ⟨z, y⟩ x`.
pub fn rank_one(x: &CVector, y: &CVector) -> Result<CMatrix> {
    check_same_dim(x.len(), y.len())?;
    Ok(x * y.adjoint())
}

/// Numerical rank of a set of column vectors, relative to the largest
/// singular value.
pub fn column_rank(columns: &[CVector], tol: &Tolerances) -> usize {
    let Some(first) = columns.first() else {
        return 0;
    };
    let m = CMatrix::from_columns(columns);
    debug_assert!(columns.iter().all(|v| v.len() == first.len()));
    let sv = m.singular_values();
    let top = sv.iter().copied().fold(0.0, f64::max);
    let threshold = tol.rank * Tolerances::scale(top);
    sv.iter().filter(|&&s| s > threshold).count()
}

/// `‖Q*Q − I‖` in spectral norm for the given columns.
pub fn orthonormality_defect(columns: &[CVector]) -> f64 {
    if columns.is_empty() {
        return 0.0;
    }
    let q = CMatrix::from_columns(columns);
    let gram = q.adjoint() * &q;
    operator_norm(&(gram - CMatrix::identity(columns.len(), columns.len())))
}

/// Orthogonal projector onto the span of orthonormal columns.
pub fn projector(columns: &[CVector], dim: usize) -> CMatrix {
    if columns.is_empty() {
        return CMatrix::zeros(dim, dim);
    }
    let q = CMatrix::from_columns(columns);
    &q * q.adjoint()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::*;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn residual(m: &HermitianMatrix, e: &Eigendecomposition) -> (f64, f64) {
        let rec = (m.matrix() - e.reconstruct()).norm() / m.spectral_norm().max(f64::MIN_POSITIVE);
        let d = m.dim();
        let orth = operator_norm(&(e.eigenvectors.adjoint() * &e.eigenvectors - CMatrix::identity(d, d)));
        (rec, orth)
    }

    #[test]
    fn eig_diagonal() {
        let m = HermitianMatrix::from_real_diagonal(&[3.0, 1.0]).unwrap();
        let e = eig(&m).unwrap();
        assert_eq!(e.eigenvalues, vec![1.0, 3.0]);
        assert_eq!(e.vector(0), CVector::from_vec(vec![c(0.0), c(1.0)]));
        assert_eq!(e.vector(1), CVector::from_vec(vec![c(1.0), c(0.0)]));
    }

    #[test]
    fn eig_swap() {
        let m = HermitianMatrix::from_rows(&[vec![c(0.0), c(1.0)], vec![c(1.0), c(0.0)]]).unwrap();
        let e = eig(&m).unwrap();
        assert!((e.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((e.eigenvalues[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn eig_residuals_on_random_hermitian() {
        let mut rng = rng(11);
        for _ in 0..1000 {
            let d = 2 + (rand::Rng::random_range(&mut rng, 0..7));
            let m = random_hermitian(&mut rng, d);
            let e = eig(&m).unwrap();
            let (rec, orth) = residual(&m, &e);
            assert!(rec <= 1e-10, "reconstruction residual {rec:e}");
            assert!(orth <= 1e-10, "orthonormality residual {orth:e}");
            assert!(e.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn eig_phase_convention() {
        let mut rng = rng(12);
        let m = random_hermitian(&mut rng, 5);
        let e = eig(&m).unwrap();
        for k in 0..5 {
            let v = e.vector(k);
            let (imax, _) = v
                .iter()
                .enumerate()
                .fold((0, -1.0), |(bi, bv), (i, z)| if z.norm() > bv { (i, z.norm()) } else { (bi, bv) });
            assert_eq!(v[imax].im, 0.0);
            assert!(v[imax].re > 0.0);
        }
        // Same input gives bit-identical output.
        let again = eig(&m).unwrap();
        assert_eq!(again.eigenvectors, e.eigenvectors);
    }

    #[test]
    fn constructor_symmetrizes_small_noise() {
        let mut m = CMatrix::from_fn(2, 2, |i, j| c((i + j) as f64));
        m[(0, 1)] += C64::new(1e-14, 0.0);
        let h = HermitianMatrix::new(m).unwrap();
        assert_eq!(h.matrix()[(0, 1)], h.matrix()[(1, 0)].conj());
        assert!(h.correction() > 0.0);
    }

    #[test]
    fn constructor_rejects_bad_input() {
        let m = CMatrix::from_fn(2, 2, |i, j| c((i * 2 + j) as f64));
        assert!(matches!(HermitianMatrix::new(m), Err(Error::NotHermitian { .. })));
        let m = CMatrix::zeros(2, 3);
        assert!(matches!(HermitianMatrix::new(m), Err(Error::NotSquare { .. })));
        let mut m = CMatrix::zeros(2, 2);
        m[(1, 1)] = c(f64::NAN);
        assert!(matches!(HermitianMatrix::new(m), Err(Error::NonFinite { row: 1, col: 1 })));
        assert!(HermitianMatrix::new(CMatrix::zeros(0, 0)).is_err());
        assert!(HermitianMatrix::new(CMatrix::zeros(65, 65)).is_err());
    }

    #[test]
    fn psd_certificate() {
        let t = tol();
        let p = PsdMatrix::new(HermitianMatrix::from_real_diagonal(&[0.0, 2.0]).unwrap(), &t).unwrap();
        assert_eq!(p.min_eig(), 0.0);
        let bad = PsdMatrix::new(HermitianMatrix::from_real_diagonal(&[-1e-3, 2.0]).unwrap(), &t);
        assert!(matches!(bad, Err(Error::NotPsd { .. })));
        // Within tolerance of the cone.
        PsdMatrix::new(HermitianMatrix::from_real_diagonal(&[-1e-12, 2.0]).unwrap(), &t).unwrap();
    }

    #[test]
    fn psd_quadratic_forms_nonnegative() {
        let t = tol();
        let mut rng = rng(13);
        for d in 2..=6 {
            let a = random_psd(&mut rng, d, d);
            let a = PsdMatrix::new(a, &t).unwrap();
            let norm = a.spectral_norm();
            for _ in 0..1000 {
                let x = random_unit(&mut rng, d);
                assert!(a.quadratic_form(&x) >= -t.psd * norm);
            }
        }
    }

    #[test]
    fn sqrt_examples() {
        let t = tol();
        let a = PsdMatrix::new(HermitianMatrix::from_real_diagonal(&[4.0, 9.0]).unwrap(), &t).unwrap();
        let r = sqrt_psd(&a).unwrap();
        let expected = HermitianMatrix::from_real_diagonal(&[2.0, 3.0]).unwrap();
        assert!((r.matrix() - expected.matrix()).norm() < 1e-14);

        let z = PsdMatrix::new(HermitianMatrix::zeros(3), &t).unwrap();
        assert_eq!(sqrt_psd(&z).unwrap().matrix(), &CMatrix::zeros(3, 3));
    }

    #[test]
    fn sqrt_squares_back() {
        let t = tol();
        let mut rng = rng(14);
        for d in 2..=8 {
            for _ in 0..50 {
                let g = random_square(&mut rng, d);
                let a = HermitianMatrix::new(g.adjoint() * &g).unwrap();
                let a = PsdMatrix::new(a, &t).unwrap();
                let r = sqrt_psd(&a).unwrap();
                let err = operator_norm(&(r.matrix() * r.matrix() - a.matrix()));
                assert!(err <= t.recon * a.spectral_norm().max(1.0), "d={d} err={err:e}");
                assert!(r.min_eig() >= 0.0);
            }
        }
    }

    #[test]
    fn pinv_examples() {
        let t = tol();
        let m = HermitianMatrix::from_real_diagonal(&[2.0, 0.0]).unwrap();
        let p = pinv(&m, &t).unwrap();
        assert!((p.matrix() - HermitianMatrix::from_real_diagonal(&[0.5, 0.0]).unwrap().matrix()).norm() < 1e-15);
        let i = HermitianMatrix::identity(4);
        assert!((pinv(&i, &t).unwrap().matrix() - i.matrix()).norm() < 1e-14);
    }

    #[test]
    fn pinv_penrose_identity() {
        let t = tol();
        let mut rng = rng(15);
        for _ in 0..100 {
            let m = random_psd(&mut rng, 4, 2);
            let p = pinv(&m, &t).unwrap();
            let err = operator_norm(&(m.matrix() * p.matrix() * m.matrix() - m.matrix()));
            assert!(err <= 1e-9 * m.spectral_norm().max(1.0), "{err:e}");
            let err = operator_norm(&(p.matrix() * m.matrix() * p.matrix() - p.matrix()));
            assert!(err <= 1e-9 * p.spectral_norm().max(1.0), "{err:e}");
        }
    }

    #[test]
    fn rank_examples() {
        let t = tol();
        let m = HermitianMatrix::from_real_diagonal(&[1.0, 0.0, 0.0]).unwrap();
        assert_eq!(rank_numeric(&m, &t).unwrap(), 1);
        let m = HermitianMatrix::from_real_diagonal(&[1e-15, 1.0]).unwrap();
        assert_eq!(rank_numeric(&m, &t).unwrap(), 1);
        assert_eq!(rank_numeric(&HermitianMatrix::zeros(3), &t).unwrap(), 0);
    }

    #[test]
    fn rank_of_gram_matches_column_count() {
        let t = tol();
        let mut rng = rng(16);
        for d in 2..=8 {
            for k in 0..=d {
                let g = random_columns(&mut rng, d, k);
                let m = HermitianMatrix::new(&g * g.adjoint()).unwrap();
                assert_eq!(rank_numeric(&m, &t).unwrap(), k, "d={d} k={k}");
            }
        }
    }

    #[test]
    fn range_basis_examples() {
        let t = tol();
        let b = range_basis(&HermitianMatrix::from_real_diagonal(&[1.0, 0.0]).unwrap(), &t).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b[0], CVector::from_vec(vec![c(1.0), c(0.0)]));
        assert!(range_basis(&HermitianMatrix::zeros(2), &t).unwrap().is_empty());

        let mut rng = rng(17);
        for d in 2..=6 {
            let x = random_unit(&mut rng, d);
            let b = range_basis(&HermitianMatrix::outer(&x), &t).unwrap();
            assert_eq!(b.len(), 1);
            assert!((inner(&b[0], &x).norm() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn rank_one_examples() {
        let e1 = CVector::from_vec(vec![c(1.0), c(0.0)]);
        let e2 = CVector::from_vec(vec![c(0.0), c(1.0)]);
        let m = rank_one(&e1, &e1).unwrap();
        assert_eq!(m, CMatrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(0.0)]));
        let m = rank_one(&e1, &e2).unwrap();
        assert_eq!(m, CMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(0.0), c(0.0)]));
        assert!(matches!(
            rank_one(&e1, &CVector::zeros(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn rank_one_definition() {
        let mut rng = rng(18);
        for d in 2..=6 {
            let (x, y, z) = (random_vector(&mut rng, d), random_vector(&mut rng, d), random_vector(&mut rng, d));
            let lhs = rank_one(&x, &y).unwrap() * &z;
            let rhs = &x * inner(&z, &y);
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn column_rank_counts_independent_columns() {
        let t = tol();
        let e1 = CVector::from_vec(vec![c(1.0), c(0.0), c(0.0)]);
        let e2 = CVector::from_vec(vec![c(0.0), c(1.0), c(0.0)]);
        assert_eq!(column_rank(&[e1.clone(), e2.clone()], &t), 2);
        assert_eq!(column_rank(&[e1.clone(), e1.clone() * c(2.0)], &t), 1);
        assert_eq!(column_rank(&[], &t), 0);
    }
}
