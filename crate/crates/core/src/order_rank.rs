//! Rank and range facts read off from the order relation alone.

use rand::Rng;

use crate::error::{Error, Result};
use crate::harness::generate::{random_hermitian, rng_from_seed};
use crate::hermitian::{
    check_same_dim, column_rank, eig, orthonormality_defect, projector, range_basis, rank_numeric,
    CMatrix, CVector, HermitianMatrix, PsdMatrix,
};
use crate::loewner::{compare, leq, max_lambda, Relation};
use crate::tolerance::Tolerances;

/// Orthonormality slack accepted for subspace bases.
pub const ORTHONORMAL_TOLERANCE: f64 = 1e-10;

/// Two positive minorants of `A` whose ranges meet only in zero, with
/// `rank E = n` and `rank F > 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct RankWitness {
    pub e: PsdMatrix,
    pub f: PsdMatrix,
    pub n: usize,
}

/// Outcome of probing the totality of the interval `[0, A]`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalTotality {
    pub total: bool,
    /// Two elements of `[0, A]` that are not comparable, when `total` is false.
    pub incomparable_pair: Option<(HermitianMatrix, HermitianMatrix)>,
    /// Number of sampled pairs checked (rank-one branch only).
    pub pairs_checked: usize,
}

/// Draws an element of `[0, A]` as `√A K √A` with `0 ≤ K ≤ I` random.
fn sample_interval<R: Rng>(root: &PsdMatrix, rng: &mut R) -> Result<HermitianMatrix> {
    let d = root.dim();
    let h = random_hermitian(rng, d);
    let e = eig(&h)?;
    let (lo, hi) = (e.min_eigenvalue(), e.max_eigenvalue());
    let span = if hi > lo { hi - lo } else { 1.0 };
    let k = HermitianMatrix::symmetrized(e.map_spectrum(|x| (x - lo) / span));
    Ok(k.congruence(root.matrix()))
}

/// Decides whether `A` has rank one through totality of `[0, A]`.
///
/// When `A` has two spectral directions above the rank threshold, the
/// scaled eigenprojections `λ₁P₁` and `λ₂P₂` both lie in `[0, A]` and are
/// incomparable; that pair is returned. Otherwise `samples` random pairs
/// from `[0, A]` are checked for comparability.
pub fn is_rank_one_by_order(
    a: &PsdMatrix,
    samples: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<IntervalTotality> {
    let e = eig(a)?;
    let significant = e.significant_indices(tol);
    if significant.is_empty() {
        return Err(Error::InvalidArgument("the interval [0, 0] is degenerate".into()));
    }
    if significant.len() >= 2 {
        let first = HermitianMatrix::outer(&e.vector(significant[0])).scale(e.eigenvalues[significant[0]]);
        let second = HermitianMatrix::outer(&e.vector(significant[1])).scale(e.eigenvalues[significant[1]]);
        if compare(&first, &second, tol)?.relation != Relation::Incomparable
            || !leq(&first, a, tol)?
            || !leq(&second, a, tol)?
        {
            return Err(Error::InternalInconsistency(
                "spectral counterexample to totality failed verification".into(),
            ));
        }
        return Ok(IntervalTotality {
            total: false,
            incomparable_pair: Some((first, second)),
            pairs_checked: 0,
        });
    }

    // Root restricted to the numerical range, so sub-threshold noise in `A`
    // does not leak into the samples.
    let root = PsdMatrix::new(
        HermitianMatrix::symmetrized(e.map_spectrum(|x| {
            if x > e.rank_threshold(tol) {
                x.sqrt()
            } else {
                0.0
            }
        })),
        tol,
    )?;
    let mut rng = rng_from_seed(seed);
    for checked in 0..samples {
        let s = sample_interval(&root, &mut rng)?;
        let t = sample_interval(&root, &mut rng)?;
        if compare(&s, &t, tol)?.relation == Relation::Incomparable {
            return Ok(IntervalTotality {
                total: false,
                incomparable_pair: Some((s, t)),
                pairs_checked: checked + 1,
            });
        }
    }
    Ok(IntervalTotality {
        total: true,
        incomparable_pair: None,
        pairs_checked: samples,
    })
}

/// Witness for `rank A > n + 1`: `E` is the sum of the `n` leading spectral
/// terms of `A` and `F` the sum of the remaining nonzero ones.
pub fn rank_gt_np1_witness(a: &PsdMatrix, n: usize, tol: &Tolerances) -> Result<Option<RankWitness>> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let e = eig(a)?;
    let significant = e.significant_indices(tol);
    if significant.len() <= n + 1 {
        return Ok(None);
    }
    let d = a.dim();
    let spectral_sum = |idx: &[usize]| {
        let mut m = CMatrix::zeros(d, d);
        for &k in idx {
            let v = e.vector(k);
            m += (&v * v.adjoint()) * crate::hermitian::c(e.eigenvalues[k]);
        }
        PsdMatrix::new(HermitianMatrix::symmetrized(m), tol)
    };
    let (head, tail) = significant.split_at(n);
    Ok(Some(RankWitness {
        e: spectral_sum(head)?,
        f: spectral_sum(tail)?,
        n,
    }))
}

/// True iff no rank-one positive `G` satisfies `G ≤ E` and `G ≤ F`, i.e.
/// `rng E ∩ rng F = {0}`.
pub fn no_common_rank1_minorant(e: &PsdMatrix, f: &PsdMatrix, tol: &Tolerances) -> Result<bool> {
    check_same_dim(e.dim(), f.dim())?;
    let mut stacked = range_basis(e, tol)?;
    let rank_e = stacked.len();
    let basis_f = range_basis(f, tol)?;
    let rank_f = basis_f.len();
    stacked.extend(basis_f);
    Ok(column_rank(&stacked, tol) == rank_e + rank_f)
}

/// Whether the ranges of rank-one positive operators are linearly
/// independent, i.e. not contained in a subspace of smaller dimension.
pub fn ranges_linearly_independent(operators: &[PsdMatrix], tol: &Tolerances) -> Result<bool> {
    let Some(first) = operators.first() else {
        return Ok(true);
    };
    let mut vectors = Vec::with_capacity(operators.len());
    for op in operators {
        check_same_dim(first.dim(), op.dim())?;
        let mut basis = range_basis(op, tol)?;
        if basis.len() != 1 {
            return Err(Error::RankPrecondition {
                expected: 1,
                found: basis.len(),
            });
        }
        vectors.push(basis.remove(0));
    }
    Ok(column_rank(&vectors, tol) == vectors.len())
}

/// Whether `T` leaves `span M` invariant and vanishes on its orthogonal
/// complement, i.e. `T = P T P` for the projector `P` onto `span M`.
pub fn acts_on(t: &PsdMatrix, subspace: &[CVector], tol: &Tolerances) -> Result<bool> {
    for v in subspace {
        check_same_dim(t.dim(), v.len())?;
    }
    let deviation = orthonormality_defect(subspace);
    if deviation > ORTHONORMAL_TOLERANCE {
        return Err(Error::NotOrthonormal { deviation });
    }
    let p = projector(subspace, t.dim());
    let compressed = &p * t.matrix() * &p;
    let diff = HermitianMatrix::symmetrized(t.matrix() - compressed);
    Ok(diff.spectral_norm() <= tol.psd * t.spectral_norm().max(1.0))
}

/// A rank-one positive `A ≤ T` whose range leaves `span` of the given
/// rank-one operators' ranges, searched among the spectral directions of
/// `T`. Returns `None` when no spectral direction of `T` escapes.
pub fn escaping_minorant(
    t: &PsdMatrix,
    operators: &[PsdMatrix],
    tol: &Tolerances,
) -> Result<Option<PsdMatrix>> {
    let mut spanning = Vec::with_capacity(operators.len());
    for op in operators {
        check_same_dim(t.dim(), op.dim())?;
        spanning.extend(range_basis(op, tol)?);
    }
    let e = eig(t)?;
    for k in e.significant_indices(tol) {
        let v = e.vector(k);
        let mut candidate = spanning.clone();
        candidate.push(v.clone());
        if column_rank(&candidate, tol) != candidate.len() {
            continue;
        }
        if let Some(lambda) = max_lambda(&v, t, tol)? {
            let a = PsdMatrix::new(HermitianMatrix::outer(&v).scale(lambda), tol)?;
            if rank_numeric(&a, tol)? == 1 && leq(&a, t, tol)? {
                return Ok(Some(a));
            }
        }
    }
    Ok(None)
}
