//! Commutativity, complementarity and orthogonality of observables, and
//! which order-automorphisms preserve them.
//!
//! An automorphism `A ↦ T A T* + X` preserves commutativity or
//! complementarity exactly when `T*T = λI` and `X = μI`, and orthogonality
//! exactly when `T*T = λI` and `X = 0`. The classifier decides from `(T, X)`
//! and then produces a concrete pair of observables, checked through the
//! relation predicates, whenever the answer is negative.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::automorphism::OrderAutomorphism;
use crate::error::{Error, Result};
use crate::harness::generate::{derive_seed, random_hermitian, random_unit, rng_from_seed};
use crate::hermitian::{
    c, check_same_dim, column_rank, eig, operator_norm, CMatrix, CVector, HermitianMatrix,
    PsdMatrix,
};
use crate::tolerance::Tolerances;

/// Relative tolerance of the analytic scalar tests.
pub const CLASSIFIER_TOLERANCE: f64 = 1e-9;

/// Largest dimension accepted by [`complementary`].
pub const MAX_COMPLEMENTARITY_DIM: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RelationKind {
    Commutativity,
    Complementarity,
    Orthogonality,
}

impl RelationKind {
    pub const ALL: [RelationKind; 3] = [
        RelationKind::Commutativity,
        RelationKind::Complementarity,
        RelationKind::Orthogonality,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RelationKind::Commutativity => "commutativity",
            RelationKind::Complementarity => "complementarity",
            RelationKind::Orthogonality => "orthogonality",
        }
    }
}

impl fmt::Display for RelationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RelationKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "commutativity" | "commute" | "compatibility" => Ok(RelationKind::Commutativity),
            "complementarity" | "complementary" => Ok(RelationKind::Complementarity),
            "orthogonality" | "orthogonal" => Ok(RelationKind::Orthogonality),
            _ => Err(Error::InvalidArgument(format!("unknown relation `{s}`"))),
        }
    }
}

/// `φ(A) = λ U A U* + μ I`, with `U` unitary (or antiunitary when
/// `antiunitary` is set). `mu` is absent for orthogonality.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalForm {
    pub u: CMatrix,
    pub antiunitary: bool,
    pub lambda: f64,
    pub mu: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Counterexample {
    pub a: HermitianMatrix,
    pub b: HermitianMatrix,
    pub holds_before: bool,
    pub holds_after: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PreserverClassification {
    pub kind: RelationKind,
    pub preserves: bool,
    pub canonical_form: Option<CanonicalForm>,
    pub counterexample: Option<Counterexample>,
    /// Candidate pairs examined before a counterexample was found.
    pub attempts: usize,
}

fn product_threshold(a: &HermitianMatrix, b: &HermitianMatrix, tol: &Tolerances) -> f64 {
    tol.psd * (a.spectral_norm() * b.spectral_norm()).max(1.0)
}

/// `‖AB − BA‖ ≤ tol.psd · max(1, ‖A‖‖B‖)`.
pub fn commute(a: &HermitianMatrix, b: &HermitianMatrix, tol: &Tolerances) -> Result<bool> {
    check_same_dim(a.dim(), b.dim())?;
    let ab = a.matrix() * b.matrix();
    let ba = b.matrix() * a.matrix();
    Ok(operator_norm(&(ab - ba)) <= product_threshold(a, b, tol))
}

/// `‖AB‖ ≤ tol.psd · max(1, ‖A‖‖B‖)`.
pub fn orthogonal(a: &HermitianMatrix, b: &HermitianMatrix, tol: &Tolerances) -> Result<bool> {
    check_same_dim(a.dim(), b.dim())?;
    Ok(operator_norm(&(a.matrix() * b.matrix())) <= product_threshold(a, b, tol))
}

/// Eigenvectors of `a` grouped by single-linkage clustering of the
/// ascending eigenvalues at gap `tol.rank · max(1, ‖A‖)`.
pub fn spectral_clusters(a: &HermitianMatrix, tol: &Tolerances) -> Result<Vec<Vec<CVector>>> {
    let e = eig(a)?;
    let gap = e.rank_threshold(tol);
    let mut clusters: Vec<Vec<CVector>> = Vec::new();
    for k in 0..e.dim() {
        let starts_new = k == 0 || e.eigenvalues[k] - e.eigenvalues[k - 1] > gap;
        if starts_new {
            clusters.push(Vec::new());
        }
        clusters.last_mut().expect("cluster exists").push(e.vector(k));
    }
    Ok(clusters)
}

fn check_complementarity_dim(dim: usize) -> Result<()> {
    if dim > MAX_COMPLEMENTARITY_DIM {
        return Err(Error::DimensionTooLarge {
            dim,
            max: MAX_COMPLEMENTARITY_DIM,
        });
    }
    Ok(())
}

/// Bases of the maximal nontrivial spectral projections: every cluster
/// but one. Every nontrivial spectral projection lies below one of these.
fn maximal_projection_bases(clusters: &[Vec<CVector>]) -> Vec<Vec<CVector>> {
    if clusters.len() < 2 {
        return Vec::new();
    }
    (0..clusters.len())
        .map(|skip| {
            clusters
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .flat_map(|(_, c)| c.iter().cloned())
                .collect()
        })
        .collect()
}

fn projector_of(basis: &[CVector], dim: usize) -> HermitianMatrix {
    HermitianMatrix::symmetrized(crate::hermitian::projector(basis, dim))
}

/// A nontrivial spectral projection of `a` and one of `b` whose ranges
/// intersect, or `None` when `a` and `b` are complementary.
///
/// Intersections only grow with the projections, so it suffices to test
/// the maximal nontrivial ones (all eigenvalue clusters but one).
pub fn complementarity_violation(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    tol: &Tolerances,
) -> Result<Option<(HermitianMatrix, HermitianMatrix)>> {
    check_same_dim(a.dim(), b.dim())?;
    check_complementarity_dim(a.dim())?;
    let pa = maximal_projection_bases(&spectral_clusters(a, tol)?);
    let pb = maximal_projection_bases(&spectral_clusters(b, tol)?);
    for p in &pa {
        for q in &pb {
            let mut stacked = p.clone();
            stacked.extend(q.iter().cloned());
            if column_rank(&stacked, tol) < p.len() + q.len() {
                return Ok(Some((projector_of(p, a.dim()), projector_of(q, a.dim()))));
            }
        }
    }
    Ok(None)
}

pub fn complementary(a: &HermitianMatrix, b: &HermitianMatrix, tol: &Tolerances) -> Result<bool> {
    Ok(complementarity_violation(a, b, tol)?.is_none())
}

pub fn relation_holds(
    kind: RelationKind,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    tol: &Tolerances,
) -> Result<bool> {
    match kind {
        RelationKind::Commutativity => commute(a, b, tol),
        RelationKind::Complementarity => complementary(a, b, tol),
        RelationKind::Orthogonality => orthogonal(a, b, tol),
    }
}

fn scalar_of(e: &crate::hermitian::Eigendecomposition) -> Option<f64> {
    let (lo, hi) = (e.min_eigenvalue(), e.max_eigenvalue());
    if hi - lo <= CLASSIFIER_TOLERANCE * e.spectral_norm().max(1.0) {
        Some(e.eigenvalues.iter().sum::<f64>() / e.dim() as f64)
    } else {
        None
    }
}

/// `Some(λ)` when `M = λI` up to [`CLASSIFIER_TOLERANCE`], judged by the
/// spread of the spectrum.
pub fn local_linear_dependence_scalar(m: &PsdMatrix) -> Option<f64> {
    eig(m).ok().and_then(|e| scalar_of(&e))
}

/// `Some(μ)` when the Hermitian matrix is `μI` up to [`CLASSIFIER_TOLERANCE`].
pub fn scalar_value(m: &HermitianMatrix) -> Option<f64> {
    eig(m).ok().and_then(|e| scalar_of(&e))
}

/// Two orthonormal vectors `x, y` whose images under the linear part
/// of `phi` are not orthogonal: the balanced combinations of the extreme
/// eigenvectors of `T*T`, conjugated for the conjugate-linear branch.
fn skewed_pair(phi: &OrderAutomorphism) -> Result<(CVector, CVector)> {
    let gram = HermitianMatrix::symmetrized(phi.t().adjoint() * phi.t());
    let e = eig(&gram)?;
    let (lo, hi) = (e.vector(0), e.vector(e.dim() - 1));
    let s = c(std::f64::consts::FRAC_1_SQRT_2);
    let (mut x, mut y) = ((&lo + &hi) * s, (&lo - &hi) * s);
    if phi.conjugate() {
        x = x.map(|z| z.conj());
        y = y.map(|z| z.conj());
    }
    Ok((x, y))
}

/// Deterministic candidates built from the structure of `(T, X)`.
fn constructed_candidates(
    phi: &OrderAutomorphism,
    inverse: &OrderAutomorphism,
    kind: RelationKind,
    x_scalar: Option<f64>,
    tol: &Tolerances,
) -> Result<Vec<(HermitianMatrix, HermitianMatrix)>> {
    let d = phi.dim();
    let zero = HermitianMatrix::zeros(d);
    let x = phi.x();
    let mut out = Vec::new();
    match kind {
        RelationKind::Commutativity => {
            if x_scalar.is_none() {
                // 0 commutes with everything; φ(0) = X does not.
                let e = eig(x)?;
                let v = (e.vector(0) + e.vector(d - 1)) * c(std::f64::consts::FRAC_1_SQRT_2);
                out.push((zero.clone(), inverse.apply(&HermitianMatrix::outer(&v))?));
            }
            let (u, v) = skewed_pair(phi)?;
            out.push((HermitianMatrix::outer(&u), HermitianMatrix::outer(&v)));
        }
        RelationKind::Complementarity => {
            match x_scalar {
                None => {
                    // 0 is complementary to everything; φ(0) = X is not.
                    let clusters = spectral_clusters(x, tol)?;
                    let p = projector_of(&clusters[0], d);
                    out.push((zero.clone(), inverse.apply(&p)?));
                }
                Some(mu) => {
                    // Preimage of a scalar paired with one of its own spectral
                    // projections.
                    let a = inverse.apply(&HermitianMatrix::scalar(d, mu + 1.0))?;
                    let clusters = spectral_clusters(&a, tol)?;
                    if clusters.len() > 1 {
                        out.push((a.clone(), projector_of(&clusters[0], d)));
                    }
                }
            }
        }
        RelationKind::Orthogonality => {
            if x.spectral_norm() > 0.0 {
                // 0 is orthogonal to everything; φ(0) = X is not orthogonal to
                // its own leading eigenprojection.
                let e = eig(x)?;
                let top = e.significant_indices(tol).first().copied().unwrap_or(d - 1);
                let p = HermitianMatrix::outer(&e.vector(top));
                out.push((zero.clone(), inverse.apply(&p)?));
            }
            let (u, v) = skewed_pair(phi)?;
            out.push((HermitianMatrix::outer(&u), HermitianMatrix::outer(&v)));
        }
    }
    Ok(out)
}

/// Random candidates: orthogonal rank-one pairs, scalar/arbitrary pairs and
/// preimages of such pairs.
fn random_candidate(
    inverse: &OrderAutomorphism,
    kind: RelationKind,
    seed: u64,
) -> Result<(HermitianMatrix, HermitianMatrix)> {
    let d = inverse.dim();
    let mut rng = rng_from_seed(seed);
    let pull_back = rand::Rng::random_bool(&mut rng, 0.5);
    let (a, b) = match kind {
        RelationKind::Commutativity | RelationKind::Orthogonality => {
            let u = random_unit(&mut rng, d);
            let w = random_unit(&mut rng, d);
            let v = &w - &u * crate::hermitian::inner(&w, &u);
            let v = &v / c(v.norm().max(f64::MIN_POSITIVE));
            (HermitianMatrix::outer(&u), HermitianMatrix::outer(&v))
        }
        RelationKind::Complementarity => {
            let s = rand::Rng::random_range(&mut rng, -2.0..2.0);
            (HermitianMatrix::scalar(d, s), random_hermitian(&mut rng, d))
        }
    };
    if pull_back {
        Ok((inverse.apply(&a)?, inverse.apply(&b)?))
    } else {
        Ok((a, b))
    }
}

/// Decides whether `phi` preserves `kind` in both directions.
///
/// The verdict is analytic. For a negative verdict, up to `trials`
/// candidate pairs (structural ones first, then seeded random ones) are
/// tried until the relation is seen to change under `phi`.
pub fn preserves_relation(
    phi: &OrderAutomorphism,
    kind: RelationKind,
    trials: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<PreserverClassification> {
    let d = phi.dim();
    if kind == RelationKind::Complementarity {
        check_complementarity_dim(d)?;
    }
    let gram = PsdMatrix::new(HermitianMatrix::symmetrized(phi.t().adjoint() * phi.t()), tol)?;
    let lambda = local_linear_dependence_scalar(&gram);
    let mu = scalar_value(phi.x());
    let x_vanishes = phi.x().spectral_norm() <= CLASSIFIER_TOLERANCE * gram.spectral_norm().max(1.0);

    let preserved = match kind {
        RelationKind::Commutativity | RelationKind::Complementarity => lambda.zip(mu),
        RelationKind::Orthogonality => lambda.filter(|_| x_vanishes).map(|l| (l, 0.0)),
    };
    if let Some((lambda, mu)) = preserved {
        return Ok(PreserverClassification {
            kind,
            preserves: true,
            canonical_form: Some(CanonicalForm {
                u: phi.t() / c(lambda.sqrt()),
                antiunitary: phi.conjugate(),
                lambda,
                mu: (kind != RelationKind::Orthogonality).then_some(mu),
            }),
            counterexample: None,
            attempts: 0,
        });
    }

    let inverse = phi.invert()?;
    let constructed = constructed_candidates(phi, &inverse, kind, mu, tol)?;
    let n_constructed = constructed.len();
    let mut candidates = constructed.into_iter().map(Ok).chain(
        (0..trials.saturating_sub(n_constructed))
            .map(|i| random_candidate(&inverse, kind, derive_seed(seed, i as u64))),
    );
    for attempt in 0..trials {
        let Some(candidate) = candidates.next() else {
            break;
        };
        let (a, b) = candidate?;
        let holds_before = relation_holds(kind, &a, &b, tol)?;
        let holds_after = relation_holds(kind, &phi.apply(&a)?, &phi.apply(&b)?, tol)?;
        if holds_before != holds_after {
            return Ok(PreserverClassification {
                kind,
                preserves: false,
                canonical_form: None,
                counterexample: Some(Counterexample {
                    a,
                    b,
                    holds_before,
                    holds_after,
                }),
                attempts: attempt + 1,
            });
        }
    }
    Err(Error::SearchExhausted { trials })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::*;
    use rand::Rng;

    fn t() -> Tolerances {
        Tolerances::default()
    }

    fn diag(v: &[f64]) -> HermitianMatrix {
        HermitianMatrix::from_real_diagonal(v).unwrap()
    }

    /// Every pair of nonempty proper cluster subsets, tested directly.
    fn complementary_by_enumeration(a: &HermitianMatrix, b: &HermitianMatrix, tol: &Tolerances) -> bool {
        let subsets = |clusters: &Vec<Vec<CVector>>| -> Vec<Vec<CVector>> {
            let k = clusters.len();
            (1..(1u32 << k) - 1)
                .map(|mask| {
                    (0..k)
                        .filter(|i| mask & (1 << i) != 0)
                        .flat_map(|i| clusters[i].iter().cloned())
                        .collect()
                })
                .collect()
        };
        let pa = subsets(&spectral_clusters(a, tol).unwrap());
        let pb = subsets(&spectral_clusters(b, tol).unwrap());
        pa.iter().all(|p| {
            pb.iter().all(|q| {
                let mut s = p.clone();
                s.extend(q.iter().cloned());
                column_rank(&s, tol) == p.len() + q.len()
            })
        })
    }

    #[test]
    fn commute_examples() {
        let tol = t();
        assert!(commute(&diag(&[1.0, 2.0]), &diag(&[3.0, -1.0]), &tol).unwrap());
        let swap = HermitianMatrix::from_rows(&[vec![c(0.0), c(1.0)], vec![c(1.0), c(0.0)]]).unwrap();
        assert!(!commute(&diag(&[1.0, 0.0]), &swap, &tol).unwrap());

        let mut rng = rng(71);
        for d in 2..=6 {
            let a = random_hermitian(&mut rng, d);
            // p(A) = 2A³ − A + 3I
            let a3 = a.matrix() * a.matrix() * a.matrix();
            let p = HermitianMatrix::symmetrized(a3 * c(2.0) - a.matrix() + CMatrix::identity(d, d) * c(3.0));
            assert!(commute(&a, &p, &tol).unwrap());
        }
    }

    #[test]
    fn orthogonal_examples() {
        let tol = t();
        assert!(orthogonal(&diag(&[1.0, 0.0, 0.0]), &diag(&[0.0, 0.0, 2.0]), &tol).unwrap());
        assert!(!orthogonal(&HermitianMatrix::identity(3), &HermitianMatrix::identity(3), &tol).unwrap());

        let mut rng = rng(72);
        for d in 2..=6 {
            let u = random_unitary(&mut rng, d);
            let k = rng.random_range(1..d);
            let cols: Vec<CVector> = (0..k).map(|j| u.column(j).into_owned()).collect();
            let p = projector_of(&cols, d);
            let q = random_hermitian(&mut rng, d);
            let comp = CMatrix::identity(d, d) - p.matrix();
            let b = HermitianMatrix::symmetrized(&comp * q.matrix() * &comp);
            assert!(orthogonal(&p, &b, &tol).unwrap());
            assert!(commute(&p, &b, &tol).unwrap());
            // Range-orthogonality cross-check.
            let rp = crate::hermitian::range_basis(&p, &tol).unwrap();
            let rb = crate::hermitian::range_basis(&b, &tol).unwrap();
            for x in &rp {
                for y in &rb {
                    assert!(crate::hermitian::inner(x, y).norm() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn complementary_examples() {
        let tol = t();
        let mut rng = rng(73);
        for d in 2..=4 {
            let b = random_hermitian(&mut rng, d);
            assert!(complementary(&HermitianMatrix::scalar(d, 2.5), &b, &tol).unwrap());
        }
        assert!(!complementary(&diag(&[1.0, 2.0]), &diag(&[3.0, 4.0]), &tol).unwrap());

        for _ in 0..50 {
            let h = loop {
                let u = random_unitary(&mut rng, 2);
                if u.iter().all(|z| z.norm() > 1e-3) {
                    break u;
                }
            };
            let a = diag(&[1.0, 2.0]);
            let b = a.congruence(&h);
            assert!(complementary(&a, &b, &tol).unwrap());
            assert!(complementary_by_enumeration(&a, &b, &tol));
        }
        assert!(matches!(
            complementary(&HermitianMatrix::zeros(13), &HermitianMatrix::zeros(13), &tol),
            Err(Error::DimensionTooLarge { .. })
        ));
    }

    #[test]
    fn complementary_matches_enumeration() {
        let tol = t();
        let mut rng = rng(74);
        for _ in 0..300 {
            let d = rng.random_range(2..=5);
            let pick = |rng: &mut SeededRng| -> HermitianMatrix {
                match rng.random_range(0..4) {
                    0 => HermitianMatrix::scalar(d, rng.random_range(-1.0..1.0)),
                    1 => {
                        let r = rng.random_range(1..=d);
                        random_psd(rng, d, r)
                    }
                    2 => {
                        // Shares an eigenvector with the standard basis.
                        let mut m = random_hermitian(rng, d);
                        for i in 1..d {
                            m = HermitianMatrix::symmetrized({
                                let mut x = m.into_matrix();
                                x[(0, i)] = c(0.0);
                                x[(i, 0)] = c(0.0);
                                x
                            });
                        }
                        m
                    }
                    _ => random_hermitian(rng, d),
                }
            };
            let a = pick(&mut rng);
            let b = pick(&mut rng);
            assert_eq!(complementary(&a, &b, &tol).unwrap(), complementary_by_enumeration(&a, &b, &tol));
        }
    }

    #[test]
    fn local_dependence_examples() {
        let tol = t();
        let psd = |m| PsdMatrix::new(m, &tol).unwrap();
        assert!((local_linear_dependence_scalar(&psd(HermitianMatrix::scalar(3, 3.0))).unwrap() - 3.0).abs() < 1e-15);
        assert_eq!(local_linear_dependence_scalar(&psd(diag(&[1.0, 2.0]))), None);
        let mut rng = rng(75);
        for d in 2..=5 {
            let u = random_unitary(&mut rng, d);
            let s = rng.random_range(0.5..3.0);
            let tm = u * c(s);
            let m = psd(HermitianMatrix::symmetrized(tm.adjoint() * &tm));
            let l = local_linear_dependence_scalar(&m).unwrap();
            assert!((l - s * s).abs() < 1e-12 * s * s);
        }
    }

    fn unitary_phi(rng: &mut SeededRng, d: usize, lambda: f64, x: HermitianMatrix, conj: bool) -> OrderAutomorphism {
        let u = random_unitary(rng, d);
        OrderAutomorphism::new(u * c(lambda.sqrt()), conj, x, &t()).unwrap()
    }

    fn check_counterexample(phi: &OrderAutomorphism, r: &PreserverClassification) {
        let tol = t();
        let ce = r.counterexample.as_ref().unwrap();
        assert!(r.canonical_form.is_none());
        assert_eq!(relation_holds(r.kind, &ce.a, &ce.b, &tol).unwrap(), ce.holds_before);
        let after = relation_holds(r.kind, &phi.apply(&ce.a).unwrap(), &phi.apply(&ce.b).unwrap(), &tol).unwrap();
        assert_eq!(after, ce.holds_after);
        assert_ne!(ce.holds_before, ce.holds_after);
    }

    #[test]
    fn unitary_scalar_preserves_commutativity() {
        let tol = t();
        let mut rng = rng(76);
        for d in 2..=4 {
            let phi = unitary_phi(&mut rng, d, 1.0, HermitianMatrix::scalar(d, -0.75), d % 2 == 0);
            let r = preserves_relation(&phi, RelationKind::Commutativity, 100, 1, &tol).unwrap();
            assert!(r.preserves);
            let form = r.canonical_form.unwrap();
            assert!((form.lambda - 1.0).abs() < 1e-12);
            assert!((form.mu.unwrap() + 0.75).abs() < 1e-12);
            assert_eq!(form.antiunitary, d % 2 == 0);
            assert!((form.u - phi.t()).norm() < 1e-12);
        }
    }

    #[test]
    fn non_scalar_gram_breaks_orthogonality() {
        let tol = t();
        let phi = OrderAutomorphism::new(diag(&[1.0, 2.0]).into_matrix(), false, HermitianMatrix::zeros(2), &tol).unwrap();
        let r = preserves_relation(&phi, RelationKind::Orthogonality, 1000, 3, &tol).unwrap();
        assert!(!r.preserves);
        check_counterexample(&phi, &r);
        let ce = r.counterexample.unwrap();
        // Orthogonal rank-ones whose images fail A T*T B = 0.
        assert!(ce.holds_before && !ce.holds_after);
        assert_eq!(crate::hermitian::rank_numeric(&ce.a, &tol).unwrap(), 1);
    }

    #[test]
    fn non_scalar_shift_breaks_commutativity() {
        let tol = t();
        let mut rng = rng(77);
        let x = random_hermitian(&mut rng, 3);
        let phi = unitary_phi(&mut rng, 3, 1.0, x, false);
        let r = preserves_relation(&phi, RelationKind::Commutativity, 1000, 3, &tol).unwrap();
        assert!(!r.preserves);
        check_counterexample(&phi, &r);
        let ce = r.counterexample.unwrap();
        assert_eq!(ce.a, HermitianMatrix::zeros(3));
    }

    #[test]
    fn classifier_matches_criteria_on_random_maps() {
        let tol = t();
        let mut rng = rng(78);
        for i in 0..120 {
            let d = 2 + i % 3;
            let conj = rng.random_bool(0.5);
            let scalar_t = rng.random_bool(0.5);
            let x_case = rng.random_range(0..3);
            let tm = if scalar_t {
                random_unitary(&mut rng, d) * c(rng.random_range(0.5..2.0))
            } else {
                crate::harness::generate::random_invertible(&mut rng, d, 1e3).unwrap()
            };
            let x = match x_case {
                0 => HermitianMatrix::zeros(d),
                1 => HermitianMatrix::scalar(d, rng.random_range(-2.0..2.0)),
                _ => random_hermitian(&mut rng, d),
            };
            let phi = OrderAutomorphism::new(tm, conj, x, &tol).unwrap();
            for kind in RelationKind::ALL {
                let r = preserves_relation(&phi, kind, 1000, i as u64, &tol).unwrap();
                let expected = scalar_t
                    && match kind {
                        RelationKind::Orthogonality => x_case == 0,
                        _ => x_case <= 1,
                    };
                assert_eq!(r.preserves, expected, "kind={kind} scalar_t={scalar_t} x_case={x_case}");
                if !r.preserves {
                    check_counterexample(&phi, &r);
                }
            }
        }
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(200))]

        #[test]
        fn orthogonal_pairs_commute(seed in proptest::prelude::any::<u64>(), d in 2usize..6) {
            let tol = t();
            let mut rng = rng(seed);
            let u = random_unitary(&mut rng, d);
            let k = rng.random_range(1..d);
            let left: Vec<CVector> = (0..k).map(|j| u.column(j).into_owned()).collect();
            let right: Vec<CVector> = (k..d).map(|j| u.column(j).into_owned()).collect();
            let compress = |basis: &[CVector], rng: &mut SeededRng| {
                let p = crate::hermitian::projector(basis, d);
                HermitianMatrix::symmetrized(&p * random_hermitian(rng, d).matrix() * &p)
            };
            let a = compress(&left, &mut rng);
            let b = compress(&right, &mut rng);
            let pairs = [(a.clone(), b.clone()), (a.clone(), random_hermitian(&mut rng, d)), (b, a)];
            for (x, y) in &pairs {
                if orthogonal(x, y, &tol).unwrap() {
                    proptest::prop_assert!(commute(x, y, &tol).unwrap());
                }
            }
            proptest::prop_assert!(orthogonal(&pairs[0].0, &pairs[0].1, &tol).unwrap());
        }
    }

    #[test]
    fn relation_names_parse() {
        assert_eq!("COMMUTATIVITY".parse::<RelationKind>().unwrap(), RelationKind::Commutativity);
        assert_eq!("orthogonality".parse::<RelationKind>().unwrap(), RelationKind::Orthogonality);
        assert!("nonsense".parse::<RelationKind>().is_err());
    }
}
