//! Named verification suites.
//!
//! A suite runs `trials` independent cases per dimension. Every case draws
//! from its own generator seeded by [`case_seed`], so reports do not depend
//! on scheduling, and any failure can be replayed alone with [`run_case`].

use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use super::generate::{
    derive_seed, random_automorphism, random_hermitian, random_ill_conditioned, random_invertible,
    random_psd, random_unit, random_unitary, rng_from_seed, SeededRng, MAX_CONDITION,
};
use crate::automorphism::{
    check_order_automorphism, reconstruct_with, AutomorphismOracle, OrderAutomorphism,
    ReconstructOptions,
};
use crate::error::{Error, Result};
use crate::hermitian::{
    c, column_rank, eig, operator_norm, range_basis, rank_numeric, CMatrix, CVector,
    HermitianMatrix, PsdMatrix, MAX_DIM,
};
use crate::json::MatrixJson;
use crate::loewner::{compare, leq, max_lambda, range_dominates, Relation};
use crate::order_rank::{
    acts_on, escaping_minorant, is_rank_one_by_order, no_common_rank1_minorant,
    rank_gt_np1_witness,
};
use crate::preservers::{
    complementarity_violation, complementary, relation_holds, preserves_relation, spectral_clusters,
    PreserverClassification, RelationKind, MAX_COMPLEMENTARITY_DIM,
};
use crate::tolerance::Tolerances;

pub const SUITES: [&str; 10] = [
    "order",
    "lemma-rng",
    "busch-gudder",
    "lemma-rank",
    "thm1",
    "thm2",
    "thm2-illcond",
    "cor3",
    "cor4",
    "cor5",
];

/// Condition number of the transforms in the ill-conditioned suite.
pub const ILL_CONDITION: f64 = 1e6;

/// Residual limit of the ill-conditioned suite.
pub const ILL_CONDITIONED_RESIDUAL: f64 = 1e-3;

/// Relative accuracy required of a reconstructed `T` (after phase alignment).
pub const T_ACCURACY: f64 = 1e-6;

/// Accuracy required of a reconstructed `X`, relative to `max(1, ‖X‖)`.
pub const X_ACCURACY: f64 = 1e-8;

/// Order pairs checked per automorphism in the forward direction.
pub const PAIRS_PER_AUTOMORPHISM: usize = 20;

/// Candidate budget handed to the preserver classifier.
pub const PRESERVER_TRIALS: usize = 1000;

/// Slack of the Busch–Gudder extremality checks.
pub const EXTREMALITY_SLACK: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FailureRecord {
    /// Seed of the failing case; pass it to [`run_case`] to replay.
    pub seed: u64,
    pub dim: usize,
    /// SHA-256 of the case inputs in matrix JSON.
    pub digest: String,
    pub property: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub dims: Vec<usize>,
    pub trials: usize,
    pub failures: Vec<FailureRecord>,
    pub elapsed_ms: u64,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Number of cases run.
    pub fn cases(&self) -> usize {
        self.dims.len() * self.trials
    }
}

type Check = std::result::Result<(), String>;

struct Case<'a> {
    dim: usize,
    rng: SeededRng,
    tol: &'a Tolerances,
    inputs: Vec<MatrixJson>,
}

impl Case<'_> {
    fn note(&mut self, m: &CMatrix) {
        self.inputs.push(MatrixJson::from_matrix(m));
    }

    fn note_h(&mut self, h: &HermitianMatrix) {
        self.note(h.matrix());
    }

    fn note_phi(&mut self, phi: &OrderAutomorphism) {
        self.note(phi.t());
        self.note(&CMatrix::from_element(1, 1, c(if phi.conjugate() { 1.0 } else { 0.0 })));
        self.note_h(phi.x());
    }

    fn psd(&self, h: HermitianMatrix) -> std::result::Result<PsdMatrix, String> {
        lib(PsdMatrix::new(h, self.tol))
    }
}

fn lib<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| format!("unexpected error: {e}"))
}

fn ensure(condition: bool, property: &str) -> Check {
    if condition {
        Ok(())
    } else {
        Err(property.to_string())
    }
}

type CaseFn = fn(&mut Case<'_>) -> Check;

fn lookup(name: &str) -> Option<(CaseFn, usize)> {
    let entry: (CaseFn, usize) = match name {
        "order" => (order_case, 1),
        "lemma-rng" => (lemma_rng_case, 1),
        "busch-gudder" => (busch_gudder_case, 1),
        "lemma-rank" => (lemma_rank_case, 1),
        "thm1" => (thm1_case, 2),
        "thm2" => (thm2_case, 2),
        "thm2-illcond" => (thm2_illcond_case, 2),
        "cor3" => (cor3_case, 2),
        "cor4" => (cor4_case, 2),
        "cor5" => (cor5_case, 2),
        _ => return None,
    };
    Some(entry)
}

fn check_dims(name: &str, min: usize, dims: &[usize]) -> Result<()> {
    if dims.is_empty() {
        return Err(Error::InvalidArgument("no dimensions given".into()));
    }
    let max = if name == "cor4" { MAX_COMPLEMENTARITY_DIM } else { MAX_DIM };
    for &d in dims {
        if d < min {
            return Err(Error::DimensionTooSmall { dim: d, min });
        }
        if d > max {
            return Err(Error::DimensionTooLarge { dim: d, max });
        }
    }
    Ok(())
}

/// Seed of case `trial` at dimension `dim`.
pub fn case_seed(seed: u64, dim: usize, trial: usize) -> u64 {
    derive_seed(derive_seed(seed, dim as u64), trial as u64)
}

fn digest(inputs: &[MatrixJson]) -> String {
    let bytes = serde_json::to_vec(inputs).expect("matrix JSON is always serializable");
    Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn execute(f: CaseFn, dim: usize, seed: u64, tol: &Tolerances) -> Option<FailureRecord> {
    let mut case = Case {
        dim,
        rng: rng_from_seed(seed),
        tol,
        inputs: Vec::new(),
    };
    f(&mut case).err().map(|property| FailureRecord {
        seed,
        dim,
        digest: digest(&case.inputs),
        property,
    })
}

/// Replays one case of `suite`; `seed` is a case seed as recorded in a
/// [`FailureRecord`].
pub fn run_case(suite: &str, dim: usize, seed: u64, tol: &Tolerances) -> Result<Option<FailureRecord>> {
    let (f, min) = lookup(suite).ok_or_else(|| Error::UnknownSuite(suite.to_string()))?;
    tol.validate()?;
    check_dims(suite, min, &[dim])?;
    Ok(execute(f, dim, seed, tol))
}

pub fn run_suite(
    suite: &str,
    dims: &[usize],
    trials: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<SuiteReport> {
    let (f, min) = lookup(suite).ok_or_else(|| Error::UnknownSuite(suite.to_string()))?;
    tol.validate()?;
    check_dims(suite, min, dims)?;
    let start = Instant::now();
    let cases: Vec<(usize, u64)> = dims
        .iter()
        .flat_map(|&d| (0..trials).map(move |i| (d, case_seed(seed, d, i))))
        .collect();
    let failures = cases
        .par_iter()
        .map(|&(d, s)| execute(f, d, s, tol))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    Ok(SuiteReport {
        suite: suite.to_string(),
        dims: dims.to_vec(),
        trials,
        failures,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

fn diagonal_unitary_conjugate(u: &CMatrix, s: &[f64]) -> HermitianMatrix {
    let d = CMatrix::from_diagonal(&CVector::from_iterator(s.len(), s.iter().map(|&x| c(x))));
    HermitianMatrix::symmetrized(u * d * u.adjoint())
}

fn unit_in_range(case: &mut Case<'_>, b: &HermitianMatrix) -> CVector {
    let v = b.matrix() * random_unit(&mut case.rng, case.dim);
    let n = v.norm();
    v / c(n)
}

/// `A ≤ A + P` holds; `A ≤ A + D` fails for `D` with a negative eigenvalue,
/// and the witness re-evaluates to a positive gap.
fn order_case(case: &mut Case<'_>) -> Check {
    let d = case.dim;
    let a = random_hermitian(&mut case.rng, d);
    let rank = case.rng.random_range(1..=d);
    let p = random_psd(&mut case.rng, d, rank);
    let b = &a + &p;
    case.note_h(&a);
    case.note_h(&b);
    ensure(lib(leq(&a, &b, case.tol))?, "A <= A + P")?;
    let rel = lib(compare(&a, &b, case.tol))?.relation;
    ensure(matches!(rel, Relation::Leq | Relation::Equal), "compare(A, A + P) in {LEQ, EQUAL}")?;

    let u = random_unitary(&mut case.rng, d);
    let mut s: Vec<f64> = (0..d).map(|_| case.rng.random_range(-1.0..=1.0)).collect();
    s[0] = -case.rng.random_range(0.1..=1.0);
    let bad = &a + &diagonal_unitary_conjugate(&u, &s);
    case.note_h(&bad);
    ensure(!lib(leq(&a, &bad, case.tol))?, "A <= A + D refuted for indefinite D")?;
    let result = lib(compare(&a, &bad, case.tol))?;
    let witness = result.witness_ab.ok_or("witness against A <= A + D")?;
    ensure(witness.evaluate(&a, &bad) > 0.0, "witness gap re-evaluates positive")
}

/// Largest `λ` with `λ·A ≤ B`, located by bisection on the order
/// predicate; `None` if already `floor·A ≤ B` fails.
pub fn bisect_feasibility(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    floor: f64,
    tol: &Tolerances,
) -> Result<Option<f64>> {
    let feasible = |l: f64| leq(&a.scale(l), b, tol);
    if !feasible(floor)? {
        return Ok(None);
    }
    let (mut lo, mut hi) = (floor, 2.0 * floor);
    while feasible(hi)? {
        lo = hi;
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::NumericalFailure("unbounded feasibility ray".into()));
        }
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if feasible(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(lo))
}

/// Feasibility floor for [`bisect_feasibility`] on `(A, B)`: `√tol.psd`
/// relative to `‖B‖ / ‖A‖`. Infeasible directions only pass the tolerant
/// predicate below roughly `tol.psd·‖B‖ / ‖A‖`.
pub fn feasibility_floor(a: &HermitianMatrix, b: &HermitianMatrix, tol: &Tolerances) -> f64 {
    tol.psd.sqrt() * b.spectral_norm().max(1.0) / a.spectral_norm().max(f64::MIN_POSITIVE)
}

/// `rng A ⊂ rng B` for rank-one `A` agrees with feasibility of `λA ≤ B`.
fn lemma_rng_case(case: &mut Case<'_>) -> Check {
    let d = case.dim;
    let k = case.rng.random_range(1..=d);
    let b = random_psd(&mut case.rng, d, k);
    let x = if case.rng.random_bool(0.5) {
        unit_in_range(case, &b)
    } else {
        random_unit(&mut case.rng, d)
    };
    let s = case.rng.random_range(0.5..=2.0);
    let a = HermitianMatrix::outer(&x).scale(s);
    case.note_h(&a);
    case.note_h(&b);
    let (pa, pb) = (case.psd(a.clone())?, case.psd(b.clone())?);
    let verdict = lib(range_dominates(&pa, &pb, case.tol))?;
    let bisected = lib(bisect_feasibility(&a, &b, feasibility_floor(&a, &b, case.tol), case.tol))?;
    ensure(verdict == bisected.is_some(), "range inclusion agrees with order feasibility")?;
    if let Some(oracle) = bisected {
        let lambda = lib(max_lambda(&x, &pb, case.tol))?.ok_or("max_lambda finds the feasible direction")?;
        // λ·A ≤ B with A = s·xx*.
        let band = 1e-6 * oracle + case.tol.psd * b.spectral_norm().max(1.0) * 1e3;
        ensure((lambda / s - oracle).abs() <= band, "extremal value matches bisection")?;
    }
    Ok(())
}

/// `B − λ*·xx*` is PSD and singular along `x`'s direction; `(1 + 1e-6)·λ*`
/// is infeasible.
fn busch_gudder_case(case: &mut Case<'_>) -> Check {
    let d = case.dim;
    let k = case.rng.random_range(1..=d);
    let b = random_psd(&mut case.rng, d, k);
    let x = unit_in_range(case, &b);
    case.note_h(&b);
    case.note(&CMatrix::from_column_slice(d, 1, x.as_slice()));
    let pb = case.psd(b.clone())?;
    let lambda = lib(max_lambda(&x, &pb, case.tol))?.ok_or("x in rng B is feasible")?;
    let xx = HermitianMatrix::outer(&x);
    let rest = &b - &xx.scale(lambda);
    let min_eig = lib(eig(&rest))?.min_eigenvalue();
    let norm = b.spectral_norm();
    ensure(min_eig >= -case.tol.psd * norm.max(1.0), "B - λ* xx* is PSD")?;
    ensure(min_eig <= EXTREMALITY_SLACK * norm, "B - λ* xx* is singular")?;
    ensure(
        !lib(leq(&xx.scale(lambda * (1.0 + EXTREMALITY_SLACK)), &b, case.tol))?,
        "(1 + 1e-6) λ* is infeasible",
    )
}

/// Witness existence matches `rank A > n + 1`; witnesses satisfy their
/// invariants; `[0, A]` is total exactly for rank one.
fn lemma_rank_case(case: &mut Case<'_>) -> Check {
    let d = case.dim;
    let r = case.rng.random_range(1..=d);
    let a = random_psd(&mut case.rng, d, r);
    case.note_h(&a);
    let pa = case.psd(a.clone())?;
    let rank = lib(rank_numeric(&a, case.tol))?;
    ensure(rank == r, "generated rank is exact")?;
    for n in 1..d.saturating_sub(1) {
        let w = lib(rank_gt_np1_witness(&pa, n, case.tol))?;
        ensure(w.is_some() == (rank > n + 1), "witness exists iff rank A > n + 1")?;
        let Some(w) = w else { continue };
        ensure(w.n == n, "witness carries n")?;
        ensure(lib(leq(&w.e, &a, case.tol))?, "E <= A")?;
        ensure(lib(leq(&w.f, &a, case.tol))?, "F <= A")?;
        let re = lib(range_basis(&w.e, case.tol))?;
        let rf = lib(range_basis(&w.f, case.tol))?;
        ensure(re.len() == n, "rank E = n")?;
        ensure(rf.len() > 1, "rank F > 1")?;
        let mut stacked = re.clone();
        stacked.extend(rf.iter().cloned());
        ensure(column_rank(&stacked, case.tol) == re.len() + rf.len(), "rng E ∩ rng F = {0}")?;
        ensure(lib(no_common_rank1_minorant(&w.e, &w.f, case.tol))?, "no common rank-one minorant")?;
    }
    let seed = case.rng.random();
    let totality = lib(is_rank_one_by_order(&pa, 50, seed, case.tol))?;
    ensure(totality.total == (rank == 1), "[0, A] total iff rank A = 1")?;
    if let Some((s, t)) = totality.incomparable_pair {
        ensure(lib(leq(&s, &a, case.tol))? && lib(leq(&t, &a, case.tol))?, "pair lies in [0, A]")?;
        ensure(
            lib(compare(&s, &t, case.tol))?.relation == Relation::Incomparable,
            "pair is incomparable",
        )?;
    }
    Ok(())
}

fn gauge_aligned_distance(t: &CMatrix, reference: &CMatrix) -> f64 {
    let overlap = reference.dotc(t);
    let phase = if overlap.norm() > 0.0 { overlap / overlap.norm() } else { c(1.0) };
    operator_norm(&(t - reference * phase)) / operator_norm(reference)
}

fn check_round_trip(
    case: &mut Case<'_>,
    phi: &OrderAutomorphism,
    options: &ReconstructOptions,
    t_accuracy: f64,
    x_accuracy: f64,
) -> Check {
    let mut oracle = AutomorphismOracle(phi.clone());
    let report = lib(reconstruct_with(&mut oracle, case.tol, options))?;
    let rec = &report.recovered;
    ensure(gauge_aligned_distance(rec.t(), phi.t()) <= t_accuracy, "recovered T matches up to phase")?;
    let x_err = operator_norm(&(rec.x().matrix() - phi.x().matrix()));
    ensure(x_err <= x_accuracy * phi.x().spectral_norm().max(1.0), "recovered X matches")?;
    ensure(
        rec.conjugate() == phi.conjugate() || report.conjugation_degenerate,
        "recovered linearity flag matches",
    )
}

/// Congruences `A ↦ T A T*` (or with `Ā`) preserve the order of the
/// positive cone both ways and send rank one to rank one; `acts_on`
/// agrees with the order-theoretic escape search; reconstruction finds
/// `X = 0`.
fn thm1_case(case: &mut Case<'_>) -> Check {
    let d = case.dim;
    let t = lib(random_invertible(&mut case.rng, d, MAX_CONDITION))?;
    let conj = case.rng.random_bool(0.5);
    let phi = lib(OrderAutomorphism::new(t, conj, HermitianMatrix::zeros(d), case.tol))?;
    case.note_phi(&phi);
    let image = |h: &HermitianMatrix| lib(phi.apply(h));

    let r1 = case.rng.random_range(1..=d);
    let a = random_psd(&mut case.rng, d, r1);
    let r2 = case.rng.random_range(1..=d);
    let b = random_psd(&mut case.rng, d, r2);
    case.note_h(&a);
    case.note_h(&b);
    let up = &a + &b;
    ensure(lib(leq(&image(&a)?, &image(&up)?, case.tol))?, "φ(A) <= φ(A + B)")?;
    let before = lib(compare(&a, &b, case.tol))?.relation;
    let after = lib(compare(&image(&a)?, &image(&b)?, case.tol))?.relation;
    ensure(before == after, "order relation of positive pair preserved")?;

    let x = random_unit(&mut case.rng, d);
    let fx = image(&HermitianMatrix::outer(&x))?;
    ensure(lib(rank_numeric(&fx, case.tol))? == 1, "rank one maps to rank one")?;
    let seed = case.rng.random();
    let pfx = case.psd(fx)?;
    ensure(lib(is_rank_one_by_order(&pfx, 20, seed, case.tol))?.total, "[0, φ(xx*)] is total")?;

    // T acts on span M exactly when no rank-one minorant of T escapes M.
    let k = case.rng.random_range(1..d);
    let u = random_unitary(&mut case.rng, d);
    let m: Vec<CVector> = (0..k).map(|j| u.column(j).into_owned()).collect();
    let rank_ones: Vec<PsdMatrix> = m
        .iter()
        .map(|v| case.psd(HermitianMatrix::outer(v)))
        .collect::<std::result::Result<_, _>>()?;
    let full = random_psd(&mut case.rng, d, d);
    let p = crate::hermitian::projector(&m, d);
    let inside = case.psd(HermitianMatrix::symmetrized(&p * full.matrix() * &p))?;
    let outside = case.psd(full)?;
    ensure(lib(acts_on(&inside, &m, case.tol))?, "P R P acts on span M")?;
    ensure(lib(escaping_minorant(&inside, &rank_ones, case.tol))?.is_none(), "no minorant of P R P escapes M")?;
    ensure(!lib(acts_on(&outside, &m, case.tol))?, "full-rank R does not act on span M")?;
    let escape = lib(escaping_minorant(&outside, &rank_ones, case.tol))?.ok_or("a minorant of R escapes M")?;
    ensure(lib(leq(&escape, &outside, case.tol))?, "escaping minorant lies below R")?;

    check_round_trip(case, &phi, &ReconstructOptions::default(), T_ACCURACY, X_ACCURACY)
}

/// Random affine automorphisms preserve order both ways on sampled pairs,
/// and reconstruct from black-box access.
fn thm2_case(case: &mut Case<'_>) -> Check {
    let phi = lib(random_automorphism(&mut case.rng, case.dim, case.tol))?;
    case.note_phi(&phi);
    let seed = case.rng.random();
    let report = lib(check_order_automorphism(
        &mut AutomorphismOracle(phi.clone()),
        PAIRS_PER_AUTOMORPHISM,
        seed,
        case.tol,
    ))?;
    ensure(report.passed(), "order preserved in both directions")?;
    check_round_trip(case, &phi, &ReconstructOptions::default(), T_ACCURACY, X_ACCURACY)
}

/// Reconstruction with condition number [`ILL_CONDITION`] at relaxed
/// accuracy.
fn thm2_illcond_case(case: &mut Case<'_>) -> Check {
    let d = case.dim;
    let t = random_ill_conditioned(&mut case.rng, d, ILL_CONDITION);
    let conj = case.rng.random_bool(0.5);
    let x = random_hermitian(&mut case.rng, d);
    let phi = lib(OrderAutomorphism::new(t, conj, x, case.tol))?;
    case.note_phi(&phi);
    let options = ReconstructOptions {
        residual_limit: ILL_CONDITIONED_RESIDUAL,
        ..ReconstructOptions::default()
    };
    check_round_trip(case, &phi, &options, ILL_CONDITIONED_RESIDUAL, ILL_CONDITIONED_RESIDUAL)
}

/// `(λ, U, μ)` drawn so that `φ = λ U·U* + μ I`, with a random linearity.
fn unitary_scalar(case: &mut Case<'_>) -> std::result::Result<(OrderAutomorphism, CMatrix, f64, f64), String> {
    let d = case.dim;
    let u = random_unitary(&mut case.rng, d);
    let lambda: f64 = case.rng.random_range(0.25..=4.0);
    let mu = case.rng.random_range(-2.0..=2.0);
    let conj = case.rng.random_bool(0.5);
    let phi = lib(OrderAutomorphism::new(
        &u * c(lambda.sqrt()),
        conj,
        HermitianMatrix::scalar(d, mu),
        case.tol,
    ))?;
    Ok((phi, u, lambda, mu))
}

/// An automorphism with non-scalar `T*T`, non-scalar `X`, or both.
fn non_scalar(case: &mut Case<'_>) -> std::result::Result<OrderAutomorphism, String> {
    let d = case.dim;
    let variant = case.rng.random_range(0..3);
    let t = if variant == 1 {
        random_unitary(&mut case.rng, d) * c(case.rng.random_range(0.5..=2.0))
    } else {
        lib(random_invertible(&mut case.rng, d, MAX_CONDITION))?
    };
    let x = if variant == 0 {
        HermitianMatrix::scalar(d, case.rng.random_range(-2.0..=2.0))
    } else {
        random_hermitian(&mut case.rng, d)
    };
    let conj = case.rng.random_bool(0.5);
    lib(OrderAutomorphism::new(t, conj, x, case.tol))
}

fn check_counterexample(case: &Case<'_>, phi: &OrderAutomorphism, r: &PreserverClassification) -> Check {
    let ce = r.counterexample.as_ref().ok_or("negative verdict carries a counterexample")?;
    let before = lib(relation_holds(r.kind, &ce.a, &ce.b, case.tol))?;
    let after = lib(relation_holds(r.kind, &lib(phi.apply(&ce.a))?, &lib(phi.apply(&ce.b))?, case.tol))?;
    ensure(
        before == ce.holds_before && after == ce.holds_after && before != after,
        "counterexample re-verifies",
    )
}

fn check_canonical(
    r: &PreserverClassification,
    u: &CMatrix,
    conj: bool,
    lambda: f64,
    mu: Option<f64>,
) -> Check {
    ensure(r.preserves, "unitary-scalar map preserves the relation")?;
    let form = r.canonical_form.as_ref().ok_or("positive verdict carries a canonical form")?;
    ensure((form.lambda - lambda).abs() <= 1e-9 * lambda, "canonical λ")?;
    ensure(operator_norm(&(&form.u - u)) <= 1e-9, "canonical U")?;
    ensure(form.antiunitary == conj, "canonical linearity")?;
    match (form.mu, mu) {
        (Some(a), Some(b)) => ensure((a - b).abs() <= 1e-9 * b.abs().max(1.0), "canonical μ"),
        (None, None) => Ok(()),
        _ => Err("canonical μ presence".into()),
    }
}

/// Commutativity preservers are exactly the maps `λ U·U* + μ I`.
fn cor3_case(case: &mut Case<'_>) -> Check {
    let seed = case.rng.random();
    if case.rng.random_bool(0.5) {
        let (phi, u, lambda, mu) = unitary_scalar(case)?;
        case.note_phi(&phi);
        let r = lib(preserves_relation(&phi, RelationKind::Commutativity, PRESERVER_TRIALS, seed, case.tol))?;
        check_canonical(&r, &u, phi.conjugate(), lambda, Some(mu))?;
        // A commutes with A² − 2A; so must the images.
        let a = random_hermitian(&mut case.rng, case.dim);
        let b = HermitianMatrix::symmetrized(a.matrix() * a.matrix() - a.matrix() * c(2.0));
        let (fa, fb) = (lib(phi.apply(&a))?, lib(phi.apply(&b))?);
        ensure(lib(relation_holds(RelationKind::Commutativity, &fa, &fb, case.tol))?, "images of a commuting pair commute")
    } else {
        let phi = non_scalar(case)?;
        case.note_phi(&phi);
        let r = lib(preserves_relation(&phi, RelationKind::Commutativity, PRESERVER_TRIALS, seed, case.tol))?;
        ensure(!r.preserves, "non-scalar map does not preserve commutativity")?;
        check_counterexample(case, &phi, &r)
    }
}

/// Scalars are complementary to everything and nothing else is; the
/// complementarity classifier matches the scalar criterion.
fn cor4_case(case: &mut Case<'_>) -> Check {
    let d = case.dim;
    let s = case.rng.random_range(-2.0..=2.0);
    let b = random_hermitian(&mut case.rng, d);
    case.note_h(&b);
    ensure(lib(complementary(&HermitianMatrix::scalar(d, s), &b, case.tol))?, "cI complementary to B")?;

    let a = if case.rng.random_bool(0.5) {
        random_hermitian(&mut case.rng, d)
    } else {
        let r = case.rng.random_range(1..d);
        random_psd(&mut case.rng, d, r)
    };
    case.note_h(&a);
    let clusters = lib(spectral_clusters(&a, case.tol))?;
    ensure(clusters.len() > 1, "sample is non-scalar")?;
    let p = HermitianMatrix::symmetrized(crate::hermitian::projector(&clusters[0], d));
    let (pa, pb) = lib(complementarity_violation(&a, &p, case.tol))?.ok_or("A not complementary to its spectral projection")?;
    let mut stacked = lib(range_basis(&pa, case.tol))?;
    let k = stacked.len();
    let rb = lib(range_basis(&pb, case.tol))?;
    let l = rb.len();
    stacked.extend(rb);
    ensure(column_rank(&stacked, case.tol) < k + l, "violating projections share a vector")?;

    let seed = case.rng.random();
    if case.rng.random_bool(0.5) {
        let (phi, u, lambda, mu) = unitary_scalar(case)?;
        case.note_phi(&phi);
        let r = lib(preserves_relation(&phi, RelationKind::Complementarity, PRESERVER_TRIALS, seed, case.tol))?;
        check_canonical(&r, &u, phi.conjugate(), lambda, Some(mu))
    } else {
        let phi = non_scalar(case)?;
        case.note_phi(&phi);
        let r = lib(preserves_relation(&phi, RelationKind::Complementarity, PRESERVER_TRIALS, seed, case.tol))?;
        ensure(!r.preserves, "non-scalar map does not preserve complementarity")?;
        check_counterexample(case, &phi, &r)
    }
}

/// Orthogonality preservers are exactly the maps `λ U·U*`.
fn cor5_case(case: &mut Case<'_>) -> Check {
    let d = case.dim;
    let scalar_t = case.rng.random_bool(0.5);
    let u = random_unitary(&mut case.rng, d);
    let lambda: f64 = case.rng.random_range(0.25..=4.0);
    let t = if scalar_t {
        &u * c(lambda.sqrt())
    } else {
        lib(random_invertible(&mut case.rng, d, MAX_CONDITION))?
    };
    let x_kind = case.rng.random_range(0..3);
    let x = match x_kind {
        0 => HermitianMatrix::zeros(d),
        1 => HermitianMatrix::scalar(d, case.rng.random_range(0.1..=2.0)),
        _ => random_hermitian(&mut case.rng, d),
    };
    let conj = case.rng.random_bool(0.5);
    let phi = lib(OrderAutomorphism::new(t, conj, x, case.tol))?;
    case.note_phi(&phi);
    let seed = case.rng.random();
    let r = lib(preserves_relation(&phi, RelationKind::Orthogonality, PRESERVER_TRIALS, seed, case.tol))?;
    let expected = scalar_t && x_kind == 0;
    ensure(r.preserves == expected, "verdict matches T*T scalar and X = 0")?;
    if expected {
        check_canonical(&r, &u, conj, lambda, None)?;
        // Sampled orthogonal pairs keep orthogonal images.
        let x = random_unit(&mut case.rng, d);
        let w = random_unit(&mut case.rng, d);
        let y = &w - &x * crate::hermitian::inner(&w, &x);
        let y = &y / c(y.norm());
        let s = case.rng.random_range(0.5..=2.0);
        let (a, b) = (HermitianMatrix::outer(&x).scale(s), HermitianMatrix::outer(&y));
        ensure(lib(relation_holds(RelationKind::Orthogonality, &a, &b, case.tol))?, "sampled pair is orthogonal")?;
        let (fa, fb) = (lib(phi.apply(&a))?, lib(phi.apply(&b))?);
        ensure(lib(relation_holds(RelationKind::Orthogonality, &fa, &fb, case.tol))?, "images of an orthogonal pair are orthogonal")
    } else {
        check_counterexample(case, &phi, &r)?;
        let ce = r.counterexample.as_ref().expect("checked above");
        ensure(ce.holds_before && !ce.holds_after, "orthogonal pair with non-orthogonal images")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn every_suite_passes_small_runs() {
        for name in SUITES {
            let dims: Vec<usize> = if name == "lemma-rank" { vec![3, 4] } else { vec![2, 3] };
            let r = run_suite(name, &dims, 12, 5, &tol()).unwrap();
            assert!(r.passed(), "{name}: {:?}", r.failures);
            assert_eq!(r.cases(), 24);
        }
    }

    #[test]
    fn unknown_suite_and_bad_dims() {
        assert!(matches!(run_suite("nosuch", &[2], 1, 1, &tol()), Err(Error::UnknownSuite(_))));
        assert!(matches!(run_suite("thm2", &[1], 1, 1, &tol()), Err(Error::DimensionTooSmall { .. })));
        assert!(matches!(run_suite("cor4", &[13], 1, 1, &tol()), Err(Error::DimensionTooLarge { .. })));
        assert!(matches!(run_suite("order", &[], 1, 1, &tol()), Err(Error::InvalidArgument(_))));
        assert!(matches!(run_case("nosuch", 2, 1, &tol()), Err(Error::UnknownSuite(_))));
    }

    #[test]
    fn reports_are_reproducible_and_order_independent() {
        let strip = |mut r: SuiteReport| {
            r.elapsed_ms = 0;
            r
        };
        let a = strip(run_suite("cor5", &[2, 3], 20, 9, &tol()).unwrap());
        let _ = run_suite("order", &[2], 20, 9, &tol()).unwrap();
        let b = strip(run_suite("cor5", &[2, 3], 20, 9, &tol()).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn failures_replay_exactly() {
        // An absurdly loose order tolerance accepts indefinite differences.
        let loose = Tolerances::new(0.99, 1e-8, 1e-8, 1e-10).unwrap();
        let r = run_suite("order", &[2, 3], 30, 4, &loose).unwrap();
        assert!(!r.passed());
        for f in &r.failures {
            let again = run_case("order", f.dim, f.seed, &loose).unwrap().unwrap();
            assert_eq!(&again, f);
        }
        let first = &r.failures[0];
        assert_eq!(first.digest.len(), 64);
        assert!(run_case("order", first.dim, first.seed, &tol()).unwrap().is_none());
    }

    #[test]
    fn bisection_oracle_brackets_closed_form() {
        let t = tol();
        let b = HermitianMatrix::from_real_diagonal(&[4.0, 1.0]).unwrap();
        let a = HermitianMatrix::from_real_diagonal(&[1.0, 0.0]).unwrap();
        let l = bisect_feasibility(&a, &b, feasibility_floor(&a, &b, &t), &t).unwrap().unwrap();
        assert!((l - 4.0).abs() < 1e-7);
        let off = HermitianMatrix::from_real_diagonal(&[0.0, 1.0]).unwrap();
        let b1 = HermitianMatrix::from_real_diagonal(&[1.0, 0.0]).unwrap();
        assert!(bisect_feasibility(&off, &b1, feasibility_floor(&off, &b1, &t), &t).unwrap().is_none());
    }
}
