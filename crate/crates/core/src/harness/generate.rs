//! Seeded random instances: Hermitian matrices, PSD matrices of exact rank,
//! unitaries, well-conditioned invertibles and automorphisms.

use nalgebra::linalg::QR;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::automorphism::OrderAutomorphism;
use crate::error::{Error, Result};
use crate::hermitian::{c, CMatrix, CVector, HermitianMatrix, PsdMatrix, C64};
use crate::tolerance::Tolerances;

pub type SeededRng = ChaCha8Rng;

/// Condition-number cap for generated invertible matrices.
pub const MAX_CONDITION: f64 = 1e4;

const MAX_RESAMPLES: usize = 1000;

pub fn rng_from_seed(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Mixes a parent seed with a stream index (splitmix64 finalizer).
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed
        .wrapping_add(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(index.wrapping_mul(0xD1B5_4A32_D192_ED03));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn uniform_entry<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0))
}

fn gaussian_entry<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im)
}

pub fn random_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> CVector {
    CVector::from_fn(dim, |_, _| uniform_entry(rng))
}

/// Uniformly distributed on the complex unit sphere.
pub fn random_unit<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> CVector {
    loop {
        let v = CVector::from_fn(dim, |_, _| gaussian_entry(rng));
        let n = v.norm();
        if n > 1e-3 {
            return v / c(n);
        }
    }
}

pub fn random_square<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> CMatrix {
    CMatrix::from_fn(dim, dim, |_, _| uniform_entry(rng))
}

/// `dim × k` matrix with uniform entries; full column rank almost surely.
pub fn random_columns<R: Rng + ?Sized>(rng: &mut R, dim: usize, k: usize) -> CMatrix {
    CMatrix::from_fn(dim, k, |_, _| uniform_entry(rng))
}

/// `(G + G*) / 2` with `G` uniform in `[−1, 1]²`.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> HermitianMatrix {
    let g = random_square(rng, dim);
    HermitianMatrix::symmetrized((&g + g.adjoint()) * c(0.5))
}

/// Haar-distributed unitary from the QR factorization of a complex Gaussian.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> CMatrix {
    let g = CMatrix::from_fn(dim, dim, |_, _| gaussian_entry(rng));
    let qr = QR::new(g);
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..dim {
        let d = r[(j, j)];
        let n = d.norm();
        if n > 0.0 {
            let phase = d / n;
            for i in 0..dim {
                q[(i, j)] *= phase;
            }
        }
    }
    q
}

/// `U diag(s) U*` with `rank` eigenvalues drawn from `spectrum` and the
/// rest exactly zero.
pub fn random_psd_spectrum<R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    rank: usize,
    spectrum: (f64, f64),
) -> HermitianMatrix {
    let u = random_unitary(rng, dim);
    let mut m = CMatrix::zeros(dim, dim);
    for k in 0..rank.min(dim) {
        let s = if spectrum.1 > spectrum.0 {
            rng.random_range(spectrum.0..=spectrum.1)
        } else {
            spectrum.0
        };
        let col = u.column(k);
        m += (&col * col.adjoint()) * c(s);
    }
    HermitianMatrix::symmetrized(m)
}

/// PSD matrix of exact rank with eigenvalues in `[0.5, 2]`.
pub fn random_psd<R: Rng + ?Sized>(rng: &mut R, dim: usize, rank: usize) -> HermitianMatrix {
    random_psd_spectrum(rng, dim, rank, (0.5, 2.0))
}

pub fn condition_number(m: &CMatrix) -> f64 {
    let sv = m.clone().singular_values();
    let max = sv.iter().copied().fold(0.0, f64::max);
    let min = sv.iter().copied().fold(f64::INFINITY, f64::min);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Uniform-entry matrix resampled until its condition number is at most
/// `max_condition`.
pub fn random_invertible<R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    max_condition: f64,
) -> Result<CMatrix> {
    for _ in 0..MAX_RESAMPLES {
        let t = random_square(rng, dim);
        if condition_number(&t) <= max_condition {
            return Ok(t);
        }
    }
    Err(Error::InvalidArgument(format!(
        "could not sample a {dim}x{dim} matrix with condition number <= {max_condition}"
    )))
}

/// `U diag(s) V` with singular values log-uniform over `[1/condition, 1]`,
/// the extremes always included.
pub fn random_ill_conditioned<R: Rng + ?Sized>(rng: &mut R, dim: usize, condition: f64) -> CMatrix {
    let u = random_unitary(rng, dim);
    let v = random_unitary(rng, dim);
    let span = condition.ln();
    let s = CVector::from_fn(dim, |i, _| {
        let t = match i {
            0 => 0.0,
            _ if i + 1 == dim => 1.0,
            _ => rng.random_range(0.0..=1.0),
        };
        c((-t * span).exp())
    });
    u * CMatrix::from_diagonal(&s) * v
}

pub fn random_automorphism<R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    tol: &Tolerances,
) -> Result<OrderAutomorphism> {
    let t = random_invertible(rng, dim, MAX_CONDITION)?;
    let conjugate = rng.random_bool(0.5);
    let x = random_hermitian(rng, dim);
    OrderAutomorphism::new(t, conjugate, x, tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum GeneratorKind {
    Hermitian,
    Psd,
    PsdRank,
    RankOne,
    Invertible,
    Unitary,
    Automorphism,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub dim: usize,
    pub rank: Option<usize>,
    pub spectrum_range: (f64, f64),
    pub seed: u64,
    pub kind: GeneratorKind,
}

impl GeneratorSpec {
    pub fn new(kind: GeneratorKind, dim: usize, seed: u64) -> Self {
        GeneratorSpec {
            dim,
            rank: None,
            spectrum_range: (0.5, 2.0),
            seed,
            kind,
        }
    }

    pub fn with_rank(mut self, rank: usize) -> Self {
        self.rank = Some(rank);
        self
    }

    pub fn with_spectrum(mut self, lo: f64, hi: f64) -> Self {
        self.spectrum_range = (lo, hi);
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Generated {
    Hermitian(HermitianMatrix),
    Psd(PsdMatrix),
    /// A general square matrix (invertible or unitary kinds).
    Matrix(CMatrix),
    Automorphism(OrderAutomorphism),
}

/// Draws one instance; the output depends only on `spec`.
pub fn generate(spec: &GeneratorSpec, tol: &Tolerances) -> Result<Generated> {
    let GeneratorSpec {
        dim,
        rank,
        spectrum_range: (lo, hi),
        seed,
        kind,
    } = *spec;
    if dim == 0 || dim > crate::hermitian::MAX_DIM {
        return Err(Error::InvalidArgument(format!("unsupported dimension {dim}")));
    }
    if let Some(r) = rank {
        if r > dim {
            return Err(Error::InvalidArgument(format!("rank {r} exceeds dimension {dim}")));
        }
    }
    if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
        return Err(Error::InvalidArgument(format!("empty spectrum range [{lo}, {hi}]")));
    }
    let needs_positive = matches!(kind, GeneratorKind::Psd | GeneratorKind::PsdRank | GeneratorKind::RankOne);
    if needs_positive && !(lo > tol.rank * hi.max(1.0)) {
        return Err(Error::InvalidArgument(format!(
            "spectrum range [{lo}, {hi}] cannot produce an exact rank"
        )));
    }
    let mut rng = rng_from_seed(seed);
    let psd = |rng: &mut SeededRng, r: usize| -> Result<Generated> {
        let m = random_psd_spectrum(rng, dim, r, (lo, hi));
        Ok(Generated::Psd(PsdMatrix::new(m, tol)?))
    };
    match kind {
        GeneratorKind::Hermitian => Ok(Generated::Hermitian(random_hermitian(&mut rng, dim))),
        GeneratorKind::Psd => psd(&mut rng, rank.unwrap_or(dim)),
        GeneratorKind::PsdRank => {
            let r = rank.ok_or_else(|| Error::InvalidArgument("PSD_RANK requires a rank".into()))?;
            psd(&mut rng, r)
        }
        GeneratorKind::RankOne => psd(&mut rng, 1),
        GeneratorKind::Invertible => Ok(Generated::Matrix(random_invertible(&mut rng, dim, MAX_CONDITION)?)),
        GeneratorKind::Unitary => Ok(Generated::Matrix(random_unitary(&mut rng, dim))),
        GeneratorKind::Automorphism => Ok(Generated::Automorphism(random_automorphism(&mut rng, dim, tol)?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::{operator_norm, rank_numeric};

    #[test]
    fn psd_rank_is_exact() {
        let tol = Tolerances::default();
        let spec = GeneratorSpec::new(GeneratorKind::PsdRank, 3, 7).with_rank(2);
        let Generated::Psd(p) = generate(&spec, &tol).unwrap() else { panic!() };
        assert_eq!(rank_numeric(&p, &tol).unwrap(), 2);
        for d in 2..=8 {
            for r in 0..=d {
                let spec = GeneratorSpec::new(GeneratorKind::PsdRank, d, 100 + r as u64).with_rank(r);
                let Generated::Psd(p) = generate(&spec, &tol).unwrap() else { panic!() };
                assert_eq!(rank_numeric(&p, &tol).unwrap(), r);
            }
        }
    }

    #[test]
    fn unitary_residual() {
        let tol = Tolerances::default();
        for (d, seed) in [(2, 1), (5, 2), (8, 3)] {
            let Generated::Matrix(u) = generate(&GeneratorSpec::new(GeneratorKind::Unitary, d, seed), &tol).unwrap() else {
                panic!()
            };
            let res = operator_norm(&(u.adjoint() * &u - CMatrix::identity(d, d)));
            assert!(res <= 1e-12, "{res:e}");
        }
    }

    #[test]
    fn invertible_condition_capped() {
        let tol = Tolerances::default();
        for seed in 0..50 {
            let Generated::Matrix(t) = generate(&GeneratorSpec::new(GeneratorKind::Invertible, 4, seed), &tol).unwrap()
            else {
                panic!()
            };
            assert!(condition_number(&t) <= MAX_CONDITION);
        }
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let tol = Tolerances::default();
        for kind in [
            GeneratorKind::Hermitian,
            GeneratorKind::Psd,
            GeneratorKind::RankOne,
            GeneratorKind::Invertible,
            GeneratorKind::Unitary,
            GeneratorKind::Automorphism,
        ] {
            let spec = GeneratorSpec::new(kind, 4, 99);
            assert_eq!(generate(&spec, &tol).unwrap(), generate(&spec, &tol).unwrap());
        }
    }

    #[test]
    fn unsatisfiable_specs() {
        let tol = Tolerances::default();
        let over = GeneratorSpec::new(GeneratorKind::PsdRank, 3, 1).with_rank(4);
        assert!(generate(&over, &tol).is_err());
        let missing = GeneratorSpec::new(GeneratorKind::PsdRank, 3, 1);
        assert!(generate(&missing, &tol).is_err());
        let empty = GeneratorSpec::new(GeneratorKind::Psd, 3, 1).with_spectrum(2.0, 1.0);
        assert!(generate(&empty, &tol).is_err());
        let zero = GeneratorSpec::new(GeneratorKind::Psd, 3, 1).with_spectrum(0.0, 1.0);
        assert!(generate(&zero, &tol).is_err());
    }

    #[test]
    fn derived_seeds_differ() {
        let a: Vec<u64> = (0..100).map(|i| derive_seed(42, i)).collect();
        let mut b = a.clone();
        b.sort_unstable();
        b.dedup();
        assert_eq!(a.len(), b.len());
    }
}
