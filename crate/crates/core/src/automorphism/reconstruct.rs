//! Recovery of `(T, conjugate, X)` from black-box access to an
//! order-automorphism.
//!
//! With `X = φ(0)` and `ψ = φ − X`, the map `ψ` sends the rank-one
//! projector onto `e_j` to `t_j ⊗ t_j`, where `t_j` is the `j`-th column of
//! `T` up to a unit-modulus factor. Superpositions `(e_1 + e_j)/√2` fix the
//! relative phases, and `(e_1 + i·e_2)/√2` tells the linear branch from the
//! conjugate-linear one. The result is validated on random Hermitian probes.

use rand::SeedableRng;

use super::{Oracle, OrderAutomorphism};
use crate::error::{Error, Result};
use crate::harness::generate::{random_hermitian, SeededRng};
use crate::hermitian::{c, eig, operator_norm, CMatrix, CVector, HermitianMatrix, C64};
use crate::tolerance::Tolerances;

/// Largest relative residual accepted from a reconstruction.
pub const RECONSTRUCTION_RESIDUAL_LIMIT: f64 = 1e-6;

/// Random Hermitian matrices used to validate a reconstruction.
pub const VALIDATION_PROBES: usize = 20;

pub const PHASE_GAUGE_RULE: &str =
    "largest-magnitude entry of the first column of T is real and positive";

const DEFAULT_VALIDATION_SEED: u64 = 0x0b5e_7a11_d8e5_0001;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReconstructOptions {
    pub residual_limit: f64,
    pub validation_probes: usize,
    pub validation_seed: u64,
}

impl Default for ReconstructOptions {
    fn default() -> Self {
        ReconstructOptions {
            residual_limit: RECONSTRUCTION_RESIDUAL_LIMIT,
            validation_probes: VALIDATION_PROBES,
            validation_seed: DEFAULT_VALIDATION_SEED,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReconstructionReport {
    pub recovered: OrderAutomorphism,
    pub phase_gauge: String,
    /// Set when the linear and conjugate-linear branches both fit the
    /// distinguishing probe; `conjugate` is then reported as false.
    pub conjugation_degenerate: bool,
    pub max_residual: f64,
    pub probes_used: usize,
}

struct Probe<'a, O: ?Sized> {
    oracle: &'a mut O,
    calls: usize,
}

impl<O: Oracle + ?Sized> Probe<'_, O> {
    fn ask(&mut self, a: &HermitianMatrix) -> Result<HermitianMatrix> {
        self.calls += 1;
        let out = self.oracle.query(a)?;
        if out.dim() != a.dim() {
            return Err(Error::Transport(format!(
                "oracle answered with dimension {} instead of {}",
                out.dim(),
                a.dim()
            )));
        }
        Ok(out)
    }
}

fn not_automorphic(msg: impl Into<String>) -> Error {
    Error::OracleNotAutomorphic(msg.into())
}

fn relative_residual(observed: &HermitianMatrix, predicted: &HermitianMatrix) -> f64 {
    operator_norm(&(observed.matrix() - predicted.matrix())) / observed.spectral_norm().max(1.0)
}

fn unit(d: usize, entries: &[(usize, C64)]) -> CVector {
    let mut v = CVector::zeros(d);
    for &(i, z) in entries {
        v[i] = z;
    }
    let n = v.norm();
    v / c(n)
}

/// `ψ(E_jj) = t_j ⊗ t_j`: returns `t_j` with the eigenvector phase
/// convention, after checking positivity and rank one.
fn column_from_projection(image: &HermitianMatrix, j: usize, tol: &Tolerances) -> Result<CVector> {
    let e = eig(image)?;
    let norm = e.spectral_norm();
    if e.min_eigenvalue() < -tol.psd * norm.max(1.0) {
        return Err(not_automorphic(format!(
            "image of the projector onto e_{} is not positive (eigenvalue {:e})",
            j + 1,
            e.min_eigenvalue()
        )));
    }
    let significant = e.significant_indices(tol);
    if significant.len() != 1 {
        return Err(not_automorphic(format!(
            "image of the projector onto e_{} has rank {} instead of 1",
            j + 1,
            significant.len()
        )));
    }
    let k = significant[0];
    Ok(e.vector(k) * c(e.eigenvalues[k].sqrt()))
}

/// Unit `α` minimizing `‖M − ½(α a b* + ᾱ b a*)‖_F` over complex `α`.
fn relative_phase(m: &CMatrix, a: &CVector, b: &CVector) -> Result<C64> {
    let ab = a * b.adjoint();
    let ba = b * a.adjoint();
    let s = &ab + &ba;
    let k = (&ab - &ba) * C64::new(0.0, 1.0);
    let dot = |x: &CMatrix, y: &CMatrix| x.dotc(y).re;
    let target = m * c(2.0);
    let (ss, sk, kk) = (dot(&s, &s), dot(&s, &k), dot(&k, &k));
    let (rs, rk) = (dot(&s, &target), dot(&k, &target));
    let det = ss * kk - sk * sk;
    if !(det.abs() > f64::EPSILON * ss * kk) {
        return Err(not_automorphic("columns of T are parallel"));
    }
    let p = (rs * kk - rk * sk) / det;
    let q = (rk * ss - rs * sk) / det;
    let alpha = C64::new(p, q);
    let n = alpha.norm();
    if !(n > 1e-12) || !n.is_finite() {
        return Err(not_automorphic("superposition probe carries no phase information"));
    }
    Ok(alpha / n)
}

/// Recovers the automorphism behind `oracle` with default options.
pub fn reconstruct<O: Oracle + ?Sized>(oracle: &mut O, tol: &Tolerances) -> Result<ReconstructionReport> {
    reconstruct_with(oracle, tol, &ReconstructOptions::default())
}

pub fn reconstruct_with<O: Oracle + ?Sized>(
    oracle: &mut O,
    tol: &Tolerances,
    options: &ReconstructOptions,
) -> Result<ReconstructionReport> {
    let d = oracle.dim();
    if d < 2 {
        return Err(Error::DimensionTooSmall { dim: d, min: 2 });
    }
    let mut probe = Probe { oracle, calls: 0 };

    // Affine shift.
    let x = probe.ask(&HermitianMatrix::zeros(d))?;
    let psi = |probe: &mut Probe<'_, O>, v: &CVector| -> Result<HermitianMatrix> {
        Ok(&probe.ask(&HermitianMatrix::outer(v))? - &x)
    };

    // Columns up to phase.
    let mut diagonal_images = Vec::with_capacity(d);
    let mut columns = Vec::with_capacity(d);
    for j in 0..d {
        let image = psi(&mut probe, &unit(d, &[(j, c(1.0))]))?;
        columns.push(column_from_projection(&image, j, tol)?);
        diagonal_images.push(image);
    }

    // Relative phases against the first column.
    for j in 1..d {
        let image = psi(&mut probe, &unit(d, &[(0, c(1.0)), (j, c(1.0))]))?;
        let cross = image.matrix() - (diagonal_images[0].matrix() + diagonal_images[j].matrix()) * c(0.5);
        let alpha = relative_phase(&cross, &columns[0], &columns[j])?;
        columns[j] *= alpha.conj();
    }
    let t = CMatrix::from_columns(&columns);

    // Linear or conjugate-linear.
    let w = unit(d, &[(0, c(1.0)), (1, C64::new(0.0, 1.0))]);
    let observed = psi(&mut probe, &w)?;
    let linear = HermitianMatrix::outer(&(&t * &w));
    let conjugated = HermitianMatrix::outer(&(&t * w.map(|z| z.conj())));
    let linear_fit = relative_residual(&observed, &linear);
    let conjugate_fit = relative_residual(&observed, &conjugated);
    let limit = options.residual_limit;
    let (conjugate, conjugation_degenerate) = match (linear_fit <= limit, conjugate_fit <= limit) {
        (true, true) => (false, true),
        (true, false) => (false, false),
        (false, true) => (true, false),
        (false, false) => {
            return Err(not_automorphic(format!(
                "neither branch fits the complex superposition probe (residuals {linear_fit:e}, {conjugate_fit:e})"
            )))
        }
    };

    let recovered = OrderAutomorphism::new(t, conjugate, x.clone(), tol)
        .map_err(|e| not_automorphic(format!("recovered T is not invertible: {e}")))?;

    let mut rng = SeededRng::seed_from_u64(options.validation_seed);
    let mut max_residual: f64 = 0.0;
    for _ in 0..options.validation_probes {
        let a = random_hermitian(&mut rng, d);
        let observed = probe.ask(&a)?;
        max_residual = max_residual.max(relative_residual(&observed, &recovered.apply(&a)?));
    }
    if !(max_residual <= limit) {
        return Err(not_automorphic(format!(
            "validation residual {max_residual:e} exceeds {limit:e}"
        )));
    }

    Ok(ReconstructionReport {
        recovered,
        phase_gauge: PHASE_GAUGE_RULE.to_string(),
        conjugation_degenerate,
        max_residual,
        probes_used: probe.calls,
    })
}
