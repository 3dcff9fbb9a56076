use serde::Serialize;

use super::Oracle;
use crate::error::Result;
use crate::harness::generate::{derive_seed, random_hermitian, random_psd, rng_from_seed};
use crate::hermitian::HermitianMatrix;
use crate::loewner::{compare, OrderWitness, Relation};
use crate::tolerance::Tolerances;

/// A pair whose order relation changed under the oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderViolation {
    pub trial: usize,
    pub a: HermitianMatrix,
    pub b: HermitianMatrix,
    pub before: Relation,
    pub after: Relation,
    /// Witness refuting the image relation `φ(A) ≤ φ(B)` or `φ(B) ≤ φ(A)`,
    /// whichever direction was lost.
    pub witness: Option<OrderWitness>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrderCheckReport {
    pub trials: usize,
    pub violations: Vec<OrderViolation>,
}

impl OrderCheckReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Serialize)]
struct Digest {
    trial: usize,
    before: Relation,
    after: Relation,
}

impl OrderViolation {
    pub fn summary(&self) -> String {
        serde_json::to_string(&Digest {
            trial: self.trial,
            before: self.before,
            after: self.after,
        })
        .unwrap_or_default()
    }
}

/// Samples ordered pairs `(A, A + P)` on even trials and independent
/// random pairs on odd trials, and reports every pair whose relation is
/// not reproduced by the images.
pub fn check_order_automorphism<O: Oracle + ?Sized>(
    oracle: &mut O,
    trials: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<OrderCheckReport> {
    let d = oracle.dim();
    let mut violations = Vec::new();
    for trial in 0..trials {
        let mut rng = rng_from_seed(derive_seed(seed, trial as u64));
        let a = random_hermitian(&mut rng, d);
        let b = if trial % 2 == 0 {
            &a + &random_psd(&mut rng, d, d)
        } else {
            random_hermitian(&mut rng, d)
        };
        let before = compare(&a, &b, tol)?;
        let (fa, fb) = (oracle.query(&a)?, oracle.query(&b)?);
        let after = compare(&fa, &fb, tol)?;
        if before.relation != after.relation {
            let witness = after.witness_ab.clone().or(after.witness_ba.clone());
            violations.push(OrderViolation {
                trial,
                a,
                b,
                before: before.relation,
                after: after.relation,
                witness,
            });
        }
    }
    Ok(OrderCheckReport { trials, violations })
}
