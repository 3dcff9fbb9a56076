//! Order structure of finite-dimensional bounded observables.
//!
//! Hermitian matrices ordered by `A ≤ B ⟺ B − A ⪰ 0`: order predicates with
//! witnesses, rank detection through the order alone, the order-automorphisms
//! `A ↦ T A T* + X` (and their conjugate-linear counterparts) together with
//! black-box reconstruction, and classifiers for automorphisms that also
//! preserve commutativity, complementarity or orthogonality.

pub mod automorphism;
pub mod cli;
pub mod error;
pub mod harness;
pub mod hermitian;
pub mod json;
pub mod loewner;
pub mod order_rank;
pub mod preservers;
pub mod tolerance;

#[cfg(test)]
mod testutil;

pub use automorphism::{reconstruct, OrderAutomorphism, ReconstructionReport};
pub use error::{Error, Result};
pub use hermitian::{eig, CMatrix, CVector, Eigendecomposition, HermitianMatrix, PsdMatrix, C64};
pub use loewner::{compare, leq, max_lambda, range_dominates, OrderResult, OrderWitness, Relation};
pub use tolerance::Tolerances;
