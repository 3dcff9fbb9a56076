//! Shared helpers for unit tests.

pub(crate) use crate::harness::generate::{
    random_columns, random_hermitian, random_psd, random_square, random_unit, random_unitary,
    random_vector, SeededRng,
};

pub(crate) fn rng(seed: u64) -> SeededRng {
    crate::harness::generate::rng_from_seed(seed)
}
