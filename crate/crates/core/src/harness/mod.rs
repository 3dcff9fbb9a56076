pub mod generate;
pub mod suites;

pub use generate::{generate, GeneratorKind, GeneratorSpec, Generated};
pub use suites::{run_case, run_suite, FailureRecord, SuiteReport, SUITES};
