//! The `obsorder` command line.
//!
//! Every subcommand reads matrix JSON files (`-` for standard input),
//! validates all inputs before computing, and prints one JSON document on
//! standard output. Errors go to standard error with no output on stdout.
//!
//! Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success; `order` comparable, `preserver` preserved, `verify` passed |
//! | 1 | `order` incomparable, `preserver` not preserved, `verify` failed |
//! | 2 | invalid input or usage |
//! | 3 | `reconstruct`: oracle is not an order-automorphism |
//! | 4 | `reconstruct`: oracle transport failure |
//! | 5 | `preserver`: counterexample search exhausted |

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::automorphism::{reconstruct_with, ReconstructOptions, ReconstructionReport, SubprocessOracle};
use crate::error::{Error, Result};
use crate::harness::suites::{run_suite, SuiteReport};
use crate::hermitian::{c, HermitianMatrix, PsdMatrix};
use crate::json::{AutomorphismJson, MatrixJson, VectorJson};
use crate::loewner::{compare, max_lambda, OrderWitness, Relation};
use crate::order_rank::rank_gt_np1_witness;
use crate::preservers::{preserves_relation, PreserverClassification, RelationKind};
use crate::tolerance::Tolerances;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NOT_AUTOMORPHIC: i32 = 3;
pub const EXIT_TRANSPORT: i32 = 4;
pub const EXIT_SEARCH_EXHAUSTED: i32 = 5;

/// Distance from unit norm within which `lambda-max` normalizes `x`.
pub const UNIT_NORMALIZATION_SLACK: f64 = 1e-6;

#[derive(Debug, Parser)]
#[command(name = "obsorder", version, about = "Loewner order tools for Hermitian matrices")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Relative tolerance of the order predicate.
    #[arg(long, global = true, default_value_t = Tolerances::DEFAULT.psd)]
    pub tol_psd: f64,
    /// Relative eigenvalue threshold for numerical rank.
    #[arg(long, global = true, default_value_t = Tolerances::DEFAULT.rank)]
    pub tol_rank: f64,
    /// Residual threshold for range membership.
    #[arg(long, global = true, default_value_t = Tolerances::DEFAULT.range)]
    pub tol_range: f64,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Directory for auxiliary output files.
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
}

impl GlobalArgs {
    pub fn tolerances(&self) -> Result<Tolerances> {
        Tolerances::new(self.tol_psd, self.tol_rank, self.tol_range, Tolerances::DEFAULT.recon)
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compare two Hermitian matrices in the Loewner order.
    Order {
        a: PathBuf,
        b: PathBuf,
    },
    /// Largest λ with λ·x⊗x ≤ B.
    LambdaMax {
        b: PathBuf,
        /// Vector as inline JSON, e.g. '[[1,0],[0,0]]' or '[1, 0]'.
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// Decide rank A > n + 1 through minorants E, F.
    RankOrder {
        a: PathBuf,
        #[arg(long)]
        n: usize,
    },
    /// Recover (T, conjugate, X) from an oracle subprocess.
    Reconstruct {
        /// Oracle command line; the dimension is passed as its first argument.
        #[arg(long, allow_hyphen_values = true)]
        oracle: String,
        #[arg(long)]
        dim: usize,
    },
    /// Decide whether an automorphism preserves a relation.
    Preserver {
        phi: PathBuf,
        /// commutativity, complementarity or orthogonality.
        #[arg(long)]
        kind: RelationKind,
        /// Candidate pairs tried when searching for a counterexample.
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
    /// Run a verification suite.
    Verify {
        suite: String,
        /// Comma-separated dimensions.
        #[arg(long, value_delimiter = ',', default_value = "2,3,4")]
        dims: Vec<usize>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Report elapsed_ms as 0 so output is byte-reproducible.
        #[arg(long)]
        no_timing: bool,
    },
}

/// Outcome of a subcommand: the document to print and the exit code.
pub struct Outcome {
    pub json: String,
    pub code: i32,
}

fn outcome<T: Serialize>(value: &T, code: i32) -> Result<Outcome> {
    Ok(Outcome {
        json: serde_json::to_string(value)?,
        code,
    })
}

fn read_input(path: &Path, stdin: &mut dyn Read) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        stdin.read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path)
            .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))
    }
}

fn read_matrix(path: &Path, stdin: &mut dyn Read) -> Result<HermitianMatrix> {
    let text = read_input(path, stdin)?;
    serde_json::from_str::<MatrixJson>(&text)?.to_hermitian()
}

#[derive(Serialize)]
struct WitnessOut {
    refutes: &'static str,
    x: VectorJson,
    gap: f64,
}

#[derive(Serialize)]
struct OrderOut {
    relation: Relation,
    witnesses: Vec<WitnessOut>,
}

fn witness_out(refutes: &'static str, w: &OrderWitness) -> WitnessOut {
    WitnessOut {
        refutes,
        x: VectorJson::from_vector(&w.x),
        gap: w.gap,
    }
}

fn cmd_order(a: &Path, b: &Path, tol: &Tolerances, stdin: &mut dyn Read) -> Result<Outcome> {
    if a.as_os_str() == "-" && b.as_os_str() == "-" {
        return Err(Error::InvalidArgument("only one input may be read from stdin".into()));
    }
    let a = read_matrix(a, stdin)?;
    let b = read_matrix(b, stdin)?;
    let r = compare(&a, &b, tol)?;
    let mut witnesses = Vec::new();
    if let Some(w) = &r.witness_ab {
        witnesses.push(witness_out("A<=B", w));
    }
    if let Some(w) = &r.witness_ba {
        witnesses.push(witness_out("B<=A", w));
    }
    let code = if r.relation == Relation::Incomparable { EXIT_NEGATIVE } else { EXIT_OK };
    outcome(&OrderOut { relation: r.relation, witnesses }, code)
}

#[derive(Serialize)]
struct LambdaOut {
    lambda: Option<f64>,
}

fn cmd_lambda_max(b: &Path, x: &str, tol: &Tolerances, stdin: &mut dyn Read) -> Result<Outcome> {
    let b = PsdMatrix::new(read_matrix(b, stdin)?, tol)?;
    let x = serde_json::from_str::<VectorJson>(x)?.to_vector()?;
    let norm = x.norm();
    if (norm - 1.0).abs() > UNIT_NORMALIZATION_SLACK {
        return Err(Error::NotUnit { norm });
    }
    let x = x / c(norm);
    outcome(&LambdaOut { lambda: max_lambda(&x, &b, tol)? }, EXIT_OK)
}

#[derive(Serialize)]
#[serde(untagged)]
enum WitnessPart {
    Path(String),
    Matrix(MatrixJson),
}

#[derive(Serialize)]
struct RankWitnessOut {
    #[serde(rename = "E")]
    e: WitnessPart,
    #[serde(rename = "F")]
    f: WitnessPart,
}

#[derive(Serialize)]
struct RankOrderOut {
    n: usize,
    rank_gt_np1: bool,
    witness: Option<RankWitnessOut>,
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<String> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    fs::write(&path, format!("{contents}\n"))?;
    Ok(path.display().to_string())
}

fn cmd_rank_order(
    a: &Path,
    n: usize,
    tol: &Tolerances,
    out_dir: Option<&Path>,
    stdin: &mut dyn Read,
) -> Result<Outcome> {
    let a = PsdMatrix::new(read_matrix(a, stdin)?, tol)?;
    let w = rank_gt_np1_witness(&a, n, tol)?;
    let witness = match (&w, out_dir) {
        (None, _) => None,
        (Some(w), None) => Some(RankWitnessOut {
            e: WitnessPart::Matrix(MatrixJson::from_hermitian(&w.e)),
            f: WitnessPart::Matrix(MatrixJson::from_hermitian(&w.f)),
        }),
        (Some(w), Some(dir)) => {
            let e = serde_json::to_string(&MatrixJson::from_hermitian(&w.e))?;
            let f = serde_json::to_string(&MatrixJson::from_hermitian(&w.f))?;
            Some(RankWitnessOut {
                e: WitnessPart::Path(write_file(dir, "E.json", &e)?),
                f: WitnessPart::Path(write_file(dir, "F.json", &f)?),
            })
        }
    };
    outcome(
        &RankOrderOut {
            n,
            rank_gt_np1: w.is_some(),
            witness,
        },
        EXIT_OK,
    )
}

#[derive(Serialize)]
pub struct ReconstructionOut {
    #[serde(rename = "T")]
    pub t: MatrixJson,
    pub conjugate: bool,
    #[serde(rename = "X")]
    pub x: MatrixJson,
    pub phase_gauge: String,
    pub conjugation_degenerate: bool,
    pub max_residual: f64,
    pub probes_used: usize,
}

impl From<&ReconstructionReport> for ReconstructionOut {
    fn from(r: &ReconstructionReport) -> Self {
        ReconstructionOut {
            t: MatrixJson::from_matrix(r.recovered.t()),
            conjugate: r.recovered.conjugate(),
            x: MatrixJson::from_hermitian(r.recovered.x()),
            phase_gauge: r.phase_gauge.clone(),
            conjugation_degenerate: r.conjugation_degenerate,
            max_residual: r.max_residual,
            probes_used: r.probes_used,
        }
    }
}

fn cmd_reconstruct(oracle: &str, dim: usize, tol: &Tolerances, seed: u64) -> Result<Outcome> {
    if dim < 2 {
        return Err(Error::DimensionTooSmall { dim, min: 2 });
    }
    if dim > crate::hermitian::MAX_DIM {
        return Err(Error::DimensionTooLarge {
            dim,
            max: crate::hermitian::MAX_DIM,
        });
    }
    let mut child = SubprocessOracle::from_command_line(oracle, dim)?;
    let options = ReconstructOptions {
        validation_seed: seed,
        ..ReconstructOptions::default()
    };
    let report = reconstruct_with(&mut child, tol, &options)?;
    outcome(&ReconstructionOut::from(&report), EXIT_OK)
}

#[derive(Serialize)]
pub struct CanonicalFormOut {
    #[serde(rename = "U")]
    pub u: MatrixJson,
    pub antiunitary: bool,
    pub lambda: f64,
    pub mu: Option<f64>,
}

#[derive(Serialize)]
pub struct CounterexampleOut {
    #[serde(rename = "A")]
    pub a: MatrixJson,
    #[serde(rename = "B")]
    pub b: MatrixJson,
    pub holds_before: bool,
    pub holds_after: bool,
}

#[derive(Serialize)]
pub struct ClassificationOut {
    pub kind: RelationKind,
    pub preserves: bool,
    pub canonical_form: Option<CanonicalFormOut>,
    pub counterexample: Option<CounterexampleOut>,
    pub attempts: usize,
}

impl From<&PreserverClassification> for ClassificationOut {
    fn from(r: &PreserverClassification) -> Self {
        ClassificationOut {
            kind: r.kind,
            preserves: r.preserves,
            canonical_form: r.canonical_form.as_ref().map(|f| CanonicalFormOut {
                u: MatrixJson::from_matrix(&f.u),
                antiunitary: f.antiunitary,
                lambda: f.lambda,
                mu: f.mu,
            }),
            counterexample: r.counterexample.as_ref().map(|ce| CounterexampleOut {
                a: MatrixJson::from_hermitian(&ce.a),
                b: MatrixJson::from_hermitian(&ce.b),
                holds_before: ce.holds_before,
                holds_after: ce.holds_after,
            }),
            attempts: r.attempts,
        }
    }
}

fn cmd_preserver(
    phi: &Path,
    kind: RelationKind,
    trials: usize,
    tol: &Tolerances,
    seed: u64,
    stdin: &mut dyn Read,
) -> Result<Outcome> {
    let text = read_input(phi, stdin)?;
    let phi = serde_json::from_str::<AutomorphismJson>(&text)?.to_automorphism(tol)?;
    let r = preserves_relation(&phi, kind, trials, seed, tol)?;
    let code = if r.preserves { EXIT_OK } else { EXIT_NEGATIVE };
    outcome(&ClassificationOut::from(&r), code)
}

fn cmd_verify(
    suite: &str,
    dims: &[usize],
    trials: usize,
    no_timing: bool,
    tol: &Tolerances,
    seed: u64,
    out_dir: Option<&Path>,
) -> Result<Outcome> {
    let mut report: SuiteReport = run_suite(suite, dims, trials, seed, tol)?;
    if no_timing {
        report.elapsed_ms = 0;
    }
    let code = if report.passed() { EXIT_OK } else { EXIT_NEGATIVE };
    let out = outcome(&report, code)?;
    if let Some(dir) = out_dir {
        write_file(dir, &format!("{suite}.json"), &out.json)?;
    }
    Ok(out)
}

/// Exit code for a failed subcommand.
pub fn error_code(e: &Error) -> i32 {
    match e {
        Error::OracleNotAutomorphic(_) => EXIT_NOT_AUTOMORPHIC,
        Error::Transport(_) => EXIT_TRANSPORT,
        Error::SearchExhausted { .. } => EXIT_SEARCH_EXHAUSTED,
        _ => EXIT_INPUT,
    }
}

pub fn execute(cli: &Cli, stdin: &mut dyn Read) -> Result<Outcome> {
    let tol = cli.global.tolerances()?;
    let seed = cli.global.seed;
    let out_dir = cli.global.out_dir.as_deref();
    match &cli.command {
        Command::Order { a, b } => cmd_order(a, b, &tol, stdin),
        Command::LambdaMax { b, x } => cmd_lambda_max(b, x, &tol, stdin),
        Command::RankOrder { a, n } => cmd_rank_order(a, *n, &tol, out_dir, stdin),
        Command::Reconstruct { oracle, dim } => cmd_reconstruct(oracle, *dim, &tol, seed),
        Command::Preserver { phi, kind, trials } => cmd_preserver(phi, *kind, *trials, &tol, seed, stdin),
        Command::Verify {
            suite,
            dims,
            trials,
            no_timing,
        } => cmd_verify(suite, dims, *trials, *no_timing, &tol, seed, out_dir),
    }
}

/// Parses `args`, runs the subcommand and writes its output; returns the
/// process exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match execute(&cli, stdin) {
        Ok(out) => {
            let _ = writeln!(stdout, "{}", out.json);
            out.code
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            error_code(&e)
        }
    }
}

