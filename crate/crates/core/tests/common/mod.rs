//! Golden-file cases for the `obsorder` binary, shared by the CLI tests and
//! the acceptance run.

#![allow(dead_code)]

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};

pub const BIN: &str = env!("CARGO_BIN_EXE_obsorder");
pub const ORACLE: &str = env!("CARGO_BIN_EXE_obsorder-oracle");

pub fn tests_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests")
}

pub fn fixture(name: &str) -> String {
    tests_dir().join("fixtures").join(format!("{name}.json")).display().to_string()
}

pub struct GoldenCase {
    pub name: &'static str,
    pub args: Vec<String>,
    pub stdin: Option<&'static str>,
    pub exit: i32,
}

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run(args: &[String], stdin: Option<&str>) -> Run {
    let mut child = Command::new(BIN)
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("launch obsorder");
    {
        let mut pipe = child.stdin.take().unwrap();
        if let Some(text) = stdin {
            pipe.write_all(text.as_bytes()).unwrap();
        }
    }
    let out = child.wait_with_output().unwrap();
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn case(name: &'static str, args: &[&str], stdin: Option<&'static str>, exit: i32) -> GoldenCase {
    let args = args
        .iter()
        .map(|a| match a.strip_prefix('@') {
            Some(f) => fixture(f),
            None => a.replace("{oracle}", ORACLE),
        })
        .collect();
    GoldenCase { name, args, stdin, exit }
}

pub fn golden_cases() -> Vec<GoldenCase> {
    vec![
        case("order_leq", &["order", "@zero2", "@identity2"], None, 0),
        case("order_incomparable", &["order", "@e11", "@e22"], None, 1),
        case("order_equal_stdin", &["order", "-", "@identity2"], Some(r#"{"dim":2,"entries":[[[1,0],[0,0]],[[0,0],[1,0]]]}"#), 0),
        case("order_nonsquare", &["order", "@nonsquare", "@identity2"], None, 2),
        case("order_dim_mismatch", &["order", "@identity2", "@identity3"], None, 2),
        case("lambda_max_feasible", &["lambda-max", "@diag41", "--x", "[1,0]"], None, 0),
        case("lambda_max_complex", &["lambda-max", "@psd3_complex", "--x", "[[0.6,0],[0,0.8],[0,0]]"], None, 0),
        case("lambda_max_infeasible", &["lambda-max", "@e11", "--x", "[0,1]"], None, 0),
        case("lambda_max_normalized", &["lambda-max", "@diag41", "--x", "[1.0000001,0]"], None, 0),
        case("lambda_max_not_unit", &["lambda-max", "@diag41", "--x", "[2,0]"], None, 2),
        case("lambda_max_not_psd", &["lambda-max", "@indefinite", "--x", "[1,0]"], None, 2),
        case("rank_order_witness", &["rank-order", "@identity4", "--n", "1"], None, 0),
        case("rank_order_complex", &["rank-order", "@psd3_complex", "--n", "1"], None, 0),
        case("rank_order_none", &["rank-order", "@identity2", "--n", "1"], None, 0),
        case("rank_order_not_psd", &["rank-order", "@indefinite", "--n", "1"], None, 2),
        case("reconstruct_identity", &["reconstruct", "--oracle", "{oracle} identity", "--dim", "3"], None, 0),
        case("reconstruct_affine", &["reconstruct", "--oracle", "{oracle} affine", "--dim", "2"], None, 0),
        case("reconstruct_conjugate", &["reconstruct", "--oracle", "{oracle} conjugate", "--dim", "2"], None, 0),
        case("reconstruct_cube", &["reconstruct", "--oracle", "{oracle} cube", "--dim", "2"], None, 3),
        case("reconstruct_transport", &["reconstruct", "--oracle", "{oracle} no-such-map", "--dim", "2"], None, 4),
        case("preserver_orthogonality", &["preserver", "@phi_diag12", "--kind", "orthogonality"], None, 1),
        case("preserver_commutativity", &["preserver", "@phi_swap_antiunitary", "--kind", "commutativity"], None, 0),
        case("preserver_complementarity", &["preserver", "@phi_shifted", "--kind", "complementarity", "--seed", "3"], None, 1),
        case("preserver_singular", &["preserver", "@phi_singular", "--kind", "commutativity"], None, 2),
        case("verify_lemma_rng", &["verify", "lemma-rng", "--dims", "2,3,4", "--trials", "100", "--seed", "1", "--no-timing"], None, 0),
        case("verify_thm2", &["verify", "thm2", "--dims", "2,3", "--trials", "50", "--seed", "1", "--no-timing"], None, 0),
        case("verify_loose_order", &["verify", "order", "--dims", "2", "--trials", "10", "--seed", "1", "--tol-psd", "0.99", "--no-timing"], None, 1),
        case("verify_unknown", &["verify", "nosuch"], None, 2),
    ]
}

pub fn golden_path(name: &str) -> PathBuf {
    tests_dir().join("golden").join(format!("{name}.json"))
}

/// Runs a case twice and checks exit code, byte-identical output and the
/// golden file. Error cases must print nothing on stdout and a message on
/// stderr. Returns a description of the first mismatch.
pub fn check_golden(case: &GoldenCase) -> Result<(), String> {
    let first = run(&case.args, case.stdin);
    let second = run(&case.args, case.stdin);
    if first.code != case.exit {
        return Err(format!("{}: exit {} (expected {}), stderr: {}", case.name, first.code, case.exit, first.stderr));
    }
    if first.stdout != second.stdout || second.code != first.code {
        return Err(format!("{}: output differs between runs", case.name));
    }
    if case.exit >= 2 {
        if !first.stdout.is_empty() || first.stderr.is_empty() {
            return Err(format!("{}: error path must write only to stderr", case.name));
        }
        return Ok(());
    }
    let path = golden_path(case.name);
    if std::env::var_os("OBSORDER_BLESS").is_some() {
        std::fs::write(&path, &first.stdout).unwrap();
    }
    let expected = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    if expected != first.stdout {
        return Err(format!("{}: output differs from {}\n{}", case.name, path.display(), first.stdout));
    }
    Ok(())
}
