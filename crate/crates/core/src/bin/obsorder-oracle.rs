//! Reference oracles for `obsorder reconstruct`.
//!
//! Usage: `obsorder-oracle <dim> <map>` where `<map>` is one of
//! `identity` (A), `affine` (2A + I), `conjugate` (entrywise conjugate of A)
//! or `cube` (A³, not an order-automorphism).

use std::io::{self, BufWriter};
use std::process::ExitCode;

use obsorder::automorphism::oracle::serve;
use obsorder::{HermitianMatrix, Result};

fn cube(a: &HermitianMatrix) -> Result<HermitianMatrix> {
    let m = a.matrix();
    HermitianMatrix::new(m * m * m)
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (Some(dim), Some(map)) = (args.first().and_then(|d| d.parse::<usize>().ok()), args.get(1)) else {
        eprintln!("usage: obsorder-oracle <dim> <identity|affine|conjugate|cube>");
        return ExitCode::from(2);
    };
    let f: fn(&HermitianMatrix) -> Result<HermitianMatrix> = match map.as_str() {
        "identity" => |a| Ok(a.clone()),
        "affine" => |a| Ok(&a.scale(2.0) + &HermitianMatrix::identity(a.dim())),
        "conjugate" => |a| Ok(a.conjugate()),
        "cube" => cube,
        other => {
            eprintln!("unknown map `{other}`");
            return ExitCode::from(2);
        }
    };
    let stdin = io::stdin().lock();
    let stdout = BufWriter::new(io::stdout().lock());
    match serve(dim, stdin, stdout, f) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("oracle error: {e}");
            ExitCode::from(1)
        }
    }
}
