//! Black-box access to a map on Hermitian matrices.
//!
//! The subprocess transport speaks newline-delimited JSON over the child's
//! stdin/stdout: each request is `{"id": k, "matrix": M}` and the child must
//! answer `{"id": k, "matrix": φ(M)}` before the next request is sent. The
//! child receives the dimension as its first argument.

use std::io::{BufRead, BufReader, BufWriter, Write};
use std::process::{Child, ChildStdin, ChildStdout, Command, Stdio};

use serde::{Deserialize, Serialize};

use super::OrderAutomorphism;
use crate::error::{Error, Result};
use crate::hermitian::{check_same_dim, HermitianMatrix};
use crate::json::MatrixJson;

pub trait Oracle {
    fn dim(&self) -> usize;
    fn query(&mut self, a: &HermitianMatrix) -> Result<HermitianMatrix>;
}

impl<O: Oracle + ?Sized> Oracle for &mut O {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn query(&mut self, a: &HermitianMatrix) -> Result<HermitianMatrix> {
        (**self).query(a)
    }
}

impl<O: Oracle + ?Sized> Oracle for Box<O> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn query(&mut self, a: &HermitianMatrix) -> Result<HermitianMatrix> {
        (**self).query(a)
    }
}

/// In-process oracle backed by a closure.
pub struct FnOracle<F> {
    dim: usize,
    f: F,
}

impl<F> FnOracle<F>
where
    F: FnMut(&HermitianMatrix) -> Result<HermitianMatrix>,
{
    pub fn new(dim: usize, f: F) -> Self {
        FnOracle { dim, f }
    }
}

impl<F> Oracle for FnOracle<F>
where
    F: FnMut(&HermitianMatrix) -> Result<HermitianMatrix>,
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn query(&mut self, a: &HermitianMatrix) -> Result<HermitianMatrix> {
        let out = (self.f)(a)?;
        if out.dim() != self.dim {
            return Err(Error::Transport(format!(
                "oracle answered with dimension {} instead of {}",
                out.dim(),
                self.dim
            )));
        }
        Ok(out)
    }
}

/// Oracle evaluating a known automorphism.
#[derive(Debug, Clone)]
pub struct AutomorphismOracle(pub OrderAutomorphism);

impl Oracle for AutomorphismOracle {
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn query(&mut self, a: &HermitianMatrix) -> Result<HermitianMatrix> {
        self.0.apply(a)
    }
}

/// Counts the queries forwarded to the wrapped oracle.
pub struct CountingOracle<O> {
    inner: O,
    calls: usize,
}

impl<O: Oracle> CountingOracle<O> {
    pub fn new(inner: O) -> Self {
        CountingOracle { inner, calls: 0 }
    }

    pub fn calls(&self) -> usize {
        self.calls
    }

    pub fn into_inner(self) -> O {
        self.inner
    }
}

impl<O: Oracle> Oracle for CountingOracle<O> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn query(&mut self, a: &HermitianMatrix) -> Result<HermitianMatrix> {
        self.calls += 1;
        self.inner.query(a)
    }
}

/// One line of the stdio protocol, in either direction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleMessage {
    pub id: u64,
    pub matrix: MatrixJson,
}

pub struct SubprocessOracle {
    dim: usize,
    child: Child,
    stdin: Option<BufWriter<ChildStdin>>,
    stdout: BufReader<ChildStdout>,
    next_id: u64,
}

impl SubprocessOracle {
    /// Launches `program dim args...`.
    pub fn spawn(program: &str, args: &[String], dim: usize) -> Result<Self> {
        let mut child = Command::new(program)
            .arg(dim.to_string())
            .args(args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::inherit())
            .spawn()
            .map_err(|e| Error::Transport(format!("cannot launch `{program}`: {e}")))?;
        let stdin = child.stdin.take().expect("stdin is piped");
        let stdout = child.stdout.take().expect("stdout is piped");
        Ok(SubprocessOracle {
            dim,
            child,
            stdin: Some(BufWriter::new(stdin)),
            stdout: BufReader::new(stdout),
            next_id: 0,
        })
    }

    /// Splits a shell-style command line and launches it.
    pub fn from_command_line(command: &str, dim: usize) -> Result<Self> {
        let words = shlex::split(command)
            .filter(|w| !w.is_empty())
            .ok_or_else(|| Error::Transport(format!("cannot parse oracle command `{command}`")))?;
        Self::spawn(&words[0], &words[1..], dim)
    }

    fn exchange(&mut self, a: &HermitianMatrix) -> Result<HermitianMatrix> {
        let id = self.next_id;
        self.next_id += 1;
        let request = OracleMessage {
            id,
            matrix: MatrixJson::from_hermitian(a),
        };
        let stdin = self
            .stdin
            .as_mut()
            .ok_or_else(|| Error::Transport("oracle input is closed".into()))?;
        serde_json::to_writer(&mut *stdin, &request)
            .map_err(|e| Error::Transport(format!("cannot encode request: {e}")))?;
        stdin
            .write_all(b"\n")
            .and_then(|_| stdin.flush())
            .map_err(|e| Error::Transport(format!("cannot write to oracle: {e}")))?;

        let mut line = String::new();
        let read = self
            .stdout
            .read_line(&mut line)
            .map_err(|e| Error::Transport(format!("cannot read from oracle: {e}")))?;
        if read == 0 {
            return Err(Error::Transport("oracle closed its output".into()));
        }
        let response: OracleMessage = serde_json::from_str(line.trim_end())
            .map_err(|e| Error::Transport(format!("malformed oracle response: {e}")))?;
        if response.id != id {
            return Err(Error::Transport(format!(
                "protocol error: expected response id {id}, got {}",
                response.id
            )));
        }
        let m = response
            .matrix
            .to_hermitian()
            .map_err(|e| Error::Transport(format!("invalid matrix in oracle response: {e}")))?;
        check_same_dim(self.dim, m.dim()).map_err(|e| Error::Transport(e.to_string()))?;
        Ok(m)
    }
}

impl Oracle for SubprocessOracle {
    fn dim(&self) -> usize {
        self.dim
    }

    fn query(&mut self, a: &HermitianMatrix) -> Result<HermitianMatrix> {
        self.exchange(a)
    }
}

impl Drop for SubprocessOracle {
    fn drop(&mut self) {
        // Closing stdin is the shutdown signal.
        self.stdin.take();
        for _ in 0..100 {
            if !matches!(self.child.try_wait(), Ok(None)) {
                return;
            }
            std::thread::sleep(std::time::Duration::from_millis(10));
        }
        let _ = self.child.kill();
        let _ = self.child.wait();
    }
}

/// Serves the oracle protocol on `reader`/`writer` until end of input.
pub fn serve<R, W, F>(dim: usize, reader: R, mut writer: W, mut f: F) -> Result<()>
where
    R: BufRead,
    W: Write,
    F: FnMut(&HermitianMatrix) -> Result<HermitianMatrix>,
{
    for line in reader.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let request: OracleMessage = serde_json::from_str(&line)?;
        let a = request.matrix.to_hermitian()?;
        check_same_dim(dim, a.dim())?;
        let response = OracleMessage {
            id: request.id,
            matrix: MatrixJson::from_hermitian(&f(&a)?),
        };
        serde_json::to_writer(&mut writer, &response)?;
        writer.write_all(b"\n")?;
        writer.flush()?;
    }
    Ok(())
}
