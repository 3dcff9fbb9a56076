//! Python bindings.
//!
//! Matrices cross the boundary as nested sequences of complex numbers
//! (lists of rows, or 2-D numpy arrays); results come back as lists of
//! lists of `complex`.

use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use obsorder::automorphism::{reconstruct as reconstruct_core, FnOracle};
use obsorder::harness::suites::run_suite as run_suite_core;
use obsorder::loewner::OrderWitness;
use obsorder::order_rank::{is_rank_one_by_order as rank_one_core, rank_gt_np1_witness as witness_core};
use obsorder::preservers::{self, PreserverClassification, RelationKind};
use obsorder::{CMatrix, CVector, Error, HermitianMatrix, PsdMatrix};

create_exception!(pyobsorder, ObsorderError, PyException);
create_exception!(pyobsorder, NotAutomorphicError, ObsorderError);
create_exception!(pyobsorder, TransportError, ObsorderError);
create_exception!(pyobsorder, SearchExhaustedError, ObsorderError);

fn to_py(e: Error) -> PyErr {
    let msg = e.to_string();
    match e {
        Error::OracleNotAutomorphic(_) => NotAutomorphicError::new_err(msg),
        Error::Transport(_) => TransportError::new_err(msg),
        Error::SearchExhausted { .. } => SearchExhaustedError::new_err(msg),
        _ => ObsorderError::new_err(msg),
    }
}

type Rows = Vec<Vec<Complex64>>;

fn matrix(rows: &Rows) -> PyResult<CMatrix> {
    let d = rows.len();
    if let Some(r) = rows.iter().find(|r| r.len() != d) {
        return Err(to_py(Error::NotSquare { rows: d, cols: r.len() }));
    }
    Ok(CMatrix::from_fn(d, d, |i, j| rows[i][j]))
}

fn hermitian(rows: &Rows) -> PyResult<HermitianMatrix> {
    HermitianMatrix::new(matrix(rows)?).map_err(to_py)
}

fn psd(rows: &Rows, tol: &obsorder::Tolerances) -> PyResult<PsdMatrix> {
    PsdMatrix::new(hermitian(rows)?, tol).map_err(to_py)
}

fn rows_of(m: &CMatrix) -> Rows {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect()
}

fn vector(v: &[Complex64]) -> CVector {
    CVector::from_column_slice(v)
}

fn tolerances(tol: Option<PyRef<'_, Tolerances>>) -> obsorder::Tolerances {
    tol.map(|t| t.inner).unwrap_or_default()
}

/// Numerical tolerances; every value must lie in (0, 1).
#[pyclass(frozen, skip_from_py_object, module = "pyobsorder")]
#[derive(Clone, Copy)]
struct Tolerances {
    inner: obsorder::Tolerances,
}

#[pymethods]
impl Tolerances {
    #[new]
    #[pyo3(signature = (psd=1e-9, rank=1e-8, range=1e-8, recon=1e-10))]
    fn new(psd: f64, rank: f64, range: f64, recon: f64) -> PyResult<Self> {
        let inner = obsorder::Tolerances::new(psd, rank, range, recon).map_err(to_py)?;
        Ok(Tolerances { inner })
    }

    #[getter]
    fn psd(&self) -> f64 {
        self.inner.psd
    }

    #[getter]
    fn rank(&self) -> f64 {
        self.inner.rank
    }

    #[getter]
    fn range(&self) -> f64 {
        self.inner.range
    }

    #[getter]
    fn recon(&self) -> f64 {
        self.inner.recon
    }

    fn __repr__(&self) -> String {
        let t = self.inner;
        format!("Tolerances(psd={:e}, rank={:e}, range={:e}, recon={:e})", t.psd, t.rank, t.range, t.recon)
    }
}

/// `A ↦ T A T* + X`, or `A ↦ T Ā T* + X` when `conjugate` is set.
#[pyclass(frozen, skip_from_py_object, module = "pyobsorder")]
#[derive(Clone)]
struct OrderAutomorphism {
    inner: obsorder::OrderAutomorphism,
}

#[pymethods]
impl OrderAutomorphism {
    #[new]
    #[pyo3(signature = (t, conjugate, x, tol=None))]
    fn new(t: Rows, conjugate: bool, x: Rows, tol: Option<PyRef<'_, Tolerances>>) -> PyResult<Self> {
        let inner = obsorder::OrderAutomorphism::new(matrix(&t)?, conjugate, hermitian(&x)?, &tolerances(tol))
            .map_err(to_py)?;
        Ok(OrderAutomorphism { inner })
    }

    #[staticmethod]
    fn identity(dim: usize) -> Self {
        OrderAutomorphism {
            inner: obsorder::OrderAutomorphism::identity(dim),
        }
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn t(&self) -> Rows {
        rows_of(self.inner.t())
    }

    #[getter]
    fn conjugate(&self) -> bool {
        self.inner.conjugate()
    }

    #[getter]
    fn x(&self) -> Rows {
        rows_of(self.inner.x().matrix())
    }

    fn apply(&self, a: Rows) -> PyResult<Rows> {
        let image = self.inner.apply(&hermitian(&a)?).map_err(to_py)?;
        Ok(rows_of(image.matrix()))
    }

    fn __call__(&self, a: Rows) -> PyResult<Rows> {
        self.apply(a)
    }

    /// `self ∘ other`.
    fn compose(&self, other: &OrderAutomorphism) -> PyResult<Self> {
        let inner = self.inner.compose(&other.inner).map_err(to_py)?;
        Ok(OrderAutomorphism { inner })
    }

    fn invert(&self) -> PyResult<Self> {
        let inner = self.inner.invert().map_err(to_py)?;
        Ok(OrderAutomorphism { inner })
    }

    fn __repr__(&self) -> String {
        format!("OrderAutomorphism(dim={}, conjugate={})", self.inner.dim(), self.inner.conjugate())
    }
}

fn witness_dict<'py>(py: Python<'py>, w: &Option<OrderWitness>) -> PyResult<Option<Bound<'py, PyDict>>> {
    let Some(w) = w else { return Ok(None) };
    let d = PyDict::new(py);
    d.set_item("x", w.x.iter().copied().collect::<Vec<Complex64>>())?;
    d.set_item("gap", w.gap)?;
    Ok(Some(d))
}

/// `A ≤ B` in the Loewner order.
#[pyfunction]
#[pyo3(signature = (a, b, tol=None))]
fn leq(a: Rows, b: Rows, tol: Option<PyRef<'_, Tolerances>>) -> PyResult<bool> {
    obsorder::leq(&hermitian(&a)?, &hermitian(&b)?, &tolerances(tol)).map_err(to_py)
}

/// Relation name (`LEQ`, `GEQ`, `EQUAL`, `INCOMPARABLE`) with witnesses.
#[pyfunction]
#[pyo3(signature = (a, b, tol=None))]
fn compare<'py>(py: Python<'py>, a: Rows, b: Rows, tol: Option<PyRef<'_, Tolerances>>) -> PyResult<Bound<'py, PyDict>> {
    let r = obsorder::compare(&hermitian(&a)?, &hermitian(&b)?, &tolerances(tol)).map_err(to_py)?;
    let relation = match r.relation {
        obsorder::Relation::Leq => "LEQ",
        obsorder::Relation::Geq => "GEQ",
        obsorder::Relation::Equal => "EQUAL",
        obsorder::Relation::Incomparable => "INCOMPARABLE",
    };
    let d = PyDict::new(py);
    d.set_item("relation", relation)?;
    d.set_item("witness_ab", witness_dict(py, &r.witness_ab)?)?;
    d.set_item("witness_ba", witness_dict(py, &r.witness_ba)?)?;
    Ok(d)
}

/// Largest λ with `λ·x⊗x ≤ B`, or `None` when `x` is outside `rng √B`.
#[pyfunction]
#[pyo3(signature = (x, b, tol=None))]
fn max_lambda(x: Vec<Complex64>, b: Rows, tol: Option<PyRef<'_, Tolerances>>) -> PyResult<Option<f64>> {
    let t = tolerances(tol);
    obsorder::max_lambda(&vector(&x), &psd(&b, &t)?, &t).map_err(to_py)
}

/// `rng A ⊂ rng B` for rank-one positive `A`.
#[pyfunction]
#[pyo3(signature = (a, b, tol=None))]
fn range_dominates(a: Rows, b: Rows, tol: Option<PyRef<'_, Tolerances>>) -> PyResult<bool> {
    let t = tolerances(tol);
    obsorder::range_dominates(&psd(&a, &t)?, &psd(&b, &t)?, &t).map_err(to_py)
}

/// Eigenvalues (ascending) and eigenvectors (as columns).
#[pyfunction]
fn eigh(a: Rows) -> PyResult<(Vec<f64>, Rows)> {
    let e = obsorder::eig(&hermitian(&a)?).map_err(to_py)?;
    Ok((e.eigenvalues.clone(), rows_of(&e.eigenvectors)))
}

#[pyfunction]
#[pyo3(signature = (a, tol=None))]
fn rank_numeric(a: Rows, tol: Option<PyRef<'_, Tolerances>>) -> PyResult<usize> {
    obsorder::hermitian::rank_numeric(&hermitian(&a)?, &tolerances(tol)).map_err(to_py)
}

/// `(E, F)` witnessing `rank A > n + 1`, or `None`.
#[pyfunction]
#[pyo3(signature = (a, n, tol=None))]
fn rank_gt_np1_witness(a: Rows, n: usize, tol: Option<PyRef<'_, Tolerances>>) -> PyResult<Option<(Rows, Rows)>> {
    let t = tolerances(tol);
    let w = witness_core(&psd(&a, &t)?, n, &t).map_err(to_py)?;
    Ok(w.map(|w| (rows_of(w.e.matrix()), rows_of(w.f.matrix()))))
}

/// Whether the interval `[0, A]` is totally ordered (equivalently, rank one).
#[pyfunction]
#[pyo3(signature = (a, samples=100, seed=0, tol=None))]
fn is_rank_one_by_order(a: Rows, samples: usize, seed: u64, tol: Option<PyRef<'_, Tolerances>>) -> PyResult<bool> {
    let t = tolerances(tol);
    Ok(rank_one_core(&psd(&a, &t)?, samples, seed, &t).map_err(to_py)?.total)
}

#[pyfunction]
#[pyo3(signature = (a, b, tol=None))]
fn commute(a: Rows, b: Rows, tol: Option<PyRef<'_, Tolerances>>) -> PyResult<bool> {
    preservers::commute(&hermitian(&a)?, &hermitian(&b)?, &tolerances(tol)).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (a, b, tol=None))]
fn orthogonal(a: Rows, b: Rows, tol: Option<PyRef<'_, Tolerances>>) -> PyResult<bool> {
    preservers::orthogonal(&hermitian(&a)?, &hermitian(&b)?, &tolerances(tol)).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (a, b, tol=None))]
fn complementary(a: Rows, b: Rows, tol: Option<PyRef<'_, Tolerances>>) -> PyResult<bool> {
    preservers::complementary(&hermitian(&a)?, &hermitian(&b)?, &tolerances(tol)).map_err(to_py)
}

/// Recovers the automorphism behind a Python callable mapping Hermitian
/// matrices to Hermitian matrices of dimension `dim`.
#[pyfunction]
#[pyo3(signature = (oracle, dim, tol=None))]
fn reconstruct<'py>(
    py: Python<'py>,
    oracle: Bound<'py, PyAny>,
    dim: usize,
    tol: Option<PyRef<'_, Tolerances>>,
) -> PyResult<Bound<'py, PyDict>> {
    let mut raised: Option<PyErr> = None;
    let mut wrapped = FnOracle::new(dim, |a: &HermitianMatrix| {
        let answer = oracle
            .call1((rows_of(a.matrix()),))
            .and_then(|r| r.extract::<Rows>().map_err(PyErr::from))
            .map_err(|e| {
                let msg = e.to_string();
                raised = Some(e);
                Error::Transport(msg)
            })?;
        let m = CMatrix::from_fn(answer.len(), answer.len(), |i, j| answer[i].get(j).copied().unwrap_or_default());
        if answer.iter().any(|r| r.len() != answer.len()) {
            return Err(Error::Transport("oracle returned a non-square matrix".into()));
        }
        HermitianMatrix::new(m).map_err(|e| Error::Transport(e.to_string()))
    });
    let result = reconstruct_core(&mut wrapped, &tolerances(tol));
    drop(wrapped);
    if let Some(e) = raised {
        return Err(e);
    }
    let r = result.map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("automorphism", OrderAutomorphism { inner: r.recovered.clone() })?;
    d.set_item("phase_gauge", r.phase_gauge.clone())?;
    d.set_item("conjugation_degenerate", r.conjugation_degenerate)?;
    d.set_item("max_residual", r.max_residual)?;
    d.set_item("probes_used", r.probes_used)?;
    Ok(d)
}

fn classification_dict<'py>(py: Python<'py>, r: &PreserverClassification) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("kind", r.kind.name())?;
    d.set_item("preserves", r.preserves)?;
    match &r.canonical_form {
        Some(f) => {
            let form = PyDict::new(py);
            form.set_item("U", rows_of(&f.u))?;
            form.set_item("antiunitary", f.antiunitary)?;
            form.set_item("lambda", f.lambda)?;
            form.set_item("mu", f.mu)?;
            d.set_item("canonical_form", form)?;
        }
        None => d.set_item("canonical_form", py.None())?,
    }
    match &r.counterexample {
        Some(ce) => {
            let c = PyDict::new(py);
            c.set_item("A", rows_of(ce.a.matrix()))?;
            c.set_item("B", rows_of(ce.b.matrix()))?;
            c.set_item("holds_before", ce.holds_before)?;
            c.set_item("holds_after", ce.holds_after)?;
            d.set_item("counterexample", c)?;
        }
        None => d.set_item("counterexample", py.None())?,
    }
    d.set_item("attempts", r.attempts)?;
    Ok(d)
}

/// Whether `phi` preserves `kind` (`"commutativity"`, `"complementarity"`
/// or `"orthogonality"`), with a canonical form or a counterexample.
#[pyfunction]
#[pyo3(signature = (phi, kind, trials=1000, seed=0, tol=None))]
fn preserves_relation<'py>(
    py: Python<'py>,
    phi: &OrderAutomorphism,
    kind: &str,
    trials: usize,
    seed: u64,
    tol: Option<PyRef<'_, Tolerances>>,
) -> PyResult<Bound<'py, PyDict>> {
    let kind: RelationKind = kind.parse().map_err(to_py)?;
    let r = preservers::preserves_relation(&phi.inner, kind, trials, seed, &tolerances(tol)).map_err(to_py)?;
    classification_dict(py, &r)
}

/// Runs a verification suite and returns its report.
#[pyfunction]
#[pyo3(signature = (name, dims, trials, seed=0, tol=None))]
fn run_suite<'py>(
    py: Python<'py>,
    name: &str,
    dims: Vec<usize>,
    trials: usize,
    seed: u64,
    tol: Option<PyRef<'_, Tolerances>>,
) -> PyResult<Bound<'py, PyDict>> {
    let t = tolerances(tol);
    let r = py.detach(|| run_suite_core(name, &dims, trials, seed, &t)).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("suite", &r.suite)?;
    d.set_item("dims", &r.dims)?;
    d.set_item("trials", r.trials)?;
    let failures = r
        .failures
        .iter()
        .map(|f| {
            let fd = PyDict::new(py);
            fd.set_item("seed", f.seed)?;
            fd.set_item("dim", f.dim)?;
            fd.set_item("digest", &f.digest)?;
            fd.set_item("property", &f.property)?;
            Ok(fd)
        })
        .collect::<PyResult<Vec<_>>>()?;
    d.set_item("failures", failures)?;
    d.set_item("elapsed_ms", r.elapsed_ms)?;
    d.set_item("passed", r.passed())?;
    Ok(d)
}

#[pymodule]
fn pyobsorder(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add("ObsorderError", py.get_type::<ObsorderError>())?;
    m.add("NotAutomorphicError", py.get_type::<NotAutomorphicError>())?;
    m.add("TransportError", py.get_type::<TransportError>())?;
    m.add("SearchExhaustedError", py.get_type::<SearchExhaustedError>())?;
    m.add_class::<Tolerances>()?;
    m.add_class::<OrderAutomorphism>()?;
    m.add_function(wrap_pyfunction!(leq, m)?)?;
    m.add_function(wrap_pyfunction!(compare, m)?)?;
    m.add_function(wrap_pyfunction!(max_lambda, m)?)?;
    m.add_function(wrap_pyfunction!(range_dominates, m)?)?;
    m.add_function(wrap_pyfunction!(eigh, m)?)?;
    m.add_function(wrap_pyfunction!(rank_numeric, m)?)?;
    m.add_function(wrap_pyfunction!(rank_gt_np1_witness, m)?)?;
    m.add_function(wrap_pyfunction!(is_rank_one_by_order, m)?)?;
    m.add_function(wrap_pyfunction!(commute, m)?)?;
    m.add_function(wrap_pyfunction!(orthogonal, m)?)?;
    m.add_function(wrap_pyfunction!(complementary, m)?)?;
    m.add_function(wrap_pyfunction!(reconstruct, m)?)?;
    m.add_function(wrap_pyfunction!(preserves_relation, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    Ok(())
}
