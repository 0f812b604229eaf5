//! Python bindings: `import pymublab`.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::Serialize;

use mublab::grouplab::{self, ClosureMode};
use mublab::matcore::{ComplexMatrix, ComplexVector};
use mublab::mcc::{scale_mcc, validate_mcc, MccValue};
use mublab::mub::{self, validate_mub, Basis, MubSet};
use mublab::pauli::{self, PauliElement};
use mublab::symplectic::{canonical_form, desarguesian_spread, enumerate_spreads, validate_spread, Spread};
use mublab::{cli, io, ff, ToleranceConfig};

fn err(e: mublab::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<T: Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

fn config(tol: Option<f64>) -> PyResult<ToleranceConfig> {
    let mut cfg = ToleranceConfig::default();
    if let Some(t) = tol {
        cfg.eq_tol = t;
    }
    cfg.validate().map_err(err)?;
    Ok(cfg)
}

fn rows(m: &ComplexMatrix) -> Vec<Vec<Complex64>> {
    (0..m.dim()).map(|i| (0..m.dim()).map(|j| m.get(i, j)).collect()).collect()
}

fn matrix(rows: Vec<Vec<Complex64>>) -> PyResult<ComplexMatrix> {
    let dim = rows.len();
    ComplexMatrix::new(dim, rows.into_iter().flatten().collect()).map_err(err)
}

fn parse_mode(mode: &str) -> PyResult<ClosureMode> {
    match mode {
        "exact-symbolic" => Ok(ClosureMode::ExactSymbolic),
        "numeric-hashed" => Ok(ClosureMode::NumericHashed),
        "numeric-projective" => Ok(ClosureMode::NumericProjective),
        other => Err(PyValueError::new_err(format!("unknown closure mode {other:?}"))),
    }
}

#[pyclass(name = "Spread", module = "pymublab", frozen)]
struct PySpread {
    inner: Spread,
}

#[pymethods]
impl PySpread {
    #[staticmethod]
    fn desarguesian(d: u32, n: usize) -> PyResult<Self> {
        Ok(PySpread { inner: desarguesian_spread(d, n).map_err(err)? })
    }

    /// All spreads of the polar space, sorted, at most `limit`.
    #[staticmethod]
    #[pyo3(signature = (d, n, limit=usize::MAX))]
    fn enumerate(d: u32, n: usize, limit: usize) -> PyResult<Vec<PySpread>> {
        let form = canonical_form(d, n).map_err(err)?;
        let all = enumerate_spreads(&form, limit).map_err(err)?;
        Ok(all.into_iter().map(|inner| PySpread { inner }).collect())
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PySpread { inner: io::spread_from_json(text).map_err(err)? })
    }

    fn to_json(&self) -> PyResult<String> {
        io::spread_to_json(&self.inner).map_err(err)
    }

    #[getter]
    fn d(&self) -> u32 {
        self.inner.prime().get()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn members(&self) -> Vec<Vec<Vec<u32>>> {
        self.inner.members().iter().map(|m| m.basis().to_vec()).collect()
    }

    fn validate(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        let form = canonical_form(self.inner.prime().get(), self.inner.n()).map_err(err)?;
        to_py(py, &validate_spread(&form, &self.inner))
    }

    fn __len__(&self) -> usize {
        self.inner.members().len()
    }

    fn __repr__(&self) -> String {
        format!("Spread(d={}, N={}, members={})", self.d(), self.n(), self.__len__())
    }
}

#[pyclass(name = "PauliElement", module = "pymublab", frozen, eq, hash)]
#[derive(PartialEq, Eq, Hash)]
struct PyPauli {
    inner: PauliElement,
}

#[pymethods]
impl PyPauli {
    #[new]
    #[pyo3(signature = (d, a, b, phase=0))]
    fn new(d: u32, a: Vec<i64>, b: Vec<i64>, phase: i64) -> PyResult<Self> {
        let p = ff::Prime::new(d).map_err(err)?;
        Ok(PyPauli { inner: PauliElement::new(p, phase, &a, &b).map_err(err)? })
    }

    #[getter]
    fn d(&self) -> u32 {
        self.inner.prime().get()
    }

    #[getter]
    fn phase(&self) -> u32 {
        self.inner.phase()
    }

    #[getter]
    fn a(&self) -> Vec<u32> {
        self.inner.a().to_vec()
    }

    #[getter]
    fn b(&self) -> Vec<u32> {
        self.inner.b().to_vec()
    }

    fn __mul__(&self, other: &PyPauli) -> PyResult<PyPauli> {
        Ok(PyPauli { inner: pauli::pauli_mul(&self.inner, &other.inner).map_err(err)? })
    }

    fn inverse(&self) -> PyPauli {
        PyPauli { inner: self.inner.inverse() }
    }

    fn order(&self) -> u64 {
        pauli::pauli_order(&self.inner)
    }

    fn commutator_exponent(&self, other: &PyPauli) -> PyResult<u32> {
        Ok(pauli::pauli_commutator_exponent(&self.inner, &other.inner).map_err(err)?.value())
    }

    /// Normalized point of the polar space.
    fn gamma(&self) -> PyResult<Vec<u32>> {
        Ok(pauli::gamma(&self.inner).map_err(err)?.rep().coords().to_vec())
    }

    fn matrix(&self) -> Vec<Vec<Complex64>> {
        rows(&pauli::materialize(&self.inner))
    }

    fn __repr__(&self) -> String {
        format!("PauliElement({})", self.inner)
    }
}

#[pyclass(name = "Mcc", module = "pymublab", frozen)]
struct PyMcc {
    inner: MccValue,
}

#[pymethods]
impl PyMcc {
    /// The Pauli MCC of a spread.
    #[staticmethod]
    fn from_spread(spread: &PySpread) -> PyResult<Self> {
        Ok(PyMcc { inner: pauli::gamma_inverse(&spread.inner).map_err(err)?.into() })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyMcc { inner: io::mcc_from_json(text).map_err(err)? })
    }

    fn to_json(&self) -> PyResult<String> {
        io::mcc_to_json(&self.inner).map_err(err)
    }

    #[getter]
    fn dimension(&self) -> usize {
        self.inner.dimension()
    }

    #[getter]
    fn class_sizes(&self) -> Vec<usize> {
        self.inner.class_sizes()
    }

    #[getter]
    fn is_symbolic(&self) -> bool {
        matches!(self.inner, MccValue::Symbolic(_))
    }

    #[getter]
    fn is_maximal(&self) -> bool {
        self.inner.is_maximal()
    }

    /// Symbolic classes as Pauli elements (empty for numeric MCCs).
    fn pauli_classes(&self) -> Vec<Vec<PyPauli>> {
        match &self.inner {
            MccValue::Symbolic(s) => s
                .classes()
                .iter()
                .map(|c| c.iter().map(|p| PyPauli { inner: p.clone() }).collect())
                .collect(),
            MccValue::Numeric(_) => Vec::new(),
        }
    }

    /// Classes as nested lists of complex matrices.
    fn matrices(&self) -> Vec<Vec<Vec<Vec<Complex64>>>> {
        self.inner.to_numeric().classes().iter().map(|c| c.iter().map(rows).collect()).collect()
    }

    fn to_numeric(&self) -> PyMcc {
        PyMcc { inner: self.inner.to_numeric().into() }
    }

    /// Multiplies the operators, in class order, by unit-modulus scalars.
    fn scale(&self, scalars: Vec<Complex64>) -> PyResult<PyMcc> {
        Ok(PyMcc { inner: scale_mcc(&self.inner, &scalars).map_err(err)?.into() })
    }

    #[pyo3(signature = (tol=None))]
    fn validate(&self, py: Python<'_>, tol: Option<f64>) -> PyResult<Py<PyAny>> {
        to_py(py, &validate_mcc(&self.inner, &config(tol)?))
    }

    fn __repr__(&self) -> String {
        let flavor = if self.is_symbolic() { "symbolic" } else { "numeric" };
        format!("Mcc({flavor}, dimension={}, classes={})", self.dimension(), self.class_sizes().len())
    }
}

#[pyclass(name = "Mub", module = "pymublab", frozen)]
struct PyMub {
    inner: MubSet,
}

#[pymethods]
impl PyMub {
    #[new]
    fn new(dimension: usize, bases: Vec<Vec<Vec<Complex64>>>) -> Self {
        let bases = bases.into_iter().map(|b| Basis::new(b.into_iter().map(ComplexVector).collect())).collect();
        PyMub { inner: MubSet::new(dimension, bases) }
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyMub { inner: io::mub_from_json(text).map_err(err)? })
    }

    fn to_json(&self) -> PyResult<String> {
        io::mub_to_json(&self.inner).map_err(err)
    }

    #[getter]
    fn dimension(&self) -> usize {
        self.inner.dimension()
    }

    #[getter]
    fn is_maximal(&self) -> bool {
        self.inner.is_maximal()
    }

    #[getter]
    fn bases(&self) -> Vec<Vec<Vec<Complex64>>> {
        self.inner.bases().iter().map(|b| b.vectors().iter().map(|v| v.0.clone()).collect()).collect()
    }

    #[pyo3(signature = (tol=None))]
    fn validate(&self, py: Python<'_>, tol: Option<f64>) -> PyResult<Py<PyAny>> {
        to_py(py, &validate_mub(&self.inner, &config(tol)?))
    }

    fn residuals(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(py, &mub::mub_residuals(&self.inner))
    }

    fn __len__(&self) -> usize {
        self.inner.bases().len()
    }

    fn __repr__(&self) -> String {
        format!("Mub(dimension={}, bases={})", self.dimension(), self.__len__())
    }
}

/// Common eigenbases of the classes.
#[pyfunction]
#[pyo3(signature = (mcc, tol=None))]
fn beta(mcc: &PyMcc, tol: Option<f64>) -> PyResult<PyMub> {
    Ok(PyMub { inner: mub::beta(&mcc.inner, &config(tol)?).map_err(err)? })
}

#[pyfunction]
fn alpha(mub: &PyMub) -> PyResult<PyMcc> {
    Ok(PyMcc { inner: mub::alpha(&mub.inner).map_err(err)?.into() })
}

#[pyfunction]
#[pyo3(signature = (a, b, tol=None))]
fn mub_equal(a: &PyMub, b: &PyMub, tol: Option<f64>) -> PyResult<bool> {
    Ok(mub::mub_equal(&a.inner, &b.inner, &config(tol)?))
}

/// Order of the group generated by the operators, or `None` past the cap.
#[pyfunction]
#[pyo3(signature = (mcc, mode="exact-symbolic", cap=grouplab::DEFAULT_CAP))]
fn closure_order(mcc: &PyMcc, mode: &str, cap: usize) -> PyResult<Option<usize>> {
    match grouplab::mcc_closure(&mcc.inner, parse_mode(mode)?, cap) {
        Ok(g) => Ok(g.order().finite()),
        Err(mublab::Error::CapExceeded(_)) => Ok(None),
        Err(e) => Err(err(e)),
    }
}

#[pyfunction]
#[pyo3(signature = (mcc, cap=grouplab::DEFAULT_CAP))]
fn height(py: Python<'_>, mcc: &PyMcc, cap: usize) -> PyResult<Py<PyAny>> {
    to_py(py, &grouplab::height(&mcc.inner, ClosureMode::ExactSymbolic, cap).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (matrix_rows, cap=grouplab::DEFAULT_CAP))]
fn projective_order(matrix_rows: Vec<Vec<Complex64>>, cap: usize) -> PyResult<usize> {
    grouplab::projective_order(&matrix(matrix_rows)?, cap).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (mcc, cap=grouplab::DEFAULT_CAP))]
fn fingerprint(py: Python<'_>, mcc: &PyMcc, cap: usize) -> PyResult<Py<PyAny>> {
    to_py(py, &grouplab::fingerprint(&mcc.inner, cap).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (mcc, cap=grouplab::DEFAULT_CAP))]
fn analyze(py: Python<'_>, mcc: &PyMcc, cap: usize) -> PyResult<Py<PyAny>> {
    to_py(py, &grouplab::analyze(&mcc.inner, cap).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (a, b, cap=grouplab::DEFAULT_CAP))]
fn certify_nonisomorphic(py: Python<'_>, a: &PyMcc, b: &PyMcc, cap: usize) -> PyResult<Py<PyAny>> {
    to_py(py, &grouplab::certify_nonisomorphic(&a.inner, &b.inner, cap).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (d, n, cap=grouplab::DEFAULT_CAP, tol=None))]
fn demo_beta_noninjective(py: Python<'_>, d: u32, n: usize, cap: usize, tol: Option<f64>) -> PyResult<Py<PyAny>> {
    let report = py.detach(|| cli::beta_noninjective_demo(d, n, cap, &config(tol)?).map_err(err))?;
    to_py(py, &report)
}

#[pymodule]
fn pymublab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySpread>()?;
    m.add_class::<PyPauli>()?;
    m.add_class::<PyMcc>()?;
    m.add_class::<PyMub>()?;
    m.add_function(wrap_pyfunction!(beta, m)?)?;
    m.add_function(wrap_pyfunction!(alpha, m)?)?;
    m.add_function(wrap_pyfunction!(mub_equal, m)?)?;
    m.add_function(wrap_pyfunction!(closure_order, m)?)?;
    m.add_function(wrap_pyfunction!(height, m)?)?;
    m.add_function(wrap_pyfunction!(projective_order, m)?)?;
    m.add_function(wrap_pyfunction!(fingerprint, m)?)?;
    m.add_function(wrap_pyfunction!(analyze, m)?)?;
    m.add_function(wrap_pyfunction!(certify_nonisomorphic, m)?)?;
    m.add_function(wrap_pyfunction!(demo_beta_noninjective, m)?)?;
    Ok(())
}
