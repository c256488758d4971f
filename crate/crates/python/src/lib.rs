//! Python bindings for the `twoproj` engine.
//!
//! Exact rationals cross the boundary as `"num/den"` strings, integers of the
//! triangle as Python ints, and reports as plain dicts and lists.

use num_bigint::BigInt;
use pyo3::exceptions::{PyKeyError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use pythonize::pythonize;
use serde::Serialize;

use twoproj::identities::Verifier;
use twoproj::oracle::{self, ModelSpec, SpectrumOp};
use twoproj::rational::frac_string;
use twoproj::triangle::{self, Method};
use twoproj::{parse_word, MomentExpr, NCPoly, Word};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<'py, T: Serialize>(py: Python<'py>, v: &T) -> PyResult<Bound<'py, PyAny>> {
    Ok(pythonize(py, v)?)
}

/// Reduced word in `P`, `Q`.
#[pyclass(name = "Word", frozen, skip_from_py_object, eq, hash, ord)]
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct PyWord(Word);

#[pymethods]
impl PyWord {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        parse_word(text).map(PyWord).map_err(value_error)
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Word('{}')", self.0)
    }

    fn __mul__(&self, other: &PyWord) -> PyWord {
        PyWord(self.0.mul(&other.0))
    }

    /// `"P"`, `"Q"` or `None` for the unit.
    #[getter]
    fn first(&self) -> Option<String> {
        self.0.first_letter().map(|l| l.as_char().to_string())
    }

    fn trace(&self) -> Moment {
        Moment(twoproj::trace_word(&self.0))
    }
}

/// Polynomial in `P`, `Q` with exact rational coefficients.
#[pyclass(name = "Poly", frozen, skip_from_py_object, eq)]
#[derive(Clone, PartialEq)]
struct PyPoly(NCPoly);

#[pymethods]
impl PyPoly {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        text.parse::<NCPoly>().map(PyPoly).map_err(value_error)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Poly('{}')", self.0)
    }

    fn __add__(&self, other: &PyPoly) -> PyPoly {
        PyPoly(&self.0 + &other.0)
    }

    fn __sub__(&self, other: &PyPoly) -> PyPoly {
        PyPoly(&self.0 - &other.0)
    }

    fn __mul__(&self, other: &PyPoly) -> PyPoly {
        PyPoly(&self.0 * &other.0)
    }

    fn __neg__(&self) -> PyPoly {
        PyPoly(-&self.0)
    }

    fn __pow__(&self, n: u32, _modulo: Option<u32>) -> PyPoly {
        PyPoly(self.0.pow(n))
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// `{word: "num/den"}` in canonical order.
    fn terms<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let d = PyDict::new(py);
        for (w, c) in self.0.terms() {
            d.set_item(w.to_string(), frac_string(c))?;
        }
        Ok(d)
    }

    fn trace(&self) -> Moment {
        Moment(twoproj::trace(&self.0))
    }
}

/// Linear combination of `1, p, q, m_1, m_2, ...`.
#[pyclass(name = "Moment", frozen, skip_from_py_object, eq)]
#[derive(Clone, PartialEq)]
struct Moment(MomentExpr);

#[pymethods]
impl Moment {
    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Moment('{}')", self.0)
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn to_dict<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.0)
    }

    /// Numeric value for `τ(P) = p`, `τ(Q) = q`, `m[k] = τ((PQ)^k)`.
    fn eval(&self, p: f64, q: f64, m: std::collections::BTreeMap<u32, f64>) -> PyResult<f64> {
        twoproj::eval(&self.0, &twoproj::Assignment { p, q, m }).map_err(|e| PyKeyError::new_err(e.to_string()))
    }
}

/// Explicit projection pair with the given principal angles and
/// intersection multiplicities `[m11, m10, m01, m00]`.
#[pyclass(name = "Model", frozen)]
struct Model {
    pair: oracle::ProjectionPair,
}

#[pymethods]
impl Model {
    #[new]
    #[pyo3(signature = (angles, mult = [0, 0, 0, 0]))]
    fn new(angles: Vec<f64>, mult: [usize; 4]) -> PyResult<Self> {
        let spec = ModelSpec::new(angles, mult).map_err(value_error)?;
        let pair = oracle::build(&spec).map_err(value_error)?;
        Ok(Model { pair })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.pair.dim()
    }

    #[getter]
    fn p(&self) -> f64 {
        self.pair.spec.p()
    }

    #[getter]
    fn q(&self) -> f64 {
        self.pair.spec.q()
    }

    fn m(&self, k: u32) -> f64 {
        self.pair.spec.m(k)
    }

    fn word_trace(&self, w: &PyWord) -> f64 {
        oracle::word_trace(&self.pair, &w.0)
    }

    fn crosscheck(&self, x: &PyPoly) -> f64 {
        oracle::crosscheck(&self.pair, &x.0)
    }

    /// Sorted eigenvalues; `which` is one of `sum`, `sum_shift_sq`,
    /// `commutator_sq`, `angle`, `p_plus_qpq`, `kato_A`, `kato_B`.
    fn spectrum(&self, which: &str) -> PyResult<Vec<f64>> {
        let op = SpectrumOp::from_name(which).ok_or_else(|| value_error(format!("unknown operator {which:?}")))?;
        Ok(oracle::spectrum(&self.pair, op))
    }
}

#[pyfunction]
#[pyo3(signature = (name, order, cap = twoproj::identities::DEFAULT_CAP))]
fn verify<'py>(py: Python<'py>, name: &str, order: u32, cap: u32) -> PyResult<Bound<'py, PyAny>> {
    let reports = Verifier::with_cap(cap).verify(name, order).map_err(value_error)?;
    to_py(py, &reports)
}

#[pyfunction]
#[pyo3(signature = (order, cap = twoproj::identities::DEFAULT_CAP))]
fn verify_all<'py>(py: Python<'py>, order: u32, cap: u32) -> PyResult<Bound<'py, PyAny>> {
    let reports = Verifier::with_cap(cap).verify_all(order).map_err(value_error)?;
    to_py(py, &reports)
}

#[pyfunction]
fn trace(text: &str) -> PyResult<Moment> {
    text.parse::<NCPoly>()
        .map(|x| Moment(twoproj::trace(&x)))
        .map_err(value_error)
}

/// `f(n, k)` rows for `n = 0..=order`, each indexed by `k = 0..=n`.
#[pyfunction]
#[pyo3(signature = (order, method = "direct"))]
fn fnk(order: usize, method: &str) -> PyResult<Vec<Vec<BigInt>>> {
    let method: Method = method.parse().map_err(value_error)?;
    let t = match method {
        Method::Direct => triangle::fnk_direct(order),
        Method::Recurrence => triangle::fnk_recurrence(order),
        Method::Abcd => triangle::abcd_recurrence(order),
    }
    .map_err(value_error)?;
    Ok((0..=order).map(|n| (0..=n).map(|k| t.f(n, k)).collect()).collect())
}

#[pyfunction]
fn genfun_compare<'py>(py: Python<'py>, order: usize) -> PyResult<Bound<'py, PyAny>> {
    let t = triangle::fnk_direct(order).map_err(value_error)?;
    let rep = triangle::genfun_compare(&t).map_err(value_error)?;
    to_py(py, &rep)
}

#[pyfunction]
#[pyo3(signature = (d = 64, samples = 200, max_j = 4, seed = 42))]
fn haar_demo<'py>(py: Python<'py>, d: usize, samples: usize, max_j: u32, seed: u64) -> PyResult<Bound<'py, PyAny>> {
    let rep = py
        .detach(|| oracle::haar_demo(d, samples, max_j, seed))
        .map_err(value_error)?;
    to_py(py, &rep)
}

#[pymodule]
fn twoproj_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyWord>()?;
    m.add_class::<PyPoly>()?;
    m.add_class::<Moment>()?;
    m.add_class::<Model>()?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(verify_all, m)?)?;
    m.add_function(wrap_pyfunction!(trace, m)?)?;
    m.add_function(wrap_pyfunction!(fnk, m)?)?;
    m.add_function(wrap_pyfunction!(genfun_compare, m)?)?;
    m.add_function(wrap_pyfunction!(haar_demo, m)?)?;
    Ok(())
}
