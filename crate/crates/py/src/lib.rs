//! Python bindings. Indices are passed as strings like `"1,2"` or as lists
//! of positive integers.

use mzv_core::linalg::dimension_report;
use mzv_core::poset::mu as mu_core;
use mzv_core::products;
use mzv_core::regularization::{reg_harmonic, reg_shuffle, reg_star_harmonic, reg_star_shuffle};
use mzv_core::relations::{enumerate_relations, intser_relation};
use mzv_core::suites::Suite;
use mzv_core::{EvalContext, Evaluator, Index, MzvError};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn err(e: MzvError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

#[derive(FromPyObject)]
enum IndexArg {
    Text(String),
    Parts(Vec<u32>),
}

impl IndexArg {
    fn index(self) -> PyResult<Index> {
        match self {
            IndexArg::Text(s) => s.parse().map_err(err),
            IndexArg::Parts(v) => Index::new(v).map_err(err),
        }
    }
}

/// A finite Q-linear combination of words in e0, e1.
#[pyclass(name = "LinComb", module = "mzv")]
struct PyLinComb(mzv_core::LinComb);

#[pymethods]
impl PyLinComb {
    #[new]
    #[pyo3(signature = (text = "0"))]
    fn new(text: &str) -> PyResult<Self> {
        if let Ok(k) = text.parse::<Index>() {
            return Ok(PyLinComb(mzv_core::LinComb::index(&k)));
        }
        mzv_core::LinComb::parse_text(text).map(PyLinComb).map_err(err)
    }

    #[staticmethod]
    fn index(k: IndexArg) -> PyResult<Self> {
        Ok(PyLinComb(mzv_core::LinComb::index(&k.index()?)))
    }

    #[staticmethod]
    fn from_json(s: &str) -> PyResult<Self> {
        mzv_core::LinComb::from_json(s).map(PyLinComb).map_err(err)
    }

    fn shuffle(&self, other: &PyLinComb) -> Self {
        PyLinComb(products::shuffle(&self.0, &other.0))
    }

    fn harmonic(&self, other: &PyLinComb) -> PyResult<Self> {
        products::harmonic(&self.0, &other.0).map(PyLinComb).map_err(err)
    }

    fn bar_harmonic(&self, other: &PyLinComb) -> PyResult<Self> {
        products::bar_harmonic(&self.0, &other.0).map(PyLinComb).map_err(err)
    }

    fn circled(&self, other: &PyLinComb) -> PyResult<Self> {
        products::circled_harmonic(&self.0, &other.0).map(PyLinComb).map_err(err)
    }

    fn dagger(&self) -> Self {
        PyLinComb(self.0.dagger())
    }

    fn star(&self) -> PyResult<Self> {
        products::star(&self.0).map(PyLinComb).map_err(err)
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn to_index_string(&self) -> String {
        self.0.to_index_string()
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }

    /// `(word, "p/q")` pairs in canonical order.
    fn terms(&self) -> Vec<(String, String)> {
        self.0.iter().map(|(w, c)| (w.to_letters_string(), c.to_string())).collect()
    }

    fn __add__(&self, other: &PyLinComb) -> Self {
        PyLinComb(&self.0 + &other.0)
    }

    fn __sub__(&self, other: &PyLinComb) -> Self {
        PyLinComb(&self.0 - &other.0)
    }

    fn __eq__(&self, other: &PyLinComb) -> bool {
        self.0 == other.0
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("LinComb({:?})", self.0.to_string())
    }
}

/// A 2-labeled poset. `relations` are pairs `(a, b)` meaning `a < b`.
#[pyclass(name = "Poset2", module = "mzv")]
struct PyPoset2(mzv_core::Poset2);

#[pymethods]
impl PyPoset2 {
    #[new]
    fn new(labels: Vec<u8>, relations: Vec<(usize, usize)>) -> PyResult<Self> {
        mzv_core::Poset2::new(&labels, &relations).map(PyPoset2).map_err(err)
    }

    fn w(&self) -> PyResult<PyLinComb> {
        self.0.w_fast().map(PyLinComb).map_err(err)
    }

    fn transpose(&self) -> Self {
        PyPoset2(self.0.transpose())
    }

    fn linear_extensions(&self) -> PyResult<u128> {
        self.0.linear_extension_count().map_err(err)
    }

    fn is_admissible(&self) -> bool {
        self.0.is_admissible()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }
}

/// `μ(k, l)`.
#[pyfunction]
fn mu(k: IndexArg, l: IndexArg) -> PyResult<PyLinComb> {
    mu_core(&k.index()?, &l.index()?).map(PyLinComb).map_err(err)
}

/// `k ⊛ l★`.
#[pyfunction]
fn cast(k: IndexArg, l: IndexArg) -> PyResult<PyLinComb> {
    let (k, l) = (k.index()?, l.index()?);
    products::circled_harmonic(&mzv_core::LinComb::index(&k), &products::star_index(&l)).map(PyLinComb).map_err(err)
}

/// The Int-Ser relation for `(k, l)` as a JSON record.
#[pyfunction]
fn relation(k: IndexArg, l: IndexArg) -> PyResult<String> {
    intser_relation(&k.index()?, &l.index()?).map(|r| r.to_json()).map_err(err)
}

/// All Int-Ser relations of a weight, one JSON record each.
#[pyfunction]
#[pyo3(signature = (weight, skip_trivial = false))]
fn relations(py: Python<'_>, weight: u32, skip_trivial: bool) -> PyResult<Vec<String>> {
    let recs = py.detach(|| enumerate_relations(weight, skip_trivial)).map_err(err)?;
    Ok(recs.iter().map(|r| r.to_json()).collect())
}

/// Symbolic regularization; `mode` is one of `sh`, `st`, `star-sh`, `star-st`.
#[pyfunction]
fn regularize(k: IndexArg, mode: &str) -> PyResult<String> {
    let k = k.index()?;
    let x = mzv_core::LinComb::index(&k);
    let p = match mode {
        "sh" => reg_shuffle(&x),
        "st" => reg_harmonic(&x),
        "star-sh" => reg_star_shuffle(&k),
        "star-st" => reg_star_harmonic(&k),
        _ => return Err(PyValueError::new_err(format!("unknown mode {mode:?}"))),
    }
    .map_err(err)?;
    Ok(p.to_index_string())
}

/// `ζ(k)` (or `ζ★(k)`) as a decimal string with `digits` digits.
#[pyfunction]
#[pyo3(signature = (k, prec = 192, digits = 40, star = false))]
fn zeta(py: Python<'_>, k: IndexArg, prec: u32, digits: usize, star: bool) -> PyResult<String> {
    let k = k.index()?;
    let v = py
        .detach(|| {
            let ev = Evaluator::new(EvalContext::new(prec));
            if star {
                ev.mzsv(&k)
            } else {
                ev.mzv(&k)
            }
        })
        .map_err(err)?;
    Ok(v.to_decimal(digits))
}

/// `(weight, basis, rank, dim, d_w)`.
#[pyfunction]
fn dims(py: Python<'_>, weight: u32) -> PyResult<(usize, usize, usize, usize, u64)> {
    let r = py.detach(|| dimension_report(weight)).map_err(err)?;
    Ok((r.weight, r.basis_size, r.rank, r.dim, r.expected))
}

/// Runs a verification suite; returns `(passed, cases, failures)`.
#[pyfunction]
#[pyo3(signature = (suite, max_weight = None, prec = 192))]
fn verify(py: Python<'_>, suite: &str, max_weight: Option<u32>, prec: u32) -> PyResult<(bool, usize, Vec<String>)> {
    let s: Suite = suite.parse().map_err(err)?;
    let r = py.detach(|| s.run(max_weight.unwrap_or_else(|| s.default_max_weight()), prec)).map_err(err)?;
    Ok((r.passed(), r.cases, r.failures))
}

#[pymodule]
fn mzv(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyLinComb>()?;
    m.add_class::<PyPoset2>()?;
    m.add_function(wrap_pyfunction!(mu, m)?)?;
    m.add_function(wrap_pyfunction!(cast, m)?)?;
    m.add_function(wrap_pyfunction!(relation, m)?)?;
    m.add_function(wrap_pyfunction!(relations, m)?)?;
    m.add_function(wrap_pyfunction!(regularize, m)?)?;
    m.add_function(wrap_pyfunction!(zeta, m)?)?;
    m.add_function(wrap_pyfunction!(dims, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
