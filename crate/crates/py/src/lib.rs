//! Python bindings. Diagrams cross the boundary as `Diagram` objects; reports come back as dicts.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyAny;

use tldiag::admissible;
use tldiag::algebra::{self, AlgebraElement};
use tldiag::coxeter::{self, CoxeterSpec};
use tldiag::{factor, render};

fn err(e: tldiag::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn spec_of(family: &str, n: usize) -> PyResult<CoxeterSpec> {
    CoxeterSpec::new(family.parse().map_err(err)?, n).map_err(err)
}

fn to_py<'py>(py: Python<'py>, v: &impl serde::Serialize) -> PyResult<Bound<'py, PyAny>> {
    let s = serde_json::to_string(v).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (s,))
}

/// A decorated diagram in the box of a fixed Coxeter spec.
#[pyclass(module = "tldiag", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct Diagram {
    spec: CoxeterSpec,
    inner: tldiag::Diagram,
}

impl Diagram {
    fn wrap(&self, d: tldiag::Diagram) -> Diagram {
        Diagram { spec: self.spec, inner: d }
    }
}

#[pymethods]
impl Diagram {
    #[staticmethod]
    #[pyo3(signature = (text, family = "B", n = 2))]
    fn from_json(text: &str, family: &str, n: usize) -> PyResult<Diagram> {
        let spec = spec_of(family, n)?;
        let inner = tldiag::Diagram::from_json_str(text).map_err(err)?;
        if inner.k() != spec.box_width() {
            return Err(err(tldiag::Error::WidthMismatch(inner.k(), spec.box_width())));
        }
        Ok(Diagram { spec, inner })
    }

    #[staticmethod]
    #[pyo3(signature = (family = "B", n = 2))]
    fn identity(family: &str, n: usize) -> PyResult<Diagram> {
        let spec = spec_of(family, n)?;
        Ok(Diagram { spec, inner: tldiag::Diagram::identity(spec.box_width()) })
    }

    fn to_json(&self) -> String {
        self.inner.to_json_string()
    }

    #[getter]
    fn family(&self) -> String {
        self.spec.family.to_string()
    }

    #[getter]
    fn n(&self) -> usize {
        self.spec.n
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    fn is_admissible(&self) -> bool {
        admissible::is_admissible(&self.inner, &self.spec).admissible
    }

    fn length(&self) -> PyResult<usize> {
        admissible::length(&self.inner, &self.spec).map_err(err)
    }

    fn classify<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &admissible::classify_diagram(&self.inner, &self.spec).map_err(err)?)
    }

    fn factorize(&self) -> PyResult<Vec<usize>> {
        factor::factorize(&self.inner, &self.spec).map_err(err)
    }

    /// Word and step-by-step trace.
    fn factorize_traced<'py>(&self, py: Python<'py>) -> PyResult<(Vec<usize>, Bound<'py, PyAny>)> {
        let (w, t) = factor::factorize_traced(&self.inner, &self.spec).map_err(err)?;
        Ok((w, to_py(py, &t)?))
    }

    /// Product as a list of (coefficients of δ⁰, δ¹, …, diagram).
    fn __mul__(&self, other: &Diagram) -> PyResult<Vec<(Vec<i64>, Diagram)>> {
        if other.spec != self.spec {
            return Err(PyValueError::new_err("diagrams belong to different specs"));
        }
        let x = AlgebraElement::from_diagram(self.spec, self.inner.clone());
        let y = AlgebraElement::from_diagram(self.spec, other.inner.clone());
        let p = x.multiply(&y).map_err(err)?;
        Ok(p.terms().map(|(d, c)| (c.coeffs().to_vec(), self.wrap(d.clone()))).collect())
    }

    fn svg(&self) -> String {
        render::render_svg(&self.inner)
    }

    fn ascii(&self) -> String {
        render::render_ascii(&self.inner)
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Diagram({}, {})", self.spec, self.inner)
    }

    fn __hash__(&self) -> u64 {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.inner.canonical_key().hash(&mut h);
        h.finish()
    }
}

/// FC elements up to `max_len`, one canonical word each, grouped by length.
#[pyfunction]
#[pyo3(signature = (family = "B", n = 2, max_len = 6))]
fn fc_enum(family: &str, n: usize, max_len: usize) -> PyResult<Vec<Vec<Vec<usize>>>> {
    coxeter::enumerate_fc(&spec_of(family, n)?, max_len).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (word, family = "B", n = 2))]
fn is_fully_commutative(word: Vec<usize>, family: &str, n: usize) -> PyResult<bool> {
    coxeter::is_fully_commutative(&word, &spec_of(family, n)?).map_err(err)
}

/// The diagram of a reduced FC word.
#[pyfunction]
#[pyo3(signature = (word, family = "B", n = 2))]
fn theta(word: Vec<usize>, family: &str, n: usize) -> PyResult<Diagram> {
    let spec = spec_of(family, n)?;
    let el = algebra::theta(&word, &spec).map_err(err)?;
    let d = el.as_basis_diagram().cloned().ok_or_else(|| PyValueError::new_err("image is not a basis diagram"))?;
    Ok(Diagram { spec, inner: d })
}

#[pyfunction]
#[pyo3(signature = (i, family = "B", n = 2))]
fn simple(i: usize, family: &str, n: usize) -> PyResult<Diagram> {
    let spec = spec_of(family, n)?;
    Ok(Diagram { spec, inner: algebra::simple_diagram(&spec, i).map_err(err)? })
}

/// Run the verification suite; returns the report as a dict.
#[pyfunction]
#[pyo3(signature = (family = "B", n = 2, max_len = 8, seed = 0))]
fn verify<'py>(py: Python<'py>, family: &str, n: usize, max_len: usize, seed: u64) -> PyResult<Bound<'py, PyAny>> {
    let spec = spec_of(family, n)?;
    let rep = py.detach(|| tldiag::verify::verify(&spec, max_len, seed));
    to_py(py, &rep)
}

#[pymodule]
#[pyo3(name = "tldiag")]
fn tldiag_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Diagram>()?;
    m.add_function(wrap_pyfunction!(fc_enum, m)?)?;
    m.add_function(wrap_pyfunction!(is_fully_commutative, m)?)?;
    m.add_function(wrap_pyfunction!(theta, m)?)?;
    m.add_function(wrap_pyfunction!(simple, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
