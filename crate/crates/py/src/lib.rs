//! Python bindings: quintuples, certificates and the cohomology leaves.
//!
//! Rationals cross the boundary as strings (`"p/q"`) so nothing is rounded.

use ncquad_core::blowup;
use ncquad_core::certify::sweep_type_a;
use ncquad_core::grassmann::line_relation;
use ncquad_core::io::{parse_field, QuintupleSpec};
use ncquad_core::quintuple::{hilbert_dims as core_hilbert_dims, relations};
use ncquad_core::scalar::parse_rational;
use ncquad_core::square::{pairing_matrix, square_from_quintuple};
use ncquad_core::{Convention, Field, QuintupleFile};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn field_of(tag: Option<&str>) -> PyResult<Field> {
    tag.map_or(Ok(Field::Rational), |t| parse_field(t).map_err(value_error))
}

fn convention_of(name: Option<&str>) -> PyResult<Convention> {
    let explicit = name.map(|n| n.parse::<Convention>()).transpose().map_err(value_error)?;
    Convention::resolve(explicit).map_err(value_error)
}

/// A tensor `w ∈ V_0 ⊗ V_1 ⊗ V_2 ⊗ V_3` with each `V_i` two-dimensional.
#[pyclass(name = "Quintuple", module = "ncquad", frozen)]
struct PyQuintuple {
    inner: ncquad_core::Quintuple,
}

impl PyQuintuple {
    fn build(spec: QuintupleSpec, field: Field) -> PyResult<PyQuintuple> {
        let inner = QuintupleFile { spec, field }.to_quintuple().map_err(value_error)?;
        Ok(PyQuintuple { inner })
    }
}

#[pymethods]
impl PyQuintuple {
    /// The linear quadric.
    #[staticmethod]
    #[pyo3(signature = (field=None))]
    fn linear(field: Option<&str>) -> PyResult<PyQuintuple> {
        PyQuintuple::build(QuintupleSpec::Linear, field_of(field)?)
    }

    /// The type-A tensor with parameters given as rational strings.
    #[staticmethod]
    #[pyo3(signature = (a, b, c, field=None))]
    fn type_a(a: &str, b: &str, c: &str, field: Option<&str>) -> PyResult<PyQuintuple> {
        let p = |s: &str| parse_rational(s).map_err(value_error);
        PyQuintuple::build(QuintupleSpec::TypeA { a: p(a)?, b: p(b)?, c: p(c)? }, field_of(field)?)
    }

    /// Parse the JSON input format.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<PyQuintuple> {
        let file = QuintupleFile::parse(text).map_err(value_error)?;
        Ok(PyQuintuple { inner: file.to_quintuple().map_err(value_error)? })
    }

    #[getter]
    fn field(&self) -> String {
        self.inner.field().tag()
    }

    /// Entries in the order `w[a][b][c][d]`, flattened.
    fn entries(&self) -> Vec<String> {
        self.inner.w().entries().iter().map(|x| x.to_string()).collect()
    }

    fn is_geometric(&self) -> bool {
        ncquad_core::is_geometric(&self.inner).is_geometric()
    }

    /// `(dim R_0, dim R_1, dim (R_0⊗V_3) ∩ (V_0⊗R_1))`.
    fn relation_dims(&self) -> (usize, usize, usize) {
        relations(&self.inner).dims()
    }

    fn pairing_determinant(&self) -> PyResult<String> {
        Ok(pairing_matrix(&self.inner).determinant().map_err(value_error)?.to_string())
    }

    /// `"Disjoint"`, `"Meet(n)"` or `"Coincide"`; `None` if the pairing is singular.
    #[pyo3(signature = (convention=None))]
    fn line_relation(&self, convention: Option<&str>) -> PyResult<Option<String>> {
        let outcome = square_from_quintuple(&self.inner, convention_of(convention)?);
        let Some(s) = outcome.square() else { return Ok(None) };
        let [l0, l1] = s.lines();
        Ok(Some(line_relation(&l0, &l1).map_err(value_error)?.verdict.to_string()))
    }

    fn digest(&self) -> String {
        ncquad_core::input_digest(&self.inner)
    }

    #[pyo3(signature = (convention=None))]
    fn certify(&self, convention: Option<&str>) -> PyResult<PyCertificate> {
        Ok(PyCertificate { inner: ncquad_core::full_pipeline(&self.inner, convention_of(convention)?) })
    }

    fn __repr__(&self) -> String {
        format!("Quintuple(field={}, w={})", self.inner.field().tag(), self.inner.w())
    }
}

/// Result of the full pipeline.
#[pyclass(name = "Certificate", module = "ncquad", frozen)]
struct PyCertificate {
    inner: ncquad_core::Certificate,
}

#[pymethods]
impl PyCertificate {
    #[getter]
    fn certified(&self) -> bool {
        self.inner.verdict.is_certified()
    }

    /// The first failing stage, or `None` when certified.
    #[getter]
    fn stage(&self) -> Option<String> {
        self.inner.verdict.stage().map(str::to_string)
    }

    #[getter]
    fn convention(&self) -> String {
        self.inner.convention.to_string()
    }

    #[getter]
    fn input_digest(&self) -> String {
        self.inner.input_digest.clone()
    }

    /// Euler pairing of the derived Ext table, when that stage was reached.
    #[getter]
    fn gram(&self) -> Option<Vec<Vec<i64>>> {
        self.inner.gram.as_ref().map(|g| g.0.clone())
    }

    fn to_json(&self) -> String {
        self.inner.to_string_pretty()
    }

    fn __repr__(&self) -> String {
        match self.inner.verdict.stage() {
            None => "Certificate(Certified)".to_string(),
            Some(stage) => format!("Certificate(Degenerate at {stage})"),
        }
    }
}

#[pyfunction]
fn coh_p1(m: i64) -> Vec<u64> {
    blowup::coh_p1(m).dims
}

#[pyfunction]
fn coh_p2(n: i64) -> Vec<u64> {
    blowup::coh_p2(n).dims
}

#[pyfunction]
fn coh_p1xp2(m: i64, n: i64) -> Vec<u64> {
    blowup::coh_p1xp2(m, n).dims
}

#[pyfunction]
fn hilbert_dims(n: usize) -> u64 {
    core_hilbert_dims(n)
}

#[pyfunction]
fn canonical_class() -> (i64, i64, i64) {
    let c = blowup::canonical_class();
    (c.h, c.e0, c.e1)
}

#[pyfunction]
fn sod_length(base_len: usize, center_lens: Vec<usize>, codim: usize) -> PyResult<usize> {
    blowup::sod_length(base_len, &center_lens, codim).map_err(value_error)
}

#[pyfunction]
fn hkr_quadric() -> (u64, u64, u64) {
    blowup::hkr_quadric().as_tuple()
}

/// Sweep random type-A quintuples; returns the JSON report.
#[pyfunction]
#[pyo3(signature = (samples, seed, height=20, convention=None))]
fn sweep(samples: usize, seed: u64, height: i64, convention: Option<&str>) -> PyResult<String> {
    let report = sweep_type_a(samples, seed, height, convention_of(convention)?).map_err(value_error)?;
    Ok(report.to_json().to_string())
}

#[pymodule]
fn ncquad(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyQuintuple>()?;
    m.add_class::<PyCertificate>()?;
    m.add_function(wrap_pyfunction!(coh_p1, m)?)?;
    m.add_function(wrap_pyfunction!(coh_p2, m)?)?;
    m.add_function(wrap_pyfunction!(coh_p1xp2, m)?)?;
    m.add_function(wrap_pyfunction!(hilbert_dims, m)?)?;
    m.add_function(wrap_pyfunction!(canonical_class, m)?)?;
    m.add_function(wrap_pyfunction!(sod_length, m)?)?;
    m.add_function(wrap_pyfunction!(hkr_quadric, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    Ok(())
}
