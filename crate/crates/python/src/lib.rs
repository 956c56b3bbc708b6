//! Python bindings: `import warpdeg`.
//!
//! Crossings and regions are numbered from 0, as in the Rust library.

use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use warpdeg::census::{self, Limits};
use warpdeg::codec::{self, canonical};
use warpdeg::region_opt::{self, RegionChoiceMatrix};
use warpdeg::warping::Direction;

fn to_py(e: warpdeg::Error) -> PyErr {
    match e {
        warpdeg::Error::Io { .. } => PyOSError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

/// A knot or link shadow on the sphere.
#[pyclass(name = "Shadow", module = "warpdeg", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyShadow {
    inner: warpdeg::Shadow,
}

impl From<warpdeg::Shadow> for PyShadow {
    fn from(inner: warpdeg::Shadow) -> Self {
        PyShadow { inner }
    }
}

#[pymethods]
impl PyShadow {
    /// Parses a PD code, with or without a `name:` prefix.
    #[staticmethod]
    fn from_pd(text: &str) -> PyResult<Self> {
        let line = if text.contains(':') { text.to_string() } else { format!("_: {text}") };
        let (_, s) = codec::parse_pd_line(&line).map_err(to_py)?;
        Ok(s.into())
    }

    /// Every shadow realizing an unsigned Gauss code, up to isomorphism.
    #[staticmethod]
    fn from_gauss(text: &str) -> PyResult<Vec<Self>> {
        let g = codec::parse_gauss(text).map_err(to_py)?;
        Ok(codec::realize(&g).into_iter().map(Into::into).collect())
    }

    #[getter]
    fn crossings(&self) -> usize {
        self.inner.crossing_count()
    }

    #[getter]
    fn components(&self) -> usize {
        self.inner.component_count()
    }

    #[getter]
    fn is_reduced(&self) -> bool {
        self.inner.is_reduced()
    }

    #[getter]
    fn is_knot(&self) -> bool {
        self.inner.is_knot()
    }

    /// Crossings on the boundary of each region.
    fn regions(&self) -> Vec<Vec<usize>> {
        self.inner.regions().iter().map(|r| r.crossings.clone()).collect()
    }

    fn nugatory_crossings(&self) -> Vec<usize> {
        self.inner.nugatory_crossings()
    }

    fn canonical(&self) -> String {
        canonical(&self.inner).0
    }

    fn pd(&self) -> String {
        codec::emit_pd(&self.inner)
    }

    fn gauss(&self) -> String {
        codec::emit_gauss(&self.inner)
    }

    fn region_choice_matrix(&self) -> PyResult<Vec<Vec<u8>>> {
        Ok(region_opt::region_choice_matrix(&self.inner).map_err(to_py)?.entries().to_vec())
    }

    /// `(d, assignment, direction, base_edge)` for a minimizing witness.
    fn warping_degree(&self) -> PyResult<(usize, usize, &'static str, usize)> {
        let r = warpdeg::warping_degree_shadow(&self.inner).map_err(to_py)?;
        let dir = match r.witness.direction {
            Direction::Forward => "forward",
            Direction::Backward => "backward",
        };
        Ok((r.d, r.witness.assignment, dir, r.witness.base_edge))
    }

    /// `(IR, base_crossing, region_set)`.
    fn ir(&self) -> PyResult<(usize, usize, Vec<usize>)> {
        let r = warpdeg::ir(&self.inner).map_err(to_py)?;
        Ok((r.ir, r.base_crossing, r.region_set))
    }

    /// `(IR(P^crossing), region_set)`.
    fn ir_base(&self, crossing: usize) -> PyResult<(usize, Vec<usize>)> {
        warpdeg::ir_base(&self.inner, crossing).map_err(to_py)
    }

    fn independent_sets(&self, crossing: usize) -> PyResult<Vec<Vec<usize>>> {
        let m = region_opt::region_choice_matrix(&self.inner).map_err(to_py)?;
        let sets = region_opt::independent_sets_for_base(&m, crossing).map_err(to_py)?;
        Ok(sets.iter().map(|v| v.regions()).collect())
    }

    fn emit_dimacs(&self, crossing: usize, k: usize) -> PyResult<String> {
        region_opt::emit_dimacs(&self.inner, crossing, k).map_err(to_py)
    }

    fn verify_bounds<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let r = warpdeg::verify_bounds(&self.inner).map_err(to_py)?;
        let d = PyDict::new(py);
        d.set_item("crossings", r.crossings)?;
        d.set_item("reduced", r.reduced)?;
        d.set_item("d", r.d)?;
        d.set_item("ir", r.ir)?;
        d.set_item("lower_ok", r.lower_ok)?;
        d.set_item("upper_ok", r.upper_ok)?;
        d.set_item("violation", r.has_violation())?;
        Ok(d)
    }

    fn __repr__(&self) -> String {
        format!("Shadow({})", codec::emit_pd(&self.inner))
    }

    fn __eq__(&self, other: &Self) -> bool {
        canonical(&self.inner) == canonical(&other.inner)
    }

    fn __hash__(&self) -> u64 {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        canonical(&self.inner).hash(&mut h);
        h.finish()
    }
}

#[pyfunction]
#[pyo3(signature = (c, reduced_only = false, limit = census::DEFAULT_KNOT_LIMIT))]
fn enumerate_knot_shadows(py: Python<'_>, c: usize, reduced_only: bool, limit: usize) -> PyResult<Vec<PyShadow>> {
    let limits = Limits { knots: limit, ..Limits::default() };
    let out = py.detach(|| census::enumerate_knot_shadows(c, reduced_only, &limits)).map_err(to_py)?;
    Ok(out.into_iter().map(Into::into).collect())
}

#[pyfunction]
#[pyo3(signature = (c, limit = census::DEFAULT_LINK_LIMIT))]
fn enumerate_link_shadows(py: Python<'_>, c: usize, limit: usize) -> PyResult<Vec<PyShadow>> {
    let limits = Limits { links: limit, ..Limits::default() };
    let out = py.detach(|| census::enumerate_link_shadows(c, &limits)).map_err(to_py)?;
    Ok(out.into_iter().map(Into::into).collect())
}

/// `(c, count_reduced, d_min, ir_min, ir_max)`
type TableRow = (usize, usize, usize, usize, usize);

#[pyfunction]
#[pyo3(signature = (c_from, c_to, limit = census::DEFAULT_KNOT_LIMIT))]
fn dmin_table(py: Python<'_>, c_from: usize, c_to: usize, limit: usize) -> PyResult<Vec<TableRow>> {
    let limits = Limits { knots: limit, ..Limits::default() };
    let rows = py.detach(|| census::dmin_table(c_from, c_to, &limits)).map_err(to_py)?;
    Ok(rows.iter().map(|r| (r.c, r.count_reduced, r.d_min, r.ir_min, r.ir_max)).collect())
}

#[pyfunction]
fn load_corpus(path: &str) -> PyResult<Vec<(String, PyShadow)>> {
    let corpus = warpdeg::corpus::load_corpus(std::path::Path::new(path)).map_err(to_py)?;
    Ok(corpus.entries.into_iter().map(|e| (e.name, e.shadow.into())).collect())
}

/// Independent region sets of a raw 0/1 matrix (rows are crossings) that
/// avoid row `base`.
#[pyfunction]
fn independent_sets_from_matrix(rows: Vec<Vec<u8>>, base: usize) -> PyResult<Vec<Vec<usize>>> {
    let m = RegionChoiceMatrix::from_rows(rows).map_err(to_py)?;
    let sets = region_opt::independent_sets_for_base(&m, base).map_err(to_py)?;
    Ok(sets.iter().map(|v| v.regions()).collect())
}

#[pymodule]
#[pyo3(name = "warpdeg")]
fn warpdeg_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyShadow>()?;
    m.add_function(wrap_pyfunction!(enumerate_knot_shadows, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_link_shadows, m)?)?;
    m.add_function(wrap_pyfunction!(dmin_table, m)?)?;
    m.add_function(wrap_pyfunction!(load_corpus, m)?)?;
    m.add_function(wrap_pyfunction!(independent_sets_from_matrix, m)?)?;
    Ok(())
}
