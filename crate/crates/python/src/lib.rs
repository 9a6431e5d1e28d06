//! Python bindings. Points travel as lists of coordinate lists.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use tchakaloff as tk;
use tk::format::{parse_cubature, write_cubature_string};
use tk::{LpOptions, MomentProvenance, MomentVector, PointSet, TestFunctionBasis};

fn to_py(err: tk::Error) -> PyErr {
    use tk::Error as E;
    match err {
        E::DimensionMismatch { .. }
        | E::NonFinite(_)
        | E::Unsupported(_)
        | E::InvalidInput(_)
        | E::EmptySamples
        | E::Parse { .. }
        | E::SizeCap { .. } => PyValueError::new_err(err.to_string()),
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

fn points_from(rows: Vec<Vec<f64>>) -> PyResult<PointSet> {
    let dim = rows
        .first()
        .map(Vec::len)
        .ok_or_else(|| PyValueError::new_err("point list is empty"))?;
    PointSet::from_rows(dim, &rows).map_err(to_py)
}

fn monomials(s: usize, m: u32) -> PyResult<TestFunctionBasis> {
    tk::enumerate_monomials(s, m).map_err(to_py)
}

fn target_or_analytic(basis: &TestFunctionBasis, moments: Option<Vec<f64>>) -> PyResult<MomentVector> {
    match moments {
        Some(values) => MomentVector::new(values, MomentProvenance::UserSupplied).map_err(to_py),
        None => tk::analytic_moment_vector(basis).map_err(to_py),
    }
}

/// A positive-weight cubature rule.
#[pyclass(name = "Cubature", module = "tchakaloff", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyCubature {
    inner: tk::Cubature,
}

#[pymethods]
impl PyCubature {
    #[getter]
    fn nodes(&self) -> Vec<Vec<f64>> {
        self.inner.nodes.to_rows()
    }

    #[getter]
    fn weights(&self) -> Vec<f64> {
        self.inner.weights.clone()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn residual(&self) -> Option<f64> {
        self.inner.residual
    }

    #[getter]
    fn basis(&self) -> Option<String> {
        self.inner.basis.clone()
    }

    #[getter]
    fn provenance(&self) -> String {
        tk::format::provenance_record(&self.inner.provenance)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("Cubature(n={}, dim={})", self.inner.len(), self.inner.dim())
    }

    fn weight_sum(&self) -> f64 {
        self.inner.weight_sum()
    }

    /// Monomial moments of the rule up to total degree `degree`.
    fn moments(&self, degree: u32) -> PyResult<Vec<f64>> {
        let basis = monomials(self.inner.dim(), degree)?;
        self.inner.moments(&basis).map_err(to_py)
    }

    fn integrate_monomial(&self, exponents: Vec<u32>) -> PyResult<f64> {
        if exponents.len() != self.inner.dim() {
            return Err(PyValueError::new_err("exponent count differs from node dimension"));
        }
        let alpha = tk::MultiIndex::new(exponents);
        Ok(tk::integrate_fn(&self.inner, |x| alpha.evaluate(x)))
    }

    fn to_text(&self) -> String {
        write_cubature_string(&self.inner)
    }

    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        parse_cubature(text).map(|inner| PyCubature { inner }).map_err(to_py)
    }
}

#[pyfunction]
fn basis_dim(s: usize, m: u32) -> PyResult<usize> {
    tk::basis_dim(s, m).map_err(to_py)
}

/// Exponent vectors of the degree-`m` monomial basis in graded-lex order.
#[pyfunction]
fn enumerate_monomials(s: usize, m: u32) -> PyResult<Vec<Vec<u32>>> {
    Ok(monomials(s, m)?
        .members()
        .iter()
        .map(|a| a.exponents().to_vec())
        .collect())
}

#[pyfunction]
fn evaluate_basis(s: usize, m: u32, point: Vec<f64>) -> PyResult<Vec<f64>> {
    monomials(s, m)?.evaluate(&point).map_err(to_py)
}

/// Moments of the uniform measure on `[0,1]^s`.
#[pyfunction]
fn analytic_moments(s: usize, m: u32) -> PyResult<Vec<f64>> {
    let basis = monomials(s, m)?;
    Ok(tk::analytic_moment_vector(&basis).map_err(to_py)?.values().to_vec())
}

#[pyfunction]
#[pyo3(signature = (s, n, seed, stream=0))]
fn sample_uniform_cube(s: usize, n: usize, seed: u64, stream: u64) -> Vec<Vec<f64>> {
    tk::sample_uniform_cube(s, n, seed, stream).points.to_rows()
}

#[pyfunction]
#[pyo3(signature = (s, n, seed, stream=0))]
fn sample_gaussian(s: usize, n: usize, seed: u64, stream: u64) -> Vec<Vec<f64>> {
    tk::sample_gaussian(s, n, seed, stream).points.to_rows()
}

/// Selects at most `d` of `points` reproducing `moments` (default: uniform-cube moments).
#[pyfunction]
#[pyo3(signature = (points, degree, moments=None, tol=1e-9))]
fn subsample(points: Vec<Vec<f64>>, degree: u32, moments: Option<Vec<f64>>, tol: f64) -> PyResult<PyCubature> {
    let points = points_from(points)?;
    let basis = monomials(points.dim(), degree)?;
    let target = target_or_analytic(&basis, moments)?;
    tk::subsample(&points, &basis, &target, &LpOptions::with_tolerance(tol))
        .map(|inner| PyCubature { inner })
        .map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (s, m, seed, measure="uniform", moments=None, stream=0, initial_pool=None, max_pool=1_000_000, tol=1e-9))]
#[allow(clippy::too_many_arguments)]
fn construct_exact(
    py: Python<'_>,
    s: usize,
    m: u32,
    seed: u64,
    measure: &str,
    moments: Option<Vec<f64>>,
    stream: u64,
    initial_pool: Option<usize>,
    max_pool: usize,
    tol: f64,
) -> PyResult<PyCubature> {
    let distribution = tk::Distribution::from_name(measure)
        .ok_or_else(|| PyValueError::new_err(format!("unknown measure {measure:?}")))?;
    if distribution == tk::Distribution::Gaussian && moments.is_none() {
        return Err(PyValueError::new_err("gaussian measure needs explicit moments"));
    }
    let basis = monomials(s, m)?;
    let target = target_or_analytic(&basis, moments)?;
    let config = tk::ConstructionConfig {
        initial_pool,
        max_pool,
        lp: LpOptions::with_tolerance(tol),
        stream_id: stream,
        ..tk::ConstructionConfig::with_seed(seed)
    };
    py.detach(|| tk::construct_exact(distribution, &basis, &target, &config))
        .map(|inner| PyCubature { inner })
        .map_err(to_py)
}

/// Compresses the empirical measure of `points` to at most `d` weighted points.
#[pyfunction]
#[pyo3(signature = (points, degree, tol=1e-9))]
fn compress_empirical(points: Vec<Vec<f64>>, degree: u32, tol: f64) -> PyResult<PyCubature> {
    let points = points_from(points)?;
    let basis = monomials(points.dim(), degree)?;
    let batch = tk::SampleBatch {
        points,
        source: tk::SampleSource::File("<python>".into()),
    };
    tk::compress_empirical(&batch, &basis, &LpOptions::with_tolerance(tol))
        .map(|inner| PyCubature { inner })
        .map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (cubature, k, cap=tk::cubature::DEFAULT_PRODUCT_CAP))]
fn product_cubature(cubature: &PyCubature, k: u32, cap: usize) -> PyResult<PyCubature> {
    tk::product_cubature(&cubature.inner, k, cap)
        .map(|inner| PyCubature { inner })
        .map_err(to_py)
}

/// Returns a dict with `passed`, `max_residual`, `weights_positive`, `weight_sum` and `failures`.
#[pyfunction]
#[pyo3(signature = (cubature, degree, moments=None, tol=1e-9))]
fn verify<'py>(
    py: Python<'py>,
    cubature: &PyCubature,
    degree: u32,
    moments: Option<Vec<f64>>,
    tol: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let basis = monomials(cubature.inner.dim(), degree)?;
    let target = target_or_analytic(&basis, moments)?;
    let report = tk::verify(&cubature.inner, &basis, &target, tol);
    let out = PyDict::new(py);
    out.set_item("passed", report.passed())?;
    out.set_item("max_residual", report.max_residual)?;
    out.set_item("weights_positive", report.weights_positive)?;
    out.set_item("weight_sum", report.weight_sum)?;
    out.set_item("node_count", report.node_count)?;
    out.set_item("basis_size", report.basis_size)?;
    out.set_item("failures", report.failures())?;
    Ok(out)
}

#[pyfunction]
fn integrate(cubature: &PyCubature, values: Vec<f64>) -> PyResult<f64> {
    tk::integrate(&cubature.inner, &values).map_err(to_py)
}

fn instance(rows: Vec<Vec<f64>>, b: Vec<f64>) -> PyResult<tk::LpInstance> {
    tk::LpInstance::from_rows(&rows, b).map_err(to_py)
}

/// Is `b` in the cone spanned by the columns of `a` (given as rows)?
#[pyfunction]
#[pyo3(signature = (a, b, tol=1e-9))]
fn membership_test(a: Vec<Vec<f64>>, b: Vec<f64>, tol: f64) -> PyResult<bool> {
    tk::membership_test(&instance(a, b)?, &LpOptions::with_tolerance(tol)).map_err(to_py)
}

/// Basic feasible solution of `A z = b, z >= 0` as a dict.
#[pyfunction]
#[pyo3(signature = (a, b, tol=1e-9))]
fn find_bfs<'py>(py: Python<'py>, a: Vec<Vec<f64>>, b: Vec<f64>, tol: f64) -> PyResult<Bound<'py, PyDict>> {
    let res = tk::find_bfs(&instance(a, b)?, &LpOptions::with_tolerance(tol)).map_err(to_py)?;
    let status = match res.status {
        tk::BfsStatus::Feasible => "feasible",
        tk::BfsStatus::Infeasible => "infeasible",
        tk::BfsStatus::NumericallyUnstable => "unstable",
    };
    let out = PyDict::new(py);
    out.set_item("status", status)?;
    out.set_item("support", res.support)?;
    out.set_item("weights", res.weights)?;
    out.set_item("residual", res.residual)?;
    out.set_item("iterations", res.iterations)?;
    Ok(out)
}

/// Smallest pool size at which the uniform-cube moments are in the hull for
/// at least `threshold` of `trials` seeds, or None if `search_hi` is not enough.
#[pyfunction]
#[pyo3(signature = (s, m, seed, trials=20, threshold=10, search_hi=10_000))]
fn estimate_n(
    py: Python<'_>,
    s: usize,
    m: u32,
    seed: u64,
    trials: usize,
    threshold: usize,
    search_hi: usize,
) -> PyResult<Option<usize>> {
    let config = tk::ExperimentConfig {
        trials,
        success_threshold: threshold,
        search_hi,
        ..tk::ExperimentConfig::with_seed(seed)
    };
    py.detach(|| tk::estimate_n(s, m, &config))
        .map(|r| r.estimated_n)
        .map_err(to_py)
}

#[pymodule]
#[pyo3(name = "tchakaloff")]
fn tchakaloff_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCubature>()?;
    m.add_function(wrap_pyfunction!(basis_dim, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_monomials, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate_basis, m)?)?;
    m.add_function(wrap_pyfunction!(analytic_moments, m)?)?;
    m.add_function(wrap_pyfunction!(sample_uniform_cube, m)?)?;
    m.add_function(wrap_pyfunction!(sample_gaussian, m)?)?;
    m.add_function(wrap_pyfunction!(subsample, m)?)?;
    m.add_function(wrap_pyfunction!(construct_exact, m)?)?;
    m.add_function(wrap_pyfunction!(compress_empirical, m)?)?;
    m.add_function(wrap_pyfunction!(product_cubature, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(integrate, m)?)?;
    m.add_function(wrap_pyfunction!(membership_test, m)?)?;
    m.add_function(wrap_pyfunction!(find_bfs, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_n, m)?)?;
    Ok(())
}
