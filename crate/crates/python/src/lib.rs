//! Python bindings: complexity estimators, ball suprema, chaining bounds and
//! the tail utilities. Point sets are passed as lists of flat `k·n` rows.

use chainrule::chaining::{build_admissible_sequence, entropy_profile, gamma2_upper};
use chainrule::classes::{lipschitz_ball_sup as lip_sup, rkhs_ball_sup as rkhs_sup, GaussianRkhsBall, Points};
use chainrule::complexity::{self, EstimatorConfig, Mode};
use chainrule::tails::{self, TailSeriesParams};
use chainrule::{ComplexityEstimate, FiniteMetricSpace, PointSet};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn py_err(e: chainrule::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn estimate_dict<'py>(py: Python<'py>, e: &ComplexityEstimate) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("value", e.value)?;
    d.set_item("std_error", e.std_error)?;
    d.set_item("method", e.method.as_str())?;
    d.set_item("samples", e.samples)?;
    d.set_item("seed", e.seed)?;
    Ok(d)
}

fn estimator(exact: bool, mc: Option<usize>, seed: u64) -> EstimatorConfig {
    match (exact, mc) {
        (true, _) => EstimatorConfig { seed, ..EstimatorConfig::exact() },
        (false, Some(n)) => EstimatorConfig::monte_carlo(n, seed),
        (false, None) => EstimatorConfig { mode: Mode::Auto, seed, ..EstimatorConfig::default() },
    }
}

fn pointset(elements: Vec<Vec<f64>>, k: usize) -> PyResult<PointSet> {
    let len = elements.first().map_or(0, Vec::len);
    if k == 0 || len % k != 0 {
        return Err(PyValueError::new_err(format!("row length {len} is not a multiple of k = {k}")));
    }
    PointSet::new(k, len / k, elements).map_err(py_err)
}

/// `b(T)`; `exact` enumerates signs, `mc` fixes the Monte Carlo sample count.
#[pyfunction]
#[pyo3(signature = (elements, k=1, exact=false, mc=None, seed=42))]
fn bernoulli_complexity(py: Python<'_>, elements: Vec<Vec<f64>>, k: usize, exact: bool, mc: Option<usize>, seed: u64) -> PyResult<Bound<'_, PyDict>> {
    let t = pointset(elements, k)?;
    let est = py.detach(|| complexity::bernoulli_complexity(&t, &estimator(exact, mc, seed))).map_err(py_err)?;
    estimate_dict(py, &est)
}

/// `g(T)` by Monte Carlo.
#[pyfunction]
#[pyo3(signature = (elements, k=1, mc=None, seed=42))]
fn gaussian_complexity(py: Python<'_>, elements: Vec<Vec<f64>>, k: usize, mc: Option<usize>, seed: u64) -> PyResult<Bound<'_, PyDict>> {
    let t = pointset(elements, k)?;
    let est = py.detach(|| complexity::gaussian_complexity(&t, &estimator(false, mc, seed))).map_err(py_err)?;
    estimate_dict(py, &est)
}

/// `sup Σ cᵢ f(xᵢ)` over the L-Lipschitz functions bounded by `L·radius`.
#[pyfunction]
fn lipschitz_ball_sup(points: Vec<Vec<f64>>, c: Vec<f64>, lipschitz: f64, radius: f64) -> PyResult<f64> {
    let k = points.first().map_or(1, Vec::len);
    let flat: Vec<f64> = points.concat();
    lip_sup(Points::new(&flat, k).map_err(py_err)?, &c, lipschitz, radius).map_err(py_err)
}

/// `ϱ·√(cᵀ K c)` for the Gaussian kernel of bandwidth `sigma`.
#[pyfunction]
fn rkhs_ball_sup(points: Vec<Vec<f64>>, c: Vec<f64>, sigma: f64, rho: f64) -> PyResult<f64> {
    let k = points.first().map_or(1, Vec::len);
    let flat: Vec<f64> = points.concat();
    let ball = GaussianRkhsBall::new(sigma, rho).map_err(py_err)?;
    rkhs_sup(Points::new(&flat, k).map_err(py_err)?, &c, &ball).map_err(py_err)
}

/// Upper bound on γ₂ of a Euclidean point cloud from a farthest-first
/// admissible sequence.
#[pyfunction]
fn gamma2(points: Vec<Vec<f64>>) -> PyResult<f64> {
    let space = FiniteMetricSpace::euclidean(&points).map_err(py_err)?;
    let seq = build_admissible_sequence(&space);
    gamma2_upper(&space, &seq).map_err(py_err)
}

/// Entropy numbers `e_0..e_max_m` of a Euclidean point cloud.
#[pyfunction]
fn entropy_numbers(points: Vec<Vec<f64>>, max_m: usize) -> PyResult<Vec<f64>> {
    let space = FiniteMetricSpace::euclidean(&points).map_err(py_err)?;
    Ok(entropy_profile(&space, max_m).values().to_vec())
}

/// `(min_M h(M), argmin)` for dimension `k` and sample size `n`.
#[pyfunction]
fn min_h(k: usize, n: usize) -> (f64, usize) {
    chainrule::chaining::min_h(k, n)
}

#[pyfunction]
fn tail_series_p(u: f64, w: u32) -> PyResult<f64> {
    tails::tail_series_p(u, &TailSeriesParams::new(w)).map_err(py_err)
}

#[pyfunction]
fn tail_series_q(u: f64, w: u32) -> PyResult<f64> {
    tails::tail_series_q(u, &TailSeriesParams::new(w)).map_err(py_err)
}

#[pyfunction]
fn tail_q_inverse(v: f64, w: u32) -> PyResult<f64> {
    tails::tail_q_inverse(v, &TailSeriesParams::new(w)).map_err(py_err)
}

/// `(C_w·rho + zeta, C_w, u*)`.
#[pyfunction]
fn expectation_bound_from_tail(rho: f64, zeta: f64, w: u32) -> PyResult<(f64, f64, f64)> {
    let b = tails::expectation_bound_from_tail(rho, zeta, &TailSeriesParams::new(w)).map_err(py_err)?;
    Ok((b.bound, b.c_w, b.u_star))
}

#[pyfunction]
fn uncenter_tail(a: f64, u: f64) -> PyResult<f64> {
    tails::uncenter_tail(a, u).map_err(py_err)
}

#[pymodule]
fn chainrule_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(bernoulli_complexity, m)?)?;
    m.add_function(wrap_pyfunction!(gaussian_complexity, m)?)?;
    m.add_function(wrap_pyfunction!(lipschitz_ball_sup, m)?)?;
    m.add_function(wrap_pyfunction!(rkhs_ball_sup, m)?)?;
    m.add_function(wrap_pyfunction!(gamma2, m)?)?;
    m.add_function(wrap_pyfunction!(entropy_numbers, m)?)?;
    m.add_function(wrap_pyfunction!(min_h, m)?)?;
    m.add_function(wrap_pyfunction!(tail_series_p, m)?)?;
    m.add_function(wrap_pyfunction!(tail_series_q, m)?)?;
    m.add_function(wrap_pyfunction!(tail_q_inverse, m)?)?;
    m.add_function(wrap_pyfunction!(expectation_bound_from_tail, m)?)?;
    m.add_function(wrap_pyfunction!(uncenter_tail, m)?)?;
    Ok(())
}
