//! Python bindings for the bounds, oracles and sweeps of `clifford-core`.
//!
//! Rationals are accepted as anything whose `str()` parses as `p/q` or an
//! integer, so `int`, `fractions.Fraction` and plain strings all work.
//! Structured results come back as dicts with rationals rendered as strings.

use clifford_core::oracles::{
    ideal_sheaf_cohomology, line_bundle_cohomology as lb_cohomology, model_bound_audit, random_points,
    steiner_h0_random as steiner_sample, AuditRecord, PointOnQuadric,
};
use clifford_core::sharpness::Parity;
use clifford_core::{self as core, BiDegree, Error, Rational, SearchBox, SheafModel, Suite, SweepConfig};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use pyo3::IntoPyObjectExt;
use serde::Serialize;
use serde_json::Value;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::NonGenericSample { .. } => PyRuntimeError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn rational(obj: &Bound<'_, PyAny>) -> PyResult<Rational> {
    let text = obj.str()?.to_string();
    text.trim().parse::<Rational>().map_err(py_err)
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    match v {
        Value::Null => Ok(py.None().into_bound(py)),
        Value::Bool(b) => b.into_bound_py_any(py),
        Value::Number(n) => match n.as_i64() {
            Some(i) => i.into_bound_py_any(py),
            None => n.as_f64().unwrap_or(f64::NAN).into_bound_py_any(py),
        },
        Value::String(s) => s.into_bound_py_any(py),
        Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(to_py(py, item)?)?;
            }
            Ok(list.into_any())
        }
        Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, item) in map {
                dict.set_item(k, to_py(py, item)?)?;
            }
            Ok(dict.into_any())
        }
    }
}

fn serialize<'py, T: Serialize>(py: Python<'py>, v: &T) -> PyResult<Bound<'py, PyAny>> {
    let value = serde_json::to_value(v).map_err(|e| PyValueError::new_err(e.to_string()))?;
    to_py(py, &value)
}

/// Rank, c₁ and ch₂ of a sheaf on P¹×P¹.
#[pyclass(name = "ChernCharacter", frozen, eq, hash, skip_from_py_object)]
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
struct PyChernCharacter(core::ChernCharacter);

#[pymethods]
impl PyChernCharacter {
    #[new]
    #[pyo3(signature = (rank, c1, ch2))]
    fn new(rank: i64, c1: (i64, i64), ch2: &Bound<'_, PyAny>) -> PyResult<Self> {
        core::ChernCharacter::new(rank, BiDegree::new(c1.0, c1.1), rational(ch2)?).map(Self).map_err(py_err)
    }

    #[staticmethod]
    fn from_chi(rank: i64, c1: (i64, i64), chi: i64) -> PyResult<Self> {
        core::ChernCharacter::from_chi(rank, BiDegree::new(c1.0, c1.1), chi).map(Self).map_err(py_err)
    }

    #[staticmethod]
    fn line_bundle(a: i64, b: i64) -> Self {
        Self(core::ChernCharacter::line_bundle(a, b))
    }

    #[getter]
    fn rank(&self) -> i64 {
        self.0.rank
    }

    #[getter]
    fn c1(&self) -> (i64, i64) {
        (self.0.c1.a, self.0.c1.b)
    }

    #[getter]
    fn ch2(&self) -> String {
        self.0.ch2.to_string()
    }

    fn chi(&self) -> PyResult<i64> {
        self.0.chi().map_err(py_err)
    }

    fn slope(&self) -> PyResult<String> {
        self.0.slope().map(|m| m.to_string()).map_err(py_err)
    }

    fn twist(&self, p: i64, q: i64) -> Self {
        Self(core::twist(&self.0, p, q))
    }

    fn __add__(&self, other: &Self) -> Self {
        Self(self.0 + other.0)
    }

    fn __repr__(&self) -> String {
        format!("ChernCharacter(rank={}, c1=({}, {}), ch2={})", self.0.rank, self.0.c1.a, self.0.c1.b, self.0.ch2)
    }
}

#[pyfunction]
fn alpha(mu: &Bound<'_, PyAny>) -> PyResult<i64> {
    core::alpha(rational(mu)?).map_err(py_err)
}

#[pyfunction]
fn beta(r: i64, mu: &Bound<'_, PyAny>) -> PyResult<i64> {
    core::beta(r, rational(mu)?).map_err(py_err)
}

/// β at a slope where 2rμ need not be an integer, as a `p/q` string.
#[pyfunction]
fn beta_relaxed(r: i64, mu: &Bound<'_, PyAny>) -> PyResult<String> {
    core::beta_relaxed(r, rational(mu)?).map(|b| b.to_string()).map_err(py_err)
}

#[pyfunction]
fn general_bound<'py>(py: Python<'py>, r: i64, mu_max: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyAny>> {
    serialize(py, &core::general_bound(r, rational(mu_max)?).map_err(py_err)?)
}

/// Uses the slope of O(a,b)-type data unless `mu_max` is given.
#[pyfunction]
#[pyo3(signature = (r, a, b, j, mu_max=None))]
fn unbalanced_bound<'py>(
    py: Python<'py>,
    r: i64,
    a: i64,
    b: i64,
    j: i64,
    mu_max: Option<&Bound<'py, PyAny>>,
) -> PyResult<Bound<'py, PyAny>> {
    let rep = match mu_max {
        Some(m) => core::unbalanced_bound_with_mu_max(r, a, b, j, rational(m)?),
        None => core::unbalanced_bound(r, a, b, j),
    };
    serialize(py, &rep.map_err(py_err)?)
}

#[pyfunction]
fn stratified_bound<'py>(py: Python<'py>, s: i64, mu_max: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyAny>> {
    serialize(py, &core::stratified_bound(s, rational(mu_max)?).map_err(py_err)?)
}

#[pyfunction]
fn non_gg_bound<'py>(py: Python<'py>, r: i64, mu_max: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyAny>> {
    serialize(py, &core::non_gg_bound(r, rational(mu_max)?).map_err(py_err)?)
}

#[pyfunction]
fn theta(r: i64, a: i64, b: i64, l: i64) -> PyResult<i64> {
    core::theta(r, a, b, l).map_err(py_err)
}

#[pyfunction]
fn theta_exception(r: i64, a: i64, b: i64, l: i64) -> PyResult<bool> {
    core::theta_exception(r, a, b, l).map_err(py_err)
}

#[pyfunction]
fn bn_locus_decision<'py>(py: Python<'py>, ch: &PyChernCharacter, k: i64) -> PyResult<Bound<'py, PyAny>> {
    serialize(py, &core::bn_locus_decision(&ch.0, k).map_err(py_err)?)
}

#[pyfunction]
fn steiner_character(k: i64, l: i64, r: i64, m: i64, n: i64) -> PyResult<PyChernCharacter> {
    core::steiner_character(k, l, r, m, n).map(PyChernCharacter).map_err(py_err)
}

#[pyfunction]
fn twisted_steiner_h0_formula(k: i64, l: i64, r: i64, m: i64, n: i64) -> PyResult<i64> {
    core::twisted_steiner_h0_formula(k, l, r, m, n).map_err(py_err)
}

/// `None` when the character cannot be maximal.
#[pyfunction]
fn maximal_structure_check<'py>(py: Python<'py>, ch: &PyChernCharacter) -> PyResult<Bound<'py, PyAny>> {
    serialize(py, &core::maximal_structure_check(&ch.0).map_err(py_err)?)
}

/// (h0, h1, h2) of O(a,b).
#[pyfunction]
fn line_bundle_cohomology(a: i64, b: i64) -> (i64, i64, i64) {
    let t = lb_cohomology(a, b);
    (t.h0, t.h1, t.h2)
}

fn parse_points(points: Vec<Vec<Bound<'_, PyAny>>>) -> PyResult<Vec<PointOnQuadric>> {
    points
        .iter()
        .map(|p| {
            let [x0, x1, y0, y1] = p.as_slice() else {
                return Err(PyValueError::new_err(format!("a point needs 4 coordinates, got {}", p.len())));
            };
            PointOnQuadric::new(rational(x0)?, rational(x1)?, rational(y0)?, rational(y1)?).map_err(py_err)
        })
        .collect()
}

/// (h0, h1, h2) of I_Z(a,b) for points given as `[x0, x1, y0, y1]`.
#[pyfunction]
fn ideal_sheaf_cohomology_of(points: Vec<Vec<Bound<'_, PyAny>>>, a: i64, b: i64) -> PyResult<(i64, i64, i64)> {
    let t = ideal_sheaf_cohomology(&parse_points(points)?, a, b).map_err(py_err)?;
    Ok((t.h0, t.h1, t.h2))
}

#[pyfunction]
fn ideal_sheaf_h0(points: Vec<Vec<Bound<'_, PyAny>>>, a: i64, b: i64) -> PyResult<i64> {
    core::oracles::ideal_sheaf_h0(&parse_points(points)?, a, b).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (count, a, b, seed=core::DEFAULT_SEED))]
fn ideal_sheaf_h0_random(count: usize, a: i64, b: i64, seed: u64) -> PyResult<i64> {
    core::oracles::ideal_sheaf_h0(&random_points(count, seed), a, b).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (k, l, r, m, n, seed=core::DEFAULT_SEED))]
fn steiner_h0_random<'py>(py: Python<'py>, k: i64, l: i64, r: i64, m: i64, n: i64, seed: u64) -> PyResult<Bound<'py, PyAny>> {
    let sample = steiner_sample(k, l, r, m, n, seed).map_err(py_err)?;
    let dict = PyDict::new(py);
    dict.set_item("h0", sample.h0)?;
    dict.set_item("h1", sample.h1)?;
    dict.set_item("genericity", serialize(py, &sample.report)?)?;
    Ok(dict.into_any())
}

fn audit<'py>(py: Python<'py>, model: &SheafModel) -> PyResult<Bound<'py, PyAny>> {
    let rec: AuditRecord = model_bound_audit(model).map_err(py_err)?;
    let dict = serialize(py, &rec)?.cast_into::<PyDict>()?;
    dict.set_item("passed", rec.passed())?;
    Ok(dict.into_any())
}

/// Audits ⊕ O(a,b)^mult against every applicable bound.
#[pyfunction]
fn audit_direct_sum<'py>(py: Python<'py>, summands: Vec<(i64, i64, i64)>) -> PyResult<Bound<'py, PyAny>> {
    audit(py, &SheafModel::direct_sum(&summands))
}

#[pyfunction]
#[pyo3(signature = (k, l, r, m, n, seed=core::DEFAULT_SEED))]
fn audit_steiner<'py>(py: Python<'py>, k: i64, l: i64, r: i64, m: i64, n: i64, seed: u64) -> PyResult<Bound<'py, PyAny>> {
    audit(py, &SheafModel::steiner(k, l, r, m, n, seed))
}

#[pyfunction]
fn audit_ideal_sheaf<'py>(py: Python<'py>, points: Vec<Vec<Bound<'py, PyAny>>>, a: i64, b: i64) -> PyResult<Bound<'py, PyAny>> {
    audit(py, &SheafModel::IdealSheafTwist { points: parse_points(points)?, twist: BiDegree::new(a, b) })
}

#[pyfunction]
#[pyo3(signature = (max_k, max_rank, max_c1, chi_threshold, min_chi=-10, s_rank_parity="any"))]
fn sharpness_search<'py>(
    py: Python<'py>,
    max_k: i64,
    max_rank: i64,
    max_c1: i64,
    chi_threshold: i64,
    min_chi: i64,
    s_rank_parity: &str,
) -> PyResult<Bound<'py, PyAny>> {
    let parity = match s_rank_parity {
        "any" => Parity::Any,
        "even" => Parity::Even,
        "odd" => Parity::Odd,
        other => return Err(PyValueError::new_err(format!("parity must be any, even or odd, got {other:?}"))),
    };
    let bx = SearchBox { min_chi, s_rank_parity: parity, ..SearchBox::new(max_k, max_rank, max_c1) };
    let found = py.detach(|| core::sharpness_search(&bx, chi_threshold)).map_err(py_err)?;
    serialize(py, &found)
}

#[pyfunction]
#[pyo3(signature = (suite="all", max_degree=4, max_rank=3, seed=core::DEFAULT_SEED, threads=None))]
fn run_sweep<'py>(
    py: Python<'py>,
    suite: &str,
    max_degree: i64,
    max_rank: i64,
    seed: u64,
    threads: Option<usize>,
) -> PyResult<Bound<'py, PyAny>> {
    let suite: Suite = suite.parse().map_err(py_err)?;
    let cfg = SweepConfig { max_degree, max_rank, seed, threads, inject_fault: false };
    let summary = py.detach(|| core::run_sweep(suite, &cfg)).map_err(py_err)?;
    let dict = serialize(py, &summary)?.cast_into::<PyDict>()?;
    dict.set_item("passed", summary.all_passed())?;
    Ok(dict.into_any())
}

#[pymodule]
fn clifford_quadric(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("DEFAULT_SEED", core::DEFAULT_SEED)?;
    m.add_class::<PyChernCharacter>()?;
    m.add_function(wrap_pyfunction!(alpha, m)?)?;
    m.add_function(wrap_pyfunction!(beta, m)?)?;
    m.add_function(wrap_pyfunction!(beta_relaxed, m)?)?;
    m.add_function(wrap_pyfunction!(general_bound, m)?)?;
    m.add_function(wrap_pyfunction!(unbalanced_bound, m)?)?;
    m.add_function(wrap_pyfunction!(stratified_bound, m)?)?;
    m.add_function(wrap_pyfunction!(non_gg_bound, m)?)?;
    m.add_function(wrap_pyfunction!(theta, m)?)?;
    m.add_function(wrap_pyfunction!(theta_exception, m)?)?;
    m.add_function(wrap_pyfunction!(bn_locus_decision, m)?)?;
    m.add_function(wrap_pyfunction!(steiner_character, m)?)?;
    m.add_function(wrap_pyfunction!(twisted_steiner_h0_formula, m)?)?;
    m.add_function(wrap_pyfunction!(maximal_structure_check, m)?)?;
    m.add_function(wrap_pyfunction!(line_bundle_cohomology, m)?)?;
    m.add_function(wrap_pyfunction!(ideal_sheaf_cohomology_of, m)?)?;
    m.add_function(wrap_pyfunction!(ideal_sheaf_h0, m)?)?;
    m.add_function(wrap_pyfunction!(ideal_sheaf_h0_random, m)?)?;
    m.add_function(wrap_pyfunction!(steiner_h0_random, m)?)?;
    m.add_function(wrap_pyfunction!(audit_direct_sum, m)?)?;
    m.add_function(wrap_pyfunction!(audit_steiner, m)?)?;
    m.add_function(wrap_pyfunction!(audit_ideal_sheaf, m)?)?;
    m.add_function(wrap_pyfunction!(sharpness_search, m)?)?;
    m.add_function(wrap_pyfunction!(run_sweep, m)?)?;
    Ok(())
}
