//! Python bindings: `Poly`, `Poset`, Schur polynomials and the check suite.
//!
//! Coefficients cross the boundary as `fractions.Fraction`; inputs accept
//! `int`, `Fraction` or strings such as `"3/2"`. Reports come back as plain
//! dicts with the same keys as the CLI's JSON lines.

use num_bigint::BigInt;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyTuple};

use volpoly_core::checks::{self, Budget, CheckReport};
use volpoly_core::harness::{self, RunConfig};
use volpoly_core::poset::{kahn_saks_variable_names, stanley_variable_names};
use volpoly_core::random::seeded;
use volpoly_core::rational::parse_rational;
use volpoly_core::symmetric;
use volpoly_core::{Chain, Error, Exponent, GapTable, Partition, Poset, Rational, SparsePoly};

fn err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_fraction<'py>(py: Python<'py>, q: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?
        .getattr("Fraction")?
        .call1((q.numer().clone(), q.denom().clone()))
}

fn to_rational(obj: &Bound<'_, PyAny>) -> PyResult<Rational> {
    if let Ok(i) = obj.extract::<BigInt>() {
        return Ok(Rational::from_integer(i));
    }
    if let Ok(s) = obj.extract::<String>() {
        return parse_rational(&s).map_err(err);
    }
    let num: BigInt = obj.getattr("numerator")?.extract()?;
    let den: BigInt = obj.getattr("denominator")?.extract()?;
    if den == BigInt::from(0) {
        return Err(PyValueError::new_err("zero denominator"));
    }
    Ok(Rational::new(num, den))
}

fn to_rationals(items: &[Bound<'_, PyAny>]) -> PyResult<Vec<Rational>> {
    items.iter().map(to_rational).collect()
}

fn report_dict<'py>(py: Python<'py>, r: &CheckReport) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.getattr("loads")?.call1((r.to_json_line(),))
}

fn report_list<'py>(py: Python<'py>, reports: &[CheckReport]) -> PyResult<Vec<Bound<'py, PyAny>>> {
    reports.iter().map(|r| report_dict(py, r)).collect()
}

fn budget(beta: u32, gamma: u32) -> Budget {
    Budget { beta, gamma }
}

/// A homogeneous polynomial with exact rational coefficients.
#[pyclass(name = "Poly", module = "volpoly", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyPoly {
    inner: SparsePoly,
}

impl From<SparsePoly> for PyPoly {
    fn from(inner: SparsePoly) -> Self {
        PyPoly { inner }
    }
}

#[pymethods]
impl PyPoly {
    /// Parses text such as `"3/2 * x0^2 x1 - x1^3"`.
    #[new]
    #[pyo3(signature = (text, nvars = None))]
    fn new(text: &str, nvars: Option<usize>) -> PyResult<Self> {
        SparsePoly::parse(text, nvars).map(Into::into).map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        SparsePoly::from_json_str(text).map(Into::into).map_err(err)
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs.
    #[staticmethod]
    fn from_terms(nvars: usize, degree: u32, terms: Vec<(Vec<u32>, Bound<'_, PyAny>)>) -> PyResult<Self> {
        let terms = terms
            .iter()
            .map(|(e, c)| Ok((Exponent::new(e.clone()), to_rational(c)?)))
            .collect::<PyResult<Vec<_>>>()?;
        SparsePoly::from_terms(nvars, degree, terms).map(Into::into).map_err(err)
    }

    #[staticmethod]
    fn zero(nvars: usize, degree: u32) -> Self {
        SparsePoly::zero(nvars, degree).into()
    }

    #[getter]
    fn nvars(&self) -> usize {
        self.inner.nvars()
    }

    #[getter]
    fn degree(&self) -> u32 {
        self.inner.degree()
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    fn terms<'py>(&self, py: Python<'py>) -> PyResult<Vec<(Vec<u32>, Bound<'py, PyAny>)>> {
        self.inner
            .terms()
            .map(|(e, c)| Ok((e.entries().to_vec(), to_fraction(py, c)?)))
            .collect()
    }

    fn coeff<'py>(&self, py: Python<'py>, exponent: Vec<u32>) -> PyResult<Bound<'py, PyAny>> {
        to_fraction(py, &self.inner.coeff(&Exponent::new(exponent)))
    }

    fn to_json(&self) -> String {
        self.inner.to_json_string()
    }

    /// Text with custom variable names.
    fn format(&self, names: Vec<String>) -> String {
        self.inner.to_string_with(&names)
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Poly({:?}, nvars={})", self.inner.to_string(), self.inner.nvars())
    }

    fn __add__(&self, other: &PyPoly) -> PyResult<Self> {
        self.inner.add(&other.inner).map(Into::into).map_err(err)
    }

    fn __sub__(&self, other: &PyPoly) -> PyResult<Self> {
        self.inner.sub(&other.inner).map(Into::into).map_err(err)
    }

    fn __mul__(&self, other: &PyPoly) -> PyResult<Self> {
        self.inner.mul(&other.inner).map(Into::into).map_err(err)
    }

    fn __neg__(&self) -> Self {
        self.inner.neg().into()
    }

    fn __pow__(&self, k: u32, modulo: Option<Bound<'_, PyAny>>) -> PyResult<Self> {
        if modulo.is_some() {
            return Err(PyValueError::new_err("modular powers are not supported"));
        }
        Ok(self.inner.pow(k).into())
    }

    fn scale(&self, k: Bound<'_, PyAny>) -> PyResult<Self> {
        Ok(self.inner.scale(&to_rational(&k)?).into())
    }

    fn normalize(&self) -> Self {
        self.inner.normalize().into()
    }

    fn denormalize(&self) -> Self {
        self.inner.denormalize().into()
    }

    /// `x_i ↦ Σ_j A[i][j] y_j` with a non-negative matrix.
    fn substitute_linear(&self, matrix: Vec<Vec<Bound<'_, PyAny>>>) -> PyResult<Self> {
        let m = matrix
            .iter()
            .map(|row| to_rationals(row))
            .collect::<PyResult<Vec<_>>>()?;
        self.inner.substitute_linear(&m).map(Into::into).map_err(err)
    }

    fn diagonalize(&self, keep: usize) -> PyResult<Self> {
        self.inner.diagonalize(keep).map(Into::into).map_err(err)
    }

    fn permute(&self, perm: Vec<usize>) -> PyResult<Self> {
        self.inner.permute(&perm).map(Into::into).map_err(err)
    }

    fn partial_derivative(&self, i: usize) -> PyResult<Self> {
        self.inner.partial_derivative(i).map(Into::into).map_err(err)
    }

    /// `∂_s` applied to this polynomial.
    fn apply_diffop(&self, s: &PyPoly) -> PyResult<Self> {
        self.inner.apply_diffop(&s.inner).map(Into::into).map_err(err)
    }

    fn derived(&self, j: u32) -> PyResult<Self> {
        self.inner.derived(j).map(Into::into).map_err(err)
    }

    fn truncate_lower(&self, gamma: Vec<u32>) -> PyResult<Self> {
        self.inner.truncate_lower(&Exponent::new(gamma)).map(Into::into).map_err(err)
    }

    fn truncate_upper(&self, alpha: Vec<u32>) -> PyResult<Self> {
        self.inner.truncate_upper(&Exponent::new(alpha)).map(Into::into).map_err(err)
    }

    fn weighted_truncate(&self, alpha: Vec<u32>) -> PyResult<Self> {
        self.inner.weighted_truncate(&Exponent::new(alpha)).map(Into::into).map_err(err)
    }

    fn antiderivative(&self, gamma: Vec<u32>) -> PyResult<Self> {
        self.inner.antiderivative(&Exponent::new(gamma)).map(Into::into).map_err(err)
    }

    fn evaluate<'py>(&self, py: Python<'py>, point: Vec<Bound<'py, PyAny>>) -> PyResult<Bound<'py, PyAny>> {
        let value = self.inner.evaluate(&to_rationals(&point)?).map_err(err)?;
        to_fraction(py, &value)
    }
}

/// A finite strict partial order on `0..n`.
#[pyclass(name = "Poset", module = "volpoly", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyPoset {
    inner: Poset,
}

impl PyPoset {
    fn chain(&self, elements: Vec<usize>) -> PyResult<Chain> {
        Chain::new(&self.inner, elements).map_err(err)
    }
}

fn gap_dict<'py>(py: Python<'py>, table: &GapTable) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    for (gaps, count) in table.support() {
        d.set_item(PyTuple::new(py, gaps)?, count)?;
    }
    Ok(d)
}

#[pymethods]
impl PyPoset {
    /// `relations` lists pairs `(i, j)` with `i < j`; the transitive closure is taken.
    #[new]
    #[pyo3(signature = (n, relations = Vec::new()))]
    fn new(n: usize, relations: Vec<(usize, usize)>) -> PyResult<Self> {
        Poset::from_relations(n, &relations)
            .map(|inner| PyPoset { inner })
            .map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Poset::from_json_str(text).map(|inner| PyPoset { inner }).map_err(err)
    }

    #[staticmethod]
    #[pyo3(signature = (n, edge_prob, seed = 0))]
    fn random(n: usize, edge_prob: f64, seed: u64) -> PyResult<Self> {
        Poset::random(n, edge_prob, &mut seeded(seed, 0))
            .map(|inner| PyPoset { inner })
            .map_err(err)
    }

    fn to_json(&self) -> String {
        self.inner.to_json_string()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("Poset.from_json({:?})", self.inner.to_json_string())
    }

    fn less(&self, i: usize, j: usize) -> bool {
        i < self.inner.len() && j < self.inner.len() && self.inner.less(i, j)
    }

    fn covers(&self) -> Vec<(usize, usize)> {
        self.inner.covers()
    }

    fn count_linear_extensions(&self) -> PyResult<u64> {
        self.inner.count_linear_extensions().map_err(err)
    }

    /// Linear extensions as position maps `L[x] ∈ 1..=n`.
    fn linear_extensions(&self) -> PyResult<Vec<Vec<usize>>> {
        Ok(self.inner.linear_extensions().map_err(err)?.collect())
    }

    fn chains(&self, k: usize) -> Vec<Vec<usize>> {
        self.inner
            .chains_of_length(k)
            .into_iter()
            .map(|c| c.elements().to_vec())
            .collect()
    }

    fn ordinal_sum_with_chain(&self, ell: usize) -> Self {
        PyPoset {
            inner: self.inner.ordinal_sum_with_chain(ell),
        }
    }

    /// `F(ι)` keyed by gap tuples.
    fn gap_statistics<'py>(&self, py: Python<'py>, chain: Vec<usize>) -> PyResult<Bound<'py, PyDict>> {
        let table = volpoly_core::poset::gap_statistics(&self.inner, &self.chain(chain)?).map_err(err)?;
        gap_dict(py, &table)
    }

    /// `N(i_1, …, i_k)` keyed by position tuples.
    fn position_statistics<'py>(&self, py: Python<'py>, chain: Vec<usize>) -> PyResult<Bound<'py, PyDict>> {
        let table = volpoly_core::poset::position_statistics(&self.inner, &self.chain(chain)?).map_err(err)?;
        let d = PyDict::new(py);
        for (positions, count) in table.support() {
            d.set_item(PyTuple::new(py, positions)?, count)?;
        }
        Ok(d)
    }

    /// Variables `(u, v1, …, v_{k−1})`.
    fn kahn_saks_poly(&self, chain: Vec<usize>) -> PyResult<PyPoly> {
        let c = self.chain(chain)?;
        volpoly_core::poset::kahn_saks_poly(&self.inner, &c)
            .map(Into::into)
            .map_err(err)
    }

    /// Variables `(v1, …, v_{k−1}, u1, u2)`.
    fn stanley_poly(&self, chain: Vec<usize>) -> PyResult<PyPoly> {
        let c = self.chain(chain)?;
        volpoly_core::poset::stanley_poly(&self.inner, &c)
            .map(Into::into)
            .map_err(err)
    }

    /// Runs the poset checks and returns one dict per report.
    #[pyo3(signature = (chain, checks = "all", seed = 0, budget_beta = 3, budget_gamma = 3))]
    fn check<'py>(
        &self,
        py: Python<'py>,
        chain: Vec<usize>,
        checks: &str,
        seed: u64,
        budget_beta: u32,
        budget_gamma: u32,
    ) -> PyResult<Vec<Bound<'py, PyAny>>> {
        let c = self.chain(chain)?;
        let selection = harness::parse_selection(checks).map_err(err)?;
        let cfg = RunConfig {
            seed,
            budget: budget(budget_beta, budget_gamma),
            ..RunConfig::default()
        };
        let reports = harness::check_poset(&self.inner, &c, &selection, &cfg).map_err(err)?;
        report_list(py, &reports)
    }
}

#[pyfunction]
fn kahn_saks_names(k: usize) -> Vec<String> {
    kahn_saks_variable_names(k)
}

#[pyfunction]
fn stanley_names(k: usize) -> Vec<String> {
    stanley_variable_names(k)
}

#[pyfunction]
fn complete_homogeneous(d: u32, m: usize) -> PyResult<PyPoly> {
    if m == 0 {
        return Err(PyValueError::new_err("m must be at least 1"));
    }
    Ok(symmetric::complete_homogeneous(d, m).into())
}

#[pyfunction]
fn schur(parts: Vec<u32>, m: usize) -> PyResult<PyPoly> {
    let lambda = Partition::new(parts).map_err(err)?;
    symmetric::schur(&lambda, m).map(Into::into).map_err(err)
}

#[pyfunction]
fn check_kt<'py>(py: Python<'py>, f: &PyPoly) -> PyResult<Bound<'py, PyAny>> {
    report_dict(py, &checks::check_kt(&f.inner))
}

/// rKT at one pivot, or at every pivot when `pivot` is `None`.
#[pyfunction]
#[pyo3(signature = (f, pivot = None, budget_beta = 3, budget_gamma = 3))]
fn check_rkt<'py>(
    py: Python<'py>,
    f: &PyPoly,
    pivot: Option<usize>,
    budget_beta: u32,
    budget_gamma: u32,
) -> PyResult<Bound<'py, PyAny>> {
    let b = budget(budget_beta, budget_gamma);
    let report = match pivot {
        Some(p) => checks::check_rkt(&f.inner, p, b).map_err(err)?,
        None => checks::check_rkt_all_pivots(&f.inner, b),
    };
    report_dict(py, &report)
}

#[pyfunction]
fn check_rayleigh<'py>(py: Python<'py>, g: &PyPoly, samples: Vec<Vec<Bound<'py, PyAny>>>) -> PyResult<Bound<'py, PyAny>> {
    let points = samples
        .iter()
        .map(|p| to_rationals(p))
        .collect::<PyResult<Vec<_>>>()?;
    report_dict(py, &checks::check_rayleigh(&g.inner, &points).map_err(err)?)
}

#[pyfunction]
fn verify_technical_derived(p: &PyPoly, s: &PyPoly, a: u32) -> PyResult<bool> {
    checks::verify_technical_derived(&p.inner, &s.inner, a).map_err(err)
}

#[pyfunction]
fn verify_weighted_truncation(p: &PyPoly, a: u32) -> PyResult<bool> {
    checks::verify_weighted_truncation(&p.inner, a).map_err(err)
}

#[pyfunction]
fn verify_qell_identity(p: &PyPoly, ell: u32, m: usize) -> PyResult<bool> {
    checks::verify_qell_identity(&p.inner, ell, m).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (seed = 0, trials = 100))]
fn verify_identities(py: Python<'_>, seed: u64, trials: usize) -> PyResult<Vec<Bound<'_, PyAny>>> {
    let reports = harness::verify_identities(seed, trials).map_err(err)?;
    report_list(py, &reports)
}

#[pyfunction]
#[pyo3(signature = (seed = 0, trials = 100, max_n = 8, max_chain = 4, n = None, edge_prob = None))]
fn fuzz(
    py: Python<'_>,
    seed: u64,
    trials: usize,
    max_n: usize,
    max_chain: usize,
    n: Option<usize>,
    edge_prob: Option<f64>,
) -> PyResult<Vec<Bound<'_, PyAny>>> {
    let cfg = RunConfig {
        seed,
        trials,
        poset_size_max: max_n,
        chain_len_max: max_chain,
        poset_size: n,
        edge_prob,
        ..RunConfig::default()
    };
    let reports = harness::fuzz(&cfg).map_err(err)?;
    report_list(py, &reports)
}

#[pymodule]
fn volpoly(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPoly>()?;
    m.add_class::<PyPoset>()?;
    m.add_function(wrap_pyfunction!(kahn_saks_names, m)?)?;
    m.add_function(wrap_pyfunction!(stanley_names, m)?)?;
    m.add_function(wrap_pyfunction!(complete_homogeneous, m)?)?;
    m.add_function(wrap_pyfunction!(schur, m)?)?;
    m.add_function(wrap_pyfunction!(check_kt, m)?)?;
    m.add_function(wrap_pyfunction!(check_rkt, m)?)?;
    m.add_function(wrap_pyfunction!(check_rayleigh, m)?)?;
    m.add_function(wrap_pyfunction!(verify_technical_derived, m)?)?;
    m.add_function(wrap_pyfunction!(verify_weighted_truncation, m)?)?;
    m.add_function(wrap_pyfunction!(verify_qell_identity, m)?)?;
    m.add_function(wrap_pyfunction!(verify_identities, m)?)?;
    m.add_function(wrap_pyfunction!(fuzz, m)?)?;
    Ok(())
}
