//! Python bindings. Structured results (curves, reports, statistics) come
//! back as plain dicts with the same keys as the CLI's JSON output.

use std::collections::BTreeMap;

use gldpc_core::bounds::{self, finite_n_prob_bound, lemma1_convergence};
use gldpc_core::growth::{self, GrowthOptions};
use gldpc_core::sampler::{self, DEFAULT_K_LIMIT};
use gldpc_core::specfile::{parse_rational, SpecFile};
use gldpc_core::{BitMatrix, CnMixture, Ensemble1Spec, Ensemble2Spec, GldpcError, Rational};
use num_bigint::BigUint;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::Serialize;

fn err(e: GldpcError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Serializes through JSON so dict keys match the CLI output.
fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

/// Accepts `int`, `str` ("3/7", "0.25"), `fractions.Fraction` or `float`.
fn rational(obj: &Bound<'_, PyAny>) -> PyResult<Rational> {
    parse_rational(&obj.str()?.to_cow()?).map_err(err)
}

fn rationals(objs: &[Bound<'_, PyAny>]) -> PyResult<Vec<Rational>> {
    objs.iter().map(rational).collect()
}

#[pyclass(name = "Wef", module = "gldpc", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyWef(gldpc_core::Wef);

#[pymethods]
impl PyWef {
    #[new]
    fn new(coeffs: Vec<BigUint>, dimension: usize) -> PyResult<Self> {
        gldpc_core::Wef::from_coeffs(coeffs, dimension).map(Self).map_err(err)
    }

    #[staticmethod]
    fn spc(s: usize) -> PyResult<Self> {
        gldpc_core::Wef::spc(s).map(Self).map_err(err)
    }

    #[staticmethod]
    fn hamming(s: usize) -> PyResult<Self> {
        gldpc_core::Wef::hamming(s).map(Self).map_err(err)
    }

    /// MacWilliams transform.
    fn dual(&self) -> PyResult<Self> {
        self.0.dual().map(Self).map_err(err)
    }

    #[getter]
    fn coeffs(&self) -> Vec<BigUint> {
        self.0.coeffs().to_vec()
    }

    #[getter]
    fn length(&self) -> usize {
        self.0.length()
    }

    #[getter]
    fn dimension(&self) -> usize {
        self.0.dimension()
    }

    #[getter]
    fn min_distance(&self) -> Option<usize> {
        self.0.min_distance()
    }

    /// `ln A(z)` for `z > 0`.
    fn log_eval(&self, z: f64) -> f64 {
        self.0.log_eval(z)
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }

    fn __repr__(&self) -> String {
        let coeffs: Vec<String> = self.0.coeffs().iter().map(|c| c.to_string()).collect();
        format!("Wef([{}], dimension={})", coeffs.join(", "), self.0.dimension())
    }
}

#[pyclass(name = "CheckNodeType", module = "gldpc", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyCheckNodeType(gldpc_core::CheckNodeType);

#[pymethods]
impl PyCheckNodeType {
    #[staticmethod]
    fn spc(s: usize) -> PyResult<Self> {
        gldpc_core::CheckNodeType::spc(s).map(Self).map_err(err)
    }

    #[staticmethod]
    fn hamming(s: usize) -> PyResult<Self> {
        gldpc_core::CheckNodeType::hamming(s).map(Self).map_err(err)
    }

    /// Rows of the local parity-check matrix as "0"/"1" strings.
    #[staticmethod]
    fn from_parity(rows: Vec<String>) -> PyResult<Self> {
        let h = BitMatrix::from_bitstrings(&rows).map_err(err)?;
        gldpc_core::CheckNodeType::from_parity(h).map(Self).map_err(err)
    }

    /// WEF-only type; analysable but not sampleable.
    #[staticmethod]
    fn from_wef(wef: &PyWef) -> PyResult<Self> {
        gldpc_core::CheckNodeType::from_wef(wef.0.clone()).map(Self).map_err(err)
    }

    #[getter]
    fn label(&self) -> String {
        self.0.label().to_string()
    }

    #[getter]
    fn length(&self) -> usize {
        self.0.length()
    }

    #[getter]
    fn dimension(&self) -> usize {
        self.0.dimension()
    }

    #[getter]
    fn min_distance(&self) -> Option<usize> {
        self.0.min_distance()
    }

    #[getter]
    fn wef(&self) -> PyWef {
        PyWef(self.0.wef().clone())
    }

    fn __repr__(&self) -> String {
        format!("CheckNodeType({})", self.0.label())
    }
}

fn mixture(types: Vec<PyRef<'_, PyCheckNodeType>>, rho: &[Bound<'_, PyAny>]) -> PyResult<CnMixture> {
    let types = types.iter().map(|t| t.0.clone()).collect();
    CnMixture::new(types, rationals(rho)?).map_err(err)
}

/// Either ensemble family. Family-specific methods raise `ValueError` on the
/// other family.
#[pyclass(name = "Ensemble", module = "gldpc", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyEnsemble(gldpc_core::Ensemble);

impl PyEnsemble {
    fn vn_regular_spec(&self) -> PyResult<&Ensemble1Spec> {
        match &self.0 {
            gldpc_core::Ensemble::One(s) => Ok(s),
            _ => Err(PyValueError::new_err("only defined for the VN-regular ensemble")),
        }
    }

    fn unstructured_spec(&self) -> PyResult<&Ensemble2Spec> {
        match &self.0 {
            gldpc_core::Ensemble::Two(s) => Ok(s),
            _ => Err(PyValueError::new_err("only defined for the lambda ensemble")),
        }
    }
}

#[pymethods]
impl PyEnsemble {
    /// Every variable node has degree `q`; `rho` are edge-perspective fractions.
    #[staticmethod]
    fn vn_regular(types: Vec<PyRef<'_, PyCheckNodeType>>, rho: Vec<Bound<'_, PyAny>>, q: usize) -> PyResult<Self> {
        let spec = Ensemble1Spec::new(mixture(types, &rho)?, q).map_err(err)?;
        Ok(Self(gldpc_core::Ensemble::One(spec)))
    }

    /// `lam` maps variable-node degree to its edge-perspective fraction.
    #[staticmethod]
    fn unstructured(
        types: Vec<PyRef<'_, PyCheckNodeType>>,
        rho: Vec<Bound<'_, PyAny>>,
        lam: BTreeMap<usize, Bound<'_, PyAny>>,
    ) -> PyResult<Self> {
        let lambda = lam.iter().map(|(&d, l)| Ok((d, rational(l)?))).collect::<PyResult<_>>()?;
        let spec = Ensemble2Spec::new(mixture(types, &rho)?, lambda).map_err(err)?;
        Ok(Self(gldpc_core::Ensemble::Two(spec)))
    }

    /// Parses a JSON spec file's text. `which` is "e1", "e2" or None (the
    /// lambda ensemble when both are described).
    #[staticmethod]
    #[pyo3(signature = (text, which=None))]
    fn from_spec_json(text: &str, which: Option<&str>) -> PyResult<Self> {
        let spec = SpecFile::from_json(text).map_err(err)?;
        let e1 = spec.ensemble1().map_err(err)?;
        let e2 = spec.ensemble2().map_err(err)?;
        let picked = match which {
            Some("e1") => e1.map(gldpc_core::Ensemble::One),
            Some("e2") => e2.map(gldpc_core::Ensemble::Two),
            None => e2.map(gldpc_core::Ensemble::Two).or(e1.map(gldpc_core::Ensemble::One)),
            Some(other) => return Err(PyValueError::new_err(format!("which must be 'e1' or 'e2', got '{other}'"))),
        };
        picked
            .map(Self)
            .ok_or_else(|| PyValueError::new_err("the spec file does not describe the requested ensemble"))
    }

    #[getter]
    fn family(&self) -> &'static str {
        match self.0 {
            gldpc_core::Ensemble::One(_) => "e1",
            gldpc_core::Ensemble::Two(_) => "e2",
        }
    }

    #[getter]
    fn param_c(&self) -> f64 {
        self.0.mixture().param_c()
    }

    #[getter]
    fn param_c_exact(&self) -> String {
        self.0.mixture().param_c_exact().to_string()
    }

    #[getter]
    fn alpha_max(&self) -> f64 {
        self.0.mixture().alpha_max()
    }

    fn instance_plan<'py>(&self, py: Python<'py>, n: usize) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.0.instance_plan(n).map_err(err)?)
    }

    #[getter]
    fn design_rate(&self) -> PyResult<f64> {
        Ok(self.vn_regular_spec()?.design_rate())
    }

    /// Growth rate `G(alpha)` in nats.
    fn growth_rate(&self, alpha: f64) -> PyResult<f64> {
        growth::g_eval(self.vn_regular_spec()?, alpha).map_err(err)
    }

    /// Critical ratio and the sampled curve.
    fn alpha_star<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let spec = self.vn_regular_spec()?;
        let curve = py.detach(|| growth::alpha_star(spec, &GrowthOptions::default()));
        to_py(py, &curve)
    }

    fn finite_n_bound<'py>(&self, py: Python<'py>, n: usize, d0: usize) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &finite_n_prob_bound(self.vn_regular_spec()?, n, d0).map_err(err)?)
    }

    fn prob_dmin_one(&self) -> PyResult<f64> {
        Ok(bounds::prob_dmin_one(self.unstructured_spec()?))
    }

    /// The small-distance bound, or None when it is vacuous.
    fn prob_dmin_bound(&self) -> PyResult<Option<f64>> {
        Ok(bounds::prob_dmin_bound(self.unstructured_spec()?).value())
    }

    /// Exact weight-2j coefficients against their limit, one dict per N.
    fn lemma1<'py>(&self, py: Python<'py>, j: usize, ns: Vec<usize>) -> PyResult<Bound<'py, PyAny>> {
        let spec = self.unstructured_spec()?;
        let reports = py.detach(|| lemma1_convergence(spec, j, &ns)).map_err(err)?;
        to_py(py, &reports)
    }

    fn sample(&self, n: usize, seed: u64) -> PyResult<PySampledCode> {
        sampler::sample(&self.0, n, seed).map(PySampledCode).map_err(err)
    }

    #[allow(clippy::too_many_arguments)]
    #[pyo3(signature = (n, trials, alpha, seed, k_limit=DEFAULT_K_LIMIT, threads=None))]
    fn dmin_stats<'py>(
        &self,
        py: Python<'py>,
        n: usize,
        trials: u64,
        alpha: f64,
        seed: u64,
        k_limit: usize,
        threads: Option<usize>,
    ) -> PyResult<Bound<'py, PyAny>> {
        let stats = py
            .detach(|| sampler::estimate_dmin_stats(&self.0, n, trials, alpha, seed, k_limit, threads))
            .map_err(err)?;
        to_py(py, &stats)
    }
}

#[pyclass(name = "SampledCode", module = "gldpc", frozen, skip_from_py_object)]
struct PySampledCode(sampler::SampledCode);

#[pymethods]
impl PySampledCode {
    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    #[getter]
    fn seed(&self) -> u64 {
        self.0.seed()
    }

    #[getter]
    fn vn_degrees(&self) -> Vec<usize> {
        self.0.vn_degrees().to_vec()
    }

    /// `(type_index, sockets)` per check node.
    #[getter]
    fn check_nodes(&self) -> Vec<(usize, Vec<usize>)> {
        self.0.check_nodes().iter().map(|c| (c.type_index, c.sockets.clone())).collect()
    }

    fn degree_histogram(&self) -> BTreeMap<usize, usize> {
        self.0.degree_histogram()
    }

    fn dimension(&self) -> usize {
        self.0.dimension()
    }

    fn is_codeword(&self, word: Vec<bool>) -> PyResult<bool> {
        self.0.is_codeword(&word).map_err(err)
    }

    fn has_weight_one_codeword(&self) -> bool {
        self.0.has_weight_one_codeword()
    }

    /// None for the zero code.
    #[pyo3(signature = (k_limit=DEFAULT_K_LIMIT))]
    fn min_distance(&self, k_limit: usize) -> PyResult<Option<usize>> {
        self.0.min_distance(k_limit).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("SampledCode(n={}, check_nodes={}, seed={})", self.0.n(), self.0.check_nodes().len(), self.0.seed())
    }
}

/// 95% Wilson score interval.
#[pyfunction]
fn wilson_ci_95(successes: u64, n: u64) -> (f64, f64) {
    sampler::wilson_ci_95(successes, n)
}

/// Relative Gilbert-Varshamov distance at rate `rate`.
#[pyfunction]
fn gv_relative_distance(rate: f64) -> PyResult<f64> {
    growth::gv_relative_distance(rate).map_err(err)
}

#[pymodule]
fn gldpc(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyWef>()?;
    m.add_class::<PyCheckNodeType>()?;
    m.add_class::<PyEnsemble>()?;
    m.add_class::<PySampledCode>()?;
    m.add_function(wrap_pyfunction!(wilson_ci_95, m)?)?;
    m.add_function(wrap_pyfunction!(gv_relative_distance, m)?)?;
    m.add("DEFAULT_K_LIMIT", DEFAULT_K_LIMIT)?;
    Ok(())
}
