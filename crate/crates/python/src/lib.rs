//! Python bindings: `import jumpvix`.

use pyo3::create_exception;
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use jumpvix::harness::{self, ModelFile, ReproOptions, TableId};
use jumpvix::mc::{convergence_study, price_option_mc, vix_forward_mc};
use jumpvix::pricers::{
    asym_coefficient, euro_otm_asym, euro_otm_closed_form, vix_atm_strike, vix_otm_asym,
    vix_otm_closed_form,
};
use jumpvix::{
    special_math, AsymCoefficient, Error, MCConfig, ModelSpec, OptionKind, OptionSpec, Order,
    PriceEstimate, Underlying,
};

create_exception!(
    jumpvix,
    NumericError,
    PyArithmeticError,
    "A numerical routine missed its accuracy target."
);

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Numeric { .. } | Error::Singular(_) => NumericError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn parse_underlying(s: &str) -> PyResult<Underlying> {
    match s.to_ascii_lowercase().as_str() {
        "vix" => Ok(Underlying::Vix),
        "equity" => Ok(Underlying::Equity),
        _ => Err(PyValueError::new_err(format!(
            "underlying must be 'vix' or 'equity', got '{s}'"
        ))),
    }
}

fn parse_kind(s: &str) -> PyResult<OptionKind> {
    match s.to_ascii_lowercase().as_str() {
        "call" => Ok(OptionKind::Call),
        "put" => Ok(OptionKind::Put),
        _ => Err(PyValueError::new_err(format!(
            "kind must be 'call' or 'put', got '{s}'"
        ))),
    }
}

fn table(id: &str) -> PyResult<TableId> {
    id.parse().map_err(py_err)
}

fn coefficient_dict<'py>(py: Python<'py>, c: &AsymCoefficient) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("total", c.total)?;
    d.set_item(
        "order",
        if c.order == Order::LinearT {
            "T"
        } else {
            "sqrt_T"
        },
    )?;
    d.set_item("moneyness", c.moneyness.as_str())?;
    d.set_item("itm_extension", c.itm_extension)?;
    if let Some(p) = c.parts {
        d.set_item("f_s", p.f_s)?;
        d.set_item("f_c", p.f_c)?;
        d.set_item("f_v", p.f_v)?;
    }
    Ok(d)
}

fn estimate_dict<'py>(py: Python<'py>, e: &PriceEstimate) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("value", e.value)?;
    d.set_item("std_error", e.has_std_error().then_some(e.std_error))?;
    d.set_item("paths", e.paths_used)?;
    d.set_item("failed_paths", e.failed_paths)?;
    d.set_item("seed", e.seed)?;
    Ok(d)
}

/// (maturity, mc_over_t, mc_over_t_se, asym, ratio)
type ConvergenceTuple = (f64, f64, f64, f64, f64);

/// A jump model with constant local volatility.
#[pyclass(name = "Model", module = "jumpvix", frozen)]
struct PyModel {
    inner: ModelSpec,
}

#[pymethods]
impl PyModel {
    #[staticmethod]
    fn from_toml(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: ModelFile::from_toml(text).map_err(py_err)?.model,
        })
    }

    #[staticmethod]
    fn from_file(path: std::path::PathBuf) -> PyResult<Self> {
        Ok(Self {
            inner: ModelFile::from_path(&path).map_err(py_err)?.model,
        })
    }

    /// Built-in table parameters; `convention=True` gives the model behind the printed coefficients.
    #[staticmethod]
    #[pyo3(signature = (id, convention = false))]
    fn from_table(id: &str, convention: bool) -> PyResult<Self> {
        let f = harness::fixture(table(id)?);
        Ok(Self {
            inner: if convention { f.asym_model } else { f.mc_model },
        })
    }

    fn to_toml(&self) -> PyResult<String> {
        ModelFile {
            model: self.inner.clone(),
            mc: None,
        }
        .to_toml()
        .map_err(py_err)
    }

    fn compensators<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let c = jumpvix::compute_compensators(&self.inner).map_err(py_err)?;
        let d = PyDict::new(py);
        for (k, v) in [
            ("comp_s", c.comp_s),
            ("comp_v", c.comp_v),
            ("comp_cs", c.comp_cs),
            ("comp_cv", c.comp_cv),
            ("mean_s", c.mean_s),
            ("mean_cs", c.mean_cs),
            ("kappa", c.kappa),
            ("kappa_model", c.kappa_model),
        ] {
            d.set_item(k, v)?;
        }
        Ok(d)
    }

    #[getter]
    fn lambda_c(&self) -> f64 {
        self.inner.intensities.lambda_c
    }

    fn vix_atm_strike(&self) -> PyResult<f64> {
        vix_atm_strike(&self.inner).map_err(py_err)
    }

    /// Leading-order coefficient, dispatched on moneyness.
    fn asym<'py>(
        &self,
        py: Python<'py>,
        underlying: &str,
        kind: &str,
        strike: f64,
    ) -> PyResult<Bound<'py, PyDict>> {
        let opt = OptionSpec::new(parse_underlying(underlying)?, parse_kind(kind)?, strike, 0.01);
        coefficient_dict(py, &asym_coefficient(&self.inner, &opt).map_err(py_err)?)
    }

    /// OTM coefficient from the model closed form.
    fn closed_form<'py>(
        &self,
        py: Python<'py>,
        underlying: &str,
        kind: &str,
        strike: f64,
    ) -> PyResult<Bound<'py, PyDict>> {
        let opt = OptionSpec::new(parse_underlying(underlying)?, parse_kind(kind)?, strike, 0.01);
        let c = match opt.underlying {
            Underlying::Vix => vix_otm_closed_form(&self.inner, &opt),
            Underlying::Equity => euro_otm_closed_form(&self.inner, &opt),
        };
        coefficient_dict(py, &c.map_err(py_err)?)
    }

    /// OTM coefficient by direct integration.
    fn generic<'py>(
        &self,
        py: Python<'py>,
        underlying: &str,
        kind: &str,
        strike: f64,
    ) -> PyResult<Bound<'py, PyDict>> {
        let opt = OptionSpec::new(parse_underlying(underlying)?, parse_kind(kind)?, strike, 0.01);
        let c = match opt.underlying {
            Underlying::Vix => vix_otm_asym(&self.inner, &opt),
            Underlying::Equity => euro_otm_asym(&self.inner, &opt),
        };
        coefficient_dict(py, &c.map_err(py_err)?)
    }

    #[pyo3(signature = (underlying, kind, strike, maturity, paths = 100_000, steps = 100, seed = 20_240_601, antithetic = false))]
    #[allow(clippy::too_many_arguments)]
    fn mc_price<'py>(
        &self,
        py: Python<'py>,
        underlying: &str,
        kind: &str,
        strike: f64,
        maturity: f64,
        paths: usize,
        steps: usize,
        seed: u64,
        antithetic: bool,
    ) -> PyResult<Bound<'py, PyDict>> {
        let opt = OptionSpec::new(parse_underlying(underlying)?, parse_kind(kind)?, strike, maturity);
        let cfg = MCConfig {
            paths,
            steps,
            seed,
            antithetic,
        };
        let est = py
            .detach(|| price_option_mc(&self.inner, &opt, &cfg))
            .map_err(py_err)?;
        estimate_dict(py, &est)
    }

    #[pyo3(signature = (maturity, paths = 100_000, steps = 100, seed = 20_240_601))]
    fn vix_forward<'py>(
        &self,
        py: Python<'py>,
        maturity: f64,
        paths: usize,
        steps: usize,
        seed: u64,
    ) -> PyResult<Bound<'py, PyDict>> {
        let cfg = MCConfig {
            paths,
            steps,
            seed,
            antithetic: false,
        };
        let est = py
            .detach(|| vix_forward_mc(&self.inner, maturity, &cfg))
            .map_err(py_err)?;
        estimate_dict(py, &est)
    }

    /// Rows of (maturity, mc_over_t, mc_over_t_se, asym, ratio).
    #[pyo3(signature = (underlying, kind, strike, maturities, paths = 100_000, steps = 100, seed = 20_240_601))]
    #[allow(clippy::too_many_arguments)]
    fn convergence(
        &self,
        py: Python<'_>,
        underlying: &str,
        kind: &str,
        strike: f64,
        maturities: Vec<f64>,
        paths: usize,
        steps: usize,
        seed: u64,
    ) -> PyResult<Vec<ConvergenceTuple>> {
        let opt = OptionSpec::new(parse_underlying(underlying)?, parse_kind(kind)?, strike, 0.01);
        let cfg = MCConfig {
            paths,
            steps,
            seed,
            antithetic: false,
        };
        let rows = py
            .detach(|| convergence_study(&self.inner, &opt, &maturities, &cfg))
            .map_err(py_err)?;
        Ok(rows
            .iter()
            .map(|r| (r.maturity, r.mc_over_t, r.mc_over_t_se, r.asym, r.ratio))
            .collect())
    }

    fn __repr__(&self) -> String {
        format!("Model({:?})", self.inner.common)
    }
}

/// Compares a built-in table; returns (passed, report text).
#[pyfunction]
#[pyo3(signature = (id, asym_only = true))]
fn reproduce(py: Python<'_>, id: &str, asym_only: bool) -> PyResult<(bool, String)> {
    let id = table(id)?;
    let r = py
        .detach(|| {
            harness::reproduce(
                id,
                &ReproOptions {
                    asym_only,
                    mc: None,
                },
            )
        })
        .map_err(py_err)?;
    Ok((r.passed(), r.render()))
}

#[pyfunction]
fn table_ids() -> Vec<&'static str> {
    TableId::ALL.iter().map(|t| t.as_str()).collect()
}

#[pyfunction]
fn norm_cdf(x: f64) -> f64 {
    special_math::norm_cdf(x)
}

#[pyfunction]
fn hyp2f1_vix(z: f64, eta: f64) -> PyResult<f64> {
    special_math::hyp2f1_vix(z, eta).map_err(py_err)
}

#[pyfunction]
fn i1(a: f64, b: f64, eta: f64) -> PyResult<f64> {
    special_math::i1(a, b, eta).map_err(py_err)
}

#[pyfunction]
fn bs_call_block(strike: f64, forward: f64, v: f64) -> f64 {
    special_math::bs_call_block(strike, forward, v)
}

#[pyfunction]
fn bs_put_block(strike: f64, forward: f64, v: f64) -> f64 {
    special_math::bs_put_block(strike, forward, v)
}

#[pymodule]
#[pyo3(name = "jumpvix")]
fn jumpvix_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyModel>()?;
    m.add("NumericError", m.py().get_type::<NumericError>())?;
    m.add_function(wrap_pyfunction!(reproduce, m)?)?;
    m.add_function(wrap_pyfunction!(table_ids, m)?)?;
    m.add_function(wrap_pyfunction!(norm_cdf, m)?)?;
    m.add_function(wrap_pyfunction!(hyp2f1_vix, m)?)?;
    m.add_function(wrap_pyfunction!(i1, m)?)?;
    m.add_function(wrap_pyfunction!(bs_call_block, m)?)?;
    m.add_function(wrap_pyfunction!(bs_put_block, m)?)?;
    Ok(())
}
