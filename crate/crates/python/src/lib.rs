//! Python bindings: `import crowdfund`.

use crowdfund::asymptotics;
use crowdfund::binomial;
use crowdfund::equilibrium::{self, Solver};
use crowdfund::oracle;
use crowdfund::sweep::{sweep as sweep_thresholds, Metric};
use crowdfund::table::{compute_table, Population, TableSpec, ThresholdRule};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn to_py(err: crowdfund::Error) -> PyErr {
    match err {
        crowdfund::Error::Parameter(m) | crowdfund::Error::Capacity(m) => PyValueError::new_err(m),
        crowdfund::Error::Internal(m) => PyRuntimeError::new_err(m),
    }
}

fn params(n: u64, b: u64, p: f64) -> PyResult<crowdfund::GameParams> {
    crowdfund::GameParams::new(n, b, p).map_err(to_py)
}

/// The game `(n, B, p)`.
#[pyclass(frozen, get_all, skip_from_py_object)]
#[derive(Clone)]
struct GameParams {
    n: u64,
    b: u64,
    p: f64,
}

#[pymethods]
impl GameParams {
    #[new]
    fn new(n: u64, b: u64, p: f64) -> PyResult<Self> {
        let g = params(n, b, p)?;
        Ok(Self { n: g.n, b: g.b, p: g.p })
    }

    /// Per-player commit probability in state H.
    fn lambda_high(&self, lam: f64) -> f64 {
        self.p + (1.0 - self.p) * lam
    }

    /// Per-player commit probability in state L.
    fn lambda_low(&self, lam: f64) -> f64 {
        (1.0 - self.p) + self.p * lam
    }

    fn __repr__(&self) -> String {
        format!("GameParams(n={}, b={}, p={})", self.n, self.b, self.p)
    }
}

/// A symmetric profile. `lambda_` is the low-type commit probability.
#[pyclass(frozen, get_all, skip_from_py_object)]
#[derive(Clone)]
struct EquilibriumProfile {
    lambda_: f64,
    psi: f64,
    lambda_high: f64,
    lambda_low: f64,
    residual: f64,
}

impl From<equilibrium::EquilibriumProfile> for EquilibriumProfile {
    fn from(p: equilibrium::EquilibriumProfile) -> Self {
        Self {
            lambda_: p.lambda,
            psi: p.psi,
            lambda_high: p.lambda_high,
            lambda_low: p.lambda_low,
            residual: p.residual,
        }
    }
}

#[pymethods]
impl EquilibriumProfile {
    fn __repr__(&self) -> String {
        format!(
            "EquilibriumProfile(lambda_={}, psi={}, lambda_high={}, lambda_low={}, residual={})",
            self.lambda_, self.psi, self.lambda_high, self.lambda_low, self.residual
        )
    }
}

#[pyclass(frozen, get_all, skip_from_py_object)]
#[derive(Clone)]
struct GameIndices {
    theta: f64,
    penetration: f64,
    mean_xy: f64,
    mean_supply: f64,
    x: f64,
    y: f64,
    supply_high: f64,
    supply_low: f64,
    profile: EquilibriumProfile,
}

impl From<crowdfund::GameIndices> for GameIndices {
    fn from(i: crowdfund::GameIndices) -> Self {
        Self {
            theta: i.theta,
            penetration: i.penetration,
            mean_xy: i.mean_xy,
            mean_supply: i.mean_supply,
            x: i.supply.x,
            y: i.supply.y,
            supply_high: i.supply.supply_high,
            supply_low: i.supply.supply_low,
            profile: i.profile.into(),
        }
    }
}

#[pymethods]
impl GameIndices {
    fn __repr__(&self) -> String {
        format!(
            "GameIndices(theta={}, penetration={}, x={}, y={}, lambda_={})",
            self.theta, self.penetration, self.x, self.y, self.profile.lambda_
        )
    }
}

/// Pr(Bin(trials, success_prob) >= threshold).
#[pyfunction]
fn tail_prob(trials: u64, success_prob: f64, threshold: i64) -> PyResult<f64> {
    binomial::tail_prob(trials, success_prob, threshold).map_err(to_py)
}

/// E[X 1{X >= threshold}] for X ~ Bin(trials, success_prob).
#[pyfunction]
fn truncated_mean(trials: u64, success_prob: f64, threshold: i64) -> PyResult<f64> {
    binomial::truncated_mean(trials, success_prob, threshold).map_err(to_py)
}

/// Expected payoff of a low-signal player from committing.
#[pyfunction]
fn low_type_payoff(n: u64, b: u64, p: f64, lam: f64) -> PyResult<f64> {
    equilibrium::low_type_payoff(&params(n, b, p)?, lam).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (n, b, p, tolerance = equilibrium::DEFAULT_TOLERANCE))]
fn solve(n: u64, b: u64, p: f64, tolerance: f64) -> PyResult<EquilibriumProfile> {
    Solver::with_tolerance(tolerance)
        .solve(&params(n, b, p)?)
        .map(Into::into)
        .map_err(to_py)
}

/// Solve the game and evaluate every index at the equilibrium.
#[pyfunction]
fn evaluate(n: u64, b: u64, p: f64) -> PyResult<GameIndices> {
    crowdfund::evaluate(&params(n, b, p)?).map(Into::into).map_err(to_py)
}

/// Indices for the (not necessarily equilibrium) profile `lam`.
#[pyfunction]
fn indices_at(n: u64, b: u64, p: f64, lam: f64) -> PyResult<GameIndices> {
    let g = params(n, b, p)?;
    let profile = equilibrium::EquilibriumProfile::from_lambda(&g, lam).map_err(to_py)?;
    Ok(crowdfund::indices::indices_for(&g, &profile).into())
}

/// Exact indices by enumerating every outcome (n <= 12).
#[pyfunction]
fn enumerate_exact(n: u64, b: u64, p: f64, lam: f64) -> PyResult<GameIndices> {
    oracle::enumerate_exact(&params(n, b, p)?, lam).map(Into::into).map_err(to_py)
}

#[pyfunction]
fn lambda_limit(q: f64, p: f64) -> PyResult<f64> {
    asymptotics::lambda_limit(q, p).map_err(to_py)
}

#[pyfunction]
fn theta_max(p: f64) -> PyResult<f64> {
    asymptotics::theta_max(p).map_err(to_py)
}

#[pyfunction]
fn penetration_max(p: f64) -> PyResult<f64> {
    asymptotics::penetration_max(p).map_err(to_py)
}

#[pyfunction]
fn limit_indices<'py>(py: Python<'py>, q: f64, p: f64) -> PyResult<Bound<'py, PyDict>> {
    let l = asymptotics::limit_indices(q, p).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("q", l.q)?;
    d.set_item("p", l.p)?;
    d.set_item("lambda_inf", l.lambda_inf)?;
    d.set_item("x_star", l.x_star)?;
    d.set_item("y_star", l.y_star)?;
    d.set_item("theta_inf", l.theta_inf)?;
    d.set_item("r_bound", l.r_bound)?;
    d.set_item("penetration_limit", l.penetration_limit)?;
    d.set_item("table_penetration", l.table_penetration)?;
    Ok(d)
}

fn simulated<'py>(py: Python<'py>, s: &oracle::SimulatedIndices) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("theta", s.theta)?;
    d.set_item("penetration", s.penetration)?;
    d.set_item("supply_high", s.supply_high)?;
    d.set_item("supply_low", s.supply_low)?;
    d.set_item("x", s.x)?;
    d.set_item("y", s.y)?;
    d.set_item("supply_given_all_low", s.supply_given_all_low)?;
    Ok(d)
}

/// Monte Carlo estimates at `lam` (the equilibrium value when omitted).
#[pyfunction]
#[pyo3(signature = (n, b, p, trials = 1_000_000, seed = 1, lam = None))]
fn simulate<'py>(
    py: Python<'py>,
    n: u64,
    b: u64,
    p: f64,
    trials: u64,
    seed: u64,
    lam: Option<f64>,
) -> PyResult<Bound<'py, PyDict>> {
    let g = params(n, b, p)?;
    let lam = match lam {
        Some(l) => l,
        None => equilibrium::solve(&g).map_err(to_py)?.lambda,
    };
    let report = py
        .detach(|| oracle::simulate(&g, lam, trials, seed))
        .map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("lambda", report.lambda)?;
    d.set_item("trials", report.trials)?;
    d.set_item("seed", report.seed)?;
    d.set_item("rng", report.rng)?;
    d.set_item("estimates", simulated(py, &report.estimates)?)?;
    d.set_item("std_errors", simulated(py, &report.std_errors)?)?;
    Ok(d)
}

/// Evaluate every threshold `B = 1..n`; `metric` is "theta" or "penetration".
#[pyfunction]
#[pyo3(signature = (n, p, metric = "theta"))]
fn sweep<'py>(py: Python<'py>, n: u64, p: f64, metric: &str) -> PyResult<Bound<'py, PyDict>> {
    let metric: Metric = metric.parse().map_err(to_py)?;
    let report = py.detach(|| sweep_thresholds(n, p, metric)).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("best_b", report.best_b)?;
    d.set_item("best_value", report.best_value)?;
    let values: Vec<f64> = report.curve.iter().map(|pt| pt.value).collect();
    let lambdas: Vec<f64> = report.curve.iter().map(|pt| pt.lambda).collect();
    d.set_item("values", values)?;
    d.set_item("lambdas", lambdas)?;
    Ok(d)
}

/// Grid of `(lambda, theta, mean_supply, penetration)` cells. `n_values`
/// entries are ints or the string "inf"; `b_rules` are strings like "1/3".
#[pyfunction]
#[pyo3(signature = (p_values = None, n_values = None, b_rules = None))]
fn table<'py>(
    py: Python<'py>,
    p_values: Option<Vec<f64>>,
    n_values: Option<Vec<Bound<'py, PyAny>>>,
    b_rules: Option<Vec<String>>,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let mut spec = TableSpec::default();
    if let Some(ps) = p_values {
        spec.p_values = ps;
    }
    if let Some(ns) = n_values {
        spec.n_values = ns
            .iter()
            .map(|v| -> PyResult<Population> { v.str()?.to_string().parse().map_err(to_py) })
            .collect::<PyResult<_>>()?;
    }
    if let Some(rules) = b_rules {
        spec.b_rules = rules
            .iter()
            .map(|r| r.parse::<ThresholdRule>().map_err(to_py))
            .collect::<PyResult<_>>()?;
    }
    let cells = py.detach(|| compute_table(&spec)).map_err(to_py)?;
    cells
        .iter()
        .map(|c| {
            let d = PyDict::new(py);
            d.set_item("p", c.p)?;
            d.set_item("n", c.n.to_string())?;
            d.set_item("rule", c.rule.to_string())?;
            d.set_item("b", c.b)?;
            d.set_item("lambda", c.lambda)?;
            d.set_item("theta", c.theta)?;
            d.set_item("mean_supply", c.mean_supply)?;
            d.set_item("penetration", c.penetration)?;
            Ok(d)
        })
        .collect()
}

#[pymodule]
#[pyo3(name = "crowdfund")]
fn crowdfund_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<GameParams>()?;
    m.add_class::<EquilibriumProfile>()?;
    m.add_class::<GameIndices>()?;
    m.add_function(wrap_pyfunction!(tail_prob, m)?)?;
    m.add_function(wrap_pyfunction!(truncated_mean, m)?)?;
    m.add_function(wrap_pyfunction!(low_type_payoff, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(indices_at, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_exact, m)?)?;
    m.add_function(wrap_pyfunction!(lambda_limit, m)?)?;
    m.add_function(wrap_pyfunction!(theta_max, m)?)?;
    m.add_function(wrap_pyfunction!(penetration_max, m)?)?;
    m.add_function(wrap_pyfunction!(limit_indices, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    m.add_function(wrap_pyfunction!(table, m)?)?;
    Ok(())
}
