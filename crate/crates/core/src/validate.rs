//! Batch cross-checks of the analytic indices against both oracles.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::equilibrium::{solve, EquilibriumProfile, GameParams};
use crate::error::{Error, Result};
use crate::indices::{indices_for, GameIndices};
use crate::oracle::{enumerate_exact, simulate, SimulationReport};

/// Absolute agreement required between enumeration and the analytic path.
pub const ENUMERATION_TOLERANCE: f64 = 1e-12;
/// Monte Carlo estimates must lie within this many standard errors.
pub const MONTE_CARLO_SIGMAS: f64 = 4.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationGrid {
    /// Populations for the enumeration checks; every `B` in `1..=n` is used.
    pub n_values: Vec<u64>,
    pub p_values: Vec<f64>,
    /// Fixed low-type commit probabilities; the solved one is always added.
    pub lambdas: Vec<f64>,
    /// Games checked by simulation at their equilibrium.
    pub monte_carlo: Vec<GameParams>,
}

impl Default for ValidationGrid {
    fn default() -> Self {
        Self {
            n_values: (1..=10).collect(),
            p_values: vec![0.55, 0.65, 0.75, 0.85, 0.95],
            lambdas: vec![0.0, 0.25, 0.5],
            monte_carlo: vec![
                GameParams { n: 3, b: 3, p: 0.75 },
                GameParams { n: 10, b: 5, p: 0.75 },
                GameParams { n: 100, b: 50, p: 0.55 },
                GameParams { n: 100, b: 90, p: 0.95 },
            ],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    /// `enumeration` or `monte_carlo`.
    pub check: String,
    pub n: u64,
    pub b: Option<u64>,
    pub p: f64,
    pub lambda: Option<f64>,
    /// Absolute difference for enumeration, standard errors for Monte Carlo.
    pub tolerance: f64,
    pub deviation: f64,
    pub worst_field: Option<String>,
    pub status: CheckStatus,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub trials: u64,
    pub seed: u64,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

/// Named values shared by the analytic and oracle results.
pub fn comparable_fields(idx: &GameIndices) -> [(&'static str, f64); 6] {
    [
        ("theta", idx.theta),
        ("penetration", idx.penetration),
        ("x", idx.supply.x),
        ("y", idx.supply.y),
        ("supply_H", idx.supply.supply_high),
        ("supply_L", idx.supply.supply_low),
    ]
}

/// Largest absolute field difference and the field where it occurs.
pub fn max_abs_difference(a: &GameIndices, b: &GameIndices) -> (f64, &'static str) {
    comparable_fields(a)
        .iter()
        .zip(comparable_fields(b).iter())
        .map(|(&(name, u), &(_, v))| ((u - v).abs(), name))
        .fold((0.0, "theta"), |acc, cur| if cur.0 > acc.0 { cur } else { acc })
}

/// One Monte Carlo comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FieldDeviation {
    pub field: &'static str,
    pub analytic: f64,
    pub estimate: f64,
    pub std_error: f64,
    /// `|estimate - analytic| / max(std_error, resolution)`.
    pub sigmas: f64,
}

/// Compare a simulation against the analytic indices field by field.
///
/// A plug-in standard error is zero when an event never (or always)
/// happened; the comparison then uses the estimator's resolution,
/// one over the relevant sample size, as the scale.
pub fn monte_carlo_deviations(analytic: &GameIndices, report: &SimulationReport) -> Vec<FieldDeviation> {
    let e = &report.estimates;
    let s = &report.std_errors;
    let c = &report.samples;
    let trials = report.trials as f64;
    let rows = [
        ("theta", analytic.theta, e.theta, s.theta, trials),
        ("penetration", analytic.penetration, e.penetration, s.penetration, trials),
        ("x", analytic.supply.x, e.x, s.x, c.first_commits_high as f64),
        ("y", analytic.supply.y, e.y, s.y, c.first_commits_low as f64),
        ("supply_H", analytic.supply.supply_high, e.supply_high, s.supply_high, c.state_high as f64),
        ("supply_L", analytic.supply.supply_low, e.supply_low, s.supply_low, c.state_low as f64),
    ];
    rows.iter()
        .map(|&(field, analytic, estimate, std_error, samples)| {
            let scale = std_error.max(1.0 / samples.max(1.0));
            FieldDeviation {
                field,
                analytic,
                estimate,
                std_error,
                sigmas: (estimate - analytic).abs() / scale,
            }
        })
        .collect()
}

fn enumeration_checks(grid: &ValidationGrid) -> Result<Vec<CheckResult>> {
    let mut jobs = Vec::new();
    let mut skipped = Vec::new();
    for &n in &grid.n_values {
        for &p in &grid.p_values {
            GameParams::new(n, 1, p)?;
            if n > crate::oracle::MAX_ENUMERATION_PLAYERS {
                skipped.push(CheckResult {
                    check: "enumeration".into(),
                    n,
                    b: None,
                    p,
                    lambda: None,
                    tolerance: ENUMERATION_TOLERANCE,
                    deviation: 0.0,
                    worst_field: None,
                    status: CheckStatus::Skipped,
                    note: Some("skipped: n exceeds enumeration capacity".into()),
                });
                continue;
            }
            for b in 1..=n {
                jobs.push(GameParams::new(n, b, p)?);
            }
        }
    }
    let mut checks: Vec<CheckResult> = jobs
        .par_iter()
        .map(|params| -> Result<Vec<CheckResult>> {
            let solved = solve(params)?.lambda;
            let mut lambdas = grid.lambdas.clone();
            lambdas.push(solved);
            lambdas
                .iter()
                .map(|&lambda| {
                    let profile = EquilibriumProfile::from_lambda(params, lambda)?;
                    let analytic = indices_for(params, &profile);
                    let exact = enumerate_exact(params, lambda)?;
                    let (deviation, field) = max_abs_difference(&analytic, &exact);
                    Ok(CheckResult {
                        check: "enumeration".into(),
                        n: params.n,
                        b: Some(params.b),
                        p: params.p,
                        lambda: Some(lambda),
                        tolerance: ENUMERATION_TOLERANCE,
                        deviation,
                        worst_field: Some(field.into()),
                        status: if deviation <= ENUMERATION_TOLERANCE {
                            CheckStatus::Pass
                        } else {
                            CheckStatus::Fail
                        },
                        note: None,
                    })
                })
                .collect()
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    checks.extend(skipped);
    Ok(checks)
}

fn monte_carlo_checks(grid: &ValidationGrid, trials: u64, seed: u64) -> Result<Vec<CheckResult>> {
    grid.monte_carlo
        .iter()
        .map(|params| {
            let params = GameParams::new(params.n, params.b, params.p)?;
            let profile = solve(&params)?;
            let analytic = indices_for(&params, &profile);
            let report = simulate(&params, profile.lambda, trials, seed)?;
            let worst = monte_carlo_deviations(&analytic, &report)
                .into_iter()
                .fold(None::<FieldDeviation>, |acc, d| match acc {
                    Some(a) if a.sigmas >= d.sigmas => Some(a),
                    _ => Some(d),
                })
                .ok_or_else(|| Error::Internal("no Monte Carlo fields".into()))?;
            Ok(CheckResult {
                check: "monte_carlo".into(),
                n: params.n,
                b: Some(params.b),
                p: params.p,
                lambda: Some(profile.lambda),
                tolerance: MONTE_CARLO_SIGMAS,
                deviation: worst.sigmas,
                worst_field: Some(worst.field.into()),
                status: if worst.sigmas <= MONTE_CARLO_SIGMAS {
                    CheckStatus::Pass
                } else {
                    CheckStatus::Fail
                },
                note: None,
            })
        })
        .collect()
}

/// Run every enumeration and Monte Carlo check in `grid`.
pub fn run_validation(grid: &ValidationGrid, trials: u64, seed: u64) -> Result<ValidationReport> {
    if trials == 0 {
        return Err(Error::Parameter("trials must be at least 1".into()));
    }
    let mut checks = enumeration_checks(grid)?;
    checks.extend(monte_carlo_checks(grid, trials, seed)?);
    let count = |s: CheckStatus| checks.iter().filter(|c| c.status == s).count();
    Ok(ValidationReport {
        trials,
        seed,
        passed: count(CheckStatus::Pass),
        failed: count(CheckStatus::Fail),
        skipped: count(CheckStatus::Skipped),
        checks,
    })
}
