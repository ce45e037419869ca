//! The finite-population results grid: rows are `(p, n)` pairs, column
//! blocks are threshold rules `B = ceil(fraction * n)`.
//!
//! Rows with `n = inf` are filled from [`crate::asymptotics`] with the
//! threshold fraction as `q`.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};

use crate::asymptotics::limit_indices;
use crate::equilibrium::GameParams;
use crate::error::{Error, Result};
use crate::indices::evaluate;

/// A population size, possibly the `n -> inf` limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub enum Population {
    Finite(u64),
    Infinite,
}

impl fmt::Display for Population {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Population::Finite(n) => write!(f, "{n}"),
            Population::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Population {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Population::Finite(n) => serializer.serialize_u64(*n),
            Population::Infinite => serializer.serialize_str("inf"),
        }
    }
}

impl FromStr for Population {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" => Ok(Population::Infinite),
            _ => match s.parse::<u64>() {
                Ok(n) if n >= 1 => Ok(Population::Finite(n)),
                _ => Err(Error::Parameter(format!(
                    "population must be a positive integer or 'inf', got '{s}'"
                ))),
            },
        }
    }
}

/// `B = ceil(numerator * n / denominator)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub struct ThresholdRule {
    pub numerator: u64,
    pub denominator: u64,
}

impl ThresholdRule {
    pub fn new(numerator: u64, denominator: u64) -> Result<Self> {
        if numerator == 0 || denominator == 0 || numerator > denominator {
            return Err(Error::Parameter(format!(
                "threshold rule must be a fraction in (0, 1], got {numerator}/{denominator}"
            )));
        }
        Ok(Self {
            numerator,
            denominator,
        })
    }

    pub fn fraction(&self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }

    pub fn threshold(&self, n: u64) -> u64 {
        (self.numerator * n).div_ceil(self.denominator)
    }

    /// Human-readable label, e.g. `ceil(9n/10)`.
    pub fn label(&self) -> String {
        if self.numerator == 1 {
            format!("ceil(n/{})", self.denominator)
        } else {
            format!("ceil({}n/{})", self.numerator, self.denominator)
        }
    }
}

impl fmt::Display for ThresholdRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator, self.denominator)
    }
}

impl Serialize for ThresholdRule {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl FromStr for ThresholdRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parameter(format!("threshold rule must look like '1/3', got '{s}'"));
        let (num, den) = s.trim().split_once('/').ok_or_else(bad)?;
        let num = num.trim().parse().map_err(|_| bad())?;
        let den = den.trim().parse().map_err(|_| bad())?;
        ThresholdRule::new(num, den)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableSpec {
    pub p_values: Vec<f64>,
    pub n_values: Vec<Population>,
    pub b_rules: Vec<ThresholdRule>,
    pub decimals: u32,
}

impl Default for TableSpec {
    fn default() -> Self {
        Self {
            p_values: vec![0.55, 0.75, 0.95],
            n_values: vec![
                Population::Finite(5),
                Population::Finite(10),
                Population::Finite(100),
                Population::Finite(1000),
                Population::Infinite,
            ],
            b_rules: vec![
                ThresholdRule { numerator: 1, denominator: 3 },
                ThresholdRule { numerator: 1, denominator: 2 },
                ThresholdRule { numerator: 9, denominator: 10 },
            ],
            decimals: 3,
        }
    }
}

/// One `(p, n, rule)` cell with the four published columns.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TableCell {
    pub p: f64,
    pub n: Population,
    pub rule: ThresholdRule,
    /// `None` on the `n = inf` row.
    pub b: Option<u64>,
    pub lambda: f64,
    pub theta: f64,
    /// The `(x_n + y_n)/2` column; see [`crate::GameIndices::mean_supply`].
    pub mean_supply: f64,
    pub penetration: f64,
}

impl TableCell {
    pub fn values(&self) -> [f64; 4] {
        [self.lambda, self.theta, self.mean_supply, self.penetration]
    }
}

fn cell_error(p: f64, n: Population, rule: ThresholdRule, err: Error) -> Error {
    let context = format!("table cell (p = {p}, n = {n}, B = {}): ", rule.label());
    match err {
        Error::Parameter(msg) => Error::Parameter(context + &msg),
        Error::Capacity(msg) => Error::Capacity(context + &msg),
        Error::Internal(msg) => Error::Internal(context + &msg),
    }
}

pub fn compute_cell(p: f64, n: Population, rule: ThresholdRule) -> Result<TableCell> {
    let cell = match n {
        Population::Finite(size) => {
            let b = rule.threshold(size);
            let params = GameParams::new(size, b, p)?;
            let idx = evaluate(&params)?;
            TableCell {
                p,
                n,
                rule,
                b: Some(b),
                lambda: idx.profile.lambda,
                theta: idx.theta,
                mean_supply: idx.mean_supply,
                penetration: idx.penetration,
            }
        }
        Population::Infinite => {
            let lim = limit_indices(rule.fraction(), p)?;
            TableCell {
                p,
                n,
                rule,
                b: None,
                lambda: lim.lambda_inf,
                theta: lim.theta_inf,
                mean_supply: 0.5 * (lim.x_star + lim.y_star),
                penetration: lim.table_penetration,
            }
        }
    };
    Ok(cell)
}

/// Every cell of the grid, ordered by `p`, then `n`, then rule.
pub fn compute_table(spec: &TableSpec) -> Result<Vec<TableCell>> {
    if spec.decimals > 15 {
        return Err(Error::Parameter(format!(
            "decimals must be at most 15, got {}",
            spec.decimals
        )));
    }
    let coords: Vec<(f64, Population, ThresholdRule)> = spec
        .p_values
        .iter()
        .flat_map(|&p| {
            spec.n_values
                .iter()
                .flat_map(move |&n| spec.b_rules.iter().map(move |&r| (p, n, r)))
        })
        .collect();
    coords
        .into_par_iter()
        .map(|(p, n, rule)| compute_cell(p, n, rule).map_err(|e| cell_error(p, n, rule, e)))
        .collect()
}

/// Round half away from zero to `decimals` places.
pub fn round_display(value: f64, decimals: u32) -> f64 {
    let scale = 10f64.powi(decimals as i32);
    (value * scale).round() / scale
}
