//! Game parameters and the symmetric equilibrium solver.
//!
//! In the unique symmetric non-trivial equilibrium a high-signal player
//! always commits. A low-signal player commits with probability `lambda`,
//! pinned by the sign of her expected payoff from committing,
//!
//! ```text
//! g(lambda) = (1 - p) * phi(lambda_H) - p * phi(lambda_L),
//! phi(gamma) = Pr(Bin(n - 1, gamma) >= B - 1).
//! ```
//!
//! `g` changes sign at most once on `[0, 1]` and `g(1) = 1 - 2p < 0`, so
//! either `g(0) <= 0` and `lambda = 0`, or the root is bracketed by `[0, 1]`
//! and bisection finds it. The sign is decided in log space because both
//! tails can underflow long before their ratio is decided (e.g. `n = 2000`
//! with `B` near `n`).

use serde::{Deserialize, Serialize};

use crate::binomial::{ln_upper_tail, upper_tail};
use crate::error::{check_probability, Error, Result};

pub const DEFAULT_TOLERANCE: f64 = 1e-12;
pub const DEFAULT_MAX_ITERATIONS: u32 = 200;

/// The triple `(n, B, p)` of a crowdfunding game.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GameParams {
    /// Number of players.
    pub n: u64,
    /// Supply threshold: the product is made iff at least `b` players commit.
    pub b: u64,
    /// Signal accuracy `Pr(signal = state)`.
    pub p: f64,
}

impl GameParams {
    pub fn new(n: u64, b: u64, p: f64) -> Result<Self> {
        if n < 1 {
            return Err(Error::Parameter("n must be at least 1".into()));
        }
        if b < 1 || b > n {
            return Err(Error::Parameter(format!(
                "B must satisfy 1 ≤ B ≤ n (got B = {b}, n = {n})"
            )));
        }
        if !(p > 0.5 && p < 1.0) {
            return Err(Error::Parameter(format!(
                "p must satisfy 0.5 < p < 1 (got p = {p})"
            )));
        }
        Ok(Self { n, b, p })
    }

    /// Per-player commit probability in state `H`.
    pub fn lambda_high(&self, lambda: f64) -> f64 {
        self.p + (1.0 - self.p) * lambda
    }

    /// Per-player commit probability in state `L`.
    pub fn lambda_low(&self, lambda: f64) -> f64 {
        (1.0 - self.p) + self.p * lambda
    }

    /// `phi(gamma)`: supply probability given one fixed committed player.
    pub(crate) fn supply_given_commit(&self, gamma: f64) -> f64 {
        upper_tail(self.n - 1, gamma, self.b as i64 - 1)
    }

    fn ln_supply_given_commit(&self, gamma: f64) -> f64 {
        ln_upper_tail(self.n - 1, gamma, self.b as i64 - 1)
    }

    /// `ln((1 - p) x) - ln(p y)`, which has the sign of `g(lambda)`.
    fn payoff_log_ratio(&self, lambda: f64) -> f64 {
        let p = self.p;
        let ln_x = self.ln_supply_given_commit(self.lambda_high(lambda));
        let ln_y = self.ln_supply_given_commit(self.lambda_low(lambda));
        (1.0 - p).ln() + ln_x - p.ln() - ln_y
    }

    fn payoff(&self, lambda: f64) -> f64 {
        let p = self.p;
        (1.0 - p) * self.supply_given_commit(self.lambda_high(lambda))
            - p * self.supply_given_commit(self.lambda_low(lambda))
    }
}

/// A symmetric strategy profile: high types commit with probability `psi`,
/// low types with probability `lambda`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumProfile {
    pub lambda: f64,
    pub psi: f64,
    #[serde(rename = "lambda_H")]
    pub lambda_high: f64,
    #[serde(rename = "lambda_L")]
    pub lambda_low: f64,
    /// `g(lambda)`, the low type's expected payoff from committing.
    pub residual: f64,
}

impl EquilibriumProfile {
    /// The profile in which low types commit with probability `lambda`.
    ///
    /// This need not be an equilibrium; the oracles and index evaluators
    /// accept arbitrary profiles of this shape.
    pub fn from_lambda(params: &GameParams, lambda: f64) -> Result<Self> {
        check_probability("lambda", lambda)?;
        Ok(Self {
            lambda,
            psi: 1.0,
            lambda_high: params.lambda_high(lambda),
            lambda_low: params.lambda_low(lambda),
            residual: params.payoff(lambda),
        })
    }
}

/// `g(lambda)`: expected payoff of a low-signal player from committing when
/// everybody else follows the profile indexed by `lambda`.
pub fn low_type_payoff(params: &GameParams, lambda: f64) -> Result<f64> {
    check_probability("lambda", lambda)?;
    Ok(params.payoff(lambda))
}

/// Bisection settings for [`Solver::solve`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Solver {
    /// Absolute bracket width on `lambda` at which bisection stops.
    pub tolerance: f64,
    pub max_iterations: u32,
}

impl Default for Solver {
    fn default() -> Self {
        Self {
            tolerance: DEFAULT_TOLERANCE,
            max_iterations: DEFAULT_MAX_ITERATIONS,
        }
    }
}

impl Solver {
    pub fn with_tolerance(tolerance: f64) -> Self {
        Self {
            tolerance,
            ..Self::default()
        }
    }

    pub fn solve(&self, params: &GameParams) -> Result<EquilibriumProfile> {
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return Err(Error::Parameter(format!(
                "solver tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        // B = 1: every tail is 1 and g is the constant 1 - 2p < 0
        if params.b == 1 || params.payoff_log_ratio(0.0) <= 0.0 {
            return EquilibriumProfile::from_lambda(params, 0.0);
        }

        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        let mut iterations = 0;
        while hi - lo > self.tolerance {
            if iterations == self.max_iterations {
                return Err(Error::Internal(format!(
                    "bisection did not reach tolerance {} within {} iterations for {:?}",
                    self.tolerance, self.max_iterations, params
                )));
            }
            iterations += 1;
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let sign = params.payoff_log_ratio(mid);
            if sign > 0.0 {
                lo = mid;
            } else if sign < 0.0 {
                hi = mid;
            } else {
                lo = mid;
                hi = mid;
            }
        }
        let lambda = 0.5 * (lo + hi);
        if !(lambda > 0.0 && lambda < 1.0) {
            return Err(Error::Internal(format!(
                "bisection left the open interval (0, 1): lambda = {lambda}"
            )));
        }
        EquilibriumProfile::from_lambda(params, lambda)
    }
}

/// Solve with the default tolerance of `1e-12`.
pub fn solve(params: &GameParams) -> Result<EquilibriumProfile> {
    Solver::default().solve(params)
}
