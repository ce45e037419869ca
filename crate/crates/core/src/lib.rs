//! Solver and evaluation toolkit for the threshold crowdfunding game.
//!
//! `n` players each receive a private binary signal about a common-value
//! product whose state is `H` or `L` with equal probability. Each player
//! commits to buy or opts out, and the product is supplied only when at
//! least `B` players commit. High-signal players always commit in the
//! unique symmetric non-trivial equilibrium; low-signal players commit with
//! probability `lambda`, which this crate computes along with the
//! correctness and market penetration indices of the resulting campaign.
//!
//! Layout:
//!
//! * [`binomial`]: binomial tail and truncated-mean kernels.
//! * [`equilibrium`]: game parameters and the equilibrium solver.
//! * [`indices`]: supply probabilities, correctness and penetration.
//! * [`asymptotics`]: large-population limits.
//! * [`oracle`]: Monte Carlo and exhaustive-enumeration cross-checks.
//! * [`table`], [`sweep`], [`validate`]: batch drivers used by the CLI.

pub mod asymptotics;
pub mod binomial;
pub mod equilibrium;
mod error;
pub mod indices;
pub mod oracle;
pub mod sweep;
pub mod table;
pub mod validate;

pub use asymptotics::{lambda_limit, limit_indices, penetration_max, theta_max, AsymptoticLimits};
pub use binomial::{tail_prob, truncated_mean, BinomialQuery};
pub use equilibrium::{low_type_payoff, solve, EquilibriumProfile, GameParams, Solver};
pub use error::{Error, Result};
pub use indices::{correctness, evaluate, penetration, supply_probs, GameIndices, SupplyProbabilities};
pub use oracle::{enumerate_exact, simulate, SimulationReport};
