use crate::equilibrium::{EquilibriumProfile, GameParams};
use crate::error::{check_probability, Error, Result};
use crate::indices::{GameIndices, SupplyProbabilities};

/// Largest population the exhaustive enumerator accepts (`2 * 3^n` terms).
pub const MAX_ENUMERATION_PLAYERS: u64 = 12;

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct StateSums {
    mass: CompensatedSum,
    supply: CompensatedSum,
    per_capita_on_supply: CompensatedSum,
    first_commits: CompensatedSum,
    first_commits_supplied: CompensatedSum,
}

/// Raw state-conditional sums produced by the enumerator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnumerationTotals {
    /// `Pr(H)` times the mass enumerated under `H`, plus the same for `L`.
    pub total_mass: f64,
    pub supply_high: f64,
    pub supply_low: f64,
    pub penetration_high: f64,
    pub penetration_low: f64,
    /// `Pr(supply and player 1 commits | state)`.
    pub joint_first_high: f64,
    pub joint_first_low: f64,
    /// `Pr(player 1 commits | state)`.
    pub first_high: f64,
    pub first_low: f64,
}

/// Per-player outcomes: (signal H, commit), (signal L, commit), (signal L, opt out).
const OUTCOME_COMMITS: [bool; 3] = [true, true, false];

struct Walker {
    n: u64,
    b: u64,
    weights: [f64; 3],
    sums: StateSums,
}

impl Walker {
    fn walk(&mut self, player: u64, weight: f64, buyers: u64, first_commits: bool) {
        if player == self.n {
            let sums = &mut self.sums;
            sums.mass.add(weight);
            let supplied = buyers >= self.b;
            if supplied {
                sums.supply.add(weight);
                sums.per_capita_on_supply.add(weight * buyers as f64 / self.n as f64);
            }
            if first_commits {
                sums.first_commits.add(weight);
                if supplied {
                    sums.first_commits_supplied.add(weight);
                }
            }
            return;
        }
        for (commits, w) in OUTCOME_COMMITS.into_iter().zip(self.weights) {
            self.walk(
                player + 1,
                weight * w,
                buyers + commits as u64,
                if player == 0 { commits } else { first_commits },
            );
        }
    }
}

fn enumerate_state(params: &GameParams, lambda: f64, correct_signal: f64) -> StateSums {
    let mut walker = Walker {
        n: params.n,
        b: params.b,
        weights: [
            correct_signal,
            (1.0 - correct_signal) * lambda,
            (1.0 - correct_signal) * (1.0 - lambda),
        ],
        sums: StateSums::default(),
    };
    walker.walk(0, 1.0, 0, false);
    walker.sums
}

/// Sum over both states and all `3^n` outcome profiles.
pub fn enumerate_totals(params: &GameParams, lambda: f64) -> Result<EnumerationTotals> {
    check_probability("lambda", lambda)?;
    if params.n > MAX_ENUMERATION_PLAYERS {
        return Err(Error::Capacity(format!(
            "n exceeds enumeration capacity ({} > {})",
            params.n, MAX_ENUMERATION_PLAYERS
        )));
    }
    // in state H a signal is "high" with probability p, in state L with 1 - p
    let high = enumerate_state(params, lambda, params.p);
    let low = enumerate_state(params, lambda, 1.0 - params.p);
    let mut total = CompensatedSum::default();
    total.add(0.5 * high.mass.value());
    total.add(0.5 * low.mass.value());
    Ok(EnumerationTotals {
        total_mass: total.value(),
        supply_high: high.supply.value(),
        supply_low: low.supply.value(),
        penetration_high: high.per_capita_on_supply.value(),
        penetration_low: low.per_capita_on_supply.value(),
        joint_first_high: high.first_commits_supplied.value(),
        joint_first_low: low.first_commits_supplied.value(),
        first_high: high.first_commits.value(),
        first_low: low.first_commits.value(),
    })
}

/// Exact indices for the profile indexed by `lambda`, by brute force.
///
/// Accepts `n <= 12`.
pub fn enumerate_exact(params: &GameParams, lambda: f64) -> Result<GameIndices> {
    let t = enumerate_totals(params, lambda)?;
    let p = params.p;
    let supply = SupplyProbabilities {
        x: t.joint_first_high / t.first_high,
        y: t.joint_first_low / t.first_low,
        supply_high: t.supply_high,
        supply_low: t.supply_low,
    };
    let profile = EquilibriumProfile {
        lambda,
        psi: 1.0,
        lambda_high: t.first_high,
        lambda_low: t.first_low,
        residual: (1.0 - p) * supply.x - p * supply.y,
    };
    Ok(GameIndices {
        theta: 0.5 * supply.supply_high + 0.5 * (1.0 - supply.supply_low),
        penetration: 0.5 * t.penetration_high + 0.5 * t.penetration_low,
        mean_xy: 0.5 * (supply.x + supply.y),
        mean_supply: 0.5 * (supply.supply_high + supply.supply_low),
        supply,
        profile,
    })
}
