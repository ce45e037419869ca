//! Supply probabilities, correctness and market penetration of a profile.
//!
//! `x` and `y` condition on one fixed player having committed and so use
//! `Bin(n - 1, lambda_state)` at threshold `B - 1`. The correctness and
//! penetration indices are unconditional and use `Bin(n, lambda_state)` at
//! threshold `B`.

use serde::{Deserialize, Serialize};

use crate::binomial::{truncated_mean_unchecked, upper_tail};
use crate::equilibrium::{solve, EquilibriumProfile, GameParams};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupplyProbabilities {
    /// `Pr(supply | state H, player 1 commits)`.
    pub x: f64,
    /// `Pr(supply | state L, player 1 commits)`.
    pub y: f64,
    #[serde(rename = "supply_H")]
    pub supply_high: f64,
    #[serde(rename = "supply_L")]
    pub supply_low: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GameIndices {
    /// Correctness index: probability the campaign outcome matches the state.
    pub theta: f64,
    /// Market penetration index: expected per-capita buyers on the supply event.
    pub penetration: f64,
    /// `(x + y) / 2` from the conditional supply probabilities.
    pub mean_xy: f64,
    /// `(supply_H + supply_L) / 2`; this is the quantity the published
    /// finite-population table prints in its `(x_n + y_n)/2` column.
    pub mean_supply: f64,
    pub supply: SupplyProbabilities,
    pub profile: EquilibriumProfile,
}

pub fn supply_probs(params: &GameParams, profile: &EquilibriumProfile) -> SupplyProbabilities {
    let n = params.n;
    let b = params.b as i64;
    SupplyProbabilities {
        x: params.supply_given_commit(profile.lambda_high),
        y: params.supply_given_commit(profile.lambda_low),
        supply_high: upper_tail(n, profile.lambda_high, b),
        supply_low: upper_tail(n, profile.lambda_low, b),
    }
}

/// `theta = Pr(supply | H) / 2 + Pr(no supply | L) / 2`.
pub fn correctness(params: &GameParams, profile: &EquilibriumProfile) -> f64 {
    let b = params.b as i64;
    0.5 * upper_tail(params.n, profile.lambda_high, b)
        + 0.5 * (1.0 - upper_tail(params.n, profile.lambda_low, b))
}

/// `R = E[(sum a_i / n) * 1{sum a_i >= B}]`, averaged over both states.
pub fn penetration(params: &GameParams, profile: &EquilibriumProfile) -> f64 {
    let n = params.n;
    let b = params.b as i64;
    let nf = n as f64;
    0.5 * truncated_mean_unchecked(n, profile.lambda_high, b) / nf
        + 0.5 * truncated_mean_unchecked(n, profile.lambda_low, b) / nf
}

/// All indices for the given profile.
pub fn indices_for(params: &GameParams, profile: &EquilibriumProfile) -> GameIndices {
    let supply = supply_probs(params, profile);
    GameIndices {
        theta: 0.5 * supply.supply_high + 0.5 * (1.0 - supply.supply_low),
        penetration: penetration(params, profile),
        mean_xy: 0.5 * (supply.x + supply.y),
        mean_supply: 0.5 * (supply.supply_high + supply.supply_low),
        supply,
        profile: *profile,
    }
}

/// Solve the game and evaluate every index at the equilibrium.
pub fn evaluate(params: &GameParams) -> Result<GameIndices> {
    let profile = solve(params)?;
    Ok(indices_for(params, &profile))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn game(n: u64, b: u64, p: f64) -> GameParams {
        GameParams::new(n, b, p).unwrap()
    }

    #[test]
    fn table_cell_ten_players_half_threshold() {
        let idx = evaluate(&game(10, 5, 0.75)).unwrap();
        assert!((idx.theta - 0.895).abs() < 5e-4, "{}", idx.theta);
        assert!((idx.penetration - 0.439).abs() < 5e-4, "{}", idx.penetration);
        assert!((idx.mean_supply - 0.593).abs() < 5e-4, "{}", idx.mean_supply);
    }

    #[test]
    fn published_correctness_and_penetration() {
        let idx = evaluate(&game(5, 2, 0.95)).unwrap();
        assert!((idx.theta - 0.989).abs() < 5e-4);
        let idx = evaluate(&game(100, 34, 0.55)).unwrap();
        assert!((idx.penetration - 0.498).abs() < 5e-4);
    }

    #[test]
    fn unit_threshold_with_zero_lambda() {
        let params = game(5, 1, 0.55);
        let profile = EquilibriumProfile::from_lambda(&params, 0.0).unwrap();
        let supply = supply_probs(&params, &profile);
        assert_eq!(supply.x, 1.0);
        assert_eq!(supply.y, 1.0);
        let oracle = 0.5 * (1.0 - 0.45f64.powi(5)) + 0.5 * 0.55f64.powi(5);
        assert!((correctness(&params, &profile) - oracle).abs() < 1e-15);
        assert!((correctness(&params, &profile) - 0.5159).abs() < 1e-4);
        assert!((penetration(&params, &profile) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn toy_game_supply_probabilities() {
        let params = game(3, 3, 0.75);
        let profile = solve(&params).unwrap();
        let supply = supply_probs(&params, &profile);
        // n = 3, B = 3 reduces to squares of the per-player rates
        assert!((supply.x - profile.lambda_high.powi(2)).abs() < 1e-15);
        assert!((supply.y - profile.lambda_low.powi(2)).abs() < 1e-15);
        assert!((supply.x - 0.6815).abs() < 1e-3);
        assert!((supply.y - 0.2270).abs() < 1e-3);
        assert!((0.25 * supply.x - 0.75 * supply.y).abs() < 1e-12);
    }

    #[test]
    fn conditioning_on_a_committed_buyer_helps() {
        for &(n, b, p) in &[(10, 5, 0.75), (100, 90, 0.95), (7, 2, 0.6)] {
            let idx = evaluate(&game(n, b, p)).unwrap();
            assert!(idx.supply.x >= idx.supply.supply_high);
            assert!(idx.supply.y >= idx.supply.supply_low);
            let bound = 0.5 * idx.supply.supply_high + 0.5 * idx.supply.supply_low;
            assert!(idx.penetration <= bound + 1e-12);
        }
    }
}
