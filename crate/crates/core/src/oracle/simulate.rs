use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::equilibrium::GameParams;
use crate::error::{check_probability, Error, Result};

/// Trials per independently seeded block. Fixed so that the merged report
/// does not depend on how many worker threads run the blocks.
pub const BLOCK_TRIALS: u64 = 1 << 16;

/// Generator identifier recorded in every report: block `i` draws from
/// `ChaCha8Rng::seed_from_u64(seed)` with its stream set to `i`.
pub const RNG_ALGORITHM: &str = "rand_chacha::ChaCha8Rng; seed_from_u64(seed); stream = block index";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimulatedIndices {
    pub theta: f64,
    pub penetration: f64,
    #[serde(rename = "supply_H")]
    pub supply_high: f64,
    #[serde(rename = "supply_L")]
    pub supply_low: f64,
    pub x: f64,
    pub y: f64,
    /// `Pr(supply | every signal was L)`. NaN when that event never occurred.
    pub supply_given_all_low: f64,
}

/// Sizes of the conditioning events behind each estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleCounts {
    #[serde(rename = "state_H")]
    pub state_high: u64,
    #[serde(rename = "state_L")]
    pub state_low: u64,
    #[serde(rename = "first_commits_H")]
    pub first_commits_high: u64,
    #[serde(rename = "first_commits_L")]
    pub first_commits_low: u64,
    pub all_low_signals: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub params: GameParams,
    pub lambda: f64,
    pub trials: u64,
    pub seed: u64,
    pub rng: String,
    pub estimates: SimulatedIndices,
    pub std_errors: SimulatedIndices,
    pub samples: SampleCounts,
}

#[derive(Debug, Clone, Copy, Default)]
struct StateTally {
    trials: u64,
    supplied: u64,
    per_capita_sum: f64,
    per_capita_sq_sum: f64,
    first_commits: u64,
    first_commits_supplied: u64,
}

#[derive(Debug, Clone, Copy, Default)]
struct Tally {
    high: StateTally,
    low: StateTally,
    all_low: u64,
    all_low_supplied: u64,
}

impl Tally {
    fn merge(mut self, other: &Tally) -> Tally {
        for (a, b) in [(&mut self.high, &other.high), (&mut self.low, &other.low)] {
            a.trials += b.trials;
            a.supplied += b.supplied;
            a.per_capita_sum += b.per_capita_sum;
            a.per_capita_sq_sum += b.per_capita_sq_sum;
            a.first_commits += b.first_commits;
            a.first_commits_supplied += b.first_commits_supplied;
        }
        self.all_low += other.all_low;
        self.all_low_supplied += other.all_low_supplied;
        self
    }
}

fn run_block(params: &GameParams, lambda: f64, seed: u64, block: u64, trials: u64) -> Tally {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    let mut tally = Tally::default();
    let n = params.n;
    for _ in 0..trials {
        let state_high = rng.random_bool(0.5);
        let mut buyers = 0u64;
        let mut first_commits = false;
        let mut all_low = true;
        for i in 0..n {
            let correct = rng.random::<f64>() < params.p;
            let signal_high = correct == state_high;
            let commits = signal_high || rng.random::<f64>() < lambda;
            all_low &= !signal_high;
            buyers += commits as u64;
            if i == 0 {
                first_commits = commits;
            }
        }
        let supplied = buyers >= params.b;
        let stratum = if state_high { &mut tally.high } else { &mut tally.low };
        stratum.trials += 1;
        if supplied {
            let share = buyers as f64 / n as f64;
            stratum.supplied += 1;
            stratum.per_capita_sum += share;
            stratum.per_capita_sq_sum += share * share;
        }
        if first_commits {
            stratum.first_commits += 1;
            stratum.first_commits_supplied += supplied as u64;
        }
        if all_low {
            tally.all_low += 1;
            tally.all_low_supplied += supplied as u64;
        }
    }
    tally
}

/// Proportion and its plug-in standard error.
fn proportion(hits: u64, total: u64) -> (f64, f64) {
    if total == 0 {
        return (f64::NAN, f64::NAN);
    }
    let est = hits as f64 / total as f64;
    (est, (est * (1.0 - est) / total as f64).sqrt())
}

/// Sample mean of the per-capita share and the standard error of that mean.
fn mean_share(s: &StateTally) -> (f64, f64) {
    if s.trials == 0 {
        return (f64::NAN, f64::NAN);
    }
    let n = s.trials as f64;
    let mean = s.per_capita_sum / n;
    if s.trials < 2 {
        return (mean, 0.0);
    }
    let var = ((s.per_capita_sq_sum - n * mean * mean) / (n - 1.0)).max(0.0);
    (mean, (var / n).sqrt())
}

/// Monte Carlo estimate of the indices for the profile indexed by `lambda`.
///
/// Identical arguments give bitwise-identical reports.
pub fn simulate(params: &GameParams, lambda: f64, trials: u64, seed: u64) -> Result<SimulationReport> {
    check_probability("lambda", lambda)?;
    if trials == 0 {
        return Err(Error::Parameter("trials must be at least 1".into()));
    }
    let blocks = trials.div_ceil(BLOCK_TRIALS);
    let tallies: Vec<Tally> = (0..blocks)
        .into_par_iter()
        .map(|block| {
            let start = block * BLOCK_TRIALS;
            let len = BLOCK_TRIALS.min(trials - start);
            run_block(params, lambda, seed, block, len)
        })
        .collect();
    let tally = tallies.iter().fold(Tally::default(), |acc, t| acc.merge(t));

    let (supply_high, se_high) = proportion(tally.high.supplied, tally.high.trials);
    let (supply_low, se_low) = proportion(tally.low.supplied, tally.low.trials);
    let (x, se_x) = proportion(tally.high.first_commits_supplied, tally.high.first_commits);
    let (y, se_y) = proportion(tally.low.first_commits_supplied, tally.low.first_commits);
    let (all_low, se_all_low) = proportion(tally.all_low_supplied, tally.all_low);
    let (r_high, se_r_high) = mean_share(&tally.high);
    let (r_low, se_r_low) = mean_share(&tally.low);

    let estimates = SimulatedIndices {
        theta: 0.5 * supply_high + 0.5 * (1.0 - supply_low),
        penetration: 0.5 * r_high + 0.5 * r_low,
        supply_high,
        supply_low,
        x,
        y,
        supply_given_all_low: all_low,
    };
    let std_errors = SimulatedIndices {
        theta: 0.5 * (se_high * se_high + se_low * se_low).sqrt(),
        penetration: 0.5 * (se_r_high * se_r_high + se_r_low * se_r_low).sqrt(),
        supply_high: se_high,
        supply_low: se_low,
        x: se_x,
        y: se_y,
        supply_given_all_low: se_all_low,
    };
    Ok(SimulationReport {
        params: *params,
        lambda,
        trials,
        seed,
        rng: RNG_ALGORITHM.to_string(),
        estimates,
        std_errors,
        samples: SampleCounts {
            state_high: tally.high.trials,
            state_low: tally.low.trials,
            first_commits_high: tally.high.first_commits,
            first_commits_low: tally.low.first_commits,
            all_low_signals: tally.all_low,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_trials_rejected() {
        let params = GameParams::new(3, 3, 0.75).unwrap();
        assert!(matches!(simulate(&params, 0.3, 0, 1), Err(Error::Parameter(_))));
        assert!(simulate(&params, -0.3, 10, 1).is_err());
    }

    #[test]
    fn same_seed_same_report() {
        let params = GameParams::new(7, 4, 0.7).unwrap();
        let a = simulate(&params, 0.2, 150_000, 42).unwrap();
        let b = simulate(&params, 0.2, 150_000, 42).unwrap();
        assert_eq!(format!("{a:?}"), format!("{b:?}"));
        let c = simulate(&params, 0.2, 150_000, 43).unwrap();
        assert_ne!(a.estimates.theta, c.estimates.theta);
    }

    #[test]
    fn unanimous_threshold_without_low_buyers_never_supplies_on_all_low() {
        // lambda = 0 and every signal L means nobody commits
        let params = GameParams::new(3, 3, 0.6).unwrap();
        let report = simulate(&params, 0.0, 20_000, 7).unwrap();
        assert!(report.samples.all_low_signals > 0);
        assert_eq!(report.estimates.supply_given_all_low, 0.0);
    }

    #[test]
    fn counts_add_up() {
        let params = GameParams::new(4, 2, 0.8).unwrap();
        let report = simulate(&params, 0.5, 70_001, 3).unwrap();
        assert_eq!(report.samples.state_high + report.samples.state_low, 70_001);
        assert_eq!(report.rng, RNG_ALGORITHM);
    }
}
