//! Independent validators for the analytic modules.
//!
//! [`simulate`] plays the game literally with a seeded generator;
//! [`enumerate_exact`] sums over every per-player outcome profile. Neither
//! touches the binomial kernels.

mod enumerate;
mod simulate;

pub use enumerate::{enumerate_exact, enumerate_totals, EnumerationTotals, MAX_ENUMERATION_PLAYERS};
pub use simulate::{simulate, SampleCounts, SimulatedIndices, SimulationReport, BLOCK_TRIALS, RNG_ALGORITHM};
