//! Exhaustive search over thresholds `B = 1..=n` for the index-maximizing one.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::equilibrium::GameParams;
use crate::error::{Error, Result};
use crate::indices::evaluate;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Theta,
    Penetration,
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::Theta => "theta",
            Metric::Penetration => "penetration",
        })
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "theta" | "correctness" => Ok(Metric::Theta),
            "penetration" | "r" => Ok(Metric::Penetration),
            other => Err(Error::Parameter(format!(
                "metric must be 'theta' or 'penetration', got '{other}'"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub b: u64,
    pub lambda: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub n: u64,
    pub p: f64,
    pub metric: Metric,
    pub best_b: u64,
    pub best_value: f64,
    pub curve: Vec<SweepPoint>,
}

/// Evaluate `metric` at every threshold; ties go to the smallest `B`.
pub fn sweep(n: u64, p: f64, metric: Metric) -> Result<SweepReport> {
    // validates n and p once before fanning out
    GameParams::new(n, 1, p)?;
    let curve: Vec<SweepPoint> = (1..=n)
        .into_par_iter()
        .map(|b| {
            let idx = evaluate(&GameParams::new(n, b, p)?)?;
            let value = match metric {
                Metric::Theta => idx.theta,
                Metric::Penetration => idx.penetration,
            };
            Ok(SweepPoint {
                b,
                lambda: idx.profile.lambda,
                value,
            })
        })
        .collect::<Result<_>>()?;
    let best = curve
        .iter()
        .fold(None::<&SweepPoint>, |best, pt| match best {
            Some(b) if b.value >= pt.value => Some(b),
            _ => Some(pt),
        })
        .copied()
        .ok_or_else(|| Error::Internal("empty sweep curve".into()))?;
    Ok(SweepReport {
        n,
        p,
        metric,
        best_b: best.b,
        best_value: best.value,
        curve,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_player() {
        let report = sweep(1, 0.9, Metric::Theta).unwrap();
        assert_eq!(report.best_b, 1);
        assert!((report.best_value - 0.9).abs() < 1e-15);
        assert_eq!(report.curve.len(), 1);
    }

    #[test]
    fn argmax_matches_brute_force_and_prefers_small_b() {
        let report = sweep(12, 0.7, Metric::Penetration).unwrap();
        let max = report.curve.iter().map(|c| c.value).fold(f64::MIN, f64::max);
        let first = report.curve.iter().find(|c| c.value == max).unwrap();
        assert_eq!(report.best_b, first.b);
        assert_eq!(report.best_value, max);
    }

    #[test]
    fn metric_parsing() {
        assert_eq!("theta".parse::<Metric>().unwrap(), Metric::Theta);
        assert_eq!("Penetration".parse::<Metric>().unwrap(), Metric::Penetration);
        assert!("revenue".parse::<Metric>().is_err());
        assert!(sweep(0, 0.7, Metric::Theta).is_err());
    }
}
