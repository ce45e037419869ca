//! Large-population limits for threshold sequences with `B_n / n -> q`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticLimits {
    pub q: f64,
    pub p: f64,
    pub lambda_inf: f64,
    pub x_star: f64,
    pub y_star: f64,
    pub theta_inf: f64,
    /// `1 / (2p)`, the limiting maximum of the penetration index over `B`.
    pub r_bound: f64,
    /// `lim R(qn, n)` along this particular threshold sequence.
    pub penetration_limit: f64,
    /// The value the published table prints in its penetration column for
    /// the `n = inf` row: `(x* + y*) / 2` above `1 - p`, one half otherwise.
    pub table_penetration: f64,
}

fn check_accuracy(p: f64) -> Result<()> {
    if p > 0.5 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::Parameter(format!(
            "p must satisfy 0.5 < p < 1 (got p = {p})"
        )))
    }
}

fn check_fraction(q: f64) -> Result<()> {
    if (0.0..=1.0).contains(&q) {
        Ok(())
    } else {
        Err(Error::Parameter(format!(
            "q must lie in [0, 1] (got q = {q})"
        )))
    }
}

/// Limit of the low-type commit probability:
/// `0` if `q <= 1 - p`, otherwise `(q - (1 - p)) / p`.
pub fn lambda_limit(q: f64, p: f64) -> Result<f64> {
    check_fraction(q)?;
    check_accuracy(p)?;
    if q <= 1.0 - p {
        Ok(0.0)
    } else {
        Ok((q - (1.0 - p)) / p)
    }
}

/// Limit quantities for threshold fraction `q` in `[0, 1)`.
pub fn limit_indices(q: f64, p: f64) -> Result<AsymptoticLimits> {
    check_fraction(q)?;
    check_accuracy(p)?;
    if q >= 1.0 {
        return Err(Error::Parameter(
            "q must be strictly below 1; q -> 1 is only meaningful as a limit".into(),
        ));
    }
    let lambda_inf = lambda_limit(q, p)?;
    let r_bound = penetration_max(p)?;
    let limits = if q <= 1.0 - p {
        AsymptoticLimits {
            q,
            p,
            lambda_inf,
            x_star: 1.0,
            y_star: 1.0,
            theta_inf: 0.5,
            r_bound,
            // both states supply almost surely with rates p and 1 - p
            penetration_limit: 0.5,
            table_penetration: 0.5,
        }
    } else {
        let y_star = (1.0 - p) / p;
        let lambda_high = p + (1.0 - p) * lambda_inf;
        AsymptoticLimits {
            q,
            p,
            lambda_inf,
            x_star: 1.0,
            y_star,
            theta_inf: (3.0 * p - 1.0) / (2.0 * p),
            r_bound,
            // in state L the count concentrates at the threshold itself
            penetration_limit: 0.5 * lambda_high + 0.5 * y_star * q,
            table_penetration: 0.5 * (1.0 + y_star),
        }
    };
    Ok(limits)
}

/// `lim max_B theta(B, n) = (3p - 1) / (2p)`.
pub fn theta_max(p: f64) -> Result<f64> {
    check_accuracy(p)?;
    Ok((3.0 * p - 1.0) / (2.0 * p))
}

/// `lim max_B R(B, n) = 1 / (2p)`.
pub fn penetration_max(p: f64) -> Result<f64> {
    check_accuracy(p)?;
    Ok(1.0 / (2.0 * p))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_limit_examples() {
        assert!((lambda_limit(0.5, 0.75).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        // (2p - 1) / (2p) at q = 1/2
        assert!((lambda_limit(0.5, 0.75).unwrap() - 0.5 / 1.5).abs() < 1e-15);
        assert!((lambda_limit(1.0 / 3.0, 0.75).unwrap() - 0.111).abs() < 5e-4);
        assert_eq!(lambda_limit(0.04, 0.95).unwrap(), 0.0);
        // 0.2 exceeds 1 - p = 0.05, so this one is interior
        assert!((lambda_limit(0.2, 0.95).unwrap() - 0.15 / 0.95).abs() < 1e-15);
        assert_eq!(lambda_limit(0.25, 0.75).unwrap(), 0.0);
    }

    #[test]
    fn limit_indices_examples() {
        let l = limit_indices(0.5, 0.75).unwrap();
        assert!((l.theta_inf - 0.8333).abs() < 1e-4);
        assert!((l.y_star - 1.0 / 3.0).abs() < 1e-15);
        assert!((l.penetration_limit - 0.5).abs() < 1e-15);

        let l = limit_indices(1.0 / 3.0, 0.55).unwrap();
        assert_eq!((l.theta_inf, l.x_star, l.y_star), (0.5, 1.0, 1.0));

        let l = limit_indices(0.9, 0.95).unwrap();
        assert!((l.theta_inf - 0.9737).abs() < 1e-4);
    }

    #[test]
    fn boundary_fraction_takes_lower_branch() {
        let l = limit_indices(0.25, 0.75).unwrap();
        assert_eq!(l.lambda_inf, 0.0);
        assert_eq!(l.theta_inf, 0.5);
    }

    #[test]
    fn rejects_bad_domains() {
        assert!(limit_indices(1.0, 0.75).is_err());
        assert!(limit_indices(-0.1, 0.75).is_err());
        assert!(lambda_limit(0.5, 0.5).is_err());
        assert!(theta_max(1.0).is_err());
        assert!(penetration_max(0.2).is_err());
    }

    #[test]
    fn closed_form_maxima() {
        assert!((theta_max(0.75).unwrap() - 0.8333).abs() < 1e-4);
        assert!((penetration_max(0.55).unwrap() - 0.909).abs() < 5e-4);
        assert!((theta_max(0.999).unwrap() - 1.0).abs() < 1e-3);
        assert!((penetration_max(0.999).unwrap() - 0.5).abs() < 1e-3);
    }
}
