use thiserror::Error;

/// Failures surfaced by the solver, the index evaluators and the oracles.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// The request is valid but too large for an exhaustive method.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// A numerical routine broke one of its own guarantees.
    #[error("internal consistency error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_probability(name: &str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::Parameter(format!(
            "{name} must lie in [0, 1], got {value}"
        )))
    }
}
