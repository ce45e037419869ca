use std::fmt;

/// A command failure, mapped onto the process exit code.
#[derive(Debug, Clone, PartialEq)]
pub enum Failure {
    Io(String),
    Parameter(String),
    Validation(String),
    Internal(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Parameter(_) => 2,
            Failure::Validation(_) => 3,
            Failure::Internal(_) => 4,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Io(m) => write!(f, "i/o error: {m}"),
            Failure::Parameter(m) => write!(f, "parameter error: {m}"),
            Failure::Validation(m) => write!(f, "validation failed: {m}"),
            Failure::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

impl From<crowdfund::Error> for Failure {
    fn from(err: crowdfund::Error) -> Self {
        match err {
            crowdfund::Error::Parameter(m) | crowdfund::Error::Capacity(m) => Failure::Parameter(m),
            crowdfund::Error::Internal(m) => Failure::Internal(m),
        }
    }
}
