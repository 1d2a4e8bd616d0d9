use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LabError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("region constraint violated: {0}")]
    Region(String),
    #[error("did not converge: {0}")]
    NoConvergence(String),
    #[error("internal check failed: {0}")]
    Internal(String),
}

impl LabError {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Self::Invalid(msg.into())
    }

    pub fn region(msg: impl Into<String>) -> Self {
        Self::Region(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, LabError>;
