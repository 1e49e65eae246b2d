//! Error type for tomography estimation.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum TomoError {
    /// A required measurement setting has no counts entry.
    #[error("no counts for setting '{0}'")]
    MissingSetting(String),

    /// A setting is present but holds zero shots.
    #[error("setting '{0}' has zero shots")]
    ZeroShots(String),

    /// A counts key is not a two-bit string, or dimensions disagree.
    #[error("dimension error: {0}")]
    Dimension(String),

    /// An expectation value left the [-1, 1] interval.
    #[error("expectation '{key}' = {value} outside [-1, 1]")]
    OutOfRange { key: String, value: f64 },

    #[error(transparent)]
    Sim(#[from] qcflate_sim::SimError),
}

pub type Result<T> = std::result::Result<T, TomoError>;
