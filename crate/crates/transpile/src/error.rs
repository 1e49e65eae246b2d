//! Error type shared by the transpiler passes and drivers.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum TranspileError {
    /// Input matrix failed the unitarity check.
    #[error("matrix is not unitary within {tol}: deviation {dev}")]
    NonUnitary { tol: f64, dev: f64 },

    /// Eigenvector orthogonalization failed even after perturbation retries.
    #[error("KAK decomposition failed to diagonalize: {0}")]
    Degenerate(String),

    /// A gate kind the lowering stage does not know how to expand.
    #[error("cannot lower gate '{0}' to the basis set")]
    UnsupportedGate(&'static str),

    /// Segments of an efficient-pipeline call disagree on circuit width.
    #[error("segment width mismatch: expected {expected} qubits, got {got}")]
    WidthMismatch { expected: usize, got: usize },

    /// Routing preconditions violated (e.g. disconnected coupling map).
    #[error("routing failed: {0}")]
    Routing(String),

    /// Invalid pass configuration.
    #[error("invalid pass config: {0}")]
    Config(String),

    /// Transpiled output failed its own semantic or validity check.
    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error(transparent)]
    Core(#[from] qcflate_core::CoreError),
}

pub type Result<T> = std::result::Result<T, TranspileError>;
