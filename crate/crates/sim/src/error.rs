//! Simulator error type.

use thiserror::Error;

/// Errors surfaced by simulation, sampling, and calibration loading.
#[derive(Debug, Error)]
pub enum SimError {
    /// Register too wide for the requested representation.
    #[error("{mode} simulation limited to {limit} qubits, circuit has {got}")]
    WidthExceeded {
        mode: &'static str,
        limit: usize,
        got: usize,
    },

    /// Instruction not executable in the requested mode
    /// (e.g. mid-circuit measurement on a statevector).
    #[error("unsupported in {mode} mode: {what}")]
    UnsupportedMode { mode: &'static str, what: String },

    /// Statevector reset on a qubit whose outcome is not deterministic.
    #[error(
        "reset of qubit {qubit} is non-deterministic in statevector mode \
         (p(1) = {p_one:.3e}); use density mode"
    )]
    NonDeterministicReset { qubit: usize, p_one: f64 },

    /// Operand dimensions disagree.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// State or probability data violates an invariant.
    #[error("invalid state: {0}")]
    InvalidState(String),

    /// Calibration data violates its invariants or is missing an entry.
    #[error("calibration: {0}")]
    Calibration(String),

    /// A Kraus set failed the trace-preservation check.
    #[error("channel not trace-preserving: deviation {0:.3e}")]
    NotTracePreserving(f64),
}
