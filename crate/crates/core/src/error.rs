//! Error type shared by the circuit IR and its serializers.

use thiserror::Error;

/// Errors produced while building, analyzing, or (de)serializing circuits.
#[derive(Debug, Error)]
pub enum CoreError {
    /// An instruction referenced a qubit or classical bit out of range, had
    /// the wrong operand count, or repeated an operand.
    #[error("invalid instruction: {0}")]
    InvalidInstruction(String),

    /// A matrix was requested for a non-unitary kind (measure/reset/barrier).
    #[error("`{0}` has no unitary matrix")]
    NoMatrix(&'static str),

    /// A dense-matrix operation was asked for on too many qubits.
    #[error("operation `{what}` limited to {limit} qubits, circuit has {got}")]
    WidthExceeded {
        what: &'static str,
        limit: usize,
        got: usize,
    },

    /// Adjoint or unitary requested for a circuit with non-unitary content.
    #[error("circuit is not unitary: instruction {index} is `{name}`")]
    NonUnitary { index: usize, name: &'static str },

    /// QASM import failure, with a 1-based source line number.
    #[error("qasm line {line}: {message}")]
    QasmParse { line: usize, message: String },
}
