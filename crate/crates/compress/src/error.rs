//! Error type for circuit construction and experiment assembly.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CompressError {
    /// Compression failed to disentangle the trash qubit — the angles are
    /// inconsistent with the circuit.
    #[error("trash qubit not disentangled: |0> fidelity {fidelity} below {required}")]
    NotDisentangled { fidelity: f64, required: f64 },

    /// An unknown label string was given.
    #[error("unknown input-state label '{0}'")]
    UnknownLabel(String),

    /// A name or gate outside what the experiment assembly supports.
    #[error("{0}")]
    Unsupported(String),

    #[error(transparent)]
    Core(#[from] qcflate_core::CoreError),

    #[error(transparent)]
    Sim(#[from] qcflate_sim::SimError),

    #[error(transparent)]
    Transpile(#[from] qcflate_transpile::TranspileError),
}

pub type Result<T> = std::result::Result<T, CompressError>;
