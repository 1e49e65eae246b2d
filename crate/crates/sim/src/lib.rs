//! Quantum-circuit simulation for the qcflate workspace: ideal statevector
//! runs, noisy density-matrix runs driven by device calibration data, shot
//! sampling with readout error, and state metrics.
//!
//! The noise model is deliberately small: after each gate, thermal
//! relaxation acts on the gate's operand qubits for the gate's calibrated
//! duration, followed by a depolarizing error; readout error perturbs
//! sampled counts through per-qubit confusion matrices.  That is enough to
//! reproduce the qualitative orderings the experiments care about without
//! pretending to model any specific device exactly.

pub mod calibration;
pub mod channel;
pub mod density;
pub mod error;
pub mod fidelity;
pub mod run;
pub mod sample;
pub mod state;

pub use calibration::{CalibrationData, NoiseModel};
pub use channel::{
    bit_flip_channel, depolarizing_channel, measurement_channel, reset_channel,
    thermal_relaxation_channel, KrausChannel,
};
pub use density::{DensityMatrix, MAX_DENSITY_QUBITS};
pub use error::SimError;
pub use fidelity::{state_fidelity, StateRef};
pub use run::{run_density, run_ideal, RESET_DETERMINISM_TOL};
pub use sample::{bitstring, sample_shots, Confusion, ShotResult};
pub use state::{StateVector, MAX_STATEVECTOR_QUBITS};
