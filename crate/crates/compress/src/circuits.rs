//! The compression circuit, its adjoint, and the derived experiment
//! circuits.
//!
//! The compression block maps |psi>^(x3) onto qubits 0 and 1, leaving qubit
//! 2 in |0>: a CNOT/controlled-H prefix rotates the register into the
//! symmetric-subspace coordinates, a Toffoli and CNOT reorder the basis,
//! and two controlled rotations disentangle the trash wire.

use crate::error::{CompressError, Result};
use crate::labels::{bloch_prep_unitary, InputStateLabel};
use qcflate_core::{C64, Circuit};
use qcflate_sim::{run_ideal, StateVector};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Fidelity the trash qubit must reach toward |0> for a state extraction
/// to be accepted.
pub const DISENTANGLE_TOL: f64 = 1e-9;

/// The two controlled-rotation angles of the compression circuit.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompressionAngles {
    /// Angle of the CU3 controlled by qubit 0.
    pub theta1: f64,
    /// Angle of the CU3 controlled by qubit 1.
    pub theta2: f64,
}

/// Exact disentangling angles: `2*acos(1/sqrt(3))` and `2*asin(1/sqrt(3))`.
///
/// These satisfy the trash-qubit invariant to machine precision; printed to
/// two decimals they are the familiar 1.91 and 1.23.
pub fn compression_angles() -> CompressionAngles {
    let s = 1.0 / 3f64.sqrt();
    CompressionAngles {
        theta1: 2.0 * s.acos(),
        theta2: 2.0 * s.asin(),
    }
}

/// The two-decimal angles as printed in circuit diagrams; useful for
/// literal reproduction, at the cost of ~1e-6 disentanglement error.
pub fn paper_angles() -> CompressionAngles {
    CompressionAngles {
        theta1: 1.91,
        theta2: 1.23,
    }
}

/// The 3-qubit compression circuit with the given rotation angles.
pub fn build_compression_circuit_with(angles: CompressionAngles) -> Circuit {
    let mut c = Circuit::new(3, 0);
    c.cx(0, 1);
    c.ch(1, 0);
    c.ccx(1, 2, 0);
    c.cx(2, 1);
    c.cu3(angles.theta1, PI, PI, 0, 2);
    c.cu3(angles.theta2, 0.0, PI, 1, 2);
    c
}

/// The 3-qubit compression circuit with exact angles.
pub fn build_compression_circuit() -> Circuit {
    build_compression_circuit_with(compression_angles())
}

/// The adjoint of the compression circuit (decompression), exact angles.
pub fn build_decompression_circuit() -> Circuit {
    build_decompression_circuit_with(compression_angles())
}

/// The adjoint of the compression circuit with the given angles.
pub fn build_decompression_circuit_with(angles: CompressionAngles) -> Circuit {
    build_compression_circuit_with(angles)
        .adjoint()
        .expect("compression circuit is unitary")
}

/// Identical single-qubit preparation on all three wires.
pub fn prep_circuit(label: InputStateLabel) -> Circuit {
    let gate = label.prep_unitary();
    let mut c = Circuit::new(3, 0);
    for q in 0..3 {
        c.push(gate, &[q]);
    }
    c
}

/// The inverse preparation on all three wires.
pub fn adjoint_prep_circuit(label: InputStateLabel) -> Circuit {
    prep_circuit(label)
        .adjoint()
        .expect("preparation is unitary")
}

/// The full six-stage round-trip circuit for one labeled input:
/// prepare, compress, reset the trash qubit, decompress, un-prepare,
/// measure — with a barrier between each pair of stages.
pub fn build_compdecomp_circuit(label: InputStateLabel) -> Circuit {
    build_compdecomp_circuit_with(label, compression_angles())
}

/// Same as [`build_compdecomp_circuit`] with explicit angles.
pub fn build_compdecomp_circuit_with(label: InputStateLabel, angles: CompressionAngles) -> Circuit {
    let mut c = Circuit::new(3, 3);
    c.append(&prep_circuit(label));
    c.barrier_all();
    c.append(&build_compression_circuit_with(angles));
    c.barrier_all();
    c.reset(2);
    c.barrier_all();
    c.append(&build_decompression_circuit_with(angles));
    c.barrier_all();
    c.append(&adjoint_prep_circuit(label));
    c.barrier_all();
    c.measure_all();
    c
}

/// Run prep + compression on |000> and return the final 3-qubit state.
fn compressed_full_state(prep: &Circuit, angles: CompressionAngles) -> Result<StateVector> {
    let mut c = Circuit::new(3, 0);
    c.append(prep);
    c.append(&build_compression_circuit_with(angles));
    Ok(run_ideal(&c, &StateVector::zero_state(3))?)
}

/// Extract the kept pair (qubits 0 and 1) from a 3-qubit state whose qubit
/// 2 must already be |0>; errors if the trash qubit holds any weight.
fn extract_kept_pair(full: &StateVector) -> Result<StateVector> {
    let p1 = full.prob_one(2);
    if p1 > DISENTANGLE_TOL {
        return Err(CompressError::NotDisentangled {
            fidelity: 1.0 - p1,
            required: 1.0 - DISENTANGLE_TOL,
        });
    }
    // qubit 2 is the high bit, so the q2=0 block is the first four amplitudes
    let amps: Vec<C64> = full.amplitudes()[..4].to_vec();
    Ok(StateVector::normalized(amps)?)
}

/// The ideal two-qubit compressed state for a labeled input (exact angles).
pub fn ideal_compressed_state(label: InputStateLabel) -> Result<StateVector> {
    let (theta, phi) = label.bloch_angles();
    ideal_compressed_state_bloch(theta, phi)
}

/// The ideal two-qubit compressed state for an arbitrary Bloch input.
pub fn ideal_compressed_state_bloch(theta: f64, phi: f64) -> Result<StateVector> {
    let gate = bloch_prep_unitary(theta, phi);
    let mut prep = Circuit::new(3, 0);
    for q in 0..3 {
        prep.push(gate, &[q]);
    }
    let full = compressed_full_state(&prep, compression_angles())?;
    extract_kept_pair(&full)
}
