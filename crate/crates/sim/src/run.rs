//! Circuit execution: ideal statevector runs and noisy density-matrix runs.

use num_complex::Complex;
use qcflate_core::{gate_matrix, Circuit, GateKind};

use crate::calibration::NoiseModel;
use crate::channel::{measurement_channel, reset_channel};
use crate::density::{DensityMatrix, MAX_DENSITY_QUBITS};
use crate::error::SimError;
use crate::state::{StateVector, MAX_STATEVECTOR_QUBITS};

/// How deterministic a qubit must be for a statevector reset to be legal:
/// the smaller of p(0) and p(1) must not exceed this.
pub const RESET_DETERMINISM_TOL: f64 = 1e-6;

/// Run a circuit on a pure state.
///
/// Unitaries are applied by local gate application; barriers are skipped.
/// Measurements are allowed only in a trailing measure/barrier block (they
/// leave the state untouched there — sampling happens separately); a
/// mid-circuit measurement is an unsupported-mode error.  A reset is legal
/// only when the qubit's outcome is deterministic within
/// [`RESET_DETERMINISM_TOL`], in which case the state is projected (and
/// flipped if the qubit was |1>) and renormalized.
pub fn run_ideal(circuit: &Circuit, input: &StateVector) -> Result<StateVector, SimError> {
    if circuit.num_qubits() > MAX_STATEVECTOR_QUBITS {
        return Err(SimError::WidthExceeded {
            mode: "statevector",
            limit: MAX_STATEVECTOR_QUBITS,
            got: circuit.num_qubits(),
        });
    }
    if input.num_qubits() != circuit.num_qubits() {
        return Err(SimError::DimensionMismatch(format!(
            "input has {} qubits, circuit {}",
            input.num_qubits(),
            circuit.num_qubits()
        )));
    }
    let tail = trailing_measure_start(circuit);
    let mut state = input.clone();
    for (index, ins) in circuit.instructions().iter().enumerate() {
        match ins.kind {
            GateKind::Barrier => {}
            GateKind::Measure(_) => {
                if index < tail {
                    return Err(SimError::UnsupportedMode {
                        mode: "statevector",
                        what: format!("mid-circuit measurement at instruction {index}"),
                    });
                }
            }
            GateKind::Reset => {
                deterministic_reset(&mut state, ins.qubits[0])?;
            }
            kind => {
                let g = gate_matrix::<f64>(&kind).expect("unitary kind");
                state.apply_unitary(&g, &ins.qubits);
            }
        }
    }
    let norm = state.norm();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(SimError::InvalidState(format!(
            "norm drifted to {norm} during ideal run"
        )));
    }
    Ok(state)
}

/// Index of the first instruction of the trailing measure/barrier block
/// (`len` if the circuit ends with something else).
fn trailing_measure_start(circuit: &Circuit) -> usize {
    let mut start = circuit.len();
    for (i, ins) in circuit.instructions().iter().enumerate().rev() {
        if matches!(ins.kind, GateKind::Measure(_) | GateKind::Barrier) {
            start = i;
        } else {
            break;
        }
    }
    start
}

fn deterministic_reset(state: &mut StateVector, q: usize) -> Result<(), SimError> {
    let p_one = state.prob_one(q);
    if p_one.min(1.0 - p_one) > RESET_DETERMINISM_TOL {
        return Err(SimError::NonDeterministicReset { qubit: q, p_one });
    }
    if p_one > 0.5 {
        let x = gate_matrix::<f64>(&GateKind::X).expect("x");
        state.apply_unitary(&x, &[q]);
    }
    // Project out the residual |1> component and renormalize.
    let bit = 1usize << q;
    let mut amps = state.amplitudes().to_vec();
    for (i, a) in amps.iter_mut().enumerate() {
        if i & bit != 0 {
            *a = Complex::new(0.0, 0.0);
        }
    }
    *state = StateVector::normalized(amps)?;
    Ok(())
}

/// Run a circuit on a density matrix, optionally with calibration noise.
///
/// Unitaries act by conjugation; after each gate its noise channels
/// (thermal relaxation per operand qubit, then depolarizing) are applied.
/// A measurement dephases its qubit in the computational basis (the channel
/// of an unrecorded measurement); a reset applies the two-operator
/// measurement-and-flip channel, followed by a bit flip with the
/// calibration's `reset_error` probability if one is configured.
pub fn run_density(
    circuit: &Circuit,
    noise: Option<&NoiseModel>,
    input: &DensityMatrix,
) -> Result<DensityMatrix, SimError> {
    if circuit.num_qubits() > MAX_DENSITY_QUBITS {
        return Err(SimError::WidthExceeded {
            mode: "density",
            limit: MAX_DENSITY_QUBITS,
            got: circuit.num_qubits(),
        });
    }
    if input.num_qubits() != circuit.num_qubits() {
        return Err(SimError::DimensionMismatch(format!(
            "input has {} qubits, circuit {}",
            input.num_qubits(),
            circuit.num_qubits()
        )));
    }
    let mut rho = input.clone();
    for ins in circuit.instructions() {
        match ins.kind {
            GateKind::Barrier => {}
            GateKind::Measure(_) => {
                rho.apply_kraus(measurement_channel().operators(), &ins.qubits);
            }
            GateKind::Reset => {
                rho.apply_kraus(reset_channel().operators(), &ins.qubits);
                if let Some(model) = noise {
                    let p = model.reset_error();
                    if p > 0.0 {
                        let flip = crate::channel::bit_flip_channel(p)?;
                        rho.apply_kraus(flip.operators(), &ins.qubits);
                    }
                }
            }
            kind => {
                let g = gate_matrix::<f64>(&kind).expect("unitary kind");
                rho.apply_unitary(&g, &ins.qubits);
                if let Some(model) = noise {
                    for (channel, wires) in model.channels_after(ins, circuit.num_qubits())? {
                        rho.apply_kraus(channel.operators(), &wires);
                    }
                }
            }
        }
    }
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > 1e-9 || tr.im.abs() > 1e-9 {
        return Err(SimError::InvalidState(format!(
            "trace drifted to {tr} during density run"
        )));
    }
    Ok(rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calibration::CalibrationData;
    use qcflate_core::Circuit;

    fn fig_style_bell(n: usize) -> Circuit {
        let mut c = Circuit::new(n, 0);
        c.h(0);
        for q in 1..n {
            c.cx(0, q);
        }
        c
    }

    #[test]
    fn empty_circuit_is_identity() {
        let c = Circuit::new(3, 0);
        let out = run_ideal(&c, &StateVector::zero_state(3)).unwrap();
        assert_eq!(out.amplitudes()[0].re, 1.0);
    }

    #[test]
    fn trailing_measures_allowed_mid_circuit_rejected() {
        let mut ok = fig_style_bell(2);
        ok.barrier_all();
        let mut ok = {
            let mut c = Circuit::new(2, 2);
            c.append(&ok);
            c
        };
        ok.measure_all();
        assert!(run_ideal(&ok, &StateVector::zero_state(2)).is_ok());

        let mut bad = Circuit::new(2, 2);
        bad.h(0);
        bad.measure(0, 0);
        bad.h(1);
        match run_ideal(&bad, &StateVector::zero_state(2)) {
            Err(SimError::UnsupportedMode { .. }) => {}
            other => panic!("expected unsupported-mode error, got {other:?}"),
        }
    }

    #[test]
    fn reset_on_deterministic_qubit() {
        let mut c = Circuit::new(2, 0);
        c.x(0);
        c.reset(0);
        let out = run_ideal(&c, &StateVector::zero_state(2)).unwrap();
        assert!((out.amplitudes()[0].re - 1.0).abs() < 1e-12);

        let mut bad = Circuit::new(1, 0);
        bad.h(0);
        bad.reset(0);
        match run_ideal(&bad, &StateVector::zero_state(1)) {
            Err(SimError::NonDeterministicReset { qubit: 0, .. }) => {}
            other => panic!("expected reset error, got {other:?}"),
        }
    }

    #[test]
    fn zero_noise_density_matches_statevector_projector() {
        let mut c = fig_style_bell(3);
        c.u3(0.7, 0.2, -0.5, 1);
        c.sx(2);
        c.rz(1.1, 0);
        let psi = run_ideal(&c, &StateVector::zero_state(3)).unwrap();
        let rho = run_density(&c, None, &StateVector::zero_state(3).to_density()).unwrap();
        assert!(rho.matrix().max_abs_diff(psi.to_density().matrix()) < 1e-10);
    }

    fn small_calibration() -> CalibrationData {
        CalibrationData::from_json(
            r#"{
                "backend": "unit-test",
                "qubits": [
                    {"t1_us": 50.0, "t2_us": 70.0, "readout_p01": 0.0, "readout_p10": 0.0},
                    {"t1_us": 50.0, "t2_us": 70.0, "readout_p01": 0.0, "readout_p10": 0.0}
                ],
                "gates_1q": {"duration_ns": 50.0, "depolarizing": 0.001},
                "cnot": [{"edge": [0, 1], "duration_ns": 400.0, "depolarizing": 0.01}]
            }"#,
        )
        .unwrap()
    }

    #[test]
    fn noise_degrades_purity_and_keeps_physicality() {
        let c = fig_style_bell(2);
        let model = NoiseModel::from_calibration(small_calibration()).unwrap();
        let rho = run_density(&c, Some(&model), &StateVector::zero_state(2).to_density()).unwrap();
        assert!(rho.purity() < 1.0 - 1e-4, "purity {}", rho.purity());
        rho.validate_physical().unwrap();
        assert!((rho.trace().re - 1.0).abs() < 1e-10);
    }

    #[test]
    fn noise_on_uncalibrated_edge_errors() {
        let mut c = Circuit::new(2, 0);
        c.cx(1, 0); // orientation-insensitive lookup: fine
        let model = NoiseModel::from_calibration(small_calibration()).unwrap();
        assert!(run_density(&c, Some(&model), &StateVector::zero_state(2).to_density()).is_ok());
        let mut c3 = Circuit::new(2, 0);
        c3.swap(0, 1); // not a calibrated basis gate
        assert!(run_density(&c3, Some(&model), &StateVector::zero_state(2).to_density()).is_err());
    }

    #[test]
    fn density_reset_with_error_probability() {
        let cal_text = r#"{
            "backend": "unit-test",
            "qubits": [{"t1_us": 50.0, "t2_us": 70.0, "readout_p01": 0.0, "readout_p10": 0.0}],
            "gates_1q": {"duration_ns": 50.0, "depolarizing": 0.0},
            "cnot": [],
            "reset_error": 0.25
        }"#;
        let model =
            NoiseModel::from_calibration(CalibrationData::from_json(cal_text).unwrap()).unwrap();
        let mut c = Circuit::new(1, 0);
        c.x(0);
        c.reset(0);
        let rho = run_density(&c, Some(&model), &StateVector::zero_state(1).to_density()).unwrap();
        assert!((rho.matrix()[(1, 1)].re - 0.25).abs() < 1e-12);
    }
}
