//! Measurement settings for two-qubit Pauli tomography.
//!
//! A setting names one Pauli basis per qubit.  Its label writes the qubit-1
//! basis first — the same order bitstrings use, where qubit 0 is the
//! rightmost character.  Measuring in the X basis takes a Hadamard; the Y
//! basis takes `Rz(-pi/2)` then a Hadamard; Z needs nothing.

use qcflate_core::Circuit;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;

/// One single-qubit measurement basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PauliBasis {
    X,
    Y,
    Z,
}

impl PauliBasis {
    pub const ALL: [PauliBasis; 3] = [PauliBasis::X, PauliBasis::Y, PauliBasis::Z];

    pub fn letter(self) -> char {
        match self {
            PauliBasis::X => 'X',
            PauliBasis::Y => 'Y',
            PauliBasis::Z => 'Z',
        }
    }

    pub fn from_letter(c: char) -> Option<PauliBasis> {
        match c {
            'X' => Some(PauliBasis::X),
            'Y' => Some(PauliBasis::Y),
            'Z' => Some(PauliBasis::Z),
            _ => None,
        }
    }

    /// Append the rotation mapping this basis onto the computational one.
    fn rotate_into_z(self, circuit: &mut Circuit, q: usize) {
        match self {
            PauliBasis::X => circuit.h(q),
            PauliBasis::Y => {
                circuit.rz(-FRAC_PI_2, q);
                circuit.h(q);
            }
            PauliBasis::Z => {}
        }
    }
}

/// A two-qubit measurement setting: a basis per qubit of the measured pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TomographySetting {
    /// Basis measured on the higher qubit of the pair.
    pub q1: PauliBasis,
    /// Basis measured on the lower qubit of the pair.
    pub q0: PauliBasis,
}

impl TomographySetting {
    /// Two-letter label, qubit-1 basis first (e.g. "XZ" = X on qubit 1).
    pub fn label(&self) -> String {
        format!("{}{}", self.q1.letter(), self.q0.letter())
    }

    pub fn from_label(label: &str) -> Option<TomographySetting> {
        let mut chars = label.chars();
        let q1 = PauliBasis::from_letter(chars.next()?)?;
        let q0 = PauliBasis::from_letter(chars.next()?)?;
        if chars.next().is_some() {
            return None;
        }
        Some(TomographySetting { q1, q0 })
    }

    /// Extend `base` into this setting's measurement circuit: basis
    /// rotations on the measured pair, then a computational-basis
    /// measurement of exactly those two qubits into clbits 0 and 1.
    ///
    /// `pair = [low, high]`: `pair[0]` is read out as bit 0.
    pub fn measurement_circuit(&self, base: &Circuit, pair: [usize; 2]) -> Circuit {
        let mut out = Circuit::new(base.num_qubits(), 2);
        for ins in base.instructions() {
            out.push(ins.kind, &ins.qubits);
        }
        self.q0.rotate_into_z(&mut out, pair[0]);
        self.q1.rotate_into_z(&mut out, pair[1]);
        out.measure(pair[0], 0);
        out.measure(pair[1], 1);
        out
    }
}

/// The full 3x3 grid of settings, in label order XX, XY, ... ZZ.
pub fn tomography_settings() -> Vec<TomographySetting> {
    let mut out = Vec::with_capacity(9);
    for q1 in PauliBasis::ALL {
        for q0 in PauliBasis::ALL {
            out.push(TomographySetting { q1, q0 });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use qcflate_sim::{run_ideal, StateVector};

    #[test]
    fn nine_settings_in_label_order() {
        let settings = tomography_settings();
        assert_eq!(settings.len(), 9);
        let labels: Vec<String> = settings.iter().map(|s| s.label()).collect();
        assert_eq!(
            labels,
            ["XX", "XY", "XZ", "YX", "YY", "YZ", "ZX", "ZY", "ZZ"]
        );
        for s in &settings {
            assert_eq!(TomographySetting::from_label(&s.label()), Some(*s));
        }
    }

    #[test]
    fn zz_adds_no_rotations() {
        let base = Circuit::new(2, 0);
        let zz = TomographySetting::from_label("ZZ").unwrap();
        let c = zz.measurement_circuit(&base, [0, 1]);
        assert_eq!(c.gate_counts().get("measure"), Some(&2));
        assert_eq!(c.instructions().len(), 2);
    }

    #[test]
    fn xx_setting_makes_plus_plus_deterministic() {
        let mut base = Circuit::new(2, 0);
        base.h(0);
        base.h(1);
        let xx = TomographySetting::from_label("XX").unwrap();
        let c = xx.measurement_circuit(&base, [0, 1]);
        // strip the measurements to inspect the pre-measurement state
        let mut unitary_part = Circuit::new(2, 0);
        for ins in c.instructions() {
            if ins.kind.is_unitary() {
                unitary_part.push(ins.kind, &ins.qubits);
            }
        }
        let out = run_ideal(&unitary_part, &StateVector::zero_state(2)).unwrap();
        let probs = out.probabilities();
        assert!((probs[0] - 1.0).abs() < 1e-12, "probs {probs:?}");
    }

    #[test]
    fn measurement_reads_the_requested_pair() {
        let base = Circuit::new(3, 0);
        let zz = TomographySetting::from_label("ZZ").unwrap();
        let c = zz.measurement_circuit(&base, [0, 2]);
        let measured: Vec<usize> = c
            .instructions()
            .iter()
            .filter(|i| !i.kind.is_unitary())
            .map(|i| i.qubits[0])
            .collect();
        assert_eq!(measured, vec![0, 2]);
    }
}
