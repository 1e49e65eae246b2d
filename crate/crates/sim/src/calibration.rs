//! Device calibration data and the noise model derived from it.

use serde::{Deserialize, Serialize};

use qcflate_core::{GateKind, Instruction};

use crate::channel::{depolarizing_channel, thermal_relaxation_channel, KrausChannel};
use crate::error::SimError;

/// Per-qubit relaxation times and readout error probabilities.
///
/// `readout_p01` is the probability that a qubit in |0> is read out as 1;
/// `readout_p10` the probability that |1> reads as 0.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QubitCalibration {
    pub t1_us: f64,
    pub t2_us: f64,
    pub readout_p01: f64,
    pub readout_p10: f64,
}

/// Duration and depolarizing error shared by all single-qubit gates.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Gate1qCalibration {
    pub duration_ns: f64,
    pub depolarizing: f64,
}

/// Per-edge CNOT duration and depolarizing error.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CnotCalibration {
    pub edge: [usize; 2],
    pub duration_ns: f64,
    pub depolarizing: f64,
}

/// Complete calibration snapshot for one backend, as loaded from JSON.
/// Unknown fields are rejected.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalibrationData {
    pub backend: String,
    pub qubits: Vec<QubitCalibration>,
    pub gates_1q: Gate1qCalibration,
    pub cnot: Vec<CnotCalibration>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reset_error: Option<f64>,
}

fn prob(x: f64, what: &str) -> Result<(), SimError> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(SimError::Calibration(format!("{what} = {x} outside [0,1]")))
    }
}

impl CalibrationData {
    /// Parse and validate a JSON document.
    pub fn from_json(text: &str) -> Result<Self, SimError> {
        let cal: CalibrationData =
            serde_json::from_str(text).map_err(|e| SimError::Calibration(e.to_string()))?;
        cal.validate()?;
        Ok(cal)
    }

    /// Check every invariant: positive T1, `0 < T2 <= 2*T1`, probabilities in
    /// [0,1], durations non-negative, edges in range and free of duplicates.
    pub fn validate(&self) -> Result<(), SimError> {
        if self.qubits.is_empty() {
            return Err(SimError::Calibration("no qubits".into()));
        }
        for (i, q) in self.qubits.iter().enumerate() {
            if !(q.t1_us > 0.0) {
                return Err(SimError::Calibration(format!("qubit {i}: T1 must be > 0")));
            }
            if !(q.t2_us > 0.0 && q.t2_us <= 2.0 * q.t1_us) {
                return Err(SimError::Calibration(format!(
                    "qubit {i}: T2 = {} violates 0 < T2 <= 2*T1 (T1 = {})",
                    q.t2_us, q.t1_us
                )));
            }
            prob(q.readout_p01, &format!("qubit {i} readout_p01"))?;
            prob(q.readout_p10, &format!("qubit {i} readout_p10"))?;
        }
        if !(self.gates_1q.duration_ns >= 0.0) {
            return Err(SimError::Calibration("1q duration must be >= 0".into()));
        }
        prob(self.gates_1q.depolarizing, "1q depolarizing")?;
        for c in &self.cnot {
            let [a, b] = c.edge;
            if a == b || a >= self.qubits.len() || b >= self.qubits.len() {
                return Err(SimError::Calibration(format!("bad edge ({a},{b})")));
            }
            if !(c.duration_ns >= 0.0) {
                return Err(SimError::Calibration(format!(
                    "edge ({a},{b}): duration must be >= 0"
                )));
            }
            prob(c.depolarizing, &format!("edge ({a},{b}) depolarizing"))?;
        }
        for (i, c) in self.cnot.iter().enumerate() {
            for d in &self.cnot[..i] {
                let same = (c.edge == d.edge) || (c.edge == [d.edge[1], d.edge[0]]);
                if same {
                    return Err(SimError::Calibration(format!(
                        "duplicate edge ({},{})",
                        c.edge[0], c.edge[1]
                    )));
                }
            }
        }
        if let Some(p) = self.reset_error {
            prob(p, "reset_error")?;
        }
        Ok(())
    }

    pub fn num_qubits(&self) -> usize {
        self.qubits.len()
    }

    /// CNOT entry for a pair, orientation-insensitive.
    pub fn cnot_entry(&self, a: usize, b: usize) -> Option<&CnotCalibration> {
        self.cnot
            .iter()
            .find(|c| c.edge == [a, b] || c.edge == [b, a])
    }

    /// Readout confusion matrix of one qubit, `C[read][true]`.
    pub fn confusion(&self, q: usize) -> Result<[[f64; 2]; 2], SimError> {
        let cal = self
            .qubits
            .get(q)
            .ok_or_else(|| SimError::Calibration(format!("no calibration for qubit {q}")))?;
        Ok([
            [1.0 - cal.readout_p01, cal.readout_p10],
            [cal.readout_p01, 1.0 - cal.readout_p10],
        ])
    }
}

/// Calibration-driven noise: thermal relaxation on each operand qubit for
/// the gate's duration, then a depolarizing error, after every gate.
///
/// `scale` multiplies all depolarizing probabilities (0 disables them);
/// `idle_decay` extends relaxation to spectator qubits for the same
/// duration.
#[derive(Clone, Debug)]
pub struct NoiseModel {
    calibration: CalibrationData,
    scale: f64,
    idle_decay: bool,
}

impl NoiseModel {
    pub fn from_calibration(calibration: CalibrationData) -> Result<Self, SimError> {
        calibration.validate()?;
        Ok(NoiseModel {
            calibration,
            scale: 1.0,
            idle_decay: false,
        })
    }

    /// Multiply every depolarizing probability by `scale`.
    pub fn with_scale(mut self, scale: f64) -> Result<Self, SimError> {
        if !(scale >= 0.0) {
            return Err(SimError::Calibration(format!("scale {scale} must be >= 0")));
        }
        self.scale = scale;
        Ok(self)
    }

    /// Also decay qubits the gate does not touch, for the gate's duration.
    pub fn with_idle_decay(mut self, idle_decay: bool) -> Self {
        self.idle_decay = idle_decay;
        self
    }

    pub fn calibration(&self) -> &CalibrationData {
        &self.calibration
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Probability that a reset leaves the qubit flipped to |1>.
    pub fn reset_error(&self) -> f64 {
        self.calibration.reset_error.unwrap_or(0.0)
    }

    fn thermal_for(&self, q: usize, duration_ns: f64) -> Result<KrausChannel, SimError> {
        let cal = self
            .calibration
            .qubits
            .get(q)
            .ok_or_else(|| SimError::Calibration(format!("no calibration for qubit {q}")))?;
        thermal_relaxation_channel(cal.t1_us, cal.t2_us, duration_ns)
    }

    /// The noise channels to apply after one instruction, as
    /// `(channel, wires)` pairs in application order.
    ///
    /// Measurements, resets, and barriers carry no gate noise here (readout
    /// error enters at sampling; reset error is handled by the runner).
    pub fn channels_after(
        &self,
        ins: &Instruction,
        num_qubits: usize,
    ) -> Result<Vec<(KrausChannel, Vec<usize>)>, SimError> {
        let (duration_ns, depol, depol_wires): (f64, f64, Vec<usize>) = match ins.kind {
            GateKind::Barrier | GateKind::Measure(_) | GateKind::Reset => return Ok(Vec::new()),
            GateKind::Cnot => {
                let (a, b) = (ins.qubits[0], ins.qubits[1]);
                let entry = self.calibration.cnot_entry(a, b).ok_or_else(|| {
                    SimError::Calibration(format!("no CNOT calibration for edge ({a},{b})"))
                })?;
                (entry.duration_ns, entry.depolarizing, vec![a, b])
            }
            _ if ins.qubits.len() == 1 => (
                self.calibration.gates_1q.duration_ns,
                self.calibration.gates_1q.depolarizing,
                vec![ins.qubits[0]],
            ),
            _ => {
                return Err(SimError::Calibration(format!(
                    "no calibration for `{}`: noisy simulation expects basis-gate circuits",
                    ins.kind.name()
                )))
            }
        };
        let mut out = Vec::new();
        for &q in &ins.qubits {
            out.push((self.thermal_for(q, duration_ns)?, vec![q]));
        }
        if self.idle_decay {
            for q in 0..num_qubits {
                if !ins.qubits.contains(&q) {
                    out.push((self.thermal_for(q, duration_ns)?, vec![q]));
                }
            }
        }
        let p = (depol * self.scale).min(1.0);
        if p > 0.0 {
            out.push((depolarizing_channel(p, depol_wires.len())?, depol_wires));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_json() -> String {
        r#"{
            "backend": "test-backend",
            "qubits": [
                {"t1_us": 100.0, "t2_us": 150.0, "readout_p01": 0.01, "readout_p10": 0.02},
                {"t1_us": 90.0, "t2_us": 120.0, "readout_p01": 0.01, "readout_p10": 0.03},
                {"t1_us": 110.0, "t2_us": 100.0, "readout_p01": 0.02, "readout_p10": 0.02}
            ],
            "gates_1q": {"duration_ns": 35.0, "depolarizing": 0.0005},
            "cnot": [
                {"edge": [0, 1], "duration_ns": 300.0, "depolarizing": 0.008},
                {"edge": [1, 2], "duration_ns": 350.0, "depolarizing": 0.009}
            ]
        }"#
        .to_string()
    }

    #[test]
    fn parses_and_validates() {
        let cal = CalibrationData::from_json(&sample_json()).unwrap();
        assert_eq!(cal.backend, "test-backend");
        assert_eq!(cal.num_qubits(), 3);
        assert!(cal.cnot_entry(1, 0).is_some());
        assert!(cal.cnot_entry(0, 2).is_none());
        assert_eq!(cal.reset_error, None);
    }

    #[test]
    fn unknown_fields_rejected() {
        let bad = sample_json().replace("\"backend\"", "\"surprise\": 1, \"backend\"");
        assert!(CalibrationData::from_json(&bad).is_err());
    }

    #[test]
    fn invariants_enforced() {
        let t2_bad = sample_json().replace("\"t2_us\": 150.0", "\"t2_us\": 250.0");
        assert!(CalibrationData::from_json(&t2_bad).is_err());
        let p_bad = sample_json().replace("\"readout_p01\": 0.01", "\"readout_p01\": 1.5");
        assert!(CalibrationData::from_json(&p_bad).is_err());
        let dup = sample_json().replace("[1, 2]", "[1, 0]");
        assert!(CalibrationData::from_json(&dup).is_err());
    }

    #[test]
    fn confusion_matrix_columns_are_distributions() {
        let cal = CalibrationData::from_json(&sample_json()).unwrap();
        let c = cal.confusion(0).unwrap();
        assert!((c[0][0] + c[1][0] - 1.0).abs() < 1e-15);
        assert!((c[0][1] + c[1][1] - 1.0).abs() < 1e-15);
        assert_eq!(c[1][0], 0.01); // p(read 1 | true 0)
        assert_eq!(c[0][1], 0.02); // p(read 0 | true 1)
    }

    #[test]
    fn channels_for_cnot_use_edge_entry() {
        let cal = CalibrationData::from_json(&sample_json()).unwrap();
        let model = NoiseModel::from_calibration(cal).unwrap();
        let ins = Instruction {
            kind: GateKind::Cnot,
            qubits: vec![1, 2],
        };
        let chans = model.channels_after(&ins, 3).unwrap();
        // Thermal on each operand plus one 2q depolarizing.
        assert_eq!(chans.len(), 3);
        assert_eq!(chans[2].1, vec![1, 2]);
        assert_eq!(chans[2].0.num_qubits(), 2);

        let bad = Instruction {
            kind: GateKind::Cnot,
            qubits: vec![0, 2],
        };
        assert!(model.channels_after(&bad, 3).is_err());
    }

    #[test]
    fn scale_zero_disables_depolarizing() {
        let cal = CalibrationData::from_json(&sample_json()).unwrap();
        let model = NoiseModel::from_calibration(cal)
            .unwrap()
            .with_scale(0.0)
            .unwrap();
        let ins = Instruction {
            kind: GateKind::Sx,
            qubits: vec![0],
        };
        let chans = model.channels_after(&ins, 3).unwrap();
        assert_eq!(chans.len(), 1); // thermal only
    }

    #[test]
    fn idle_decay_touches_spectators() {
        let cal = CalibrationData::from_json(&sample_json()).unwrap();
        let model = NoiseModel::from_calibration(cal)
            .unwrap()
            .with_idle_decay(true);
        let ins = Instruction {
            kind: GateKind::Sx,
            qubits: vec![0],
        };
        let chans = model.channels_after(&ins, 3).unwrap();
        // Operand thermal + two spectator thermals + depolarizing.
        assert_eq!(chans.len(), 4);
    }

    #[test]
    fn serialization_roundtrip() {
        let cal = CalibrationData::from_json(&sample_json()).unwrap();
        let text = serde_json::to_string_pretty(&cal).unwrap();
        let back = CalibrationData::from_json(&text).unwrap();
        assert_eq!(back.qubits.len(), cal.qubits.len());
        assert_eq!(back.cnot[1].duration_ns, cal.cnot[1].duration_ns);
    }
}
