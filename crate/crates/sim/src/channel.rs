//! Quantum channels as Kraus-operator sets.

use num_complex::Complex;
use qcflate_core::{C64, Mat};

use crate::error::SimError;

/// Trace-preservation tolerance for channel construction.
pub const CHANNEL_TOL: f64 = 1e-10;

/// A completely positive trace-preserving map given by Kraus operators,
/// each `2^k x 2^k` for a k-qubit channel.
#[derive(Clone, Debug)]
pub struct KrausChannel {
    operators: Vec<Mat>,
}

impl KrausChannel {
    /// Build from operators, checking shapes and `sum K†K = I`.
    pub fn new(operators: Vec<Mat>) -> Result<Self, SimError> {
        let dim = match operators.first() {
            Some(k) => k.rows(),
            None => return Err(SimError::InvalidState("empty Kraus set".into())),
        };
        if !dim.is_power_of_two() || dim == 0 {
            return Err(SimError::InvalidState(format!(
                "Kraus operator dimension {dim} not a power of two"
            )));
        }
        let mut sum = Mat::zeros(dim, dim);
        for k in &operators {
            if k.rows() != dim || k.cols() != dim {
                return Err(SimError::DimensionMismatch(
                    "Kraus operators differ in shape".into(),
                ));
            }
            sum = sum.add(&k.adjoint().mul(k));
        }
        let dev = sum.max_abs_diff(&Mat::identity(dim));
        if dev > CHANNEL_TOL {
            return Err(SimError::NotTracePreserving(dev));
        }
        Ok(KrausChannel { operators })
    }

    /// The identity channel on `k` qubits.
    pub fn identity(k: usize) -> Self {
        KrausChannel {
            operators: vec![Mat::identity(1 << k)],
        }
    }

    pub fn operators(&self) -> &[Mat] {
        &self.operators
    }

    /// Number of qubits the channel acts on.
    pub fn num_qubits(&self) -> usize {
        self.operators[0].rows().trailing_zeros() as usize
    }
}

fn re(x: f64) -> C64 {
    Complex::new(x, 0.0)
}

/// Thermal relaxation over a gate of the given duration: amplitude damping
/// with decay probability `1 - exp(-d/T1)` composed with the pure dephasing
/// that brings the total off-diagonal decay to `exp(-d/T2)`.
///
/// Times are in the units the calibration uses: `T1`, `T2` in microseconds,
/// `duration` in nanoseconds.  Requires `0 < T2 <= 2*T1`.
pub fn thermal_relaxation_channel(
    t1_us: f64,
    t2_us: f64,
    duration_ns: f64,
) -> Result<KrausChannel, SimError> {
    if !(t1_us > 0.0) {
        return Err(SimError::Calibration(format!("T1 = {t1_us} must be > 0")));
    }
    if !(t2_us > 0.0 && t2_us <= 2.0 * t1_us) {
        return Err(SimError::Calibration(format!(
            "T2 = {t2_us} must satisfy 0 < T2 <= 2*T1 (T1 = {t1_us})"
        )));
    }
    if !(duration_ns >= 0.0) {
        return Err(SimError::Calibration(format!(
            "duration {duration_ns} must be >= 0"
        )));
    }
    let d_us = duration_ns * 1e-3;
    let gamma = 1.0 - (-d_us / t1_us).exp();
    // Amplitude damping alone shrinks coherence by sqrt(1-gamma) =
    // exp(-d/2T1); the residual dephasing closes the gap to exp(-d/T2).
    let lambda = 1.0 - (d_us / t1_us - 2.0 * d_us / t2_us).exp();
    let lambda = lambda.clamp(0.0, 1.0);

    // Product Kraus set of AD{K0,K1} after PD{P0,P1}, zero operators dropped.
    let mut ops = Vec::new();
    let mut diag = Mat::zeros(2, 2);
    diag[(0, 0)] = re(1.0);
    diag[(1, 1)] = re(((1.0 - gamma) * (1.0 - lambda)).sqrt());
    ops.push(diag);
    if lambda > 0.0 {
        let mut k = Mat::zeros(2, 2);
        k[(1, 1)] = re(((1.0 - gamma) * lambda).sqrt());
        ops.push(k);
    }
    if gamma > 0.0 {
        let mut k = Mat::zeros(2, 2);
        k[(0, 1)] = re((gamma * (1.0 - lambda)).sqrt());
        ops.push(k);
        if lambda > 0.0 {
            let mut k = Mat::zeros(2, 2);
            k[(0, 1)] = re((gamma * lambda).sqrt());
            ops.push(k);
        }
    }
    KrausChannel::new(ops)
}

/// The four single-qubit Pauli matrices `[I, X, Y, Z]`.
pub fn pauli_1q() -> [Mat; 4] {
    let i = Mat::identity(2);
    let mut x = Mat::zeros(2, 2);
    x[(0, 1)] = re(1.0);
    x[(1, 0)] = re(1.0);
    let mut y = Mat::zeros(2, 2);
    y[(0, 1)] = Complex::new(0.0, -1.0);
    y[(1, 0)] = Complex::new(0.0, 1.0);
    let mut z = Mat::zeros(2, 2);
    z[(0, 0)] = re(1.0);
    z[(1, 1)] = re(-1.0);
    [i, x, y, z]
}

/// Depolarizing channel on `k` qubits (`k` in {1, 2}):
/// `rho -> (1-p) rho + p/(4^k - 1) * sum_{P != I} P rho P`.
pub fn depolarizing_channel(p: f64, k: usize) -> Result<KrausChannel, SimError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(SimError::Calibration(format!(
            "depolarizing probability {p} outside [0,1]"
        )));
    }
    if !(k == 1 || k == 2) {
        return Err(SimError::Calibration(format!(
            "depolarizing channel supports 1 or 2 qubits, got {k}"
        )));
    }
    let paulis = pauli_1q();
    let mut basis: Vec<Mat> = Vec::new();
    if k == 1 {
        basis.extend(paulis.iter().cloned());
    } else {
        for hi in &paulis {
            for lo in &paulis {
                // Operand 0 of the channel is the local LSB.
                basis.push(hi.kron(lo));
            }
        }
    }
    let count = basis.len() as f64 - 1.0;
    let mut ops = Vec::new();
    for (idx, b) in basis.into_iter().enumerate() {
        let w = if idx == 0 {
            (1.0 - p).sqrt()
        } else {
            (p / count).sqrt()
        };
        if w > 0.0 {
            ops.push(b.scale(re(w)));
        }
    }
    KrausChannel::new(ops)
}

/// Bit-flip channel `{sqrt(1-p) I, sqrt(p) X}`, used for reset error.
pub fn bit_flip_channel(p: f64) -> Result<KrausChannel, SimError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(SimError::Calibration(format!(
            "bit-flip probability {p} outside [0,1]"
        )));
    }
    let [i, x, _, _] = pauli_1q();
    let mut ops = vec![i.scale(re((1.0 - p).sqrt()))];
    if p > 0.0 {
        ops.push(x.scale(re(p.sqrt())));
    }
    KrausChannel::new(ops)
}

/// Reset-to-|0> as a two-operator measurement-and-flip channel:
/// `{|0><0|, |0><1|}`.
pub fn reset_channel() -> KrausChannel {
    let mut k0 = Mat::zeros(2, 2);
    k0[(0, 0)] = re(1.0);
    let mut k1 = Mat::zeros(2, 2);
    k1[(0, 1)] = re(1.0);
    KrausChannel::new(vec![k0, k1]).expect("reset channel is trace-preserving")
}

/// Computational-basis dephasing `{|0><0|, |1><1|}`: the channel of an
/// unrecorded measurement.
pub fn measurement_channel() -> KrausChannel {
    let mut p0 = Mat::zeros(2, 2);
    p0[(0, 0)] = re(1.0);
    let mut p1 = Mat::zeros(2, 2);
    p1[(1, 1)] = re(1.0);
    KrausChannel::new(vec![p0, p1]).expect("projective channel is trace-preserving")
}
