//! Assembly of the two hardware experiments: compressed-state tomography
//! and the compress–reset–decompress round trip, each transpiled for a
//! target topology with either the generic or the hand-staged strategy.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use crate::circuits::{
    build_compdecomp_circuit_with, build_compression_circuit_with, ideal_compressed_state,
    prep_circuit, CompressionAngles,
};
use crate::error::{CompressError, Result};
use crate::labels::InputStateLabel;
use qcflate_core::{Circuit, GateKind};
use qcflate_sim::StateVector;
use qcflate_tomo::tomography_settings;
use qcflate_transpile::euler::decompose_u3_to_basis;
use qcflate_transpile::{
    best_of_trials_cascade, efficient_pipeline, end_to_end_fidelity, Coupling, PassConfig,
    Transpiled,
};
use serde::{Deserialize, Serialize};

/// Trial budget of the generic strategy when none is requested.
pub const DEFAULT_TRIALS: usize = 100;

/// Per-segment trial budget of the staged strategy when none is requested.
pub const EFFICIENT_SEGMENT_TRIALS: usize = 8;

/// Wiring graph of the three-qubit device an experiment targets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    /// Every pair of qubits is coupled.
    Triangle,
    /// Only 0–1 and 1–2 are coupled.
    Line,
}

impl Backend {
    pub const ALL: [Backend; 2] = [Backend::Triangle, Backend::Line];

    pub fn name(self) -> &'static str {
        match self {
            Backend::Triangle => "triangle",
            Backend::Line => "line",
        }
    }

    pub fn parse(name: &str) -> Result<Backend> {
        Backend::ALL
            .into_iter()
            .find(|b| b.name() == name)
            .ok_or_else(|| CompressError::Unsupported(format!("unknown backend '{name}'")))
    }

    pub fn coupling(self) -> Coupling {
        match self {
            Backend::Triangle => Coupling::ring(3),
            Backend::Line => Coupling::line(3),
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// How the compression block is fitted to the device.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// Best of many seeded full-circuit transpiles.
    Default,
    /// Stage-by-stage transpilation stitched through wire relabeling, then
    /// polished; reaches the known-best CNOT counts cheaply.
    Efficient,
}

impl Strategy {
    pub const ALL: [Strategy; 2] = [Strategy::Default, Strategy::Efficient];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Default => "default",
            Strategy::Efficient => "efficient",
        }
    }

    pub fn parse(name: &str) -> Result<Strategy> {
        Strategy::ALL
            .into_iter()
            .find(|s| s.name() == name)
            .ok_or_else(|| CompressError::Unsupported(format!("unknown strategy '{name}'")))
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The compression circuit split at its three natural stage boundaries:
/// the entangling prefix, the basis reordering, and the controlled
/// rotations that empty the trash wire.
pub fn compression_segments_with(angles: CompressionAngles) -> Vec<Circuit> {
    let mut a = Circuit::new(3, 0);
    a.cx(0, 1);
    a.ch(1, 0);
    let mut b = Circuit::new(3, 0);
    b.ccx(1, 2, 0);
    b.cx(2, 1);
    let mut c = Circuit::new(3, 0);
    c.cu3(angles.theta1, PI, PI, 0, 2);
    c.cu3(angles.theta2, 0.0, PI, 1, 2);
    vec![a, b, c]
}

/// Transpile the compression block for a backend and strategy.
///
/// `trials` is the per-call budget: the generic strategy runs that many
/// seeded cascades and keeps the best, while the staged strategy uses it
/// per segment and triples it for the line-adaptation pass.  `None` means
/// [`DEFAULT_TRIALS`] or [`EFFICIENT_SEGMENT_TRIALS`] respectively.
pub fn transpile_compression(
    backend: Backend,
    strategy: Strategy,
    angles: CompressionAngles,
    seed: u64,
    trials: Option<usize>,
) -> Result<Transpiled> {
    match strategy {
        Strategy::Default => {
            let cfg = PassConfig::level(3)
                .with_seed(seed)
                .with_trials(trials.unwrap_or(DEFAULT_TRIALS))
                .with_coupling(backend.coupling());
            let circuit = build_compression_circuit_with(angles);
            Ok(best_of_trials_cascade(&circuit, &cfg, &[3, 2, 1])?)
        }
        Strategy::Efficient => {
            let per_seg = trials.unwrap_or(EFFICIENT_SEGMENT_TRIALS);
            let seg_cfg = PassConfig::level(1)
                .with_seed(seed)
                .with_trials(per_seg)
                .with_coupling(Coupling::ring(3));
            let cfgs = vec![seg_cfg.clone(), seg_cfg.clone(), seg_cfg];
            let triangle =
                efficient_pipeline(&compression_segments_with(angles), &cfgs, &[3, 1])?;
            match backend {
                Backend::Triangle => Ok(triangle),
                Backend::Line => {
                    // adapt the triangle-optimal circuit to the line, then
                    // stitch the layouts and rescore the whole chain
                    let line_cfg = PassConfig::level(3)
                        .with_seed(seed)
                        .with_trials(3 * per_seg)
                        .with_coupling(Coupling::line(3));
                    let mut out = best_of_trials_cascade(&triangle.circuit, &line_cfg, &[3, 2, 1])?;
                    out.report.layout = triangle.report.layout.then(&out.report.layout);
                    out.report.trials_run += triangle.report.trials_run;
                    out.report.semantic_fidelity =
                        end_to_end_fidelity(&build_compression_circuit_with(angles), &out);
                    Ok(out)
                }
            }
        }
    }
}

/// Rewrite every one-qubit gate into its rz/sx expansion so the circuit
/// uses hardware basis gates only; CNOTs, barriers, measurements, and
/// resets pass through unchanged.
pub fn lower_one_qubit_gates(circuit: &Circuit) -> Result<Circuit> {
    let mut out = Circuit::new(circuit.num_qubits(), circuit.num_clbits());
    for ins in circuit.instructions() {
        let (theta, phi, lambda) = match ins.kind {
            GateKind::Cnot
            | GateKind::Rz(_)
            | GateKind::Sx
            | GateKind::Barrier
            | GateKind::Measure(_)
            | GateKind::Reset => {
                out.push(ins.kind, &ins.qubits);
                continue;
            }
            GateKind::U3(t, p, l) => (t, p, l),
            GateKind::H => (FRAC_PI_2, 0.0, PI),
            GateKind::X => (PI, 0.0, PI),
            other => {
                return Err(CompressError::Unsupported(format!(
                    "cannot lower '{}' to the hardware basis here",
                    other.name()
                )))
            }
        };
        for gate in decompose_u3_to_basis(theta, phi, lambda) {
            out.push(gate, &ins.qubits);
        }
    }
    Ok(out)
}

/// Mirror-form round trip built from a transpiled compression: lowered
/// preparation, the transpiled block, a reset of its trash wire, the exact
/// adjoint of the block, the adjoint preparation, and a full measurement.
///
/// The preparation is identical on every wire, so it commutes with wire
/// relabeling and the transpiled block needs no layout compensation; the
/// CNOT count is exactly twice the transpiled compression's.
pub fn build_efficient_compdecomp(
    label: InputStateLabel,
    compression: &Transpiled,
) -> Result<Circuit> {
    let prep = lower_one_qubit_gates(&prep_circuit(label))?;
    let trash = compression.report.layout.final_map[2];
    let mut c = Circuit::new(3, 3);
    c.append(&prep);
    c.barrier_all();
    c.append(&compression.circuit);
    c.barrier_all();
    c.reset(trash);
    c.barrier_all();
    c.append(&compression.circuit.adjoint()?);
    c.barrier_all();
    c.append(&prep.adjoint()?);
    c.barrier_all();
    c.measure_all();
    Ok(c)
}

/// A ready-to-run round-trip experiment; success is the all-zeros readout.
#[derive(Clone, Debug)]
pub struct CompdecompExperiment {
    pub label: InputStateLabel,
    pub backend: Backend,
    pub strategy: Strategy,
    pub seed: u64,
    /// The full prepared and measured circuit, in hardware basis gates.
    pub circuit: Circuit,
    /// Transpiler trials consumed building it.
    pub trials_run: usize,
}

/// Build the round-trip experiment for one labeled input.
///
/// The generic strategy transpiles the whole fenced circuit; the staged
/// strategy transpiles only the compression and mirrors it exactly.
pub fn build_compdecomp_experiment(
    label: InputStateLabel,
    backend: Backend,
    strategy: Strategy,
    angles: CompressionAngles,
    seed: u64,
    trials: Option<usize>,
) -> Result<CompdecompExperiment> {
    let (circuit, trials_run) = match strategy {
        Strategy::Default => {
            let cfg = PassConfig::level(3)
                .with_seed(seed)
                .with_trials(trials.unwrap_or(DEFAULT_TRIALS))
                .with_coupling(backend.coupling());
            let full = build_compdecomp_circuit_with(label, angles);
            let out = best_of_trials_cascade(&full, &cfg, &[3, 2, 1])?;
            (out.circuit, out.report.trials_run)
        }
        Strategy::Efficient => {
            let t = transpile_compression(backend, strategy, angles, seed, trials)?;
            (build_efficient_compdecomp(label, &t)?, t.report.trials_run)
        }
    };
    Ok(CompdecompExperiment {
        label,
        backend,
        strategy,
        seed,
        circuit,
        trials_run,
    })
}

/// A ready-to-run compressed-state tomography experiment: the transpiled
/// compression, where its outputs live, and the nine measurement circuits.
#[derive(Clone, Debug)]
pub struct CompressionExperiment {
    pub label: InputStateLabel,
    pub backend: Backend,
    pub strategy: Strategy,
    pub seed: u64,
    pub transpiled: Transpiled,
    /// Physical wires carrying compressed qubits 0 and 1, in that order.
    pub kept_pair: [usize; 2],
    /// Physical wire the compression leaves in |0>.
    pub trash: usize,
    /// Preparation plus transpiled compression, without measurements.
    pub base_circuit: Circuit,
    /// One measurement circuit per tomography setting, in settings order.
    pub circuits: Vec<Circuit>,
    /// The ideal compressed state the reconstruction is scored against.
    pub target: StateVector,
}

/// Build the tomography experiment for one labeled input.
pub fn build_compression_experiment(
    label: InputStateLabel,
    backend: Backend,
    strategy: Strategy,
    angles: CompressionAngles,
    seed: u64,
    trials: Option<usize>,
) -> Result<CompressionExperiment> {
    let transpiled = transpile_compression(backend, strategy, angles, seed, trials)?;
    let placed = &transpiled.report.layout.final_map;
    let kept_pair = [placed[0], placed[1]];
    let trash = placed[2];
    let mut base = Circuit::new(3, 0);
    base.append(&lower_one_qubit_gates(&prep_circuit(label))?);
    base.barrier_all();
    base.append(&transpiled.circuit);
    let circuits = tomography_settings()
        .iter()
        .map(|s| lower_one_qubit_gates(&s.measurement_circuit(&base, kept_pair)))
        .collect::<Result<Vec<_>>>()?;
    let target = ideal_compressed_state(label)?;
    Ok(CompressionExperiment {
        label,
        backend,
        strategy,
        seed,
        transpiled,
        kept_pair,
        trash,
        base_circuit: base,
        circuits,
        target,
    })
}

/// Collapse full-register bitstring counts onto the kept pair.
///
/// Keys follow the usual convention (qubit 0 rightmost); in the output,
/// bit 0 is `pair[0]`'s outcome and bit 1 is `pair[1]`'s.
pub fn marginal_pair_counts(
    counts: &BTreeMap<String, u64>,
    num_qubits: usize,
    pair: [usize; 2],
) -> Result<BTreeMap<String, u64>> {
    let mut out: BTreeMap<String, u64> = BTreeMap::new();
    for (key, &n) in counts {
        if key.len() != num_qubits || !key.bytes().all(|b| b == b'0' || b == b'1') {
            return Err(CompressError::Unsupported(format!(
                "'{key}' is not a {num_qubits}-bit string"
            )));
        }
        let bit = |q: usize| &key[num_qubits - 1 - q..num_qubits - q];
        let reduced = format!("{}{}", bit(pair[1]), bit(pair[0]));
        *out.entry(reduced).or_insert(0) += n;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::compression_angles;

    #[test]
    fn backend_and_strategy_round_trip_through_names() {
        for b in Backend::ALL {
            assert_eq!(Backend::parse(b.name()).unwrap(), b);
        }
        for s in Strategy::ALL {
            assert_eq!(Strategy::parse(s.name()).unwrap(), s);
        }
        assert!(Backend::parse("star").is_err());
        assert!(Strategy::parse("fast").is_err());
    }

    #[test]
    fn segments_concatenate_to_the_full_circuit() {
        let angles = compression_angles();
        let mut joined = Circuit::new(3, 0);
        for seg in compression_segments_with(angles) {
            joined.append(&seg);
        }
        assert_eq!(joined, build_compression_circuit_with(angles));
    }

    #[test]
    fn lowering_rejects_two_qubit_nonbasis_gates() {
        let mut c = Circuit::new(2, 0);
        c.swap(0, 1);
        assert!(lower_one_qubit_gates(&c).is_err());
    }

    #[test]
    fn lowering_preserves_probabilities() {
        use qcflate_sim::run_ideal;
        let mut c = Circuit::new(2, 0);
        c.h(0);
        c.u3(0.3, 1.1, -0.4, 1);
        c.cx(0, 1);
        c.x(0);
        let lowered = lower_one_qubit_gates(&c).unwrap();
        for ins in lowered.instructions() {
            assert!(matches!(
                ins.kind,
                GateKind::Rz(_) | GateKind::Sx | GateKind::Cnot
            ));
        }
        let a = run_ideal(&c, &qcflate_sim::StateVector::zero_state(2)).unwrap();
        let b = run_ideal(&lowered, &qcflate_sim::StateVector::zero_state(2)).unwrap();
        let fid = a.inner(&b).unwrap().norm();
        assert!(fid > 1.0 - 1e-12, "lowering changed the state: {fid}");
    }

    #[test]
    fn marginal_counts_reduce_onto_the_pair() {
        let mut counts = BTreeMap::new();
        counts.insert("010".to_string(), 3); // q2=0 q1=1 q0=0
        counts.insert("110".to_string(), 5);
        counts.insert("001".to_string(), 7);
        // keep (q1, q0): "010"/"110" -> q1=1,q0=0 -> "10"; "001" -> "01"
        let m = marginal_pair_counts(&counts, 3, [0, 1]).unwrap();
        assert_eq!(m.get("10"), Some(&8));
        assert_eq!(m.get("01"), Some(&7));
        // keep (q2, q0) instead: bit1 = q2
        let m = marginal_pair_counts(&counts, 3, [0, 2]).unwrap();
        assert_eq!(m.get("00"), Some(&3));
        assert_eq!(m.get("10"), Some(&5));
        assert_eq!(m.get("01"), Some(&7));
        assert!(marginal_pair_counts(&counts, 4, [0, 1]).is_err());
    }
}
