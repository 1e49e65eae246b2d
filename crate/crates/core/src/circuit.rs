//! Circuit intermediate representation: instruction lists over `n` qubits
//! and `m` classical bits, plus the dense-matrix semantics used throughout
//! the test suites.

use std::collections::BTreeMap;

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::CoreError;
use crate::gates::{gate_matrix, GateKind};
use crate::linalg::CMat;
use crate::scalar::Scalar;

/// Widest circuit for which a dense `2^n x 2^n` unitary may be materialized.
pub const MAX_UNITARY_QUBITS: usize = 12;

/// A gate kind applied to an ordered list of qubits (controls first,
/// target last).
#[derive(Clone, Debug, PartialEq)]
pub struct Instruction {
    pub kind: GateKind,
    pub qubits: Vec<usize>,
}

/// An ordered instruction list over a fixed register of qubits and
/// classical bits.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Circuit {
    num_qubits: usize,
    num_clbits: usize,
    instructions: Vec<Instruction>,
}

impl Circuit {
    /// Empty circuit over `num_qubits` qubits and `num_clbits` classical bits.
    pub fn new(num_qubits: usize, num_clbits: usize) -> Self {
        Circuit {
            num_qubits,
            num_clbits,
            instructions: Vec::new(),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn num_clbits(&self) -> usize {
        self.num_clbits
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.instructions
    }

    pub fn len(&self) -> usize {
        self.instructions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instructions.is_empty()
    }

    /// Append an instruction after checking operand count, range, and
    /// distinctness.
    pub fn try_push(&mut self, kind: GateKind, qubits: &[usize]) -> Result<(), CoreError> {
        if let Some(arity) = kind.arity() {
            if qubits.len() != arity {
                return Err(CoreError::InvalidInstruction(format!(
                    "`{}` takes {arity} qubit(s), got {}",
                    kind.name(),
                    qubits.len()
                )));
            }
        } else if qubits.is_empty() {
            return Err(CoreError::InvalidInstruction(
                "`barrier` needs at least one qubit".into(),
            ));
        }
        for (i, &q) in qubits.iter().enumerate() {
            if q >= self.num_qubits {
                return Err(CoreError::InvalidInstruction(format!(
                    "qubit {q} out of range for {}-qubit circuit",
                    self.num_qubits
                )));
            }
            if qubits[..i].contains(&q) {
                return Err(CoreError::InvalidInstruction(format!(
                    "`{}` repeats qubit {q}",
                    kind.name()
                )));
            }
        }
        if let GateKind::Measure(cl) = kind {
            if cl >= self.num_clbits {
                return Err(CoreError::InvalidInstruction(format!(
                    "classical bit {cl} out of range for {} bit(s)",
                    self.num_clbits
                )));
            }
        }
        self.instructions.push(Instruction {
            kind,
            qubits: qubits.to_vec(),
        });
        Ok(())
    }

    /// Append an instruction, panicking on malformed operands.
    pub fn push(&mut self, kind: GateKind, qubits: &[usize]) {
        self.try_push(kind, qubits)
            .expect("malformed instruction pushed to circuit");
    }

    pub fn u3(&mut self, theta: f64, phi: f64, lambda: f64, q: usize) {
        self.push(GateKind::U3(theta, phi, lambda), &[q]);
    }

    pub fn rz(&mut self, theta: f64, q: usize) {
        self.push(GateKind::Rz(theta), &[q]);
    }

    pub fn sx(&mut self, q: usize) {
        self.push(GateKind::Sx, &[q]);
    }

    pub fn x(&mut self, q: usize) {
        self.push(GateKind::X, &[q]);
    }

    pub fn h(&mut self, q: usize) {
        self.push(GateKind::H, &[q]);
    }

    pub fn cx(&mut self, control: usize, target: usize) {
        self.push(GateKind::Cnot, &[control, target]);
    }

    pub fn ch(&mut self, control: usize, target: usize) {
        self.push(GateKind::Ch, &[control, target]);
    }

    pub fn ccx(&mut self, control_a: usize, control_b: usize, target: usize) {
        self.push(GateKind::Ccx, &[control_a, control_b, target]);
    }

    pub fn cu3(&mut self, theta: f64, phi: f64, lambda: f64, control: usize, target: usize) {
        self.push(GateKind::Cu3(theta, phi, lambda), &[control, target]);
    }

    pub fn swap(&mut self, a: usize, b: usize) {
        self.push(GateKind::Swap, &[a, b]);
    }

    pub fn measure(&mut self, q: usize, cl: usize) {
        self.push(GateKind::Measure(cl), &[q]);
    }

    pub fn reset(&mut self, q: usize) {
        self.push(GateKind::Reset, &[q]);
    }

    pub fn barrier(&mut self, qubits: &[usize]) {
        self.push(GateKind::Barrier, qubits);
    }

    /// Barrier across every qubit of the register.
    pub fn barrier_all(&mut self) {
        let all: Vec<usize> = (0..self.num_qubits).collect();
        self.push(GateKind::Barrier, &all);
    }

    /// Measure qubit `q` into classical bit `q`, for every qubit.
    pub fn measure_all(&mut self) {
        for q in 0..self.num_qubits {
            self.measure(q, q);
        }
    }

    /// Append all instructions of `other` (registers must be at least as
    /// large here).
    pub fn append(&mut self, other: &Circuit) {
        for ins in &other.instructions {
            self.push(ins.kind, &ins.qubits);
        }
    }

    /// Longest dependency chain of non-barrier instructions.
    ///
    /// Measurements and resets count one level like any gate; a barrier adds
    /// no level of its own but synchronizes its qubits, so inserting one can
    /// only ever deepen the circuit.
    pub fn depth(&self) -> usize {
        let mut qubit_level = vec![0usize; self.num_qubits];
        let mut clbit_level = vec![0usize; self.num_clbits];
        for ins in &self.instructions {
            match ins.kind {
                GateKind::Barrier => {
                    let sync = ins.qubits.iter().map(|&q| qubit_level[q]).max().unwrap_or(0);
                    for &q in &ins.qubits {
                        qubit_level[q] = sync;
                    }
                }
                GateKind::Measure(cl) => {
                    let level = 1 + qubit_level[ins.qubits[0]].max(clbit_level[cl]);
                    qubit_level[ins.qubits[0]] = level;
                    clbit_level[cl] = level;
                }
                _ => {
                    let level = 1 + ins.qubits.iter().map(|&q| qubit_level[q]).max().unwrap();
                    for &q in &ins.qubits {
                        qubit_level[q] = level;
                    }
                }
            }
        }
        qubit_level
            .into_iter()
            .chain(clbit_level)
            .max()
            .unwrap_or(0)
    }

    /// Instruction counts keyed by gate name, barriers excluded.
    pub fn gate_counts(&self) -> BTreeMap<&'static str, usize> {
        let mut counts = BTreeMap::new();
        for ins in &self.instructions {
            if !matches!(ins.kind, GateKind::Barrier) {
                *counts.entry(ins.kind.name()).or_insert(0) += 1;
            }
        }
        counts
    }

    /// Count of instructions with the given gate name.
    pub fn count(&self, name: &str) -> usize {
        self.instructions
            .iter()
            .filter(|ins| ins.kind.name() == name)
            .count()
    }

    /// Inverse circuit: instructions reversed and individually inverted.
    ///
    /// `Sx` expands to `Rz(pi) . Sx . Rz(pi)` (its inverse up to global
    /// phase) so the output stays inside the same gate set.  Barriers pass
    /// through unchanged; measurements and resets make a circuit
    /// non-invertible and raise an error.
    pub fn adjoint(&self) -> Result<Circuit, CoreError> {
        let mut out = Circuit::new(self.num_qubits, self.num_clbits);
        for (index, ins) in self.instructions.iter().enumerate().rev() {
            match ins.kind {
                GateKind::Barrier => out.push(GateKind::Barrier, &ins.qubits),
                GateKind::Sx => {
                    let q = ins.qubits[0];
                    out.rz(std::f64::consts::PI, q);
                    out.sx(q);
                    out.rz(std::f64::consts::PI, q);
                }
                GateKind::Measure(_) | GateKind::Reset => {
                    return Err(CoreError::NonUnitary {
                        index,
                        name: ins.kind.name(),
                    })
                }
                kind => out.push(kind.inverse().expect("unitary kind"), &ins.qubits),
            }
        }
        Ok(out)
    }

    /// Dense unitary of the whole circuit (barriers skipped).
    ///
    /// Fails if any measurement or reset is present, or the register exceeds
    /// [`MAX_UNITARY_QUBITS`].
    pub fn unitary<S: Scalar>(&self) -> Result<CMat<S>, CoreError> {
        if self.num_qubits > MAX_UNITARY_QUBITS {
            return Err(CoreError::WidthExceeded {
                what: "unitary",
                limit: MAX_UNITARY_QUBITS,
                got: self.num_qubits,
            });
        }
        for (index, ins) in self.instructions.iter().enumerate() {
            if !ins.kind.is_unitary() && !matches!(ins.kind, GateKind::Barrier) {
                return Err(CoreError::NonUnitary {
                    index,
                    name: ins.kind.name(),
                });
            }
        }
        let dim = 1usize << self.num_qubits;
        let mut u = CMat::zeros(dim, dim);
        let mut column = vec![Complex::<S>::zero(); dim];
        for j in 0..dim {
            column.fill(Complex::zero());
            column[j] = Complex::one();
            for ins in &self.instructions {
                if matches!(ins.kind, GateKind::Barrier) {
                    continue;
                }
                let g = gate_matrix::<S>(&ins.kind)?;
                apply_local_unitary(&mut column, self.num_qubits, &g, &ins.qubits);
            }
            for i in 0..dim {
                u[(i, j)] = column[i];
            }
        }
        Ok(u)
    }
}

/// Apply a `2^k x 2^k` unitary to the listed wires of a state vector over
/// `num_qubits` qubits (qubit 0 = least significant index bit; `wires[0]`
/// is the gate's local least significant bit).
pub fn apply_local_unitary<S: Scalar>(
    state: &mut [Complex<S>],
    num_qubits: usize,
    gate: &CMat<S>,
    wires: &[usize],
) {
    let k = wires.len();
    let local_dim = 1usize << k;
    assert_eq!(gate.rows(), local_dim);
    assert_eq!(state.len(), 1usize << num_qubits);
    let wire_mask: usize = wires.iter().map(|&w| 1usize << w).sum();
    let spread = |g: usize| -> usize {
        let mut s = 0;
        for (j, &w) in wires.iter().enumerate() {
            s |= ((g >> j) & 1) << w;
        }
        s
    };
    let offsets: Vec<usize> = (0..local_dim).map(spread).collect();
    let mut scratch = vec![Complex::<S>::zero(); local_dim];
    for base in 0..state.len() {
        if base & wire_mask != 0 {
            continue;
        }
        for (g, &off) in offsets.iter().enumerate() {
            scratch[g] = state[base | off];
        }
        for (g_out, &off) in offsets.iter().enumerate() {
            let mut acc = Complex::<S>::zero();
            for (g_in, &s_in) in scratch.iter().enumerate() {
                acc += gate[(g_out, g_in)] * s_in;
            }
            state[base | off] = acc;
        }
    }
}
