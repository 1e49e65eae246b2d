//! Circuit IR, gate semantics, and the numeric foundation for the qcflate
//! transpiler and simulator.
//!
//! Everything numeric is generic over a [`Scalar`] precision (`f32` or
//! `f64`); the [`Mat`] and [`C64`] aliases fix the default double-precision
//! types used by the rest of the workspace.
//!
//! Index conventions, fixed here once and relied on everywhere:
//! * qubit `k` is bit `k` of a computational-basis index (qubit 0 = LSB);
//! * `kron(a, b)` places `a` on the higher wire and `b` on the lower;
//! * multi-qubit gate operands are ordered controls-first, target-last, and
//!   the gate's local matrix uses operand 0 as its least significant bit.

pub mod circuit;
pub mod coupling;
pub mod error;
pub mod gates;
pub mod linalg;
pub mod qasm;
pub mod scalar;

pub use circuit::{apply_local_unitary, Circuit, Instruction, MAX_UNITARY_QUBITS};
pub use coupling::{validate, BasisGateSet, CouplingMap, Violation};
pub use error::CoreError;
pub use gates::{gate_matrix, normalize_angle, GateKind};
pub use linalg::{eigh, unitary_fidelity, CMat};
pub use scalar::Scalar;

/// Default complex scalar.
pub type C64 = num_complex::Complex<f64>;

/// Default dense complex matrix.
pub type Mat = linalg::CMat<f64>;

/// Single-precision variants, for callers trading accuracy for footprint.
pub type C32 = num_complex::Complex<f32>;
pub type Mat32 = linalg::CMat<f32>;
