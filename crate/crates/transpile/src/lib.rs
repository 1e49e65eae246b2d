//! Optimizing transpiler targeting an rz/sx/cx hardware basis.
//!
//! The pipeline lowers an abstract [`qcflate_core::Circuit`] to the native
//! gate set, routes it onto a coupling map, and then shrinks it with a family
//! of peephole and block-resynthesis passes built on the Cartan (KAK)
//! decomposition of two-qubit blocks.  All passes are pure circuit-to-circuit
//! functions and every seeded entry point is bit-for-bit deterministic.

pub mod cu;
pub mod error;
pub mod euler;
pub mod kak;
pub mod matrix;
pub mod ops;
pub mod passes;
pub mod pipeline;
pub mod random;
pub mod route;

pub use error::{Result, TranspileError};
pub use kak::{analyze_canonical, analyze_canonical_robust, cnot_class, KakCanonical};
pub use matrix::{Mat2, Mat4};
pub use pipeline::{
    best_of_trials, best_of_trials_cascade, efficient_pipeline, end_to_end_fidelity, transpile,
    transpile_cascade, PassConfig, Transpiled, TranspileReport,
};
pub use route::{Coupling, LayoutPermutation};
