//! Compression of three identically prepared qubits into two.
//!
//! Identical single-qubit preparations only ever populate the symmetric
//! subspace of the three-qubit register, which is four-dimensional — small
//! enough for two qubits.  The circuit in [`circuits`] rotates that
//! subspace onto qubits 0 and 1 and leaves qubit 2 in |0⟩; its adjoint
//! restores the original register from the compressed pair alone.
//!
//! - [`labels`]: the six benchmark input states and their preparations.
//! - [`circuits`]: the compression/decompression blocks, the round-trip
//!   circuit, and the ideal compressed states they produce.
//! - [`experiment`]: transpiled, measurement-ready experiments for the
//!   triangle and line device topologies.

pub mod circuits;
pub mod error;
pub mod experiment;
pub mod labels;

pub use circuits::{
    build_compdecomp_circuit, build_compdecomp_circuit_with, build_compression_circuit,
    build_compression_circuit_with, build_decompression_circuit, build_decompression_circuit_with,
    compression_angles, ideal_compressed_state, ideal_compressed_state_bloch, paper_angles,
    prep_circuit, CompressionAngles, DISENTANGLE_TOL,
};
pub use error::{CompressError, Result};
pub use experiment::{
    build_compdecomp_experiment, build_compression_experiment, build_efficient_compdecomp,
    lower_one_qubit_gates, marginal_pair_counts, transpile_compression, Backend,
    CompdecompExperiment, CompressionExperiment, Strategy, DEFAULT_TRIALS,
    EFFICIENT_SEGMENT_TRIALS,
};
pub use labels::{bloch_prep_unitary, InputStateLabel};
