//! Two-qubit state tomography.
//!
//! The pipeline runs in four steps: generate the nine {X,Y,Z}x{X,Y,Z}
//! measurement settings, estimate the fifteen Pauli expectations from
//! counts (or exact probabilities), reconstruct a density matrix by linear
//! inversion, and project it onto the physical cone before reading off a
//! fidelity.  Reconstruction is deliberately linear-inversion-plus-clipping
//! rather than maximum likelihood: it is deterministic, exact on exact
//! inputs, and easy to test.

pub mod error;
pub mod estimate;
pub mod settings;

pub use error::{Result, TomoError};
pub use estimate::{
    counts_from_json, counts_to_json, exact_setting_probabilities, expectation_values,
    expectation_values_exact, fidelity_report, linear_inversion, project_to_physical,
    PauliExpectations, SettingCounts, SettingProbs,
};
pub use settings::{tomography_settings, PauliBasis, TomographySetting};
