//! State fidelity across pure and mixed representations.

use qcflate_core::eigh;

use crate::density::{matrix_sqrt_psd, DensityMatrix};
use crate::error::SimError;
use crate::state::StateVector;

/// Borrowed view of either state representation, so one fidelity function
/// covers all pairings.
#[derive(Clone, Copy)]
pub enum StateRef<'a> {
    Pure(&'a StateVector),
    Mixed(&'a DensityMatrix),
}

impl<'a> From<&'a StateVector> for StateRef<'a> {
    fn from(s: &'a StateVector) -> Self {
        StateRef::Pure(s)
    }
}

impl<'a> From<&'a DensityMatrix> for StateRef<'a> {
    fn from(s: &'a DensityMatrix) -> Self {
        StateRef::Mixed(s)
    }
}

impl StateRef<'_> {
    fn num_qubits(&self) -> usize {
        match self {
            StateRef::Pure(s) => s.num_qubits(),
            StateRef::Mixed(s) => s.num_qubits(),
        }
    }
}

/// Uhlmann fidelity between two states.
///
/// Pure-pure: `|<a|b>|^2`; pure-mixed: `<a|rho|a>`; mixed-mixed:
/// `(tr sqrt(sqrt(rho) sigma sqrt(rho)))^2`.  Clamped into [0, 1].
pub fn state_fidelity<'a>(
    a: impl Into<StateRef<'a>>,
    b: impl Into<StateRef<'a>>,
) -> Result<f64, SimError> {
    let a = a.into();
    let b = b.into();
    if a.num_qubits() != b.num_qubits() {
        return Err(SimError::DimensionMismatch(format!(
            "{} vs {} qubits",
            a.num_qubits(),
            b.num_qubits()
        )));
    }
    let f = match (a, b) {
        (StateRef::Pure(x), StateRef::Pure(y)) => x.inner(y)?.norm_sqr(),
        (StateRef::Pure(psi), StateRef::Mixed(rho)) | (StateRef::Mixed(rho), StateRef::Pure(psi)) => {
            expectation(psi, rho)
        }
        (StateRef::Mixed(rho), StateRef::Mixed(sigma)) => {
            let root = matrix_sqrt_psd(rho.matrix());
            let inner = root.mul(sigma.matrix()).mul(&root);
            let (vals, _) = eigh(&inner);
            let tr: f64 = vals.iter().map(|&v| if v > 0.0 { v.sqrt() } else { 0.0 }).sum();
            tr * tr
        }
    };
    Ok(f.clamp(0.0, 1.0))
}

/// `<psi| rho |psi>`.
fn expectation(psi: &StateVector, rho: &DensityMatrix) -> f64 {
    let amps = psi.amplitudes();
    let m = rho.matrix();
    let mut acc = 0.0;
    for i in 0..amps.len() {
        for j in 0..amps.len() {
            acc += (amps[i].conj() * m[(i, j)] * amps[j]).re;
        }
    }
    acc
}
