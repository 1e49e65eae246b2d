//! Mixed-state simulation carrier.

use num_complex::Complex;
use qcflate_core::{apply_local_unitary, eigh, C64, Mat};

use crate::error::SimError;
use crate::state::{check_keep, StateVector};

/// Widest register a density matrix may span.
pub const MAX_DENSITY_QUBITS: usize = 10;

/// Hermiticity / trace tolerance for the invariants.
pub const DENSITY_TOL: f64 = 1e-10;

/// Eigenvalue floor: physical states may dip this far negative numerically.
pub const EIGENVALUE_FLOOR: f64 = -1e-8;

/// A density operator over `n` qubits (Hermitian, trace 1, PSD up to
/// [`EIGENVALUE_FLOOR`]); indexing follows the statevector convention.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    num_qubits: usize,
    rho: Mat,
}

impl DensityMatrix {
    /// |psi><psi| of a pure state.
    pub fn from_pure(psi: &StateVector) -> Self {
        let amps = psi.amplitudes();
        let dim = amps.len();
        let mut rho = Mat::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                rho[(i, j)] = amps[i] * amps[j].conj();
            }
        }
        DensityMatrix {
            num_qubits: psi.num_qubits(),
            rho,
        }
    }

    /// The maximally mixed state `I / 2^n`.
    pub fn maximally_mixed(num_qubits: usize) -> Self {
        let dim = 1usize << num_qubits;
        let mut rho = Mat::zeros(dim, dim);
        let p = 1.0 / dim as f64;
        for i in 0..dim {
            rho[(i, i)] = C64::new(p, 0.0);
        }
        DensityMatrix { num_qubits, rho }
    }

    /// Wrap a matrix, checking shape, Hermiticity, and unit trace.
    ///
    /// Positivity is *not* checked here (it needs a full eigendecomposition);
    /// call [`DensityMatrix::validate_physical`] where it matters.
    pub fn from_matrix(rho: Mat) -> Result<Self, SimError> {
        let dim = rho.rows();
        if rho.cols() != dim || !dim.is_power_of_two() || dim == 0 {
            return Err(SimError::InvalidState(format!(
                "density matrix shape {}x{} is not square power-of-two",
                rho.rows(),
                rho.cols()
            )));
        }
        let num_qubits = dim.trailing_zeros() as usize;
        if num_qubits > MAX_DENSITY_QUBITS {
            return Err(SimError::WidthExceeded {
                mode: "density",
                limit: MAX_DENSITY_QUBITS,
                got: num_qubits,
            });
        }
        if !rho.is_hermitian(DENSITY_TOL) {
            return Err(SimError::InvalidState("density matrix not Hermitian".into()));
        }
        let tr = rho.trace();
        if (tr.re - 1.0).abs() > DENSITY_TOL || tr.im.abs() > DENSITY_TOL {
            return Err(SimError::InvalidState(format!(
                "trace {tr} deviates from 1"
            )));
        }
        Ok(DensityMatrix { num_qubits, rho })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn matrix(&self) -> &Mat {
        &self.rho
    }

    pub fn trace(&self) -> C64 {
        self.rho.trace()
    }

    /// `tr(rho^2)`; 1 for pure states, `1/2^n` for maximally mixed.
    pub fn purity(&self) -> f64 {
        let mut p = 0.0;
        for i in 0..self.rho.rows() {
            for j in 0..self.rho.cols() {
                p += (self.rho[(i, j)] * self.rho[(j, i)]).re;
            }
        }
        p
    }

    /// Diagonal of the density matrix: computational-basis probabilities.
    pub fn probabilities(&self) -> Vec<f64> {
        (0..self.rho.rows()).map(|i| self.rho[(i, i)].re).collect()
    }

    /// Check the full physicality invariant, including the eigenvalue floor.
    pub fn validate_physical(&self) -> Result<(), SimError> {
        let (vals, _) = eigh(&self.rho);
        if let Some(&min) = vals.first() {
            if min < EIGENVALUE_FLOOR {
                return Err(SimError::InvalidState(format!(
                    "minimum eigenvalue {min:.3e} below floor {EIGENVALUE_FLOOR:e}"
                )));
            }
        }
        Ok(())
    }

    /// Ascending eigenvalues (real parts of the Hermitian spectrum).
    pub fn eigenvalues(&self) -> Vec<f64> {
        eigh(&self.rho).0
    }

    /// Conjugate by a `2^k x 2^k` unitary on the listed wires:
    /// `rho -> U rho U†`, all in place.
    pub fn apply_unitary(&mut self, gate: &Mat, wires: &[usize]) {
        let dim = self.rho.rows();
        let mut buf = vec![C64::new(0.0, 0.0); dim];
        // Left multiply: each column is a vector U acts on.
        for col in 0..dim {
            for r in 0..dim {
                buf[r] = self.rho[(r, col)];
            }
            apply_local_unitary(&mut buf, self.num_qubits, gate, wires);
            for r in 0..dim {
                self.rho[(r, col)] = buf[r];
            }
        }
        // Right multiply by U†: conjugate each row, act with U, conjugate back.
        for row in 0..dim {
            for c in 0..dim {
                buf[c] = self.rho[(row, c)].conj();
            }
            apply_local_unitary(&mut buf, self.num_qubits, gate, wires);
            for c in 0..dim {
                self.rho[(row, c)] = buf[c].conj();
            }
        }
    }

    /// Apply a channel given by Kraus operators on the listed wires:
    /// `rho -> sum_k K rho K†`.
    pub fn apply_kraus(&mut self, operators: &[Mat], wires: &[usize]) {
        let dim = self.rho.rows();
        let mut acc = Mat::zeros(dim, dim);
        let mut buf = vec![C64::new(0.0, 0.0); dim];
        for k in operators {
            let mut term = self.rho.clone();
            for col in 0..dim {
                for r in 0..dim {
                    buf[r] = term[(r, col)];
                }
                apply_local_unitary(&mut buf, self.num_qubits, k, wires);
                for r in 0..dim {
                    term[(r, col)] = buf[r];
                }
            }
            // Right multiply by K†: for a row vector r, (r K†)ᵀ = conj(K) rᵀ,
            // and conj(K) x = conj(K conj(x)) — so conjugate, apply K, conjugate.
            for row in 0..dim {
                for c in 0..dim {
                    buf[c] = term[(row, c)].conj();
                }
                apply_local_unitary(&mut buf, self.num_qubits, k, wires);
                for c in 0..dim {
                    term[(row, c)] = buf[c].conj();
                }
            }
            acc = acc.add(&term);
        }
        self.rho = acc;
    }

    /// Partial trace over every qubit not in `keep`.
    pub fn reduced_density(&self, keep: &[usize]) -> Result<DensityMatrix, SimError> {
        check_keep(keep, self.num_qubits)?;
        let kd = 1usize << keep.len();
        let rest: Vec<usize> = (0..self.num_qubits).filter(|q| !keep.contains(q)).collect();
        let rd = 1usize << rest.len();
        let index = |kept: usize, r: usize| -> usize {
            let mut idx = 0usize;
            for (pos, &q) in keep.iter().enumerate() {
                idx |= ((kept >> pos) & 1) << q;
            }
            for (pos, &q) in rest.iter().enumerate() {
                idx |= ((r >> pos) & 1) << q;
            }
            idx
        };
        let mut out = Mat::zeros(kd, kd);
        for i in 0..kd {
            for j in 0..kd {
                let mut acc = C64::new(0.0, 0.0);
                for r in 0..rd {
                    acc += self.rho[(index(i, r), index(j, r))];
                }
                out[(i, j)] = acc;
            }
        }
        DensityMatrix::from_matrix(out)
    }
}

/// `sqrt(rho)` via eigendecomposition, clipping tiny negative eigenvalues.
pub(crate) fn matrix_sqrt_psd(rho: &Mat) -> Mat {
    let (vals, vecs) = eigh(rho);
    let n = rho.rows();
    let mut scaled = vecs.clone();
    for (j, &v) in vals.iter().enumerate() {
        let s = if v > 0.0 { v.sqrt() } else { 0.0 };
        for i in 0..n {
            scaled[(i, j)] = scaled[(i, j)] * Complex::new(s, 0.0);
        }
    }
    scaled.mul(&vecs.adjoint())
}
