//! Pure-state simulation carrier.

use num_complex::Complex;
use qcflate_core::{apply_local_unitary, C64, Mat};

use crate::density::DensityMatrix;
use crate::error::SimError;

/// Widest register a statevector may span.
pub const MAX_STATEVECTOR_QUBITS: usize = 24;

/// Norm slack tolerated by the constructors.
pub const NORM_TOL: f64 = 1e-10;

/// A normalized pure state over `n` qubits; qubit 0 is the least
/// significant bit of the amplitude index.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<C64>,
}

impl StateVector {
    /// The all-zeros computational basis state |0...0>.
    pub fn zero_state(num_qubits: usize) -> Self {
        assert!(num_qubits <= MAX_STATEVECTOR_QUBITS);
        let mut amps = vec![C64::new(0.0, 0.0); 1 << num_qubits];
        amps[0] = C64::new(1.0, 0.0);
        StateVector { num_qubits, amps }
    }

    /// The computational basis state with the given index.
    pub fn basis_state(num_qubits: usize, index: usize) -> Self {
        assert!(index < 1 << num_qubits);
        let mut s = Self::zero_state(num_qubits);
        s.amps[0] = C64::new(0.0, 0.0);
        s.amps[index] = C64::new(1.0, 0.0);
        s
    }

    /// Build from amplitudes, requiring unit norm within [`NORM_TOL`].
    pub fn new(amps: Vec<C64>) -> Result<Self, SimError> {
        let n = amps.len();
        if !n.is_power_of_two() || n == 0 {
            return Err(SimError::InvalidState(format!(
                "amplitude count {n} is not a power of two"
            )));
        }
        let num_qubits = n.trailing_zeros() as usize;
        if num_qubits > MAX_STATEVECTOR_QUBITS {
            return Err(SimError::WidthExceeded {
                mode: "statevector",
                limit: MAX_STATEVECTOR_QUBITS,
                got: num_qubits,
            });
        }
        let sv = StateVector { num_qubits, amps };
        let norm = sv.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(SimError::InvalidState(format!(
                "norm {norm} deviates from 1 by more than {NORM_TOL:e}"
            )));
        }
        Ok(sv)
    }

    /// Build from amplitudes, rescaling to unit norm.
    pub fn normalized(mut amps: Vec<C64>) -> Result<Self, SimError> {
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm <= 0.0 {
            return Err(SimError::InvalidState("zero vector".into()));
        }
        for a in &mut amps {
            *a /= norm;
        }
        Self::new(amps)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Apply a `2^k x 2^k` unitary to the listed wires in place.
    pub fn apply_unitary(&mut self, gate: &Mat, wires: &[usize]) {
        apply_local_unitary(&mut self.amps, self.num_qubits, gate, wires);
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<C64, SimError> {
        if self.num_qubits != other.num_qubits {
            return Err(SimError::DimensionMismatch(format!(
                "{} vs {} qubits",
                self.num_qubits, other.num_qubits
            )));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Outcome probabilities over all `2^n` basis states.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Probability that qubit `q` reads 1.
    pub fn prob_one(&self, q: usize) -> f64 {
        let bit = 1usize << q;
        self.amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & bit != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Tensor product; `other`'s qubits become the high bits.
    pub fn tensor(&self, other: &StateVector) -> StateVector {
        let mut amps = vec![C64::new(0.0, 0.0); self.amps.len() * other.amps.len()];
        for (j, b) in other.amps.iter().enumerate() {
            for (i, a) in self.amps.iter().enumerate() {
                amps[(j << self.num_qubits) | i] = a * b;
            }
        }
        StateVector {
            num_qubits: self.num_qubits + other.num_qubits,
            amps,
        }
    }

    /// Projector |self><self| as a density matrix.
    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix::from_pure(self)
    }

    /// Partial trace over every qubit not in `keep`.
    ///
    /// `keep[k]` becomes qubit `k` of the reduced state.
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
        let mut rho = Mat::zeros(kd, kd);
        for r in 0..rd {
            for i in 0..kd {
                let ai = self.amps[index(i, r)];
                if ai.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..kd {
                    rho[(i, j)] += ai * self.amps[index(j, r)].conj();
                }
            }
        }
        DensityMatrix::from_matrix(rho)
    }
}

pub(crate) fn check_keep(keep: &[usize], num_qubits: usize) -> Result<(), SimError> {
    if keep.is_empty() {
        return Err(SimError::InvalidState("`keep` list is empty".into()));
    }
    for (i, &q) in keep.iter().enumerate() {
        if q >= num_qubits {
            return Err(SimError::InvalidState(format!(
                "kept qubit {q} out of range for {num_qubits} qubits"
            )));
        }
        if keep[..i].contains(&q) {
            return Err(SimError::InvalidState(format!("kept qubit {q} repeated")));
        }
    }
    Ok(())
}

/// Complex amplitude shorthand used by tests.
pub fn amp(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

#[cfg(test)]
mod tests {
    use super::*;
    use qcflate_core::{gate_matrix, GateKind};
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn zero_state_and_basis_state() {
        let z = StateVector::zero_state(3);
        assert_eq!(z.amplitudes()[0], amp(1.0, 0.0));
        assert!((z.norm() - 1.0).abs() < 1e-15);
        let b = StateVector::basis_state(3, 5);
        assert_eq!(b.amplitudes()[5], amp(1.0, 0.0));
        assert!((b.prob_one(0) - 1.0).abs() < 1e-15);
        assert!(b.prob_one(1) < 1e-15);
        assert!((b.prob_one(2) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn constructor_rejects_bad_norm() {
        assert!(StateVector::new(vec![amp(1.0, 0.0), amp(0.5, 0.0)]).is_err());
        assert!(StateVector::new(vec![amp(1.0, 0.0), amp(0.0, 0.0), amp(0.0, 0.0)]).is_err());
        let ok = StateVector::normalized(vec![amp(3.0, 0.0), amp(4.0, 0.0)]).unwrap();
        assert!((ok.amplitudes()[0].re - 0.6).abs() < 1e-15);
    }

    #[test]
    fn tensor_orders_high_bits_last() {
        let zero = StateVector::zero_state(1);
        let one = StateVector::basis_state(1, 1);
        // |q1 q0> with q0 = |0>, q1 = |1> is index 2.
        let t = zero.tensor(&one);
        assert_eq!(t.amplitudes()[2], amp(1.0, 0.0));
    }

    #[test]
    fn reduced_density_of_product_state() {
        // |0> on qubit 0, |+> on qubit 1; keeping qubit 1 gives |+><+|.
        let mut s = StateVector::zero_state(2);
        let h = gate_matrix::<f64>(&GateKind::H).unwrap();
        s.apply_unitary(&h, &[1]);
        let rho = s.reduced_density(&[1]).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((rho.matrix()[(i, j)].re - 0.5).abs() < 1e-12);
                assert!(rho.matrix()[(i, j)].im.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn reduced_density_of_bell_state_is_mixed() {
        let mut s = StateVector::zero_state(2);
        let h = gate_matrix::<f64>(&GateKind::H).unwrap();
        let cx = gate_matrix::<f64>(&GateKind::Cnot).unwrap();
        s.apply_unitary(&h, &[0]);
        s.apply_unitary(&cx, &[0, 1]);
        for keep in [[0usize], [1usize]] {
            let rho = s.reduced_density(&keep).unwrap();
            assert!((rho.matrix()[(0, 0)].re - 0.5).abs() < 1e-12);
            assert!((rho.matrix()[(1, 1)].re - 0.5).abs() < 1e-12);
            assert!(rho.matrix()[(0, 1)].norm() < 1e-12);
            assert!((rho.purity() - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn inner_product() {
        let plus = StateVector::new(vec![amp(FRAC_1_SQRT_2, 0.0), amp(FRAC_1_SQRT_2, 0.0)]).unwrap();
        let zero = StateVector::zero_state(1);
        let ip = zero.inner(&plus).unwrap();
        assert!((ip.re - FRAC_1_SQRT_2).abs() < 1e-15);
    }
}
