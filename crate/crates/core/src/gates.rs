//! Gate kinds and their exact matrix semantics.
//!
//! Conventions fixed project-wide:
//! * qubit 0 is the least significant bit of a computational-basis index;
//! * a multi-qubit gate matrix is written in the gate's local space with
//!   operand 0 as the least significant bit (controls first, target last);
//! * `U3(theta, phi, lambda)` places `theta` inside the half-angle sine and
//!   cosine terms and `phi`, `lambda` as the row/column phases.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::CoreError;
use crate::linalg::CMat;
use crate::scalar::Scalar;

/// One gate, measurement, reset, or barrier tag with its real parameters.
///
/// Angle parameters are stored as `f64` in the IR; matrices can be
/// materialized at any [`Scalar`] precision via [`gate_matrix`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GateKind {
    /// General single-qubit unitary `U3(theta, phi, lambda)`.
    U3(f64, f64, f64),
    /// Rotation about Z: `diag(e^{-i theta/2}, e^{i theta/2})`.
    Rz(f64),
    /// Square root of X.
    Sx,
    /// Pauli X.
    X,
    /// Hadamard.
    H,
    /// Controlled-X (control = operand 0, target = operand 1).
    Cnot,
    /// Controlled-Hadamard.
    Ch,
    /// Toffoli (controls = operands 0,1; target = operand 2).
    Ccx,
    /// Controlled `U3(theta, phi, lambda)`.
    Cu3(f64, f64, f64),
    /// Swap of two qubits.
    Swap,
    /// Computational-basis measurement into the given classical bit.
    Measure(usize),
    /// Reset the qubit to |0>.
    Reset,
    /// Synchronization barrier across its operand qubits.
    Barrier,
}

impl GateKind {
    /// Number of qubit operands; `None` for [`GateKind::Barrier`], which
    /// accepts any positive number of qubits.
    pub fn arity(&self) -> Option<usize> {
        match self {
            GateKind::U3(..) | GateKind::Rz(_) | GateKind::Sx | GateKind::X | GateKind::H => {
                Some(1)
            }
            GateKind::Cnot | GateKind::Ch | GateKind::Cu3(..) | GateKind::Swap => Some(2),
            GateKind::Ccx => Some(3),
            GateKind::Measure(_) | GateKind::Reset => Some(1),
            GateKind::Barrier => None,
        }
    }

    /// Whether this kind has a defined unitary matrix.
    pub fn is_unitary(&self) -> bool {
        !matches!(self, GateKind::Measure(_) | GateKind::Reset | GateKind::Barrier)
    }

    /// Lowercase mnemonic used in QASM text and count maps.
    pub fn name(&self) -> &'static str {
        match self {
            GateKind::U3(..) => "u3",
            GateKind::Rz(_) => "rz",
            GateKind::Sx => "sx",
            GateKind::X => "x",
            GateKind::H => "h",
            GateKind::Cnot => "cx",
            GateKind::Ch => "ch",
            GateKind::Ccx => "ccx",
            GateKind::Cu3(..) => "cu3",
            GateKind::Swap => "swap",
            GateKind::Measure(_) => "measure",
            GateKind::Reset => "reset",
            GateKind::Barrier => "barrier",
        }
    }

    /// Same kind with every angle normalized into `(-pi, pi]`.
    ///
    /// Normalization changes the matrix only by a global phase (each `2*pi`
    /// winding of an Rz/U3 angle contributes `-1`), so circuits compare equal
    /// under the project-wide up-to-phase equivalence.
    pub fn canonicalized(&self) -> GateKind {
        match *self {
            GateKind::U3(t, p, l) => {
                GateKind::U3(normalize_angle(t), normalize_angle(p), normalize_angle(l))
            }
            GateKind::Rz(t) => GateKind::Rz(normalize_angle(t)),
            GateKind::Cu3(t, p, l) => {
                GateKind::Cu3(normalize_angle(t), normalize_angle(p), normalize_angle(l))
            }
            other => other,
        }
    }

    /// Inverse gate as IR, when the inverse is again a single `GateKind`.
    ///
    /// `Sx` has no single-gate inverse inside the gate set; circuit adjoints
    /// expand it as `Rz(pi) . Sx . Rz(pi)` (equal to `Sx`-dagger up to global
    /// phase), so this returns `None` for it.  Non-unitary kinds also return
    /// `None`.
    pub fn inverse(&self) -> Option<GateKind> {
        match *self {
            GateKind::U3(t, p, l) => Some(GateKind::U3(-t, -l, -p)),
            GateKind::Rz(t) => Some(GateKind::Rz(-t)),
            GateKind::X | GateKind::H | GateKind::Cnot | GateKind::Ch | GateKind::Ccx
            | GateKind::Swap => Some(*self),
            GateKind::Cu3(t, p, l) => Some(GateKind::Cu3(-t, -l, -p)),
            GateKind::Sx | GateKind::Measure(_) | GateKind::Reset | GateKind::Barrier => None,
        }
    }
}

/// Map an angle into the half-open interval `(-pi, pi]`.
pub fn normalize_angle(a: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let r = a.rem_euclid(two_pi);
    if r > std::f64::consts::PI {
        r - two_pi
    } else {
        r
    }
}

fn c<S: Scalar>(re: f64, im: f64) -> Complex<S> {
    Complex::new(S::of(re), S::of(im))
}

/// `U3(theta, phi, lambda)` as a 2x2 matrix.
pub fn u3_matrix<S: Scalar>(theta: f64, phi: f64, lambda: f64) -> CMat<S> {
    let t = S::of(theta) * S::of(0.5);
    let (ct, st) = (t.cos(), t.sin());
    let ephi = Complex::from_polar(S::one(), S::of(phi));
    let elam = Complex::from_polar(S::one(), S::of(lambda));
    let mut m = CMat::zeros(2, 2);
    m[(0, 0)] = Complex::new(ct, S::zero());
    m[(0, 1)] = -elam * st;
    m[(1, 0)] = ephi * st;
    m[(1, 1)] = ephi * elam * ct;
    m
}

/// Rotation about X by `theta`.
pub fn rx_matrix<S: Scalar>(theta: f64) -> CMat<S> {
    let t = S::of(theta) * S::of(0.5);
    let (ct, st) = (t.cos(), t.sin());
    let mut m = CMat::zeros(2, 2);
    m[(0, 0)] = Complex::new(ct, S::zero());
    m[(0, 1)] = Complex::new(S::zero(), -st);
    m[(1, 0)] = Complex::new(S::zero(), -st);
    m[(1, 1)] = Complex::new(ct, S::zero());
    m
}

/// Rotation about Y by `theta`.
pub fn ry_matrix<S: Scalar>(theta: f64) -> CMat<S> {
    let t = S::of(theta) * S::of(0.5);
    let (ct, st) = (t.cos(), t.sin());
    let mut m = CMat::zeros(2, 2);
    m[(0, 0)] = Complex::new(ct, S::zero());
    m[(0, 1)] = Complex::new(-st, S::zero());
    m[(1, 0)] = Complex::new(st, S::zero());
    m[(1, 1)] = Complex::new(ct, S::zero());
    m
}

/// Rotation about Z by `theta`.
pub fn rz_matrix<S: Scalar>(theta: f64) -> CMat<S> {
    let mut m = CMat::zeros(2, 2);
    m[(0, 0)] = Complex::from_polar(S::one(), S::of(-theta / 2.0));
    m[(1, 1)] = Complex::from_polar(S::one(), S::of(theta / 2.0));
    m
}

/// Controlled version of a 2x2 unitary, control = operand 0 (local LSB).
pub fn controlled_matrix<S: Scalar>(u: &CMat<S>) -> CMat<S> {
    assert_eq!((u.rows(), u.cols()), (2, 2));
    CMat::from_fn(4, 4, |i, j| {
        if j & 1 == 0 {
            // Control clear: identity block.
            if i == j {
                Complex::one()
            } else {
                Complex::zero()
            }
        } else if i & 1 == 1 {
            u[(i >> 1, j >> 1)]
        } else {
            Complex::zero()
        }
    })
}

/// Exact matrix of a unitary gate kind (2x2, 4x4, or 8x8).
pub fn gate_matrix<S: Scalar>(kind: &GateKind) -> Result<CMat<S>, CoreError> {
    let sqrt_half = std::f64::consts::FRAC_1_SQRT_2;
    Ok(match *kind {
        GateKind::U3(t, p, l) => u3_matrix(t, p, l),
        GateKind::Rz(t) => rz_matrix(t),
        GateKind::Sx => CMat::from_rows(&[
            &[c(0.5, 0.5), c(0.5, -0.5)],
            &[c(0.5, -0.5), c(0.5, 0.5)],
        ]),
        GateKind::X => CMat::from_rows(&[&[c(0., 0.), c(1., 0.)], &[c(1., 0.), c(0., 0.)]]),
        GateKind::H => CMat::from_rows(&[
            &[c(sqrt_half, 0.), c(sqrt_half, 0.)],
            &[c(sqrt_half, 0.), c(-sqrt_half, 0.)],
        ]),
        GateKind::Cnot => controlled_matrix(&gate_matrix(&GateKind::X)?),
        GateKind::Ch => controlled_matrix(&gate_matrix(&GateKind::H)?),
        GateKind::Cu3(t, p, l) => controlled_matrix(&u3_matrix(t, p, l)),
        GateKind::Swap => CMat::from_fn(4, 4, |i, j| {
            let swapped = ((j & 1) << 1) | ((j >> 1) & 1);
            if i == swapped {
                Complex::one()
            } else {
                Complex::zero()
            }
        }),
        GateKind::Ccx => CMat::from_fn(8, 8, |i, j| {
            let flipped = if j & 3 == 3 { j ^ 4 } else { j };
            if i == flipped {
                Complex::one()
            } else {
                Complex::zero()
            }
        }),
        GateKind::Measure(_) | GateKind::Reset | GateKind::Barrier => {
            return Err(CoreError::NoMatrix(kind.name()))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    type M = CMat<f64>;

    fn close(a: &M, b: &M, tol: f64) -> bool {
        a.max_abs_diff(b) <= tol
    }

    #[test]
    fn u3_special_cases() {
        assert!(close(&u3_matrix(0., 0., 0.), &M::identity(2), 1e-15));
        let x = gate_matrix::<f64>(&GateKind::X).unwrap();
        assert!(close(&u3_matrix(PI, 0., PI), &x, 1e-15));
        let h = gate_matrix::<f64>(&GateKind::H).unwrap();
        assert!(close(&u3_matrix(PI / 2., 0., PI), &h, 1e-15));
    }

    #[test]
    fn sx_squares_to_x() {
        let sx = gate_matrix::<f64>(&GateKind::Sx).unwrap();
        let x = gate_matrix::<f64>(&GateKind::X).unwrap();
        assert!(close(&sx.mul(&sx), &x, 1e-15));
    }

    #[test]
    fn all_unitary_kinds_are_unitary() {
        let kinds = [
            GateKind::U3(0.3, -1.2, 2.5),
            GateKind::Rz(0.7),
            GateKind::Sx,
            GateKind::X,
            GateKind::H,
            GateKind::Cnot,
            GateKind::Ch,
            GateKind::Ccx,
            GateKind::Cu3(1.1, 0.2, -0.4),
            GateKind::Swap,
        ];
        for k in kinds {
            let m = gate_matrix::<f64>(&k).unwrap();
            assert!(m.is_unitary(1e-12), "{k:?} not unitary");
        }
    }

    #[test]
    fn non_unitary_kinds_have_no_matrix() {
        for k in [GateKind::Measure(0), GateKind::Reset, GateKind::Barrier] {
            assert!(gate_matrix::<f64>(&k).is_err());
        }
    }

    #[test]
    fn cnot_truth_table() {
        let cx = gate_matrix::<f64>(&GateKind::Cnot).unwrap();
        // Control is the local LSB: |control=1, target=0> = index 1 maps to index 3.
        assert_eq!(cx[(3, 1)].re, 1.0);
        assert_eq!(cx[(1, 3)].re, 1.0);
        assert_eq!(cx[(0, 0)].re, 1.0);
        assert_eq!(cx[(2, 2)].re, 1.0);
    }

    #[test]
    fn ccx_truth_table() {
        let ccx = gate_matrix::<f64>(&GateKind::Ccx).unwrap();
        // Both controls set (local bits 0,1), target flips (bit 2): 3 <-> 7.
        assert_eq!(ccx[(7, 3)].re, 1.0);
        assert_eq!(ccx[(3, 7)].re, 1.0);
        assert_eq!(ccx[(2, 2)].re, 1.0);
        assert_eq!(ccx[(5, 5)].re, 1.0);
    }

    #[test]
    fn normalize_angle_half_open_interval() {
        assert_eq!(normalize_angle(PI), PI);
        assert_eq!(normalize_angle(-PI), PI);
        assert!((normalize_angle(3.0 * PI) - PI).abs() < 1e-15);
        assert!((normalize_angle(-0.25) + 0.25).abs() < 1e-15);
        // Idempotent.
        for a in [-7.3, -PI, 0.0, 1.0, PI, 9.9] {
            let n = normalize_angle(a);
            assert_eq!(normalize_angle(n), n);
        }
    }

    #[test]
    fn inverse_pairs_multiply_to_identity() {
        let kinds = [
            GateKind::U3(0.9, -0.4, 1.7),
            GateKind::Rz(2.2),
            GateKind::Cu3(1.3, 0.8, -2.0),
            GateKind::H,
            GateKind::Ccx,
        ];
        for k in kinds {
            let inv = k.inverse().unwrap();
            let m = gate_matrix::<f64>(&k).unwrap();
            let mi = gate_matrix::<f64>(&inv).unwrap();
            let n = m.rows();
            assert!(close(&mi.mul(&m), &M::identity(n), 1e-12), "{k:?}");
        }
    }
}
