//! Stack-allocated 2x2 and 4x4 complex matrices for the pass machinery.
//!
//! The optimizer multiplies thousands of small gate matrices per transpile
//! call; boxing them in heap-backed general matrices would dominate the
//! runtime.  `Mat2`/`Mat4` are plain `Copy` value types with only the
//! operations the passes need.  Two-qubit matrices follow the crate-wide
//! convention: local qubit 0 is the least significant index bit, and
//! `Mat4::kron(g1, g0)` places `g1` on local qubit 1.

use qcflate_core::C64;

/// 2x2 complex matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2 {
    pub e: [[C64; 2]; 2],
}

/// 4x4 complex matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat4 {
    pub e: [[C64; 4]; 4],
}

pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

impl Mat2 {
    pub const fn new(e: [[C64; 2]; 2]) -> Self {
        Mat2 { e }
    }

    pub fn zero() -> Self {
        Mat2::new([[c(0.0, 0.0); 2]; 2])
    }

    pub fn identity() -> Self {
        let mut m = Mat2::zero();
        m.e[0][0] = c(1.0, 0.0);
        m.e[1][1] = c(1.0, 0.0);
        m
    }

    pub fn diag(d0: C64, d1: C64) -> Self {
        let mut m = Mat2::zero();
        m.e[0][0] = d0;
        m.e[1][1] = d1;
        m
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &Mat2) -> Mat2 {
        let mut out = Mat2::zero();
        for i in 0..2 {
            for j in 0..2 {
                let mut s = c(0.0, 0.0);
                for k in 0..2 {
                    s += self.e[i][k] * rhs.e[k][j];
                }
                out.e[i][j] = s;
            }
        }
        out
    }

    pub fn adjoint(&self) -> Mat2 {
        let mut out = Mat2::zero();
        for i in 0..2 {
            for j in 0..2 {
                out.e[i][j] = self.e[j][i].conj();
            }
        }
        out
    }

    pub fn scale(&self, s: C64) -> Mat2 {
        let mut out = *self;
        for row in out.e.iter_mut() {
            for v in row.iter_mut() {
                *v *= s;
            }
        }
        out
    }

    pub fn det(&self) -> C64 {
        self.e[0][0] * self.e[1][1] - self.e[0][1] * self.e[1][0]
    }

    pub fn trace(&self) -> C64 {
        self.e[0][0] + self.e[1][1]
    }

    /// Largest entrywise absolute difference to `rhs`.
    pub fn max_abs_diff(&self, rhs: &Mat2) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                worst = worst.max((self.e[i][j] - rhs.e[i][j]).norm());
            }
        }
        worst
    }

    /// Index (row, col) of the entry with the largest magnitude; first wins ties.
    pub fn argmax_abs(&self) -> (usize, usize) {
        let mut best = (0, 0);
        let mut mag = -1.0f64;
        for i in 0..2 {
            for j in 0..2 {
                let v = self.e[i][j].norm();
                if v > mag {
                    mag = v;
                    best = (i, j);
                }
            }
        }
        best
    }

    /// True when `self` equals `rhs` up to a global phase, entrywise within `tol`.
    pub fn eq_up_to_phase(&self, rhs: &Mat2, tol: f64) -> bool {
        let (i, j) = rhs.argmax_abs();
        if self.e[i][j].norm() < 1e-12 {
            return false;
        }
        let ratio = self.e[i][j] / rhs.e[i][j];
        self.scale(ratio.inv()).max_abs_diff(rhs) < tol
    }
}

impl Mat4 {
    pub const fn new(e: [[C64; 4]; 4]) -> Self {
        Mat4 { e }
    }

    pub fn zero() -> Self {
        Mat4::new([[c(0.0, 0.0); 4]; 4])
    }

    pub fn identity() -> Self {
        let mut m = Mat4::zero();
        for i in 0..4 {
            m.e[i][i] = c(1.0, 0.0);
        }
        m
    }

    /// Kronecker product with `g1` on local qubit 1 and `g0` on local qubit 0.
    pub fn kron(g1: &Mat2, g0: &Mat2) -> Mat4 {
        let mut out = Mat4::zero();
        for a in 0..2 {
            for b in 0..2 {
                for x in 0..2 {
                    for y in 0..2 {
                        out.e[a * 2 + x][b * 2 + y] = g1.e[a][b] * g0.e[x][y];
                    }
                }
            }
        }
        out
    }

    pub fn mul(&self, rhs: &Mat4) -> Mat4 {
        let mut out = Mat4::zero();
        for i in 0..4 {
            for j in 0..4 {
                let mut s = c(0.0, 0.0);
                for k in 0..4 {
                    s += self.e[i][k] * rhs.e[k][j];
                }
                out.e[i][j] = s;
            }
        }
        out
    }

    pub fn adjoint(&self) -> Mat4 {
        let mut out = Mat4::zero();
        for i in 0..4 {
            for j in 0..4 {
                out.e[i][j] = self.e[j][i].conj();
            }
        }
        out
    }

    pub fn transpose(&self) -> Mat4 {
        let mut out = Mat4::zero();
        for i in 0..4 {
            for j in 0..4 {
                out.e[i][j] = self.e[j][i];
            }
        }
        out
    }

    pub fn conj(&self) -> Mat4 {
        let mut out = *self;
        for row in out.e.iter_mut() {
            for v in row.iter_mut() {
                *v = v.conj();
            }
        }
        out
    }

    pub fn scale(&self, s: C64) -> Mat4 {
        let mut out = *self;
        for row in out.e.iter_mut() {
            for v in row.iter_mut() {
                *v *= s;
            }
        }
        out
    }

    pub fn trace(&self) -> C64 {
        (0..4).map(|i| self.e[i][i]).sum()
    }

    /// Determinant via cofactor expansion along the first row.
    pub fn det(&self) -> C64 {
        let m3 = |r: [usize; 3], cl: [usize; 3]| -> C64 {
            let e = &self.e;
            e[r[0]][cl[0]] * (e[r[1]][cl[1]] * e[r[2]][cl[2]] - e[r[1]][cl[2]] * e[r[2]][cl[1]])
                - e[r[0]][cl[1]]
                    * (e[r[1]][cl[0]] * e[r[2]][cl[2]] - e[r[1]][cl[2]] * e[r[2]][cl[0]])
                + e[r[0]][cl[2]]
                    * (e[r[1]][cl[0]] * e[r[2]][cl[1]] - e[r[1]][cl[1]] * e[r[2]][cl[0]])
        };
        let rows = [1, 2, 3];
        self.e[0][0] * m3(rows, [1, 2, 3]) - self.e[0][1] * m3(rows, [0, 2, 3])
            + self.e[0][2] * m3(rows, [0, 1, 3])
            - self.e[0][3] * m3(rows, [0, 1, 2])
    }

    pub fn max_abs_diff(&self, rhs: &Mat4) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                worst = worst.max((self.e[i][j] - rhs.e[i][j]).norm());
            }
        }
        worst
    }

    /// |tr(self† rhs)| / 4, the phase-insensitive 2-qubit gate fidelity.
    pub fn gate_fidelity(&self, rhs: &Mat4) -> f64 {
        self.adjoint().mul(rhs).trace().norm() / 4.0
    }
}

// ---- shared gate constants and rotation builders ----

pub fn identity2() -> Mat2 {
    Mat2::identity()
}

pub fn pauli_x() -> Mat2 {
    Mat2::new([[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]])
}

pub fn pauli_y() -> Mat2 {
    Mat2::new([[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]])
}

pub fn pauli_z() -> Mat2 {
    Mat2::new([[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]])
}

pub fn sqrt_x() -> Mat2 {
    Mat2::new([
        [c(0.5, 0.5), c(0.5, -0.5)],
        [c(0.5, -0.5), c(0.5, 0.5)],
    ])
}

pub fn rx(t: f64) -> Mat2 {
    let (s, co) = (t / 2.0).sin_cos();
    Mat2::new([[c(co, 0.0), c(0.0, -s)], [c(0.0, -s), c(co, 0.0)]])
}

pub fn ry(t: f64) -> Mat2 {
    let (s, co) = (t / 2.0).sin_cos();
    Mat2::new([[c(co, 0.0), c(-s, 0.0)], [c(s, 0.0), c(co, 0.0)]])
}

pub fn rz(t: f64) -> Mat2 {
    Mat2::diag(C64::from_polar(1.0, -t / 2.0), C64::from_polar(1.0, t / 2.0))
}

/// U3(theta, phi, lambda) in the standard convention.
pub fn u3(theta: f64, phi: f64, lambda: f64) -> Mat2 {
    let (s, co) = (theta / 2.0).sin_cos();
    Mat2::new([
        [c(co, 0.0), -C64::from_polar(s, lambda)],
        [C64::from_polar(s, phi), C64::from_polar(co, phi + lambda)],
    ])
}

/// CNOT with control on local qubit 0 (the low index bit).
pub fn cnot01() -> Mat4 {
    let mut m = Mat4::zero();
    for b in 0..4usize {
        let (q0, q1) = (b & 1, (b >> 1) & 1);
        m.e[((q1 ^ q0) << 1) | q0][b] = c(1.0, 0.0);
    }
    m
}

/// CNOT with control on local qubit 1 (the high index bit).
pub fn cnot10() -> Mat4 {
    let mut m = Mat4::zero();
    for b in 0..4usize {
        let (q0, q1) = (b & 1, (b >> 1) & 1);
        m.e[(q1 << 1) | (q0 ^ q1)][b] = c(1.0, 0.0);
    }
    m
}

pub fn swap4() -> Mat4 {
    let mut m = Mat4::zero();
    for b in 0..4usize {
        let (q0, q1) = (b & 1, (b >> 1) & 1);
        m.e[(q0 << 1) | q1][b] = c(1.0, 0.0);
    }
    m
}

/// Controlled 2x2 `u` embedded on a local pair: `control` and `target` are
/// local positions in {0, 1} with qubit 0 the low index bit.
pub fn controlled_local(u: &Mat2, control: usize, target: usize) -> Mat4 {
    assert!(control < 2 && target < 2 && control != target);
    let mut m = Mat4::zero();
    for b in 0..4usize {
        if (b >> control) & 1 == 0 {
            m.e[b][b] = c(1.0, 0.0);
        } else {
            let bit = (b >> target) & 1;
            for nb in 0..2usize {
                let row = (b & !(1 << target)) | (nb << target);
                m.e[row][b] += u.e[nb][bit];
            }
        }
    }
    m
}
