//! Matrix-backed intermediate representation used by the optimizer.
//!
//! Between lowering and final basis emission, a circuit segment is a flat
//! list of `Op`s: CNOTs plus arbitrary single-qubit matrices.  Keeping 1q
//! gates as matrices lets passes merge and re-factor them freely; only the
//! last lowering step commits to {Rz, SX} forms.

use crate::matrix::{controlled_local, Mat2, Mat4};
use qcflate_core::{apply_local_unitary, C64, Mat};

/// One optimizer-level operation.
#[derive(Clone, Copy, Debug)]
pub enum Op {
    /// CNOT with control `c` and target `t` (wire indices).
    Cx { c: usize, t: usize },
    /// Arbitrary single-qubit unitary on wire `q`.
    OneQ { q: usize, m: Mat2 },
}

impl Op {
    pub fn cx(c: usize, t: usize) -> Op {
        Op::Cx { c, t }
    }

    pub fn one_q(q: usize, m: Mat2) -> Op {
        Op::OneQ { q, m }
    }

    /// Wires the op acts on (one or two entries).
    pub fn support(&self) -> OpSupport {
        match *self {
            Op::Cx { c, t } => OpSupport::Two(c, t),
            Op::OneQ { q, .. } => OpSupport::One(q),
        }
    }

    pub fn touches(&self, q: usize) -> bool {
        match *self {
            Op::Cx { c, t } => c == q || t == q,
            Op::OneQ { q: w, .. } => w == q,
        }
    }

    pub fn is_cx(&self) -> bool {
        matches!(self, Op::Cx { .. })
    }
}

/// Small fixed-size support set to avoid per-op allocation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum OpSupport {
    One(usize),
    Two(usize, usize),
}

impl OpSupport {
    pub fn contains(&self, q: usize) -> bool {
        match *self {
            OpSupport::One(a) => a == q,
            OpSupport::Two(a, b) => a == q || b == q,
        }
    }

    pub fn intersects(&self, other: &OpSupport) -> bool {
        match *other {
            OpSupport::One(a) => self.contains(a),
            OpSupport::Two(a, b) => self.contains(a) || self.contains(b),
        }
    }

    /// True when every wire of `self` lies in the unordered pair (a, b).
    pub fn within_pair(&self, a: usize, b: usize) -> bool {
        match *self {
            OpSupport::One(x) => x == a || x == b,
            OpSupport::Two(x, y) => (x == a || x == b) && (y == a || y == b),
        }
    }
}

/// Number of CNOTs in an op list.
pub fn count_cx(ops: &[Op]) -> usize {
    ops.iter().filter(|o| o.is_cx()).count()
}

/// 4x4 matrix of `op` embedded on the ordered pair (a, b), with `a` as local
/// qubit 0.  The op's support must lie within the pair.
pub fn op_on_pair(op: &Op, a: usize, b: usize) -> Mat4 {
    match *op {
        Op::Cx { c, t } => {
            debug_assert!((c == a || c == b) && (t == a || t == b));
            let cl = if c == a { 0 } else { 1 };
            let tl = if t == a { 0 } else { 1 };
            controlled_local(&crate::matrix::pauli_x(), cl, tl)
        }
        Op::OneQ { q, m } => {
            debug_assert!(q == a || q == b);
            if q == a {
                Mat4::kron(&Mat2::identity(), &m)
            } else {
                Mat4::kron(&m, &Mat2::identity())
            }
        }
    }
}

fn mat2_to_cmat(m: &Mat2) -> Mat {
    Mat::from_fn(2, 2, |i, j| m.e[i][j])
}

/// Dense unitary of an op list over `num_qubits` wires (qubit 0 = least
/// significant index bit), ops applied first-to-last.
pub fn ops_unitary(ops: &[Op], num_qubits: usize) -> Mat {
    let dim = 1usize << num_qubits;
    // CNOT with control on local wire 0; passing wires [c, t] puts the
    // control on wire c.
    let cx_local = controlled_local(&crate::matrix::pauli_x(), 0, 1);
    let cx_cmat = Mat::from_fn(4, 4, |r, s| cx_local.e[r][s]);
    let mut u = Mat::zeros(dim, dim);
    let mut column = vec![C64::new(0.0, 0.0); dim];
    for j in 0..dim {
        column.fill(C64::new(0.0, 0.0));
        column[j] = C64::new(1.0, 0.0);
        for op in ops {
            match *op {
                Op::Cx { c, t } => {
                    apply_local_unitary(&mut column, num_qubits, &cx_cmat, &[c, t]);
                }
                Op::OneQ { q, m } => {
                    apply_local_unitary(&mut column, num_qubits, &mat2_to_cmat(&m), &[q]);
                }
            }
        }
        for i in 0..dim {
            u[(i, j)] = column[i];
        }
    }
    u
}
