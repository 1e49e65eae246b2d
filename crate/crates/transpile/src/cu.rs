//! Structure-aware lowering of controlled gates.
//!
//! A controlled-U3 costs one CNOT when the controlled operator is a phased
//! reflection (eigenphases differ by pi) and two in the general case, where
//! the classic ABC conjugation applies.  The Toffoli uses the textbook
//! six-CNOT network whose trailing CNOT(a -> b) often cancels against a
//! neighbouring CNOT, which is why control order is worth a seed bit during
//! trials.

use crate::euler::{euler_zyz, norm_ang};
use crate::matrix::{c, identity2, rz, u3, Mat2};
use crate::ops::Op;
use qcflate_core::{eigh, C64, Mat};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

/// Trace threshold for classifying a controlled operator as a reflection.
pub const REFLECTION_TOL: f64 = 1e-7;

fn ry_m(a: f64) -> Mat2 {
    let (s, co) = (a / 2.0).sin_cos();
    let mut m = Mat2::zero();
    m.e[0][0] = c(co, 0.0);
    m.e[0][1] = c(-s, 0.0);
    m.e[1][0] = c(s, 0.0);
    m.e[1][1] = c(co, 0.0);
    m
}

fn rz_m(a: f64) -> Mat2 {
    rz(a)
}

/// Lower CU3(th, ph, la) with control `ctl` and target `tgt` to ops.
pub fn cu3_ops(th: f64, ph: f64, la: f64, ctl: usize, tgt: usize) -> Vec<Op> {
    let v = u3(th, ph, la);
    let d = v.det().arg() / 2.0;
    let (y, p, l) = euler_zyz(&v);

    // reflection case: e^{-id} V traceless means eigenvalues +-i, i.e.
    // V = e^{i delta} R with R a Hermitian reflection and delta = d -+ pi/2
    let tr = v.trace() * C64::from_polar(1.0, -d);
    if tr.norm() < REFLECTION_TOL {
        let mut cands = [d + FRAC_PI_2, d - FRAC_PI_2];
        cands.sort_by(|a, b| norm_ang(*a).abs().total_cmp(&norm_ang(*b).abs()));
        let mut delta = cands[0];
        let mut r = v.scale(C64::from_polar(1.0, -delta));
        for cand in cands {
            let rc = v.scale(C64::from_polar(1.0, -cand));
            if rc.max_abs_diff(&rc.adjoint()) < 1e-9 {
                delta = cand;
                r = rc;
                break;
            }
        }
        let rh = Mat::from_fn(2, 2, |i, j| (r.e[i][j] + r.e[j][i].conj()) * 0.5);
        let (w, wv) = eigh(&rh);
        // order eigenvector columns (+1, -1)
        let mut wm = Mat2::zero();
        if w[0] > 0.0 {
            for i in 0..2 {
                for j in 0..2 {
                    wm.e[i][j] = wv[(i, j)];
                }
            }
        } else {
            for i in 0..2 {
                for j in 0..2 {
                    wm.e[i][j] = wv[(i, 1 - j)];
                }
            }
        }
        let h = u3(FRAC_PI_2, 0.0, PI);
        let mut ops = vec![
            Op::one_q(tgt, h.mul(&wm.adjoint())),
            Op::cx(ctl, tgt),
            Op::one_q(tgt, wm.mul(&h)),
        ];
        let delta = norm_ang(delta);
        if delta.abs() > 1e-12 {
            // diag(1, e^{i delta}) up to global phase
            ops.push(Op::one_q(ctl, rz_m(delta)));
        }
        return ops;
    }

    // general ABC conjugation, two CNOTs: V = e^{i delta} Rz(p) Ry(y) Rz(l)
    let a = rz_m(p).mul(&ry_m(y / 2.0));
    let bm = ry_m(-y / 2.0).mul(&rz_m(-(l + p) / 2.0));
    let cg = rz_m((l - p) / 2.0);
    let vsu = rz_m(p).mul(&ry_m(y)).mul(&rz_m(l));
    let (i0, j0) = vsu.argmax_abs();
    let delta = (v.e[i0][j0] / vsu.e[i0][j0]).arg();
    let mut ops = Vec::new();
    if cg.max_abs_diff(&identity2()) > 1e-12 {
        ops.push(Op::one_q(tgt, cg));
    }
    ops.push(Op::cx(ctl, tgt));
    ops.push(Op::one_q(tgt, bm));
    ops.push(Op::cx(ctl, tgt));
    ops.push(Op::one_q(tgt, a));
    if norm_ang(delta).abs() > 1e-12 {
        ops.push(Op::one_q(ctl, rz_m(delta)));
    }
    ops
}

/// Lower a controlled-Hadamard with control `ctl` and target `tgt`.
pub fn ch_ops(ctl: usize, tgt: usize) -> Vec<Op> {
    cu3_ops(FRAC_PI_2, 0.0, PI, ctl, tgt)
}

/// Six-CNOT Toffoli with controls (a, b) and target `t`; the trailing
/// CNOT(a -> b) is the piece that cancellation passes feed on.
pub fn ccx_ops(a: usize, b: usize, t: usize) -> Vec<Op> {
    let tg = rz(FRAC_PI_4).scale(C64::from_polar(1.0, PI / 8.0));
    let tdg = tg.adjoint();
    let h = u3(FRAC_PI_2, 0.0, PI);
    vec![
        Op::one_q(t, h),
        Op::cx(b, t),
        Op::one_q(t, tdg),
        Op::cx(a, t),
        Op::one_q(t, tg),
        Op::cx(b, t),
        Op::one_q(t, tdg),
        Op::cx(a, t),
        Op::one_q(t, tg),
        Op::one_q(b, tg),
        Op::one_q(t, h),
        Op::cx(a, b),
        Op::one_q(a, tg),
        Op::one_q(b, tdg),
        Op::cx(a, b),
    ]
}

/// Controlled application of `u` on `target` given `controls` all set, over
/// `n` qubits — dense reference matrix for verification.
pub fn controlled_dense(u: &Mat2, controls: &[usize], target: usize, n: usize) -> Mat {
    let dim = 1usize << n;
    Mat::from_fn(dim, dim, |i, j| {
        let ctrl_on = |x: usize| controls.iter().all(|&q| (x >> q) & 1 == 1);
        let rest_eq = {
            let mask = !((1usize << target) | controls.iter().map(|&q| 1usize << q).sum::<usize>());
            (i & mask & (dim - 1)) == (j & mask & (dim - 1))
        };
        if !rest_eq {
            return C64::new(0.0, 0.0);
        }
        if ctrl_on(i) && ctrl_on(j) {
            u.e[(i >> target) & 1][(j >> target) & 1]
        } else if i == j {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::pauli_x;
    use crate::ops::{count_cx, ops_unitary};
    use qcflate_core::unitary_fidelity;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    fn check(ops: &[Op], target: &Mat, n: usize) {
        let u = ops_unitary(ops, n);
        let f = unitary_fidelity(&u, target);
        assert!(f > 1.0 - 1e-10, "fidelity {f} too low");
    }

    #[test]
    fn cu3_reflection_family_is_one_cnot() {
        // lambda - phi = pi makes U3 a phased reflection
        let ops = cu3_ops(1.23, 0.0, PI, 0, 2);
        assert_eq!(count_cx(&ops), 1);
        check(&ops, &controlled_dense(&u3(1.23, 0.0, PI), &[0], 2, 3), 3);
    }

    #[test]
    fn cu3_generic_family_is_two_cnots() {
        let ops = cu3_ops(1.91, PI, PI, 0, 2);
        assert_eq!(count_cx(&ops), 2);
        check(&ops, &controlled_dense(&u3(1.91, PI, PI), &[0], 2, 3), 3);
    }

    #[test]
    fn controlled_hadamard_is_one_cnot() {
        let ops = ch_ops(1, 0);
        assert_eq!(count_cx(&ops), 1);
        let h = u3(FRAC_PI_2, 0.0, PI);
        check(&ops, &controlled_dense(&h, &[1], 0, 2), 2);
    }

    #[test]
    fn random_cu3_is_exact() {
        let mut rng = ChaCha20Rng::seed_from_u64(8);
        for _ in 0..30 {
            let th = rng.gen_range(-PI..PI);
            let ph = rng.gen_range(-PI..PI);
            let la = rng.gen_range(-PI..PI);
            let ops = cu3_ops(th, ph, la, 0, 2);
            assert!(count_cx(&ops) <= 2);
            check(&ops, &controlled_dense(&u3(th, ph, la), &[0], 2, 3), 3);
        }
    }

    #[test]
    fn toffoli_is_six_cnots_and_exact() {
        for (a, b, t) in [(1usize, 2usize, 0usize), (2, 1, 0), (0, 1, 2)] {
            let ops = ccx_ops(a, b, t);
            assert_eq!(count_cx(&ops), 6);
            check(&ops, &controlled_dense(&pauli_x(), &[a, b], t, 3), 3);
        }
    }

    #[test]
    fn controlled_dense_matches_core_circuit() {
        let mut c = qcflate_core::Circuit::new(3, 0);
        c.ccx(1, 2, 0);
        let want: Mat = c.unitary().unwrap();
        let got = controlled_dense(&pauli_x(), &[1, 2], 0, 3);
        assert!(unitary_fidelity(&got, &want) > 1.0 - 1e-12);
    }
}
