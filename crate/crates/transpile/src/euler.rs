//! Single-qubit Euler decomposition and minimal {Rz, SX} lowering.
//!
//! Every 2x2 unitary is, up to global phase, Rz(phi) Ry(theta) Rz(lambda),
//! which the hardware basis realizes as the five-gate template
//! Rz(lambda) . SX . Rz(theta+pi) . SX . Rz(phi+pi) (applied left first).
//! `lower_1q` tries the shorter special forms first (diagonal, half-turn,
//! full X-like) and keeps the cheapest candidate that reproduces the input
//! up to phase, counting SX as ten times the cost of an Rz so the form with
//! fewest SX gates always wins.

use crate::error::{Result, TranspileError};
use crate::matrix::{rz, sqrt_x, u3, Mat2};
use qcflate_core::GateKind;
use std::f64::consts::PI;

/// Tolerance for the unitarity precondition on decomposed matrices.
pub const UNITARY_TOL: f64 = 1e-10;

/// One lowered single-qubit gate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Gate1 {
    Rz(f64),
    Sx,
}

/// Normalize to (-pi, pi], snapping values indistinguishable from zero
/// (or a full turn) to exactly 0.
pub fn norm_ang(a: f64) -> f64 {
    let a = (a + PI).rem_euclid(2.0 * PI) - PI;
    if a.abs() < 1e-12 || (a.abs() - 2.0 * PI).abs() < 1e-12 {
        0.0
    } else {
        a
    }
}

fn unitarity_deviation(m: &Mat2) -> f64 {
    m.adjoint().mul(m).max_abs_diff(&Mat2::identity())
}

/// ZYZ angles of `m` up to global phase: m ~ Rz(phi) Ry(theta) Rz(lambda)
/// with theta in [0, pi].
pub fn euler_zyz(m: &Mat2) -> (f64, f64, f64) {
    let d = m.det().sqrt();
    let u = m.scale(d.inv());
    let theta = 2.0 * u.e[1][0].norm().atan2(u.e[0][0].norm());
    let (phi, lambda) = if u.e[0][0].norm() < 1e-12 {
        (2.0 * u.e[1][0].arg(), 0.0)
    } else if u.e[1][0].norm() < 1e-12 {
        (0.0, 2.0 * u.e[1][1].arg())
    } else {
        let s = u.e[1][1].arg();
        let v = u.e[1][0].arg();
        (s + v, s - v)
    };
    (theta, phi, lambda)
}

/// Full Euler extraction with the global phase, so that
/// `u = e^{i phase} U3(theta, phi, lambda)` entrywise within 1e-10.
///
/// Errors when `u` is not unitary within 1e-10.
pub fn zyz_angles(u: &Mat2) -> Result<(f64, f64, f64, f64)> {
    let dev = unitarity_deviation(u);
    if dev > UNITARY_TOL {
        return Err(TranspileError::NonUnitary {
            tol: UNITARY_TOL,
            dev,
        });
    }
    let (theta, phi, lambda) = euler_zyz(u);
    let recon = u3(theta, phi, lambda);
    let (i, j) = recon.argmax_abs();
    let phase = (u.e[i][j] / recon.e[i][j]).arg();
    Ok((theta, phi, lambda, phase))
}

/// Multiply a lowered form back into a 2x2 matrix (gates applied in order).
pub fn form_matrix(form: &[Gate1]) -> Mat2 {
    let mut m = Mat2::identity();
    for g in form {
        let gm = match g {
            Gate1::Rz(a) => rz(*a),
            Gate1::Sx => sqrt_x(),
        };
        m = gm.mul(&m);
    }
    m
}

fn push_rz(form: &mut Vec<Gate1>, a: f64) {
    if a.abs() > 1e-12 {
        form.push(Gate1::Rz(a));
    }
}

fn form_cost(form: &[Gate1]) -> usize {
    let sx = form.iter().filter(|g| matches!(g, Gate1::Sx)).count();
    sx * 10 + form.len()
}

/// Minimal-cost {Rz, SX} realization of `m` up to global phase.
pub fn lower_1q(m: &Mat2) -> Vec<Gate1> {
    let (th, ph, la) = euler_zyz(m);
    let mut cands: Vec<Vec<Gate1>> = Vec::new();

    if norm_ang(th).abs() < 1e-9 {
        // diagonal: at most one Rz
        let a = norm_ang(ph + la);
        let mut f = Vec::new();
        push_rz(&mut f, a);
        cands.push(f);
    }
    if norm_ang(th - PI / 2.0).abs() < 1e-9 {
        // half turn: Rz . SX . Rz
        let mut f = Vec::new();
        push_rz(&mut f, norm_ang(la - PI / 2.0));
        f.push(Gate1::Sx);
        push_rz(&mut f, norm_ang(ph + PI / 2.0));
        cands.push(f);
    }
    if norm_ang(th - PI).abs() < 1e-9 || norm_ang(th + PI).abs() < 1e-9 {
        // full X-like: Rz . SX . SX . Rz with the phase split found by search
        let a = norm_ang(ph + la);
        for b in [norm_ang(la), 0.0] {
            let cc = norm_ang(a - b);
            let mut f = Vec::new();
            push_rz(&mut f, b);
            f.push(Gate1::Sx);
            f.push(Gate1::Sx);
            push_rz(&mut f, cc);
            if form_matrix(&f).eq_up_to_phase(m, 1e-9) {
                cands.push(f);
                break;
            }
        }
    }
    // generic 5-gate template (with zero-angle elisions)
    let mut f = Vec::new();
    push_rz(&mut f, norm_ang(la));
    f.push(Gate1::Sx);
    push_rz(&mut f, norm_ang(th + PI));
    f.push(Gate1::Sx);
    push_rz(&mut f, norm_ang(ph + PI));
    cands.push(f);

    cands
        .into_iter()
        .filter(|f| form_matrix(f).eq_up_to_phase(m, 1e-9))
        .min_by_key(|f| form_cost(f))
        .expect("the generic 5-gate form always reproduces a unitary input")
}

/// Lower U3(theta, phi, lambda) to basis instructions over {Rz, SX}.
///
/// Output length is 0, 1, 2, 3, or 5 gates depending on which special form
/// applies; the result equals U3 up to global phase within 1e-10.
pub fn decompose_u3_to_basis(theta: f64, phi: f64, lambda: f64) -> Vec<GateKind> {
    lower_1q(&u3(theta, phi, lambda))
        .into_iter()
        .map(|g| match g {
            Gate1::Rz(a) => GateKind::Rz(a),
            Gate1::Sx => GateKind::Sx,
        })
        .collect()
}
