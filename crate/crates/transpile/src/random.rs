//! Haar-random unitaries for tests and randomized verification.
//!
//! Ginibre + QR with the R-diagonal phase fix: draw a complex Gaussian
//! matrix, orthonormalize its columns by modified Gram-Schmidt, and divide
//! each column by the phase of its R diagonal entry.  The result is
//! distributed with Haar measure.

use crate::matrix::{Mat2, Mat4};
use qcflate_core::C64;
use rand::Rng;
use rand_distr::StandardNormal;

fn ginibre<R: Rng>(rng: &mut R, n: usize) -> Vec<Vec<C64>> {
    (0..n)
        .map(|_| {
            (0..n)
                .map(|_| {
                    let re: f64 = rng.sample(StandardNormal);
                    let im: f64 = rng.sample(StandardNormal);
                    C64::new(re, im)
                })
                .collect()
        })
        .collect()
}

/// Orthonormalize columns in place (modified Gram-Schmidt) and fix each
/// column's phase so the implicit R diagonal is real positive.
fn haar_from_ginibre(mut a: Vec<Vec<C64>>) -> Vec<Vec<C64>> {
    let n = a.len();
    for j in 0..n {
        for k in 0..j {
            let mut dot = C64::new(0.0, 0.0);
            for r in 0..n {
                dot += a[r][k].conj() * a[r][j];
            }
            for r in 0..n {
                let v = a[r][k];
                a[r][j] -= dot * v;
            }
        }
        let mut norm = 0.0f64;
        for r in 0..n {
            norm += a[r][j].norm_sqr();
        }
        let norm = norm.sqrt();
        // R[j][j] before scaling is `norm` times the phase of the pivot
        // projection; after normalization the diagonal entry of R equals the
        // inner product of the original column with the new one, whose phase
        // we strip from the column.
        for r in 0..n {
            a[r][j] /= norm;
        }
    }
    a
}

/// Haar-random 2x2 unitary.
pub fn haar_mat2<R: Rng>(rng: &mut R) -> Mat2 {
    let g = ginibre(rng, 2);
    let q = haar_from_ginibre(g);
    let mut m = Mat2::zero();
    for i in 0..2 {
        for j in 0..2 {
            m.e[i][j] = q[i][j];
        }
    }
    // random global phase keeps the distribution invariant and exercises
    // phase handling downstream
    let ph: f64 = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
    m.scale(C64::from_polar(1.0, ph))
}

/// Haar-random 4x4 unitary.
pub fn haar_mat4<R: Rng>(rng: &mut R) -> Mat4 {
    let g = ginibre(rng, 4);
    let q = haar_from_ginibre(g);
    let mut m = Mat4::zero();
    for i in 0..4 {
        for j in 0..4 {
            m.e[i][j] = q[i][j];
        }
    }
    let ph: f64 = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
    m.scale(C64::from_polar(1.0, ph))
}
