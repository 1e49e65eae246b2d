//! Small dense complex matrices and a Hermitian eigensolver.
//!
//! The transpiler and simulator only ever handle matrices up to 16×16
//! (two-qubit synthesis, few-qubit tomography), so everything here is a
//! straightforward dense implementation tuned for clarity and determinism
//! rather than scale.  The eigensolver is a cyclic complex Jacobi iteration:
//! it is exactly reproducible across runs and platforms with IEEE arithmetic,
//! which the determinism guarantees of the pipeline rely on.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::scalar::Scalar;

/// Dense row-major complex matrix.
#[derive(Clone, PartialEq)]
pub struct CMat<S: Scalar> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<S>>,
}

impl<S: Scalar> std::fmt::Debug for CMat<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "CMat {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                let z = self[(r, c)];
                write!(f, "{:+.4}{:+.4}i  ", z.re.to_f64_lossy(), z.im.to_f64_lossy())?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl<S: Scalar> CMat<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat { rows, cols, data: vec![Complex::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex::one();
        }
        m
    }

    /// Build from a closure over (row, col).
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex<S>) -> Self {
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m[(r, c)] = f(r, c);
            }
        }
        m
    }

    /// Build from nested row slices; all rows must have equal length.
    pub fn from_rows(rows: &[&[Complex<S>]]) -> Self {
        let nr = rows.len();
        let nc = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(nr, nc);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), nc, "ragged rows");
            for (c, &z) in row.iter().enumerate() {
                m[(r, c)] = z;
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in mul");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a == Complex::zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    out[(r, c)] = out[(r, c)] + a * rhs[(k, c)];
                }
            }
        }
        out
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[Complex<S>]) -> Vec<Complex<S>> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in mul_vec");
        let mut out = vec![Complex::zero(); self.rows];
        for r in 0..self.rows {
            let mut acc = Complex::zero();
            for c in 0..self.cols {
                acc = acc + self[(r, c)] * v[c];
            }
            out[r] = acc;
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    pub fn conj(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |r, c| self[(r, c)].conj())
    }

    pub fn scale(&self, z: Complex<S>) -> Self {
        Self::from_fn(self.rows, self.cols, |r, c| self[(r, c)] * z)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Self::from_fn(self.rows, self.cols, |r, c| self[(r, c)] + rhs[(r, c)])
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Self::from_fn(self.rows, self.cols, |r, c| self[(r, c)] - rhs[(r, c)])
    }

    /// Kronecker product `self ⊗ rhs`.
    ///
    /// With the crate's bit convention (qubit 0 = least significant bit), the
    /// operator acting on the higher wire goes on the left: `kron(b, a)` acts
    /// as `b` on qubit 1 and `a` on qubit 0.
    pub fn kron(&self, rhs: &Self) -> Self {
        let (p, q) = (self.rows, self.cols);
        let (r, s) = (rhs.rows, rhs.cols);
        CMat::from_fn(p * r, q * s, |i, j| self[(i / r, j / s)] * rhs[(i % r, j % s)])
    }

    pub fn trace(&self) -> Complex<S> {
        assert!(self.is_square());
        (0..self.rows).fold(Complex::zero(), |acc, i| acc + self[(i, i)])
    }

    /// Determinant by partial-pivot Gaussian elimination.
    pub fn det(&self) -> Complex<S> {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut det = Complex::one();
        for k in 0..n {
            let pivot = (k..n)
                .max_by(|&i, &j| {
                    a[(i, k)].norm_sqr().partial_cmp(&a[(j, k)].norm_sqr()).unwrap()
                })
                .unwrap();
            if a[(pivot, k)].norm_sqr() == S::zero() {
                return Complex::zero();
            }
            if pivot != k {
                for c in 0..n {
                    let tmp = a[(k, c)];
                    a[(k, c)] = a[(pivot, c)];
                    a[(pivot, c)] = tmp;
                }
                det = -det;
            }
            det = det * a[(k, k)];
            for i in k + 1..n {
                let f = a[(i, k)] / a[(k, k)];
                for c in k..n {
                    let v = a[(k, c)];
                    a[(i, c)] = a[(i, c)] - f * v;
                }
            }
        }
        det
    }

    /// Largest entrywise absolute difference.
    pub fn max_abs_diff(&self, rhs: &Self) -> S {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut worst = S::zero();
        for (a, b) in self.data.iter().zip(rhs.data.iter()) {
            worst = worst.max((*a - *b).norm());
        }
        worst
    }

    pub fn frobenius_norm(&self) -> S {
        self.data.iter().map(|z| z.norm_sqr()).fold(S::zero(), |a, b| a + b).sqrt()
    }

    /// `true` if `self† self = I` within `tol` entrywise.
    pub fn is_unitary(&self, tol: S) -> bool {
        self.is_square() && self.adjoint().mul(self).max_abs_diff(&Self::identity(self.rows)) <= tol
    }

    /// `true` if `self = self†` within `tol` entrywise.
    pub fn is_hermitian(&self, tol: S) -> bool {
        self.is_square() && self.max_abs_diff(&self.adjoint()) <= tol
    }
}

impl<S: Scalar> std::ops::Index<(usize, usize)> for CMat<S> {
    type Output = Complex<S>;

    fn index(&self, (r, c): (usize, usize)) -> &Complex<S> {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl<S: Scalar> std::ops::IndexMut<(usize, usize)> for CMat<S> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex<S> {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

/// Overlap fidelity `|tr(a† b)| / n` of two same-sized unitaries.
///
/// Equals 1 exactly when `a` and `b` agree up to a global phase; this is the
/// semantic-equivalence certificate used throughout the transpiler.
pub fn unitary_fidelity<S: Scalar>(a: &CMat<S>, b: &CMat<S>) -> S {
    assert_eq!((a.rows(), a.cols()), (b.rows(), b.cols()));
    a.adjoint().mul(b).trace().norm() / S::from_usize(a.rows()).unwrap()
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi.
///
/// Returns eigenvalues in ascending order and a unitary whose columns are the
/// matching eigenvectors: `a = V · diag(vals) · V†`.  Fully deterministic:
/// fixed sweep order, no randomized pivoting.
pub fn eigh<S: Scalar>(a: &CMat<S>) -> (Vec<S>, CMat<S>) {
    assert!(a.is_square(), "eigh needs a square matrix");
    let n = a.rows();
    debug_assert!(a.is_hermitian(S::tol() * S::of(100.0)), "eigh input not Hermitian");
    let mut m = a.clone();
    let mut v = CMat::identity(n);
    let scale = m.frobenius_norm().max(S::one());
    let threshold = scale * S::epsilon() * S::of(0.5);

    for _sweep in 0..100 {
        let mut off = S::zero();
        for p in 0..n {
            for q in p + 1..n {
                off = off + m[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= threshold {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                let r = apq.norm();
                if r <= threshold * S::of(1e-3) {
                    continue;
                }
                // Phase-rotate column q so the (p,q) entry becomes real.
                let phase = apq / r;
                for i in 0..n {
                    m[(i, q)] = m[(i, q)] * phase.conj();
                }
                for j in 0..n {
                    m[(q, j)] = m[(q, j)] * phase;
                }
                for i in 0..n {
                    v[(i, q)] = v[(i, q)] * phase.conj();
                }
                // Real Jacobi rotation zeroing the now-real (p,q) entry.
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                let tau = (aqq - app) / (S::of(2.0) * r);
                let t = if tau >= S::zero() {
                    S::one() / (tau + (S::one() + tau * tau).sqrt())
                } else {
                    -S::one() / (-tau + (S::one() + tau * tau).sqrt())
                };
                let c = S::one() / (S::one() + t * t).sqrt();
                let s = t * c;
                let (cc, ss) = (Complex::new(c, S::zero()), Complex::new(s, S::zero()));
                for i in 0..n {
                    let mip = m[(i, p)];
                    let miq = m[(i, q)];
                    m[(i, p)] = mip * cc - miq * ss;
                    m[(i, q)] = mip * ss + miq * cc;
                }
                for j in 0..n {
                    let mpj = m[(p, j)];
                    let mqj = m[(q, j)];
                    m[(p, j)] = mpj * cc - mqj * ss;
                    m[(q, j)] = mpj * ss + mqj * cc;
                }
                for i in 0..n {
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = vip * cc - viq * ss;
                    v[(i, q)] = vip * ss + viq * cc;
                }
                // Clean up rounding residue on the zeroed pair.
                m[(p, q)] = Complex::zero();
                m[(q, p)] = Complex::zero();
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.partial_cmp(&m[(j, j)].re).unwrap());
    let vals: Vec<S> = order.iter().map(|&i| m[(i, i)].re).collect();
    let vecs = CMat::from_fn(n, n, |r, c| v[(r, order[c])]);
    (vals, vecs)
}
