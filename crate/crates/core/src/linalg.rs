//! Dense quaternion matrices and inversion through the complex adjoint.
//!
//! A quaternion matrix `M = A1 + A2 j` (with `A1`, `A2` complex in the
//! i-plane) is represented by the `2n x 2n` complex block matrix
//! `C(M) = [[A1, A2], [-conj(A2), conj(A1)]]`. `M` is invertible exactly
//! when `C(M)` is, and `C(M^{-1}) = C(M)^{-1}`, so inversion is done with
//! ordinary partial-pivot elimination on `C(M)` and the blocks mapped back.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fm;
use crate::quat::Quaternion;

/// Dense row-major quaternion matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct QuatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Quaternion>,
}

impl QuatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Quaternion::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for r in 0..n {
            m[(r, r)] = Quaternion::ONE;
        }
        m
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Quaternion,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Row-major matrix product; factor order is `self * rhs`.
    pub fn matmul(&self, rhs: &QuatMatrix) -> Result<QuatMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (rhs.rows, rhs.cols),
            });
        }
        let mut out = QuatMatrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for c in 0..rhs.cols {
                let mut acc = Quaternion::ZERO;
                for t in 0..self.cols {
                    acc += self[(r, t)] * rhs[(t, c)];
                }
                out[(r, c)] = acc;
            }
        }
        Ok(out)
    }

    pub fn add(&self, rhs: &QuatMatrix) -> Result<QuatMatrix> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (rhs.rows, rhs.cols),
            });
        }
        Ok(QuatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, rhs: &QuatMatrix) -> Result<QuatMatrix> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (rhs.rows, rhs.cols),
            });
        }
        Ok(QuatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| a - b)
                .collect(),
        })
    }

    /// Largest absolute component over all entries.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, q| m.max(q.max_abs()))
    }
}

impl core::ops::Index<(usize, usize)> for QuatMatrix {
    type Output = Quaternion;
    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &Quaternion {
        &self.data[r * self.cols + c]
    }
}

impl core::ops::IndexMut<(usize, usize)> for QuatMatrix {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Quaternion {
        &mut self.data[r * self.cols + c]
    }
}

/// The `2n x 2n` complex adjoint of an `n x n` quaternion matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexAdjoint {
    n: usize,
    data: Vec<Complex64>,
}

impl ComplexAdjoint {
    /// Source matrix dimension `n`; the adjoint itself is `2n x 2n`.
    #[inline]
    pub fn source_dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn dim(&self) -> usize {
        2 * self.n
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * 2 * self.n + c]
    }

    fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.data[r * 2 * self.n + c] = v;
    }
}

/// Splits each entry `q = (q0 + q1 i) + (q2 + q3 i) j` and assembles
/// `[[A1, A2], [-conj(A2), conj(A1)]]`.
pub fn complex_adjoint(m: &QuatMatrix) -> Result<ComplexAdjoint> {
    if !m.is_square() {
        return Err(Error::NonSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let n = m.rows;
    let mut adj = ComplexAdjoint {
        n,
        data: vec![Complex64::new(0.0, 0.0); 4 * n * n],
    };
    for r in 0..n {
        for c in 0..n {
            let q = m[(r, c)];
            let a1 = Complex64::new(q.w, q.x);
            let a2 = Complex64::new(q.y, q.z);
            adj.set(r, c, a1);
            adj.set(r, c + n, a2);
            adj.set(r + n, c, -a2.conj());
            adj.set(r + n, c + n, a1.conj());
        }
    }
    Ok(adj)
}

#[inline]
fn cabs(z: Complex64) -> f64 {
    fm::sqrt(z.norm_sqr())
}

/// Determinant of the complex adjoint, the invertibility certificate:
/// `M` is invertible iff this is nonzero.
pub fn det_complex_adjoint(m: &QuatMatrix) -> Result<Complex64> {
    let adj = complex_adjoint(m)?;
    let n = adj.dim();
    let mut a = adj.data;
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let mut piv = col;
        let mut best = cabs(a[col * n + col]);
        for r in col + 1..n {
            let v = cabs(a[r * n + col]);
            if v > best {
                best = v;
                piv = r;
            }
        }
        if best == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        if piv != col {
            for c in 0..n {
                a.swap(piv * n + c, col * n + c);
            }
            det = -det;
        }
        let p = a[col * n + col];
        det *= p;
        for r in col + 1..n {
            let factor = a[r * n + col] / p;
            if factor != Complex64::new(0.0, 0.0) {
                for c in col..n {
                    let v = a[col * n + c];
                    a[r * n + c] -= factor * v;
                }
            }
        }
    }
    Ok(det)
}

/// Inverts `M` by Gauss-Jordan elimination with partial pivoting on its
/// complex adjoint. A pivot below `1e-12 * max|entry of C(M)|` raises
/// [`Error::Singular`] carrying that pivot magnitude.
pub fn invert(m: &QuatMatrix) -> Result<QuatMatrix> {
    let adj = complex_adjoint(m)?;
    let n = adj.dim();
    let half = adj.source_dim();
    let scale = adj.data.iter().fold(0.0f64, |acc, &z| acc.max(cabs(z)));
    let threshold = 1e-12 * scale;

    // Augmented [C(M) | I], eliminated in place.
    let mut a = adj.data;
    let mut inv: Vec<Complex64> = vec![Complex64::new(0.0, 0.0); n * n];
    for r in 0..n {
        inv[r * n + r] = Complex64::new(1.0, 0.0);
    }

    for col in 0..n {
        let mut piv = col;
        let mut best = cabs(a[col * n + col]);
        for r in col + 1..n {
            let v = cabs(a[r * n + col]);
            if v > best {
                best = v;
                piv = r;
            }
        }
        if best < threshold || best == 0.0 {
            return Err(Error::Singular { pivot: best });
        }
        if piv != col {
            for c in 0..n {
                a.swap(piv * n + c, col * n + c);
                inv.swap(piv * n + c, col * n + c);
            }
        }
        let p = a[col * n + col];
        for c in 0..n {
            a[col * n + c] /= p;
            inv[col * n + c] /= p;
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let factor = a[r * n + col];
            if factor != Complex64::new(0.0, 0.0) {
                for c in 0..n {
                    let va = a[col * n + c];
                    let vi = inv[col * n + c];
                    a[r * n + c] -= factor * va;
                    inv[r * n + c] -= factor * vi;
                }
            }
        }
    }

    // C(M^{-1}) = C(M)^{-1}; read the inverse back off the top blocks.
    let out = QuatMatrix::from_fn(half, half, |r, c| {
        let b1 = inv[r * n + c];
        let b2 = inv[r * n + (c + half)];
        Quaternion::new(b1.re, b1.im, b2.re, b2.im)
    });
    Ok(out)
}
