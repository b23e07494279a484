//! Small dense determinants, generic over [`Field`].
//!
//! Everything here targets the hand-sized matrices of the identity checks
//! (Jacobi–Trudi, Giambelli, moment determinants): Gaussian elimination with
//! pivoting by approximate magnitude, exact for rational scalars. Large
//! complex Nyström matrices go through nalgebra's LU instead (see `fredholm`).

use crate::scalar::Field;

/// Row-major square matrix of field elements.
#[derive(Clone, Debug)]
pub struct Mat<S> {
    pub n: usize,
    pub data: Vec<S>,
}

impl<S: Field> Mat<S> {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Mat { n, data }
    }

    pub fn at(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.n + j]
    }
}

/// Determinant by elimination with partial pivoting.
///
/// Pivot rows are chosen by `abs_approx`; a pivot column with all exact zeros
/// short-circuits to zero. For exact scalars the result is exact.
pub fn det<S: Field>(m: &Mat<S>) -> S {
    let n = m.n;
    if n == 0 {
        return S::one();
    }
    let mut a = m.data.clone();
    let mut sign_flip = false;
    let mut result = S::one();
    for col in 0..n {
        // best pivot in rows col..
        let mut best = col;
        let mut best_mag = a[col * n + col].abs_approx();
        let mut best_zero = a[col * n + col].is_zero();
        for row in (col + 1)..n {
            let e = &a[row * n + col];
            let mag = e.abs_approx();
            let nz = !e.is_zero();
            if (best_zero && nz) || (nz && mag > best_mag) {
                best = row;
                best_mag = mag;
                best_zero = false;
            }
        }
        if a[best * n + col].is_zero() {
            return S::zero();
        }
        if best != col {
            for j in 0..n {
                a.swap(col * n + j, best * n + j);
            }
            sign_flip = !sign_flip;
        }
        let pivot = a[col * n + col].clone();
        result = result * pivot.clone();
        for row in (col + 1)..n {
            if a[row * n + col].is_zero() {
                continue;
            }
            let factor = a[row * n + col].clone() / pivot.clone();
            for j in col..n {
                let v = a[row * n + j].clone() - factor.clone() * a[col * n + j].clone();
                a[row * n + j] = v;
            }
        }
    }
    if sign_flip {
        -result
    } else {
        result
    }
}

/// Cofactor matrix (transpose of the adjugate is not taken: entry (i,j) is
/// the signed minor striking row i, column j). Used for delta-method
/// gradients of determinants; sizes stay tiny so recomputation is fine.
pub fn cofactor_matrix<S: Field>(m: &Mat<S>) -> Mat<S> {
    let n = m.n;
    Mat::from_fn(n, |i, j| {
        let minor = Mat::from_fn(n - 1, |r, c| {
            let rr = if r < i { r } else { r + 1 };
            let cc = if c < j { c } else { c + 1 };
            m.at(rr, cc).clone()
        });
        let d = det(&minor);
        if (i + j) % 2 == 0 {
            d
        } else {
            -d
        }
    })
}
