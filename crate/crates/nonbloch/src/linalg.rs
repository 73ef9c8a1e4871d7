//! Small dense complex linear-algebra kernels shared by the root finder, the
//! matrix exponential, and the exact-diagonalization oracle.

use crate::error::{Error, Result};
use crate::scalar::{Real, C};
use ndarray::{Array1, Array2};
use num_complex::Complex;
use num_traits::{One, Zero};

pub type CMat<T> = Array2<C<T>>;
pub type CVec<T> = Array1<C<T>>;

pub fn identity<T: Real>(n: usize) -> CMat<T> {
    Array2::from_diag_elem(n, Complex::one())
}

pub fn one_norm<T: Real>(a: &CMat<T>) -> T {
    let mut best = T::zero();
    for j in 0..a.ncols() {
        let mut s = T::zero();
        for i in 0..a.nrows() {
            s = s + a[[i, j]].norm();
        }
        if s > best {
            best = s;
        }
    }
    best
}

pub fn frobenius_norm<T: Real>(a: &CMat<T>) -> T {
    a.iter()
        .fold(T::zero(), |acc, z| acc + z.norm_sqr())
        .sqrt()
}

pub fn max_abs<T: Real>(a: &CMat<T>) -> T {
    a.iter().fold(T::zero(), |acc, z| acc.max(z.norm()))
}

/// LU factorization with partial pivoting.
pub struct Lu<T: Real> {
    lu: CMat<T>,
    piv: Vec<usize>,
    swaps: usize,
    singular: bool,
}

impl<T: Real> Lu<T> {
    pub fn factor(a: &CMat<T>) -> Result<Self, T> {
        let n = a.nrows();
        if a.ncols() != n {
            return Err(Error::NotSquare {
                rows: a.nrows(),
                cols: a.ncols(),
            });
        }
        let mut lu = a.clone();
        let mut piv = Vec::with_capacity(n);
        let mut swaps = 0;
        let mut singular = false;
        for k in 0..n {
            let mut p = k;
            let mut best = lu[[k, k]].norm();
            for i in k + 1..n {
                let v = lu[[i, k]].norm();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            piv.push(p);
            if p != k {
                swaps += 1;
                for j in 0..n {
                    let tmp = lu[[k, j]];
                    lu[[k, j]] = lu[[p, j]];
                    lu[[p, j]] = tmp;
                }
            }
            let pivot = lu[[k, k]];
            if pivot.is_zero() {
                singular = true;
                continue;
            }
            for i in k + 1..n {
                let m = lu[[i, k]] / pivot;
                lu[[i, k]] = m;
                if !m.is_zero() {
                    for j in k + 1..n {
                        let s = lu[[k, j]];
                        lu[[i, j]] = lu[[i, j]] - m * s;
                    }
                }
            }
        }
        Ok(Lu {
            lu,
            piv,
            swaps,
            singular,
        })
    }

    pub fn is_singular(&self) -> bool {
        self.singular
    }

    pub fn det(&self) -> C<T> {
        let mut d = if self.swaps % 2 == 0 {
            Complex::one()
        } else {
            -Complex::<T>::one()
        };
        for k in 0..self.lu.nrows() {
            d = d * self.lu[[k, k]];
        }
        d
    }

    /// Solve `A X = B` for a matrix right-hand side.
    pub fn solve_mat(&self, b: &CMat<T>) -> Result<CMat<T>, T> {
        if self.singular {
            return Err(Error::InvalidArgument(
                "singular matrix in linear solve".into(),
            ));
        }
        let n = self.lu.nrows();
        let m = b.ncols();
        let mut x = b.clone();
        for k in 0..n {
            let p = self.piv[k];
            if p != k {
                for j in 0..m {
                    let tmp = x[[k, j]];
                    x[[k, j]] = x[[p, j]];
                    x[[p, j]] = tmp;
                }
            }
        }
        // forward substitution (unit lower triangle)
        for k in 0..n {
            for i in k + 1..n {
                let m_ik = self.lu[[i, k]];
                if !m_ik.is_zero() {
                    for j in 0..m {
                        let s = x[[k, j]];
                        x[[i, j]] = x[[i, j]] - m_ik * s;
                    }
                }
            }
        }
        // back substitution
        for k in (0..n).rev() {
            let d = self.lu[[k, k]];
            for j in 0..m {
                x[[k, j]] = x[[k, j]] / d;
            }
            for i in 0..k {
                let u_ik = self.lu[[i, k]];
                if !u_ik.is_zero() {
                    for j in 0..m {
                        let s = x[[k, j]];
                        x[[i, j]] = x[[i, j]] - u_ik * s;
                    }
                }
            }
        }
        Ok(x)
    }
}

/// Determinant via LU.
pub fn det<T: Real>(a: &CMat<T>) -> Result<C<T>, T> {
    Ok(Lu::factor(a)?.det())
}

/// Solve `A X = B`.
pub fn solve<T: Real>(a: &CMat<T>, b: &CMat<T>) -> Result<CMat<T>, T> {
    Lu::factor(a)?.solve_mat(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;

    #[test]
    fn lu_det_and_solve() {
        let a: CMat<f64> = ndarray::arr2(&[
            [c(2.0, 0.0), c(1.0, 1.0), c(0.0, 0.0)],
            [c(0.0, -1.0), c(3.0, 0.0), c(1.0, 0.0)],
            [c(1.0, 0.0), c(0.0, 0.0), c(1.0, 2.0)],
        ]);
        let d = det(&a).unwrap();
        // direct cofactor expansion
        let m00 = a[[1, 1]] * a[[2, 2]] - a[[1, 2]] * a[[2, 1]];
        let m01 = a[[1, 0]] * a[[2, 2]] - a[[1, 2]] * a[[2, 0]];
        let m02 = a[[1, 0]] * a[[2, 1]] - a[[1, 1]] * a[[2, 0]];
        let expect = a[[0, 0]] * m00 - a[[0, 1]] * m01 + a[[0, 2]] * m02;
        assert!((d - expect).norm() < 1e-12);

        let b = identity::<f64>(3);
        let inv = solve(&a, &b).unwrap();
        let prod = a.dot(&inv);
        assert!(max_abs(&(&prod - &b)) < 1e-12);
    }

    #[test]
    fn singular_matrix_reported() {
        let a: CMat<f64> = ndarray::arr2(&[
            [c(1.0, 0.0), c(2.0, 0.0)],
            [c(2.0, 0.0), c(4.0, 0.0)],
        ]);
        let lu = Lu::factor(&a).unwrap();
        assert!(lu.is_singular());
        assert!(lu.det().norm() < 1e-12);
    }
}
