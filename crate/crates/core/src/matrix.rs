//! Small dense row-major matrices over a [`Scalar`].
//!
//! Dimensions in this crate never exceed a few dozen, so plain `Vec`
//! storage and textbook elimination are all that is needed.

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::scalar::Scalar;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T> Matrix<T> {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }
}

impl<T: Clone> Matrix<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Builds a matrix from row vectors. Panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<T>]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, Vec::len);
        assert!(cols.iter().all(|col| col.len() == r), "ragged columns");
        Matrix::from_fn(r, c, |i, j| cols[j][i].clone())
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<T>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    /// Horizontal concatenation.
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        Matrix::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                other[(i, j - self.cols)].clone()
            }
        })
    }
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |_, _| T::zero())
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn scaled(&self, s: &T) -> Self {
        self.map(|x| x.clone() * s.clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        Matrix::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).fold(T::zero(), |acc, k| {
                acc + self[(i, k)].clone() * other[(k, j)].clone()
            })
        })
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    /// Quadratic form `vᵀ A v`.
    pub fn quadratic_form(&self, v: &[T]) -> T {
        let av = self.mul_vec(v);
        v.iter()
            .zip(&av)
            .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    }

    /// `Aᵀ A`.
    pub fn gram(&self) -> Self {
        self.transpose().mul(self)
    }

    fn pivot_row(&self, col: usize, from: usize) -> Option<usize> {
        if T::EXACT {
            (from..self.rows).find(|&r| !self[(r, col)].is_zero())
        } else {
            (from..self.rows)
                .filter(|&r| !self[(r, col)].is_zero())
                .max_by(|&a, &b| {
                    self[(a, col)]
                        .abs()
                        .partial_cmp(&self[(b, col)].abs())
                        .unwrap_or(std::cmp::Ordering::Equal)
                })
        }
    }

    pub fn determinant(&self) -> T {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut det = T::one();
        for c in 0..n {
            let Some(p) = a.pivot_row(c, c) else {
                return T::zero();
            };
            if p != c {
                a.swap_rows(p, c);
                det = -det;
            }
            let pivot = a[(c, c)].clone();
            det = det * pivot.clone();
            for r in c + 1..n {
                let f = a[(r, c)].clone() / pivot.clone();
                if f.is_zero() {
                    continue;
                }
                for k in c..n {
                    let v = a[(c, k)].clone() * f.clone();
                    a[(r, k)] = a[(r, k)].clone() - v;
                }
            }
        }
        det
    }

    /// Solves `A X = B` for square non-singular `A`.
    pub fn solve(&self, rhs: &Self) -> Option<Self> {
        assert!(self.is_square());
        assert_eq!(self.rows, rhs.rows);
        let n = self.rows;
        let m = rhs.cols;
        let mut a = self.hstack(rhs);
        for c in 0..n {
            let p = a.pivot_row(c, c)?;
            a.swap_rows(p, c);
            let pivot = a[(c, c)].clone();
            for k in c..n + m {
                a[(c, k)] = a[(c, k)].clone() / pivot.clone();
            }
            for r in 0..n {
                if r == c || a[(r, c)].is_zero() {
                    continue;
                }
                let f = a[(r, c)].clone();
                for k in c..n + m {
                    let v = a[(c, k)].clone() * f.clone();
                    a[(r, k)] = a[(r, k)].clone() - v;
                }
            }
        }
        Some(Matrix::from_fn(n, m, |i, j| a[(i, n + j)].clone()))
    }

    pub fn inverse(&self) -> Option<Self> {
        self.solve(&Matrix::identity(self.rows))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for k in 0..self.cols {
            self.data.swap(a * self.cols + k, b * self.cols + k);
        }
    }

    /// `A = L D Lᵀ` with unit lower-triangular `L`. Returns `None` unless `A`
    /// is symmetric positive definite.
    pub fn ldl(&self) -> Option<(Self, Vec<T>)> {
        assert!(self.is_square());
        let n = self.rows;
        let mut l = Matrix::<T>::identity(n);
        let mut d: Vec<T> = Vec::with_capacity(n);
        for i in 0..n {
            let mut di = self[(i, i)].clone();
            for k in 0..i {
                di = di - l[(i, k)].clone() * l[(i, k)].clone() * d[k].clone();
            }
            if di <= T::zero() {
                return None;
            }
            for j in i + 1..n {
                let mut v = self[(j, i)].clone();
                for k in 0..i {
                    v = v - l[(j, k)].clone() * l[(i, k)].clone() * d[k].clone();
                }
                l[(j, i)] = v / di.clone();
            }
            d.push(di);
        }
        Some((l, d))
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries((0..self.rows).map(|i| &self.data[i * self.cols..(i + 1) * self.cols]))
            .finish()
    }
}
