//! Minimal dense matrices over a generic coefficient field.

use crate::error::{Error, Result};
use crate::scalar::Coeff;

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat<T> {
    pub nrows: usize,
    pub ncols: usize,
    data: Vec<T>,
}

impl<T: Coeff> Mat<T> {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Mat {
            nrows,
            ncols,
            data: vec![T::zero(); nrows * ncols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == ncols));
        Mat {
            nrows,
            ncols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(nrows: usize, ncols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(nrows * ncols);
        for i in 0..nrows {
            for j in 0..ncols {
                data.push(f(i, j));
            }
        }
        Mat { nrows, ncols, data }
    }

    pub fn is_square(&self) -> bool {
        self.nrows == self.ncols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.ncols..(i + 1) * self.ncols]
    }

    pub fn transpose(&self) -> Mat<T> {
        Mat::from_fn(self.ncols, self.nrows, |i, j| self[(j, i)].clone())
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Mat<T> {
        Mat::from_fn(rows.len(), cols.len(), |i, j| {
            self[(rows[i], cols[j])].clone()
        })
    }

    pub fn matmul(&self, rhs: &Mat<T>) -> Mat<T> {
        assert_eq!(self.ncols, rhs.nrows);
        let mut out = Mat::zeros(self.nrows, rhs.ncols);
        for i in 0..self.nrows {
            for k in 0..self.ncols {
                let a = self[(i, k)].clone();
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.ncols {
                    let term = a.clone() * rhs[(k, j)].clone();
                    out[(i, j)] += term;
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.ncols, v.len());
        (0..self.nrows)
            .map(|i| {
                let mut acc = T::zero();
                for j in 0..self.ncols {
                    acc += self[(i, j)].clone() * v[j].clone();
                }
                acc
            })
            .collect()
    }

    pub fn sub(&self, rhs: &Mat<T>) -> Mat<T> {
        assert_eq!((self.nrows, self.ncols), (rhs.nrows, rhs.ncols));
        Mat::from_fn(self.nrows, self.ncols, |i, j| {
            self[(i, j)].clone() - rhs[(i, j)].clone()
        })
    }

    pub fn add(&self, rhs: &Mat<T>) -> Mat<T> {
        assert_eq!((self.nrows, self.ncols), (rhs.nrows, rhs.ncols));
        Mat::from_fn(self.nrows, self.ncols, |i, j| {
            self[(i, j)].clone() + rhs[(i, j)].clone()
        })
    }

    pub fn scale(&self, s: &T) -> Mat<T> {
        Mat::from_fn(self.nrows, self.ncols, |i, j| {
            self[(i, j)].clone() * s.clone()
        })
    }

    pub fn count_nonzero(&self) -> usize {
        self.data.iter().filter(|v| !v.is_zero()).count()
    }

    /// Solves `self * X = rhs` by Gaussian elimination with pivot selection
    /// by magnitude. Exact over rationals; partial pivoting over floats.
    pub fn solve(&self, rhs: &Mat<T>) -> Result<Mat<T>> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch("solve needs a square matrix".into()));
        }
        let n = self.nrows;
        assert_eq!(rhs.nrows, n);
        let mut a = self.clone();
        let mut b = rhs.clone();
        let scale = a
            .data
            .iter()
            .map(Coeff::abs_f64)
            .fold(0.0_f64, f64::max)
            .max(1.0);
        for col in 0..n {
            // rank nonzero entries first so an exact pivot is never lost to
            // rounding in the magnitude key
            let pivot_row = (col..n)
                .max_by(|&i, &j| {
                    let key = |r: usize| (!a[(r, col)].is_zero(), a[(r, col)].abs_f64());
                    key(i).partial_cmp(&key(j)).unwrap()
                })
                .unwrap();
            let singular = if T::EXACT {
                a[(pivot_row, col)].is_zero()
            } else {
                a[(pivot_row, col)].abs_f64() <= 1e-13 * scale
            };
            if singular {
                return Err(Error::Singular);
            }
            if pivot_row != col {
                a.swap_rows(pivot_row, col);
                b.swap_rows(pivot_row, col);
            }
            let inv = T::one() / a[(col, col)].clone();
            for j in col..n {
                let v = a[(col, j)].clone() * inv.clone();
                a[(col, j)] = v;
            }
            for j in 0..b.ncols {
                let v = b[(col, j)].clone() * inv.clone();
                b[(col, j)] = v;
            }
            for i in 0..n {
                if i == col || a[(i, col)].is_zero() {
                    continue;
                }
                let f = a[(i, col)].clone();
                for j in col..n {
                    let t = f.clone() * a[(col, j)].clone();
                    a[(i, j)] -= t;
                }
                for j in 0..b.ncols {
                    let t = f.clone() * b[(col, j)].clone();
                    b[(i, j)] -= t;
                }
            }
        }
        Ok(b)
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.ncols {
            self.data.swap(i * self.ncols + c, j * self.ncols + c);
        }
    }

    pub fn map<U: Coeff>(&self, f: impl Fn(&T) -> U) -> Mat<U> {
        Mat {
            nrows: self.nrows,
            ncols: self.ncols,
            data: self.data.iter().map(f).collect(),
        }
    }
}

impl<T> std::ops::Index<(usize, usize)> for Mat<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.ncols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Mat<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.ncols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::rational::BigRational;
    use crate::scalar::parse_rational;

    fn rat(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn solve_rational_exact() {
        let a = Mat::from_rows(vec![
            vec![rat("2"), rat("1")],
            vec![rat("1"), rat("3")],
        ]);
        let b = Mat::from_rows(vec![vec![rat("5")], vec![rat("10")]]);
        let x = a.solve(&b).unwrap();
        assert_eq!(x[(0, 0)], rat("1"));
        assert_eq!(x[(1, 0)], rat("3"));
    }

    #[test]
    fn solve_singular_fails() {
        let a = Mat::from_rows(vec![
            vec![rat("1"), rat("2")],
            vec![rat("2"), rat("4")],
        ]);
        let b = Mat::identity(2);
        assert!(a.solve(&b).is_err());
    }
}
