//! Small dense linear algebra for the `|S| x |T|` systems.
//!
//! The matrices here rarely exceed 4x4, so everything is row-major `Vec<f64>`
//! with partial-pivoting LU.

use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        debug_assert_eq!(self.cols, other.rows);
        Matrix::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols)
                .map(|k| self.get(i, k) * other.get(k, j))
                .sum()
        })
    }

    pub fn abs(&self) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v.abs()).collect(),
        }
    }

    pub fn norm1(&self) -> f64 {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self.get(i, j).abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Product of the Euclidean row norms; `|det| / row_norm_product` lies in `[0, 1]`.
    pub fn row_norm_product(&self) -> f64 {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|v| v * v).sum::<f64>().sqrt())
            .product()
    }

    /// Row-norm product after scaling every column to unit max-norm, times the
    /// column scales. Dividing `det` by it is invariant under column scaling, so
    /// columns of very different magnitude do not masquerade as near-dependence.
    pub fn equilibrated_norm_product(&self) -> f64 {
        let col: Vec<f64> = (0..self.cols)
            .map(|j| {
                (0..self.rows)
                    .map(|i| self.get(i, j).abs())
                    .fold(0.0, f64::max)
            })
            .collect();
        if col.contains(&0.0) {
            return 0.0;
        }
        let rows: f64 = (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(&col)
                    .map(|(v, c)| (v / c) * (v / c))
                    .sum::<f64>()
                    .sqrt()
            })
            .product();
        rows * col.iter().product::<f64>()
    }

    pub fn det(&self) -> f64 {
        Lu::new(self).det()
    }

    /// `det / equilibrated_norm_product`, a scale-free measure in `[-1, 1]` of
    /// how close the matrix is to singular.
    pub fn normalized_det(&self) -> f64 {
        let scale = self.equilibrated_norm_product();
        if scale == 0.0 {
            0.0
        } else {
            self.det() / scale
        }
    }

    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        Lu::new(self).solve(rhs)
    }

    pub fn inverse(&self) -> Result<Matrix> {
        let lu = Lu::new(self);
        let n = self.rows;
        let mut inv = Matrix::zeros(n, n);
        let mut e = vec![0.0; n];
        for j in 0..n {
            e.iter_mut().for_each(|v| *v = 0.0);
            e[j] = 1.0;
            let col = lu.solve(&e)?;
            for (i, v) in col.into_iter().enumerate() {
                inv.set(i, j, v);
            }
        }
        Ok(inv)
    }

    /// 1-norm condition number; infinite when the matrix is singular.
    pub fn condition1(&self) -> f64 {
        match self.inverse() {
            Ok(inv) => self.norm1() * inv.norm1(),
            Err(_) => f64::INFINITY,
        }
    }

    /// Permanent by Ryser's formula. Used to bound determinant perturbations:
    /// `|det(A + E) - det(A)| <= perm(|A| + |E|) - perm(|A|)`.
    pub fn permanent(&self) -> f64 {
        assert_eq!(self.rows, self.cols, "permanent of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return 1.0;
        }
        assert!(n < 20, "permanent is exponential in n");
        let mut total = 0.0;
        for subset in 1u32..(1 << n) {
            let mut prod = 1.0;
            for i in 0..n {
                let s: f64 = (0..n)
                    .filter(|j| subset & (1 << j) != 0)
                    .map(|j| self.get(i, j))
                    .sum();
                prod *= s;
            }
            let sign = if (n as u32 - subset.count_ones()) % 2 == 0 {
                1.0
            } else {
                -1.0
            };
            total += sign * prod;
        }
        total
    }
}

/// LU factorization with partial pivoting.
#[derive(Clone, Debug)]
pub struct Lu {
    n: usize,
    lu: Vec<f64>,
    perm: Vec<usize>,
    sign: f64,
    singular: bool,
}

impl Lu {
    pub fn new(m: &Matrix) -> Self {
        assert_eq!(m.rows, m.cols, "LU of a non-square matrix");
        let n = m.rows;
        let mut lu = m.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        let mut singular = false;
        for k in 0..n {
            let (p, pivot) =
                (k..n)
                    .map(|i| (i, lu[i * n + k].abs()))
                    .fold(
                        (k, -1.0),
                        |best, cur| if cur.1 > best.1 { cur } else { best },
                    );
            if pivot == 0.0 || !pivot.is_finite() {
                singular = true;
                continue;
            }
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                sign = -sign;
            }
            let d = lu[k * n + k];
            for i in k + 1..n {
                let f = lu[i * n + k] / d;
                lu[i * n + k] = f;
                for j in k + 1..n {
                    lu[i * n + j] -= f * lu[k * n + j];
                }
            }
        }
        Self {
            n,
            lu,
            perm,
            sign,
            singular,
        }
    }

    pub fn det(&self) -> f64 {
        if self.singular {
            return 0.0;
        }
        (0..self.n)
            .map(|i| self.lu[i * self.n + i])
            .product::<f64>()
            * self.sign
    }

    pub fn is_singular(&self) -> bool {
        self.singular
    }

    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        if self.singular {
            return Err(Error::Singular("linear system"));
        }
        let n = self.n;
        let mut x: Vec<f64> = self.perm.iter().map(|&p| rhs[p]).collect();
        for i in 0..n {
            for k in 0..i {
                x[i] -= self.lu[i * n + k] * x[k];
            }
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                x[i] -= self.lu[i * n + k] * x[k];
            }
            x[i] /= self.lu[i * n + i];
        }
        Ok(x)
    }
}
