//! Small dense matrix helpers for the regression and PCA kernels.
//!
//! Every matrix in this crate is tiny (at most a handful of regressors or
//! dimensions), so a plain row-major `Vec<f64>` with explicit loops is used
//! throughout. Operations are sequential and deterministic.

#![allow(clippy::needless_range_loop)]
use super::StatsError;

#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend_from_slice(row);
        }
        Self {
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    pub fn add_at(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] += v;
    }

    pub fn matmul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.add_at(i, j, a * other.at(k, j));
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        let mut out = vec![0.0; self.rows];
        for i in 0..self.rows {
            let mut acc = 0.0;
            for j in 0..self.cols {
                acc += self.at(i, j) * v[j];
            }
            out[i] = acc;
        }
        out
    }

    /// Inverse via Gauss-Jordan elimination with partial pivoting.
    /// Fails with `RankDeficient` when a pivot falls below `tol` times the
    /// largest absolute entry of the matrix.
    pub fn inverse(&self, tol: f64) -> Result<Mat, StatsError> {
        assert_eq!(self.rows, self.cols, "inverse of non-square matrix");
        let n = self.rows;
        let scale = self
            .data
            .iter()
            .fold(0.0_f64, |acc, &x| acc.max(x.abs()))
            .max(1.0);
        let mut a = self.clone();
        let mut inv = Mat::identity(n);

        for col in 0..n {
            // partial pivot
            let mut pivot_row = col;
            let mut pivot_val = a.at(col, col).abs();
            for r in (col + 1)..n {
                let v = a.at(r, col).abs();
                if v > pivot_val {
                    pivot_val = v;
                    pivot_row = r;
                }
            }
            if pivot_val < tol * scale {
                return Err(StatsError::RankDeficient);
            }
            if pivot_row != col {
                for j in 0..n {
                    let tmp = a.at(col, j);
                    a.set(col, j, a.at(pivot_row, j));
                    a.set(pivot_row, j, tmp);
                    let tmp = inv.at(col, j);
                    inv.set(col, j, inv.at(pivot_row, j));
                    inv.set(pivot_row, j, tmp);
                }
            }
            let p = a.at(col, col);
            for j in 0..n {
                a.set(col, j, a.at(col, j) / p);
                inv.set(col, j, inv.at(col, j) / p);
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a.at(r, col);
                if f == 0.0 {
                    continue;
                }
                for j in 0..n {
                    a.set(r, j, a.at(r, j) - f * a.at(col, j));
                    inv.set(r, j, inv.at(r, j) - f * inv.at(col, j));
                }
            }
        }
        Ok(inv)
    }
}
