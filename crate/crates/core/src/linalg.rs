//! Dense Gaussian elimination over an exact field.
//!
//! The routines are generic over any scalar implementing [`Field`]; the crate
//! uses them with [`crate::Rational`]. Zero tests are exact, so a floating
//! point instantiation compiles but gives no rank guarantees.

use std::ops::Neg;

use num_traits::Num;

/// Scalars Gaussian elimination can run over.
pub trait Field: Clone + Num + Neg<Output = Self> {}

impl<T> Field for T where T: Clone + Num + Neg<Output = T> {}

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Vec<T>>,
}

impl<T: Field> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![vec![T::zero(); cols]; rows],
        }
    }

    /// Builds a matrix from row vectors. All rows must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<Vec<T>>) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix rows");
        Matrix {
            rows: rows.len(),
            cols,
            data: rows,
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: T) {
        self.data[i][j] = value;
    }

    pub fn add_to(&mut self, i: usize, j: usize, value: T) {
        let cur = std::mem::replace(&mut self.data[i][j], T::zero());
        self.data[i][j] = cur + value;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for (i, row) in self.data.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    t.data[j][i] = v.clone();
                }
            }
        }
        t
    }

    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.cols);
        self.data
            .iter()
            .map(|row| {
                row.iter()
                    .zip(x)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    pub fn mul(&self, other: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other.data[k][j];
                    if !b.is_zero() {
                        out.add_to(i, j, a.clone() * b.clone());
                    }
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.iter().all(|v| v.is_zero()))
    }

    /// Reduces in place to reduced row echelon form and returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.data[i][c].is_zero()) else {
                continue;
            };
            self.data.swap(r, p);
            let inv = T::one() / self.data[r][c].clone();
            for v in self.data[r][c..].iter_mut() {
                if !v.is_zero() {
                    *v = v.clone() * inv.clone();
                }
            }
            let pivot_row = std::mem::take(&mut self.data[r]);
            for (i, row) in self.data.iter_mut().enumerate() {
                if i == r || row.is_empty() || row[c].is_zero() {
                    continue;
                }
                let f = row[c].clone();
                for (j, pv) in pivot_row.iter().enumerate().skip(c) {
                    if !pv.is_zero() {
                        row[j] = row[j].clone() - f.clone() * pv.clone();
                    }
                }
            }
            self.data[r] = pivot_row;
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        // Eliminate along the shorter side.
        if self.rows < self.cols {
            self.clone().rref().len()
        } else {
            self.transpose().rref().len()
        }
    }

    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }

    /// A basis of `{x : A x = 0}`.
    pub fn kernel(&self) -> Vec<Vec<T>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let mut is_pivot = vec![None; self.cols];
        for (row, &c) in pivots.iter().enumerate() {
            is_pivot[c] = Some(row);
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| is_pivot[c].is_none()) {
            let mut v = vec![T::zero(); self.cols];
            v[free] = T::one();
            for (row, &c) in pivots.iter().enumerate() {
                let a = &m.data[row][free];
                if !a.is_zero() {
                    v[c] = -a.clone();
                }
            }
            basis.push(v);
        }
        basis
    }

    /// Some solution of `A x = b`, or `None` when the system is inconsistent.
    pub fn solve(&self, b: &[T]) -> Option<Vec<T>> {
        assert_eq!(b.len(), self.rows);
        let rows = self
            .data
            .iter()
            .zip(b)
            .map(|(row, bi)| {
                let mut r = row.clone();
                r.push(bi.clone());
                r
            })
            .collect();
        let mut aug = Matrix::from_rows(self.cols + 1, rows);
        let pivots = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![T::zero(); self.cols];
        for (row, &c) in pivots.iter().enumerate() {
            x[c] = aug.data[row][self.cols].clone();
        }
        Some(x)
    }
}
