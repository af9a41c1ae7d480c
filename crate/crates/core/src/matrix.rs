//! Dense real matrices and the small linear-algebra toolkit the checks rely on:
//! numeric rank, supports, scaled unit rows and least-squares coordinates.

use std::fmt;
use std::ops::{Index, IndexMut};

use nalgebra::{DMatrix, DVector};

use crate::{Error, Result, Tolerances};

/// Row-major dense matrix with explicit dimensions.
///
/// Zero-sized matrices are allowed so that row/column selections such as
/// `C(I, :)` with an empty `I` stay representable.
#[derive(Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows * cols != data.len() {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                matrix: "input".into(),
                row: pos / cols.max(1),
                col: pos % cols.max(1),
            });
        }
        Ok(DenseMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// Builds a matrix from row vectors; all rows must have equal length.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::new(rows.len(), cols, rows.concat())
    }

    /// Builds a matrix from column vectors; all columns must have equal length.
    pub fn from_cols(cols: &[Vec<f64>]) -> Result<Self> {
        let rows = cols.first().map_or(0, Vec::len);
        if cols.iter().any(|c| c.len() != rows) {
            return Err(Error::DimensionMismatch("ragged columns".into()));
        }
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, &v) in c.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        if let Some(pos) = m.data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                matrix: "input".into(),
                row: pos / m.cols.max(1),
                col: pos % m.cols.max(1),
            });
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn matmul(&self, other: &DenseMatrix) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.cols, "vector length must match column count");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        DenseMatrix {
            rows: idx.len(),
            cols: self.cols,
            data,
        }
    }

    pub fn select_cols(&self, idx: &[usize]) -> Self {
        let mut out = Self::zeros(self.rows, idx.len());
        for i in 0..self.rows {
            for (jj, &j) in idx.iter().enumerate() {
                out[(i, jj)] = self[(i, j)];
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max_abs_diff(&self, other: &DenseMatrix) -> f64 {
        assert_eq!(self.shape(), other.shape());
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    pub fn col_sums(&self) -> Vec<f64> {
        let mut s = vec![0.0; self.cols];
        for i in 0..self.rows {
            for (j, acc) in s.iter_mut().enumerate() {
                *acc += self[(i, j)];
            }
        }
        s
    }

    pub fn min_entry(&self) -> Option<(usize, usize, f64)> {
        self.data
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .map(|(p, &v)| (p / self.cols, p % self.cols, v))
    }

    /// Sets every entry with `|x| <= tol` to exactly zero.
    pub fn clamp_small(&mut self, tol: f64) {
        for v in &mut self.data {
            if v.abs() <= tol {
                *v = 0.0;
            }
        }
    }

    pub fn scale_col(&mut self, j: usize, factor: f64) {
        for i in 0..self.rows {
            self[(i, j)] *= factor;
        }
    }

    pub fn to_nalgebra(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    pub fn from_nalgebra(m: &DMatrix<f64>) -> Self {
        let mut out = Self::zeros(m.nrows(), m.ncols());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                out[(i, j)] = m[(i, j)];
            }
        }
        out
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// Number of singular values above `tol_rank * sigma_max`; zero for the zero
/// matrix and for empty matrices.
pub fn numeric_rank(m: &DenseMatrix, tols: &Tolerances) -> usize {
    let sv = singular_values(m);
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    if smax == 0.0 {
        return 0;
    }
    let cutoff = tols.tol_rank * smax;
    sv.iter().filter(|&&s| s > cutoff).count()
}

pub fn singular_values(m: &DenseMatrix) -> Vec<f64> {
    if m.rows() == 0 || m.cols() == 0 {
        return Vec::new();
    }
    m.to_nalgebra()
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .collect()
}

/// Indices `i` with `|v_i| > tol_zero`.
pub fn support(v: &[f64], tols: &Tolerances) -> Vec<usize> {
    v.iter()
        .enumerate()
        .filter(|(_, x)| x.abs() > tols.tol_zero)
        .map(|(i, _)| i)
        .collect()
}

/// Complement of [`support`].
pub fn zero_set(v: &[f64], tols: &Tolerances) -> Vec<usize> {
    v.iter()
        .enumerate()
        .filter(|(_, x)| x.abs() <= tols.tol_zero)
        .map(|(i, _)| i)
        .collect()
}

/// True when every index in `inner` also lies in `outer` (both sorted).
pub fn is_subset(inner: &[usize], outer: &[usize]) -> bool {
    inner.iter().all(|i| outer.binary_search(i).is_ok())
}

/// Returns `k` when `row = alpha * e_k` with `alpha > tol_zero`.
pub fn scaled_unit_row(row: &[f64], tols: &Tolerances) -> Option<usize> {
    let supp = support(row, tols);
    match supp.as_slice() {
        [k] if row[*k] > tols.tol_zero => Some(*k),
        _ => None,
    }
}

/// Greedy smallest-index-first selection of linearly independent columns.
pub fn independent_columns(m: &DenseMatrix, limit: usize, tols: &Tolerances) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    for j in 0..m.cols() {
        if chosen.len() == limit {
            break;
        }
        chosen.push(j);
        if numeric_rank(&m.select_cols(&chosen), tols) < chosen.len() {
            chosen.pop();
        }
    }
    chosen
}

/// Least-squares solution of `A x = b` and the max-norm residual.
pub fn least_squares(a: &DenseMatrix, b: &[f64]) -> Result<(Vec<f64>, f64)> {
    if a.rows() != b.len() {
        return Err(Error::DimensionMismatch(format!(
            "least squares with {} rows and rhs of length {}",
            a.rows(),
            b.len()
        )));
    }
    let svd = a.to_nalgebra().svd(true, true);
    let rhs = DVector::from_column_slice(b);
    let x = svd
        .solve(&rhs, 1e-14)
        .map_err(|e| Error::NumericalFailure(format!("least squares: {e}")))?;
    let x: Vec<f64> = x.iter().copied().collect();
    let fitted = a.mul_vec(&x);
    let residual = fitted
        .iter()
        .zip(b)
        .fold(0.0, |m, (f, t)| f64::max(m, (f - t).abs()));
    Ok((x, residual))
}
