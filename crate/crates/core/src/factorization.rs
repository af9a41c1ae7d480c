//! Validated, pruned and column-stochastic factorizations `R = C St`, plus
//! the permutation/scaling equivalence test between factors.

use serde::Serialize;

use crate::matrix::{numeric_rank, DenseMatrix};
use crate::{Error, Result, Tolerances};

/// A pruned exact factorization `R = C * St` where `R`, `C` and `St` are
/// column stochastic and `rank(R) = r`.
#[derive(Debug, Clone)]
pub struct StochasticFactorization {
    pub(crate) r: DenseMatrix,
    pub(crate) c: DenseMatrix,
    pub(crate) st: DenseMatrix,
    pub(crate) rank: usize,
    pub(crate) kept_rows: Vec<usize>,
    pub(crate) kept_cols: Vec<usize>,
    pub(crate) removed_rows: Vec<usize>,
    pub(crate) removed_cols: Vec<usize>,
}

impl StochasticFactorization {
    pub fn r(&self) -> &DenseMatrix {
        &self.r
    }

    pub fn c(&self) -> &DenseMatrix {
        &self.c
    }

    /// The transposed second factor, `r x n`.
    pub fn st(&self) -> &DenseMatrix {
        &self.st
    }

    /// `S = St^T`, `n x r`.
    pub fn s(&self) -> DenseMatrix {
        self.st.transpose()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Original indices of the rows of `R` that survived pruning.
    pub fn kept_rows(&self) -> &[usize] {
        &self.kept_rows
    }

    /// Original indices of the columns of `R` that survived pruning.
    pub fn kept_cols(&self) -> &[usize] {
        &self.kept_cols
    }

    pub fn removed_rows(&self) -> &[usize] {
        &self.removed_rows
    }

    pub fn removed_cols(&self) -> &[usize] {
        &self.removed_cols
    }

    pub fn residual(&self) -> f64 {
        let prod = self
            .c
            .matmul(&self.st)
            .expect("shapes validated at construction");
        self.r.max_abs_diff(&prod)
    }
}

fn check_nonnegative(name: &str, m: &DenseMatrix, tols: &Tolerances) -> Result<()> {
    match m.min_entry() {
        Some((row, col, value)) if value < -tols.tol_zero => Err(Error::NegativeEntry {
            matrix: name.into(),
            row,
            col,
            value,
        }),
        _ => Ok(()),
    }
}

/// Relative residual bound used by every exactness check.
pub(crate) fn residual_bound(r: &DenseMatrix, tols: &Tolerances) -> f64 {
    tols.residual_tol * r.max_abs().max(1.0)
}

/// Clamps near-zero entries, removes zero rows/columns of `R` (with the
/// matching rows of `C` and rows of `S`), validates exactness and rank, then
/// rescales so that `R`, `C` and `St` are column stochastic.
pub fn prune_and_normalize(
    r: &DenseMatrix,
    c: &DenseMatrix,
    s: &DenseMatrix,
    tols: &Tolerances,
) -> Result<StochasticFactorization> {
    tols.validate()?;
    let (m, n) = r.shape();
    let rank = c.cols();
    if c.rows() != m || s.rows() != n || s.cols() != rank || rank == 0 {
        return Err(Error::DimensionMismatch(format!(
            "R is {m}x{n}, C is {}x{}, S is {}x{}; expected C m x r and S n x r with r >= 1",
            c.rows(),
            c.cols(),
            s.rows(),
            s.cols()
        )));
    }
    check_nonnegative("R", r, tols)?;
    check_nonnegative("C", c, tols)?;
    check_nonnegative("S", s, tols)?;

    let (mut r, mut c, mut s) = (r.clone(), c.clone(), s.clone());
    r.clamp_small(tols.tol_zero);
    c.clamp_small(tols.tol_zero);
    s.clamp_small(tols.tol_zero);

    let (kept_rows, removed_rows): (Vec<usize>, Vec<usize>) =
        (0..m).partition(|&i| r.row(i).iter().any(|&v| v > 0.0));
    let (kept_cols, removed_cols): (Vec<usize>, Vec<usize>) =
        (0..n).partition(|&j| (0..m).any(|i| r[(i, j)] > 0.0));
    let r = r.select_rows(&kept_rows).select_cols(&kept_cols);
    let c = c.select_rows(&kept_rows);
    let s = s.select_rows(&kept_cols);

    let prod = c.matmul(&s.transpose())?;
    let residual = r.max_abs_diff(&prod);
    let bound = residual_bound(&r, tols);
    if residual > bound {
        return Err(Error::NotExact {
            residual,
            tolerance: bound,
        });
    }

    for (what, mat) in [("R", &r), ("C", &c), ("S", &s)] {
        let found = numeric_rank(mat, tols);
        if found != rank {
            return Err(Error::RankDeficient {
                what: what.into(),
                expected: rank,
                found,
            });
        }
    }

    let r_sums = r.col_sums();
    let c_sums = c.col_sums();
    let mut rn = r;
    for (j, &sum) in r_sums.iter().enumerate() {
        rn.scale_col(j, 1.0 / sum);
    }
    let mut cn = c;
    for (k, &sum) in c_sums.iter().enumerate() {
        cn.scale_col(k, 1.0 / sum);
    }
    let mut st = s.transpose();
    for j in 0..st.cols() {
        for k in 0..rank {
            st[(k, j)] *= c_sums[k] / r_sums[j];
        }
    }
    // Column sums of St equal one up to the exactness residual; make them exact.
    for (j, sum) in st.col_sums().into_iter().enumerate() {
        st.scale_col(j, 1.0 / sum);
    }

    Ok(StochasticFactorization {
        r: rn,
        c: cn,
        st,
        rank,
        kept_rows,
        kept_cols,
        removed_rows,
        removed_cols,
    })
}

/// `B = A * P * D`: column `k` of `B` equals `scales[k]` times column
/// `permutation[k]` of `A`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivalenceWitness {
    pub permutation: Vec<usize>,
    pub scales: Vec<f64>,
}

impl EquivalenceWitness {
    /// The witness mapping `A` back onto `B`'s columns, i.e. for `A = B P' D'`.
    pub fn inverse(&self) -> EquivalenceWitness {
        let r = self.permutation.len();
        let mut permutation = vec![0; r];
        let mut scales = vec![0.0; r];
        for (k, &p) in self.permutation.iter().enumerate() {
            permutation[p] = k;
            scales[p] = 1.0 / self.scales[k];
        }
        EquivalenceWitness {
            permutation,
            scales,
        }
    }
}

fn l1_normalized(col: &[f64]) -> (Vec<f64>, f64) {
    let norm: f64 = col.iter().map(|v| v.abs()).sum();
    if norm == 0.0 {
        (vec![0.0; col.len()], 0.0)
    } else {
        (col.iter().map(|v| v / norm).collect(), norm)
    }
}

/// Greedily matches the columns of `b` to those of `a` after unit-sum
/// normalization and verifies `b = a * P * D` with a positive diagonal `D`.
pub fn equivalent_up_to_perm_scale(
    a: &DenseMatrix,
    b: &DenseMatrix,
    tols: &Tolerances,
) -> Option<EquivalenceWitness> {
    if a.shape() != b.shape() {
        return None;
    }
    let r = a.cols();
    let a_cols: Vec<_> = (0..r).map(|k| l1_normalized(&a.col(k))).collect();
    let b_cols: Vec<_> = (0..r).map(|k| l1_normalized(&b.col(k))).collect();

    let mut used = vec![false; r];
    let mut permutation = Vec::with_capacity(r);
    let mut scales = Vec::with_capacity(r);
    for (bn, bnorm) in &b_cols {
        let best = (0..r)
            .filter(|&p| !used[p])
            .map(|p| {
                let d = a_cols[p]
                    .0
                    .iter()
                    .zip(bn)
                    .fold(0.0, |m: f64, (x, y)| m.max((x - y).abs()));
                (p, d)
            })
            .min_by(|x, y| x.1.total_cmp(&y.1))?;
        let p = best.0;
        used[p] = true;
        let anorm = a_cols[p].1;
        let scale = match (anorm == 0.0, *bnorm == 0.0) {
            (true, true) => 1.0,
            (false, false) => bnorm / anorm,
            _ => return None,
        };
        permutation.push(p);
        scales.push(scale);
    }

    let bound = tols.residual_tol * b.max_abs().max(1.0);
    for i in 0..a.rows() {
        for k in 0..r {
            if (b[(i, k)] - scales[k] * a[(i, permutation[k])]).abs() > bound {
                return None;
            }
        }
    }
    Some(EquivalenceWitness {
        permutation,
        scales,
    })
}
