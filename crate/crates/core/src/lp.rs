//! Dense two-phase revised simplex for the small, highly degenerate programs
//! that the face and hull queries produce.
//!
//! Variables are free. Each is split into a positive and a negative part,
//! inequality rows get a surplus column, and phase one drives one artificial
//! per row to zero. The method is fully deterministic.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::matrix::DenseMatrix;
use crate::{Error, Result};

const PIVOT_TOL: f64 = 1e-9;
const COST_TOL: f64 = 1e-10;
const FEAS_TOL: f64 = 1e-9;

/// `minimize c^T z` subject to `A z >= b` and `E z = f`, with `z` free.
#[derive(Debug, Clone)]
pub struct LpProblem {
    num_vars: usize,
    objective: Vec<f64>,
    ineq: Vec<(Vec<f64>, f64)>,
    eq: Vec<(Vec<f64>, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone)]
pub struct LpResult {
    pub status: LpStatus,
    /// Objective value; set only when optimal.
    pub value: Option<f64>,
    /// Optimal point; set only when optimal.
    pub solution: Option<Vec<f64>>,
}

impl LpResult {
    fn without_solution(status: LpStatus) -> Self {
        LpResult {
            status,
            value: None,
            solution: None,
        }
    }

    pub fn is_feasible(&self) -> bool {
        self.status != LpStatus::Infeasible
    }
}

impl LpProblem {
    pub fn new(num_vars: usize) -> Self {
        LpProblem {
            num_vars,
            objective: vec![0.0; num_vars],
            ineq: Vec::new(),
            eq: Vec::new(),
        }
    }

    /// Builds a problem from matrix data, validating every dimension.
    pub fn from_parts(
        objective: Vec<f64>,
        ineq_lhs: &DenseMatrix,
        ineq_rhs: &[f64],
        eq_lhs: &DenseMatrix,
        eq_rhs: &[f64],
    ) -> Result<Self> {
        let n = objective.len();
        if ineq_lhs.cols() != n
            || eq_lhs.cols() != n
            || ineq_lhs.rows() != ineq_rhs.len()
            || eq_lhs.rows() != eq_rhs.len()
        {
            return Err(Error::DimensionMismatch(format!(
                "LP with {n} variables: A is {:?} with {} rhs, E is {:?} with {} rhs",
                ineq_lhs.shape(),
                ineq_rhs.len(),
                eq_lhs.shape(),
                eq_rhs.len()
            )));
        }
        let mut p = LpProblem::new(n).minimize(objective);
        for (i, &b) in ineq_rhs.iter().enumerate() {
            p.ge(ineq_lhs.row(i).to_vec(), b);
        }
        for (i, &f) in eq_rhs.iter().enumerate() {
            p.eq(eq_lhs.row(i).to_vec(), f);
        }
        Ok(p)
    }

    pub fn minimize(mut self, objective: Vec<f64>) -> Self {
        assert_eq!(objective.len(), self.num_vars);
        self.objective = objective;
        self
    }

    /// Adds `row . z >= rhs`.
    pub fn ge(&mut self, row: Vec<f64>, rhs: f64) {
        assert_eq!(row.len(), self.num_vars);
        self.ineq.push((row, rhs));
    }

    /// Adds `row . z = rhs`.
    pub fn eq(&mut self, row: Vec<f64>, rhs: f64) {
        assert_eq!(row.len(), self.num_vars);
        self.eq.push((row, rhs));
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_constraints(&self) -> usize {
        self.ineq.len() + self.eq.len()
    }

    pub fn objective(&self) -> &[f64] {
        &self.objective
    }

    pub fn ineq_lhs(&self) -> DenseMatrix {
        rows_to_matrix(&self.ineq, self.num_vars)
    }

    pub fn ineq_rhs(&self) -> Vec<f64> {
        self.ineq.iter().map(|r| r.1).collect()
    }

    pub fn eq_lhs(&self) -> DenseMatrix {
        rows_to_matrix(&self.eq, self.num_vars)
    }

    pub fn eq_rhs(&self) -> Vec<f64> {
        self.eq.iter().map(|r| r.1).collect()
    }

    /// Largest violation of the constraints at `z`.
    pub fn max_violation(&self, z: &[f64]) -> f64 {
        let dot = |row: &[f64]| row.iter().zip(z).map(|(a, b)| a * b).sum::<f64>();
        let ineq = self.ineq.iter().map(|(row, b)| (b - dot(row)).max(0.0));
        let eq = self.eq.iter().map(|(row, f)| (dot(row) - f).abs());
        ineq.chain(eq).fold(0.0, f64::max)
    }
}

fn rows_to_matrix(rows: &[(Vec<f64>, f64)], cols: usize) -> DenseMatrix {
    let data: Vec<f64> = rows.iter().flat_map(|r| r.0.iter().copied()).collect();
    DenseMatrix::new(rows.len(), cols, data).expect("rows validated on insertion")
}

/// Standard-form data `A x = b, x >= 0, b >= 0` with one artificial column
/// per row after the structural ones, plus the current basis. Every
/// iteration refactors the basis from the original data, so rounding does
/// not accumulate across pivots.
struct Revised {
    a: DMatrix<f64>,
    b: DVector<f64>,
    /// Rows still in the problem; redundant ones are removed after phase one.
    rows: Vec<usize>,
    basis: Vec<usize>,
    iterations: usize,
    budget: usize,
}

impl Revised {
    fn basis_matrix(&self) -> DMatrix<f64> {
        let k = self.rows.len();
        DMatrix::from_fn(k, k, |i, j| self.a[(self.rows[i], self.basis[j])])
    }

    fn column(&self, j: usize) -> DVector<f64> {
        DVector::from_iterator(self.rows.len(), self.rows.iter().map(|&i| self.a[(i, j)]))
    }

    fn rhs(&self) -> DVector<f64> {
        DVector::from_iterator(self.rows.len(), self.rows.iter().map(|&i| self.b[i]))
    }

    fn singular() -> Error {
        Error::NumericalFailure("simplex basis became singular".into())
    }

    fn basic_values(&self) -> Result<DVector<f64>> {
        if self.rows.is_empty() {
            return Ok(DVector::zeros(0));
        }
        self.basis_matrix()
            .lu()
            .solve(&self.rhs())
            .ok_or_else(Self::singular)
    }

    fn objective(&self, cost: &[f64]) -> Result<f64> {
        let x = self.basic_values()?;
        Ok(self
            .basis
            .iter()
            .zip(x.iter())
            .map(|(&j, v)| cost[j] * v)
            .sum())
    }

    /// Simplex iterations on `cost`, never letting a column `>= allowed`
    /// enter. The entering column follows Bland's rule; among rows attaining
    /// the minimum ratio the largest pivot element leaves, falling back to
    /// Bland's index rule once half the budget is spent. Returns false when
    /// the problem is unbounded.
    fn optimize(&mut self, cost: &[f64], allowed: usize) -> Result<bool> {
        let cost_tol = COST_TOL * cost.iter().fold(1.0, |m: f64, c| m.max(c.abs()));
        loop {
            if self.rows.is_empty() {
                return Ok(true);
            }
            let bm = self.basis_matrix();
            let lu = bm.clone().lu();
            let x = lu.solve(&self.rhs()).ok_or_else(Self::singular)?;
            let cb = DVector::from_iterator(self.basis.len(), self.basis.iter().map(|&j| cost[j]));
            let y = bm.transpose().lu().solve(&cb).ok_or_else(Self::singular)?;
            let entering = (0..allowed).find(|&j| {
                !self.basis.contains(&j) && cost[j] - self.column(j).dot(&y) < -cost_tol
            });
            let Some(col) = entering else {
                return Ok(true);
            };
            let u = lu.solve(&self.column(col)).ok_or_else(Self::singular)?;
            let pivot_tol = PIVOT_TOL * u.amax().max(1.0);
            let bland = self.iterations > self.budget / 2;
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..u.len() {
                let a = u[i];
                if a <= pivot_tol {
                    continue;
                }
                let ratio = x[i].max(0.0) / a;
                let better = match leave {
                    None => true,
                    Some((bi, br)) => {
                        let tie = (ratio - br).abs() <= 1e-12 * (1.0 + br.abs());
                        if !tie {
                            ratio < br
                        } else if bland || a == u[bi] {
                            self.basis[i] < self.basis[bi]
                        } else {
                            a > u[bi]
                        }
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((row, _)) = leave else {
                return Ok(false);
            };
            if self.iterations >= self.budget {
                return Err(Error::NumericalFailure(
                    "simplex iteration budget exhausted".into(),
                ));
            }
            self.iterations += 1;
            self.basis[row] = col;
        }
    }

    /// Replaces zero-level artificials in the basis by structural columns;
    /// rows where no structural column can take over are redundant and are
    /// dropped together with their artificial.
    fn drive_out_artificials(&mut self, structural: usize) -> Result<()> {
        while let Some(pos) = self.basis.iter().position(|&j| j >= structural) {
            let k = self.rows.len();
            let mut e = DVector::zeros(k);
            e[pos] = 1.0;
            let w = self
                .basis_matrix()
                .transpose()
                .lu()
                .solve(&e)
                .ok_or_else(Self::singular)?;
            let best = (0..structural)
                .filter(|j| !self.basis.contains(j))
                .map(|j| (j, self.column(j).dot(&w).abs()))
                .fold(None, |acc: Option<(usize, f64)>, (j, v)| match acc {
                    Some((_, bv)) if bv >= v => acc,
                    _ => Some((j, v)),
                });
            match best {
                Some((j, v)) if v > 1e-9 => self.basis[pos] = j,
                _ => {
                    let row = self.basis[pos] - structural;
                    let at = self
                        .rows
                        .iter()
                        .position(|&i| i == row)
                        .expect("active row");
                    self.rows.remove(at);
                    self.basis.remove(pos);
                }
            }
        }
        Ok(())
    }
}

/// Solves the program. Deterministic for identical input.
pub fn solve(p: &LpProblem) -> Result<LpResult> {
    let n = p.num_vars;
    let n_ineq = p.ineq.len();
    let rows = p.num_constraints();
    // Columns: [z+ (n) | z- (n) | surplus (n_ineq) | artificial (rows)].
    let structural = 2 * n + n_ineq;
    let width = structural + rows;

    let scale = p
        .ineq
        .iter()
        .chain(&p.eq)
        .fold(1.0, |m: f64, r| m.max(r.1.abs()));

    let mut a = DMatrix::zeros(rows, width);
    let mut b = DVector::zeros(rows);
    for (i, (row, rhs)) in p.ineq.iter().chain(&p.eq).enumerate() {
        let sign = if *rhs < 0.0 { -1.0 } else { 1.0 };
        for (v, &coef) in row.iter().enumerate() {
            a[(i, v)] = sign * coef;
            a[(i, n + v)] = -sign * coef;
        }
        if i < n_ineq {
            a[(i, 2 * n + i)] = -sign;
        }
        a[(i, structural + i)] = 1.0;
        b[i] = sign * rhs;
    }

    let mut rs = Revised {
        a,
        b,
        rows: (0..rows).collect(),
        basis: (structural..width).collect(),
        iterations: 0,
        budget: 50 * (n + rows).max(1),
    };

    let mut cost1 = vec![0.0; width];
    cost1[structural..].iter_mut().for_each(|c| *c = 1.0);
    rs.optimize(&cost1, width)?;
    if rs.objective(&cost1)? > FEAS_TOL * scale {
        return Ok(LpResult::without_solution(LpStatus::Infeasible));
    }
    rs.drive_out_artificials(structural)?;

    let mut cost2 = vec![0.0; width];
    for (v, &c) in p.objective.iter().enumerate() {
        cost2[v] = c;
        cost2[n + v] = -c;
    }
    if !rs.optimize(&cost2, structural)? {
        return Ok(LpResult::without_solution(LpStatus::Unbounded));
    }

    let mut x = vec![0.0; structural];
    for (&j, v) in rs.basis.iter().zip(rs.basic_values()?.iter()) {
        x[j] = v.max(0.0);
    }
    let z: Vec<f64> = (0..n).map(|v| x[v] - x[n + v]).collect();
    let violation = p.max_violation(&z);
    if violation > 1e-7 * scale {
        return Err(Error::NumericalFailure(format!(
            "simplex solution violates constraints by {violation:e}"
        )));
    }
    let value = p.objective.iter().zip(&z).map(|(c, v)| c * v).sum();
    Ok(LpResult {
        status: LpStatus::Optimal,
        value: Some(value),
        solution: Some(z),
    })
}
