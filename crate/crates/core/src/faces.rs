//! Face queries on the outer polytope `{C z : C z >= 0, e^T z = 1}`.
//!
//! Every point of the polytope is described by its coordinates `z` in the
//! column space of `C`; a face is described by the rows on which all of its
//! points vanish.

use serde::Serialize;

use crate::lp::{solve, LpProblem, LpStatus};
use crate::matrix::{least_squares, numeric_rank, zero_set, DenseMatrix};
use crate::{Error, Result, Tolerances};

/// The minimal face containing `anchor`: all polytope points vanishing on
/// `zero_rows`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FaceSpec {
    pub zero_rows: Vec<usize>,
    pub anchor: Vec<f64>,
}

/// Coordinates `z` with `C z = x`, after checking that `x` lies in the outer
/// polytope.
pub fn polytope_coordinates(c: &DenseMatrix, x: &[f64], tols: &Tolerances) -> Result<Vec<f64>> {
    if x.len() != c.rows() {
        return Err(Error::DimensionMismatch(format!(
            "point of length {} for a polytope in dimension {}",
            x.len(),
            c.rows()
        )));
    }
    let (z, residual) = least_squares(c, x)?;
    let scale = x.iter().fold(1.0, |m: f64, v| m.max(v.abs()));
    let bound = tols.residual_tol.max(1e-12) * scale;
    if residual > bound {
        return Err(Error::NotInPolytope(format!(
            "point is outside the column space of C (residual {residual:e})"
        )));
    }
    let sum: f64 = x.iter().sum();
    if (sum - 1.0).abs() > bound.max(1e-9) {
        return Err(Error::NotInPolytope(format!("entries sum to {sum}, not 1")));
    }
    if let Some((i, v)) = x.iter().enumerate().find(|(_, v)| **v < -tols.tol_zero) {
        return Err(Error::NotInPolytope(format!(
            "entry {i} is negative ({v:e})"
        )));
    }
    Ok(z)
}

pub fn minimal_face(c: &DenseMatrix, y: &[f64], tols: &Tolerances) -> Result<FaceSpec> {
    polytope_coordinates(c, y, tols)?;
    Ok(FaceSpec {
        zero_rows: zero_set(y, tols),
        anchor: y.to_vec(),
    })
}

/// Minimal face of column `k` of `C`, which lies in the polytope by
/// construction.
pub fn column_face(c: &DenseMatrix, k: usize, tols: &Tolerances) -> FaceSpec {
    let anchor = c.col(k);
    FaceSpec {
        zero_rows: zero_set(&anchor, tols),
        anchor,
    }
}

/// Rank test: column `k` is a vertex iff `C` restricted to the zero rows of
/// `C(:,k)` has rank `r - 1`.
pub fn is_vertex(c: &DenseMatrix, k: usize, tols: &Tolerances) -> bool {
    let zero_rows = zero_set(&c.col(k), tols);
    numeric_rank(&c.select_rows(&zero_rows), tols) + 1 == c.cols()
}

fn polytope_lp(c: &DenseMatrix, zero_rows: &[usize], objective: Vec<f64>) -> LpProblem {
    let r = c.cols();
    let mut p = LpProblem::new(r).minimize(objective);
    for i in 0..c.rows() {
        if zero_rows.binary_search(&i).is_ok() {
            p.eq(c.row(i).to_vec(), 0.0);
        } else {
            p.ge(c.row(i).to_vec(), 0.0);
        }
    }
    p.eq(vec![1.0; r], 1.0);
    p
}

/// LP test: column `k` is a vertex iff `z = e_k` is the only point of the
/// polytope vanishing on the zero rows of `C(:,k)`. Each coordinate of `z`
/// is minimized and maximized over that set.
pub fn is_vertex_lp(c: &DenseMatrix, k: usize, tols: &Tolerances) -> Result<bool> {
    let r = c.cols();
    let zero_rows = zero_set(&c.col(k), tols);
    let tol = tols.tol_zero.max(1e-8);
    for q in 0..r {
        let target = if q == k { 1.0 } else { 0.0 };
        for sign in [1.0, -1.0] {
            let mut objective = vec![0.0; r];
            objective[q] = sign;
            let res = solve(&polytope_lp(c, &zero_rows, objective))?;
            match res.status {
                LpStatus::Optimal => {
                    let value = sign * res.value.unwrap_or(f64::NAN);
                    if (value - target).abs() > tol {
                        return Ok(false);
                    }
                }
                LpStatus::Unbounded => return Ok(false),
                LpStatus::Infeasible => {
                    return Err(Error::NumericalFailure(format!(
                        "face of column {k} reported empty although it contains the column"
                    )))
                }
            }
        }
    }
    Ok(true)
}

/// Optimal value of `min sum_{i in K} (C z)_i` over the polytope, where `K`
/// is the union of the zero rows of both faces. Zero iff the faces meet.
pub fn face_intersection_value(
    c: &DenseMatrix,
    f1: &FaceSpec,
    f2: &FaceSpec,
    _tols: &Tolerances,
) -> Result<f64> {
    let mut rows: Vec<usize> = f1.zero_rows.iter().chain(&f2.zero_rows).copied().collect();
    rows.sort_unstable();
    rows.dedup();
    let r = c.cols();
    let mut objective = vec![0.0; r];
    for &i in &rows {
        for (o, v) in objective.iter_mut().zip(c.row(i)) {
            *o += v;
        }
    }
    let res = solve(&polytope_lp(c, &[], objective))?;
    match (res.status, res.value) {
        (LpStatus::Optimal, Some(v)) => Ok(v.max(0.0)),
        (status, _) => Err(Error::NumericalFailure(format!(
            "face intersection program ended {status:?}"
        ))),
    }
}

pub fn faces_intersect(
    c: &DenseMatrix,
    f1: &FaceSpec,
    f2: &FaceSpec,
    tols: &Tolerances,
) -> Result<bool> {
    Ok(face_intersection_value(c, f1, f2, tols)? <= tols.lp_threshold)
}

fn feasible(p: &LpProblem) -> Result<bool> {
    Ok(solve(p)?.is_feasible())
}

/// Closed-hull membership of `x` in `conv({C(:,k1)} ∪ face)`.
pub fn in_conv_point_face(
    c: &DenseMatrix,
    point_col: usize,
    face: &FaceSpec,
    x: &[f64],
    tols: &Tolerances,
) -> Result<bool> {
    let zx = polytope_coordinates(c, x, tols)?;
    let r = c.cols();
    // Variables: (lambda, z).
    let n = r + 1;
    let mut p = LpProblem::new(n);
    let padded = |row: &[f64]| {
        let mut v = vec![0.0; n];
        v[1..].copy_from_slice(row);
        v
    };
    for (q, &target) in zx.iter().enumerate() {
        let mut row = vec![0.0; n];
        row[1 + q] = 1.0;
        if q == point_col {
            row[0] = 1.0;
        }
        p.eq(row, target);
    }
    for i in 0..c.rows() {
        if face.zero_rows.binary_search(&i).is_ok() {
            p.eq(padded(c.row(i)), 0.0);
        } else {
            p.ge(padded(c.row(i)), 0.0);
        }
    }
    let mut lambda = vec![0.0; n];
    lambda[0] = 1.0;
    p.ge(lambda.clone(), 0.0);
    p.ge(lambda.iter().map(|v| -v).collect(), -1.0);
    feasible(&p)
}

/// Closed-hull membership of `x` in `conv(f1 ∪ f2)`.
pub fn in_conv_two_faces(
    c: &DenseMatrix,
    f1: &FaceSpec,
    f2: &FaceSpec,
    x: &[f64],
    tols: &Tolerances,
) -> Result<bool> {
    let zx = polytope_coordinates(c, x, tols)?;
    let r = c.cols();
    // Variables: (z1, z2).
    let n = 2 * r;
    let mut p = LpProblem::new(n);
    for (q, &target) in zx.iter().enumerate() {
        let mut row = vec![0.0; n];
        row[q] = 1.0;
        row[r + q] = 1.0;
        p.eq(row, target);
    }
    for (block, face) in [(0, f1), (r, f2)] {
        for i in 0..c.rows() {
            let mut row = vec![0.0; n];
            row[block..block + r].copy_from_slice(c.row(i));
            if face.zero_rows.binary_search(&i).is_ok() {
                p.eq(row, 0.0);
            } else {
                p.ge(row, 0.0);
            }
        }
        let mut sum = vec![0.0; n];
        sum[block..block + r].iter_mut().for_each(|v| *v = 1.0);
        p.ge(sum, 0.0);
    }
    feasible(&p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tols() -> Tolerances {
        Tolerances::default()
    }

    /// Slack vector of the point `(x, y)` against the unit square facets
    /// `y >= 0, y <= 1, x >= 0, x <= 1`.
    fn square(x: f64, y: f64) -> Vec<f64> {
        vec![y, 1.0 - y, x, 1.0 - x]
    }

    fn stochastic(cols: &[Vec<f64>]) -> DenseMatrix {
        let normalized: Vec<Vec<f64>> = cols
            .iter()
            .map(|c| {
                let s: f64 = c.iter().sum();
                c.iter().map(|v| v / s).collect()
            })
            .collect();
        DenseMatrix::from_cols(&normalized).unwrap()
    }

    fn halved(v: Vec<f64>) -> Vec<f64> {
        v.into_iter().map(|x| x / 2.0).collect()
    }

    fn square_triangle() -> DenseMatrix {
        stochastic(&[square(0.5, 0.0), square(0.0, 1.0), square(1.0, 1.0)])
    }

    fn first_column_fixture() -> DenseMatrix {
        stochastic(&[
            vec![2.0, 1.0, 1.0, 0.0, 0.0],
            vec![2.0, 3.0, 1.0, 2.0, 1.0],
            vec![2.0, 1.0, 3.0, 2.0, 2.0],
        ])
    }

    fn mixed_fixture() -> DenseMatrix {
        stochastic(&[
            vec![2.0, 1.0, 1.0, 0.0],
            vec![2.0, 3.0, 1.0, 2.0],
            vec![2.0, 1.0, 3.0, 2.0],
        ])
    }

    #[test]
    fn minimal_faces() {
        let c = square_triangle();
        let f = minimal_face(&c, &halved(square(0.5, 0.0)), &tols()).unwrap();
        assert_eq!(f.zero_rows, vec![0]);
        let f = minimal_face(&c, &halved(square(0.9, 0.4)), &tols()).unwrap();
        assert!(f.zero_rows.is_empty());
        let id = DenseMatrix::identity(3);
        let f = minimal_face(&id, &[0.0, 1.0, 0.0], &tols()).unwrap();
        assert_eq!(f.zero_rows, vec![0, 2]);
    }

    #[test]
    fn points_outside_are_rejected() {
        let c = square_triangle();
        let err = minimal_face(&c, &halved(square(1.5, 0.5)), &tols()).unwrap_err();
        assert!(matches!(err, Error::NotInPolytope(_)));
        let err = minimal_face(&c, &[0.5, 0.5, 0.5, 0.5], &tols()).unwrap_err();
        assert!(matches!(err, Error::NotInPolytope(_)));
    }

    #[test]
    fn vertex_tests_agree() {
        let t = tols();
        let c = first_column_fixture();
        assert!(is_vertex(&c, 0, &t));
        assert!(is_vertex_lp(&c, 0, &t).unwrap());
        let c = mixed_fixture();
        assert!(!is_vertex(&c, 0, &t));
        assert!(!is_vertex_lp(&c, 0, &t).unwrap());
        let id = DenseMatrix::identity(4);
        for k in 0..4 {
            assert!(is_vertex(&id, k, &t));
            assert!(is_vertex_lp(&id, k, &t).unwrap());
        }
    }

    #[test]
    fn opposite_edges_do_not_meet() {
        let t = tols();
        let c = square_triangle();
        let bottom = column_face(&c, 0, &t);
        let top = minimal_face(&c, &halved(square(0.0, 1.0)), &t).unwrap();
        assert_eq!(top.zero_rows, vec![1, 2]);
        let top_edge = FaceSpec {
            zero_rows: vec![1],
            anchor: halved(square(0.5, 1.0)),
        };
        let v = face_intersection_value(&c, &bottom, &top_edge, &t).unwrap();
        assert!((v - 0.5).abs() < 1e-9, "value {v}");
        assert!(!faces_intersect(&c, &bottom, &top_edge, &t).unwrap());
        assert!(faces_intersect(&c, &bottom, &bottom, &t).unwrap());
    }

    #[test]
    fn corner_lies_on_bottom_edge() {
        let t = tols();
        let c = stochastic(&[square(0.0, 0.0), square(1.0, 0.0), square(0.0, 1.0)]);
        let corner = column_face(&c, 0, &t);
        let edge = minimal_face(&c, &halved(square(0.5, 0.0)), &t).unwrap();
        assert!(faces_intersect(&c, &corner, &edge, &t).unwrap());
        assert!(faces_intersect(&c, &edge, &corner, &t).unwrap());
    }

    #[test]
    fn point_face_hull() {
        let t = tols();
        let c = stochastic(&[square(0.5, 0.0), square(0.5, 1.0), square(1.0, 0.4)]);
        let f2 = column_face(&c, 1, &t);
        let x = halved(square(0.9, 0.4));
        assert!(!in_conv_point_face(&c, 0, &f2, &x, &t).unwrap());
        assert!(in_conv_point_face(&c, 0, &f2, &c.col(0), &t).unwrap());
        assert!(in_conv_point_face(&c, 0, &f2, &c.col(1), &t).unwrap());
        // Inside the triangle spanned by (0.5,0) and the top edge.
        let inside = halved(square(0.4, 0.6));
        assert!(in_conv_point_face(&c, 0, &f2, &inside, &t).unwrap());
    }

    #[test]
    fn two_face_hull() {
        let t = tols();
        let c = stochastic(&[square(0.5, 0.0), square(0.0, 0.5), square(1.0, 1.0)]);
        let f1 = column_face(&c, 0, &t);
        let f2 = column_face(&c, 1, &t);
        let x = halved(square(0.75, 0.75));
        assert!(!in_conv_two_faces(&c, &f1, &f2, &x, &t).unwrap());
        assert!(in_conv_two_faces(&c, &f1, &f2, &c.col(0), &t).unwrap());
        let mid: Vec<f64> = c
            .col(0)
            .iter()
            .zip(c.col(1))
            .map(|(a, b)| (a + b) / 2.0)
            .collect();
        assert!(in_conv_two_faces(&c, &f1, &f2, &mid, &t).unwrap());
        let outside = halved(square(1.5, 0.5));
        assert!(matches!(
            in_conv_two_faces(&c, &f1, &f2, &outside, &t),
            Err(Error::NotInPolytope(_))
        ));
    }
}
