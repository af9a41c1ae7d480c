//! Translation between exact factorizations and nested polytopes.
//!
//! An instance is an outer polytope `{x : F x + g >= 0}` in dimension
//! `d = r - 1` together with the vertices of an inner polytope. Entry
//! `(i, j)` of `R` is the slack of inner vertex `j` against facet `i`.

pub mod fixtures;
mod render;

pub use render::{face_highlight, outer_polygon, render_npp, render_svg, Highlight};

use crate::factorization::StochasticFactorization;
use crate::matrix::{independent_columns, least_squares, numeric_rank, DenseMatrix};
use crate::{Error, Result, Tolerances};

#[derive(Debug, Clone, PartialEq)]
pub struct NppInstance {
    f: DenseMatrix,
    g: Vec<f64>,
    inner_vertices: Vec<Vec<f64>>,
}

impl NppInstance {
    /// Validates that every inner vertex lies in the outer polytope and that
    /// the inner vertices span the whole space.
    pub fn new(
        f: DenseMatrix,
        g: Vec<f64>,
        inner_vertices: Vec<Vec<f64>>,
        tols: &Tolerances,
    ) -> Result<Self> {
        let d = f.cols();
        if g.len() != f.rows() {
            return Err(Error::DimensionMismatch(format!(
                "F has {} rows but g has length {}",
                f.rows(),
                g.len()
            )));
        }
        if let Some(v) = inner_vertices.iter().find(|v| v.len() != d) {
            return Err(Error::DimensionMismatch(format!(
                "inner vertex of length {} in dimension {d}",
                v.len()
            )));
        }
        if inner_vertices.iter().flatten().any(|x| !x.is_finite())
            || g.iter().any(|x| !x.is_finite())
        {
            return Err(Error::InvalidNpp("non-finite coordinate".into()));
        }
        let npp = NppInstance {
            f,
            g,
            inner_vertices,
        };
        for (j, v) in npp.inner_vertices.iter().enumerate() {
            let slack = npp.slack(v);
            if let Some((i, s)) = slack.iter().enumerate().find(|(_, s)| **s < -tols.tol_zero) {
                return Err(Error::InvalidNpp(format!(
                    "inner vertex {} violates facet {} by {:e}",
                    j + 1,
                    i + 1,
                    -s
                )));
            }
        }
        if let Some(first) = npp.inner_vertices.first() {
            let centered: Vec<Vec<f64>> = npp
                .inner_vertices
                .iter()
                .map(|v| v.iter().zip(first).map(|(a, b)| a - b).collect())
                .collect();
            let m = DenseMatrix::from_cols(&centered)?;
            if d > 0 && numeric_rank(&m, tols) != d {
                return Err(Error::InvalidNpp(
                    "inner vertices do not span the space".into(),
                ));
            }
        } else {
            return Err(Error::InvalidNpp("no inner vertices".into()));
        }
        Ok(npp)
    }

    pub fn f(&self) -> &DenseMatrix {
        &self.f
    }

    pub fn g(&self) -> &[f64] {
        &self.g
    }

    pub fn inner_vertices(&self) -> &[Vec<f64>] {
        &self.inner_vertices
    }

    pub fn dimension(&self) -> usize {
        self.f.cols()
    }

    /// `F x + g`.
    pub fn slack(&self, x: &[f64]) -> Vec<f64> {
        self.f
            .mul_vec(x)
            .into_iter()
            .zip(&self.g)
            .map(|(a, b)| a + b)
            .collect()
    }
}

/// Result of [`nmf_to_npp`]: the instance plus the data needed to map back.
#[derive(Debug, Clone)]
pub struct NppReduction {
    pub npp: NppInstance,
    /// Columns of `R` used as the basis `U`.
    pub basis: Vec<usize>,
    /// `R = U V`, `r x n`, columns summing to one.
    pub v: DenseMatrix,
    /// For each column of `R`, the first column with the same inner vertex.
    pub classes: Vec<usize>,
}

impl NppReduction {
    /// Outer-polytope coordinates of a unit-sum vector in the column space of
    /// `R`, such as a column of `C`.
    pub fn coordinates_of(&self, x: &[f64]) -> Result<Vec<f64>> {
        let u = self.basis_matrix();
        let (w, residual) = least_squares(&u, x)?;
        if residual > 1e-8 {
            return Err(Error::NotInPolytope(format!(
                "vector lies outside the column space of R (residual {residual:e})"
            )));
        }
        Ok(w[..self.npp.dimension()].to_vec())
    }

    fn basis_matrix(&self) -> DenseMatrix {
        // U(:,q) = F(:,q) + g for q < d, U(:,d) = g.
        let d = self.npp.dimension();
        let m = self.npp.f.rows();
        let mut cols: Vec<Vec<f64>> = (0..d)
            .map(|q| (0..m).map(|i| self.npp.f[(i, q)] + self.npp.g[i]).collect())
            .collect();
        cols.push(self.npp.g.clone());
        DenseMatrix::from_cols(&cols).expect("consistent sizes")
    }
}

/// Builds the nested-polytope instance of a normalized factorization: a
/// basis `U` of `r` independent columns of `R` (smallest indices first),
/// `R = U V`, inner vertices the first `r - 1` coordinates of each column of
/// `V`, outer polytope `{x : U(:,1:d) x + U(:,r)(1 - e^T x) >= 0}`.
pub fn nmf_to_npp(fact: &StochasticFactorization, tols: &Tolerances) -> Result<NppReduction> {
    let r = fact.rank();
    let rm = fact.r();
    let basis = independent_columns(rm, r, tols);
    if basis.len() != r {
        return Err(Error::RankDeficient {
            what: "R".into(),
            expected: r,
            found: basis.len(),
        });
    }
    let u = rm.select_cols(&basis);
    let mut v_cols = Vec::with_capacity(rm.cols());
    for j in 0..rm.cols() {
        let (v, _) = least_squares(&u, &rm.col(j))?;
        v_cols.push(v);
    }
    let v = DenseMatrix::from_cols(&v_cols)?;
    let d = r - 1;
    let m = rm.rows();
    let g = u.col(d);
    let f_cols: Vec<Vec<f64>> = (0..d)
        .map(|q| (0..m).map(|i| u[(i, q)] - g[i]).collect())
        .collect();
    let f = if d == 0 {
        DenseMatrix::zeros(m, 0)
    } else {
        DenseMatrix::from_cols(&f_cols)?
    };
    let inner: Vec<Vec<f64>> = v_cols.iter().map(|c| c[..d].to_vec()).collect();

    let mut classes = Vec::with_capacity(inner.len());
    for (j, vj) in inner.iter().enumerate() {
        let rep = (0..j)
            .find(|&i| {
                inner[i]
                    .iter()
                    .zip(vj)
                    .all(|(a, b)| (a - b).abs() <= tols.tol_zero.max(1e-12))
            })
            .unwrap_or(j);
        classes.push(rep);
    }
    let npp = NppInstance::new(f, g, inner, &loosened(tols))?;
    Ok(NppReduction {
        npp,
        basis,
        v,
        classes,
    })
}

fn loosened(tols: &Tolerances) -> Tolerances {
    Tolerances {
        tol_zero: tols.tol_zero.max(1e-9),
        ..*tols
    }
}

/// Factorization rebuilt from a nested-polytope instance.
#[derive(Debug, Clone)]
pub struct NppFactorization {
    pub r: DenseMatrix,
    /// Present when solution vertices were given.
    pub c: Option<DenseMatrix>,
    pub s: Option<DenseMatrix>,
}

/// `R(:,j) = F v_j + g`. With `d + 1` solution vertices `s_q`, also
/// `C(:,q) = F s_q + g` and `S(j,:)` the barycentric coordinates of `v_j`.
pub fn npp_to_nmf(
    npp: &NppInstance,
    solution: Option<&[Vec<f64>]>,
    tols: &Tolerances,
) -> Result<NppFactorization> {
    let r_cols: Vec<Vec<f64>> = npp.inner_vertices.iter().map(|v| npp.slack(v)).collect();
    let r = DenseMatrix::from_cols(&r_cols)?;
    let Some(sol) = solution else {
        return Ok(NppFactorization {
            r,
            c: None,
            s: None,
        });
    };
    let d = npp.dimension();
    if sol.len() != d + 1 {
        return Err(Error::InvalidSolution(format!(
            "expected {} solution vertices, got {}",
            d + 1,
            sol.len()
        )));
    }
    let mut c_cols = Vec::with_capacity(sol.len());
    for (q, s) in sol.iter().enumerate() {
        if s.len() != d {
            return Err(Error::InvalidSolution(format!(
                "solution vertex {} has length {}, expected {d}",
                q + 1,
                s.len()
            )));
        }
        let slack = npp.slack(s);
        if slack.iter().any(|&x| x < -tols.tol_zero) {
            return Err(Error::InvalidSolution(format!(
                "solution vertex {} lies outside the outer polytope",
                q + 1
            )));
        }
        c_cols.push(slack);
    }
    let c = DenseMatrix::from_cols(&c_cols)?;
    // Barycentric coordinates: [s_1 .. s_p; 1 .. 1] lambda = [v; 1].
    let mut simplex_cols = Vec::with_capacity(sol.len());
    for s in sol {
        let mut col = s.clone();
        col.push(1.0);
        simplex_cols.push(col);
    }
    let simplex = DenseMatrix::from_cols(&simplex_cols)?;
    if numeric_rank(&simplex, tols) != d + 1 {
        return Err(Error::InvalidSolution(
            "solution vertices are affinely dependent".into(),
        ));
    }
    let mut s_rows = Vec::with_capacity(npp.inner_vertices.len());
    for (j, v) in npp.inner_vertices.iter().enumerate() {
        let mut rhs = v.clone();
        rhs.push(1.0);
        let (lambda, _) = least_squares(&simplex, &rhs)?;
        if lambda.iter().any(|&l| l < -tols.tol_zero.max(1e-12)) {
            return Err(Error::InvalidSolution(format!(
                "inner vertex {} is not inside the solution simplex",
                j + 1
            )));
        }
        s_rows.push(lambda.into_iter().map(|l| l.max(0.0)).collect());
    }
    let s = DenseMatrix::from_rows(&s_rows)?;
    Ok(NppFactorization {
        r,
        c: Some(c),
        s: Some(s),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factorization::prune_and_normalize;
    use crate::npp::fixtures::paper_fixture;

    fn tols() -> Tolerances {
        Tolerances::default()
    }

    fn unit_square() -> (DenseMatrix, Vec<f64>) {
        let f = DenseMatrix::from_rows(&[
            vec![0.0, 1.0],
            vec![0.0, -1.0],
            vec![1.0, 0.0],
            vec![-1.0, 0.0],
        ])
        .unwrap();
        (f, vec![0.0, 1.0, 0.0, 1.0])
    }

    #[test]
    fn square_with_quadrilateral() {
        let (f, g) = unit_square();
        let inner = vec![
            vec![0.5, 0.0],
            vec![0.0, 0.5],
            vec![0.25, 0.75],
            vec![0.75, 0.25],
        ];
        let npp = NppInstance::new(f, g, inner, &tols()).unwrap();
        let back = npp_to_nmf(&npp, None, &tols()).unwrap();
        let expected = DenseMatrix::from_rows(&[
            vec![0.0, 2.0, 3.0, 1.0],
            vec![4.0, 2.0, 1.0, 3.0],
            vec![2.0, 0.0, 1.0, 3.0],
            vec![2.0, 4.0, 3.0, 1.0],
        ])
        .unwrap();
        let scaled =
            DenseMatrix::new(4, 4, back.r.as_slice().iter().map(|v| v * 4.0).collect()).unwrap();
        assert_eq!(scaled.max_abs_diff(&expected), 0.0);
    }

    #[test]
    fn simplex_solution_recovers_factors() {
        let (f, g) = unit_square();
        let inner = vec![
            vec![0.5, 0.0],
            vec![0.0, 0.5],
            vec![0.25, 0.75],
            vec![0.75, 0.25],
        ];
        let npp = NppInstance::new(f, g, inner, &tols()).unwrap();
        let sol = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]];
        let out = npp_to_nmf(&npp, Some(&sol), &tols()).unwrap();
        let (c, s) = (out.c.unwrap(), out.s.unwrap());
        let prod = c.matmul(&s.transpose()).unwrap();
        assert!(prod.max_abs_diff(&out.r) < 1e-12);
        // The second and third solution vertices miss (0.25,0.75)'s hull.
        let bad = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 0.5]];
        assert!(matches!(
            npp_to_nmf(&npp, Some(&bad), &tols()),
            Err(Error::InvalidSolution(_))
        ));
        let outside = vec![vec![0.0, 0.0], vec![2.0, 0.0], vec![0.0, 1.0]];
        assert!(matches!(
            npp_to_nmf(&npp, Some(&outside), &tols()),
            Err(Error::InvalidSolution(_))
        ));
    }

    #[test]
    fn identity_gives_simplex() {
        let id = DenseMatrix::identity(3);
        let fact = prune_and_normalize(&id, &id, &id, &tols()).unwrap();
        let red = nmf_to_npp(&fact, &tols()).unwrap();
        assert_eq!(red.basis, vec![0, 1, 2]);
        let verts = red.npp.inner_vertices();
        assert_eq!(verts, &[vec![1.0, 0.0], vec![0.0, 1.0], vec![0.0, 0.0]]);
        let back = npp_to_nmf(&red.npp, None, &tols()).unwrap();
        assert!(back.r.max_abs_diff(&id) < 1e-15);
    }

    #[test]
    fn duplicate_columns_share_a_class() {
        let c = DenseMatrix::identity(2);
        let s = DenseMatrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let r = c.matmul(&s.transpose()).unwrap();
        let fact = prune_and_normalize(&r, &c, &s, &tols()).unwrap();
        let red = nmf_to_npp(&fact, &tols()).unwrap();
        assert_eq!(red.classes, vec![0, 1, 0]);
    }

    #[test]
    fn round_trip_on_fixture() {
        let fx = paper_fixture("ex_3_5").unwrap();
        let fact = prune_and_normalize(&fx.r, &fx.c, &fx.s, &tols()).unwrap();
        let red = nmf_to_npp(&fact, &tols()).unwrap();
        let back = npp_to_nmf(&red.npp, None, &tols()).unwrap();
        assert!(back.r.max_abs_diff(fact.r()) < 1e-12);
    }

    #[test]
    fn rejects_invalid_instances() {
        let (f, g) = unit_square();
        let t = tols();
        assert!(matches!(
            NppInstance::new(f.clone(), g.clone(), vec![], &t),
            Err(Error::InvalidNpp(_))
        ));
        let outside = vec![vec![2.0, 0.0], vec![0.0, 0.0], vec![0.0, 1.0]];
        assert!(NppInstance::new(f.clone(), g.clone(), outside, &t).is_err());
        let collinear = vec![vec![0.0, 0.0], vec![0.5, 0.5], vec![1.0, 1.0]];
        assert!(NppInstance::new(f, g, collinear, &t).is_err());
    }
}
