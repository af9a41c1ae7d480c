//! Search for an alternative exact factorization that does not contain a
//! given column, used to cross-check certificates.

use log::debug;
use nalgebra::DMatrix;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::factorization::{residual_bound, StochasticFactorization};
use crate::lp::{solve, LpProblem, LpStatus};
use crate::matrix::{is_subset, numeric_rank, support, zero_set, DenseMatrix};
use crate::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Strategy {
    /// Subtract a multiple of a column with smaller support.
    Perturbation,
    /// Mix the factors with a random matrix close to the identity.
    RandomMixing,
    /// Replace `C` by a simplex with corners on the boundary of the outer
    /// polytope that still contains every column of `R`.
    VertexSimplex,
}

/// A second exact factorization `R = C' St'` of the normalized `R`.
#[derive(Debug, Clone)]
pub struct Alternative {
    pub c: DenseMatrix,
    pub st: DenseMatrix,
    pub residual: f64,
    pub strategy: Strategy,
}

const STEP_LEVELS: usize = 8;
const PARALLEL_TOL: f64 = 1e-6;
const CHORD_STEPS: usize = 4;

fn unit_sum(col: &[f64]) -> Option<Vec<f64>> {
    let s: f64 = col.iter().sum();
    (s.abs() > 1e-14).then(|| col.iter().map(|v| v / s).collect())
}

/// Validates a candidate pair and packages it. Near-zero negatives are
/// clamped; the clamped product must still reproduce `R`.
fn accept(
    fact: &StochasticFactorization,
    k: usize,
    c: DenseMatrix,
    st: DenseMatrix,
    strategy: Strategy,
    tols: &Tolerances,
) -> Option<Alternative> {
    let floor = -tols.tol_zero.max(1e-12);
    if c.as_slice().iter().chain(st.as_slice()).any(|&v| v < floor) {
        return None;
    }
    let target = fact.c().col(k);
    for q in 0..c.cols() {
        let col = unit_sum(&c.col(q))?;
        let d = col
            .iter()
            .zip(&target)
            .fold(0.0, |m: f64, (a, b)| m.max((a - b).abs()));
        if d <= PARALLEL_TOL {
            return None;
        }
    }
    let (mut c, mut st) = (c, st);
    c.clamp_small(tols.tol_zero.max(1e-12));
    st.clamp_small(tols.tol_zero.max(1e-12));
    let c = DenseMatrix::new(
        c.rows(),
        c.cols(),
        c.as_slice().iter().map(|v| v.max(0.0)).collect(),
    )
    .ok()?;
    let st = DenseMatrix::new(
        st.rows(),
        st.cols(),
        st.as_slice().iter().map(|v| v.max(0.0)).collect(),
    )
    .ok()?;
    let residual = fact.r().max_abs_diff(&c.matmul(&st).ok()?);
    if residual > residual_bound(fact.r(), tols) {
        return None;
    }
    Some(Alternative {
        c,
        st,
        residual,
        strategy,
    })
}

fn perturbation(
    fact: &StochasticFactorization,
    k: usize,
    tols: &Tolerances,
) -> Option<Alternative> {
    let c = fact.c();
    let supp_k = support(&c.col(k), tols);
    for j in 0..c.cols() {
        if j == k {
            continue;
        }
        let supp_j = support(&c.col(j), tols);
        if !is_subset(&supp_j, &supp_k) {
            continue;
        }
        let eps_max = supp_j
            .iter()
            .map(|&i| c[(i, k)] / c[(i, j)])
            .fold(f64::INFINITY, f64::min);
        if !eps_max.is_finite() {
            continue;
        }
        let eps = eps_max / 2.0;
        let mut c2 = c.clone();
        let mut st2 = fact.st().clone();
        for i in 0..c.rows() {
            c2[(i, k)] = c[(i, k)] - eps * c[(i, j)];
        }
        for col in 0..st2.cols() {
            st2[(j, col)] += eps * st2[(k, col)];
        }
        if let Some(alt) = accept(fact, k, c2, st2, Strategy::Perturbation, tols) {
            return Some(alt);
        }
    }
    None
}

fn mix(c: &DenseMatrix, st: &DenseMatrix, q: &DMatrix<f64>) -> Option<(DenseMatrix, DenseMatrix)> {
    let qi = q.clone().try_inverse()?;
    let c2 = DenseMatrix::from_nalgebra(&(c.to_nalgebra() * q));
    let st2 = DenseMatrix::from_nalgebra(&(qi * st.to_nalgebra()));
    Some((c2, st2))
}

fn random_mixing(
    fact: &StochasticFactorization,
    k: usize,
    trials: usize,
    rng: &mut ChaCha8Rng,
    tols: &Tolerances,
) -> Option<Alternative> {
    let r = fact.rank();
    for t in 0..trials {
        let step = 0.5 / (1u32 << (t % STEP_LEVELS)) as f64;
        let q = DMatrix::from_fn(r, r, |i, j| {
            let u: f64 = rng.gen_range(-1.0..=1.0);
            if i == j {
                1.0 + step * u
            } else {
                step * u
            }
        });
        let Some((c2, st2)) = mix(fact.c(), fact.st(), &q) else {
            continue;
        };
        if let Some(alt) = accept(fact, k, c2, st2, Strategy::RandomMixing, tols) {
            return Some(alt);
        }
    }
    None
}

/// Vertices of the outer polytope reached by random objectives, in
/// coordinates `z` with `C z` the vertex.
fn vertex_pool(
    fact: &StochasticFactorization,
    rng: &mut ChaCha8Rng,
    count: usize,
) -> Vec<Vec<f64>> {
    let c = fact.c();
    let r = fact.rank();
    let mut pool: Vec<Vec<f64>> = Vec::new();
    for _ in 0..count {
        let w: Vec<f64> = (0..c.rows()).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let objective: Vec<f64> = (0..r)
            .map(|q| (0..c.rows()).map(|i| w[i] * c[(i, q)]).sum())
            .collect();
        let mut p = LpProblem::new(r).minimize(objective);
        for i in 0..c.rows() {
            p.ge(c.row(i).to_vec(), 0.0);
        }
        p.eq(vec![1.0; r], 1.0);
        let Ok(res) = solve(&p) else { continue };
        if res.status != LpStatus::Optimal {
            continue;
        }
        let z = res.solution.expect("optimal");
        let fresh = pool.iter().all(|v| {
            v.iter()
                .zip(&z)
                .fold(0.0, |m: f64, (a, b)| m.max((a - b).abs()))
                > 1e-9
        });
        if fresh {
            pool.push(z);
        }
    }
    pool
}

/// Number of `k`-subsets of `n` items, saturating.
fn binomial(n: usize, k: usize) -> usize {
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

/// Advances `idx` to the next `k`-subset of `0..n` in lexicographic order.
fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for pos in (0..k).rev() {
        if idx[pos] < n - k + pos {
            idx[pos] += 1;
            for later in pos + 1..k {
                idx[later] = idx[later - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Vertices of the outer polytope plus points along its edges.
fn boundary_pool(
    fact: &StochasticFactorization,
    rng: &mut ChaCha8Rng,
    tols: &Tolerances,
) -> Vec<Vec<f64>> {
    let c = fact.c();
    let r = fact.rank();
    let vertices = vertex_pool(fact, rng, 10 * r);
    let zeros: Vec<Vec<usize>> = vertices
        .iter()
        .map(|z| zero_set(&c.mul_vec(z), tols))
        .collect();
    let mut pool = vertices.clone();
    for a in 0..vertices.len() {
        for b in a + 1..vertices.len() {
            let common: Vec<usize> = zeros[a]
                .iter()
                .copied()
                .filter(|i| zeros[b].binary_search(i).is_ok())
                .collect();
            if numeric_rank(&c.select_rows(&common), tols) + 2 < r {
                continue;
            }
            for step in 1..CHORD_STEPS {
                let t = step as f64 / CHORD_STEPS as f64;
                pool.push(
                    vertices[a]
                        .iter()
                        .zip(&vertices[b])
                        .map(|(x, y)| (1.0 - t) * x + t * y)
                        .collect(),
                );
            }
        }
    }
    pool
}

fn vertex_simplex(
    fact: &StochasticFactorization,
    k: usize,
    trials: usize,
    rng: &mut ChaCha8Rng,
    tols: &Tolerances,
) -> Option<Alternative> {
    let r = fact.rank();
    let pool = boundary_pool(fact, rng, tols);
    let n = pool.len();
    if n < r {
        return None;
    }
    let try_corners = |z: &DMatrix<f64>| {
        let (c2, st2) = mix(fact.c(), fact.st(), z)?;
        accept(fact, k, c2, st2, Strategy::VertexSimplex, tols)
    };
    let corners = |picks: &[usize]| DMatrix::from_fn(r, r, |i, j| pool[picks[j]][i]);
    if binomial(n, r) <= trials {
        let mut idx: Vec<usize> = (0..r).collect();
        loop {
            if let Some(alt) = try_corners(&corners(&idx)) {
                return Some(alt);
            }
            if !next_combination(&mut idx, n) {
                return None;
            }
        }
    }
    for _ in 0..trials {
        let picks = sample(rng, n, r).into_vec();
        let mut z = corners(&picks);
        // Occasionally slide one corner towards another pool point.
        if rng.gen_bool(0.5) {
            let col = rng.gen_range(0..r);
            let other = rng.gen_range(0..n);
            let t: f64 = rng.gen_range(0.0..1.0);
            for i in 0..r {
                z[(i, col)] = (1.0 - t) * z[(i, col)] + t * pool[other][i];
            }
        }
        if let Some(alt) = try_corners(&z) {
            return Some(alt);
        }
    }
    None
}

/// Looks for an exact factorization of the normalized `R` of the same size
/// in which no column is a positive multiple of `C(:,k)`. Returns `None`
/// when the budget is exhausted; that is not a proof of identifiability.
pub fn disprove_column(
    fact: &StochasticFactorization,
    k: usize,
    trials: usize,
    seed: u64,
    tols: &Tolerances,
) -> Option<Alternative> {
    if k >= fact.rank() {
        return None;
    }
    if let Some(alt) = perturbation(fact, k, tols) {
        debug!("column {} disproved by perturbation", k + 1);
        return Some(alt);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let half = trials / 2;
    random_mixing(fact, k, half, &mut rng, tols)
        .or_else(|| vertex_simplex(fact, k, trials - half, &mut rng, tols))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factorization::prune_and_normalize;
    use crate::npp::fixtures::paper_fixture;

    fn fact_of(name: &str) -> StochasticFactorization {
        let fx = paper_fixture(name).unwrap();
        prune_and_normalize(&fx.r, &fx.c, &fx.s, &Tolerances::default()).unwrap()
    }

    #[test]
    fn combinations_are_enumerated() {
        let mut idx = vec![0, 1];
        let mut seen = vec![idx.clone()];
        while next_combination(&mut idx, 4) {
            seen.push(idx.clone());
        }
        assert_eq!(seen.len(), binomial(4, 2));
        assert_eq!(seen.last().unwrap(), &vec![2, 3]);
        assert_eq!(binomial(46, 3), 15180);
    }

    #[test]
    fn nested_support_is_perturbed_away() {
        let t = Tolerances::default();
        let c = DenseMatrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 0.0], vec![1.0, 2.0]]).unwrap();
        let s = DenseMatrix::identity(2);
        let r = c.clone();
        let f = prune_and_normalize(&r, &c, &s, &t).unwrap();
        let alt = disprove_column(&f, 0, 0, 1, &t).unwrap();
        assert_eq!(alt.strategy, Strategy::Perturbation);
        assert!(alt.residual <= 1e-12);
    }

    #[test]
    fn finds_alternative_without_first_column() {
        let t = Tolerances::default();
        let f = fact_of("eq_11");
        let alt = disprove_column(&f, 0, 10_000, 7, &t).expect("alternative");
        assert!(alt.residual <= 1e-9);
        assert!(alt.c.as_slice().iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn certified_column_survives() {
        let t = Tolerances::default();
        let f = fact_of("ex_3_2");
        assert!(disprove_column(&f, 0, 2_000, 3, &t).is_none());
    }
}
