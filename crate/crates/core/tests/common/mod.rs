#![allow(dead_code)]

use nmf_certify::matrix::numeric_rank;
use nmf_certify::{DenseMatrix, Tolerances};
use rand::Rng;

/// Column-stochastic `m x r` matrix of full column rank in which each entry
/// is zero with probability `zero_prob`.
pub fn planted_stochastic<R: Rng>(rng: &mut R, m: usize, r: usize, zero_prob: f64) -> DenseMatrix {
    let tols = Tolerances::default();
    loop {
        let mut data = vec![0.0; m * r];
        for v in data.iter_mut() {
            if !rng.gen_bool(zero_prob) {
                *v = rng.gen_range(0.05..1.0);
            }
        }
        let mut c = DenseMatrix::new(m, r, data).unwrap();
        let sums = c.col_sums();
        if sums.contains(&0.0) || numeric_rank(&c, &tols) != r {
            continue;
        }
        for (k, s) in sums.iter().enumerate() {
            c.scale_col(k, 1.0 / s);
        }
        return c;
    }
}

/// Exact rank-3 factorization built from a nested-polygon picture: a convex
/// outer polygon, a triangle whose corners sit on the polygon boundary or
/// inside it, and inner points drawn from the triangle. Some triangle corners
/// are added as inner points so that selective windows occur.
pub fn random_npp_factorization<R: Rng>(rng: &mut R) -> (DenseMatrix, DenseMatrix, DenseMatrix) {
    let tols = Tolerances::default();
    loop {
        let m = rng.gen_range(4..=7);
        let mut angles: Vec<f64> = (0..m)
            .map(|_| rng.gen_range(0.0..std::f64::consts::TAU))
            .collect();
        angles.sort_by(f64::total_cmp);
        let poly: Vec<[f64; 2]> = angles.iter().map(|a| [a.cos(), a.sin()]).collect();
        // Facet i through poly[i] and poly[i+1], oriented so the interior is positive.
        let facets: Vec<([f64; 2], f64)> = (0..m)
            .map(|i| {
                let (p, q) = (poly[i], poly[(i + 1) % m]);
                let normal = [-(q[1] - p[1]), q[0] - p[0]];
                let offset = -(normal[0] * p[0] + normal[1] * p[1]);
                (normal, offset)
            })
            .collect();
        let slack = |x: [f64; 2]| -> Vec<f64> {
            facets
                .iter()
                .map(|(n, g)| (n[0] * x[0] + n[1] * x[1] + g).max(0.0))
                .collect()
        };
        let corner = |rng: &mut R| -> [f64; 2] {
            let choice = rng.gen_range(0..3);
            if choice == 0 {
                poly[rng.gen_range(0..m)]
            } else if choice == 1 {
                let i = rng.gen_range(0..m);
                let t = rng.gen_range(0.1..0.9);
                let (p, q) = (poly[i], poly[(i + 1) % m]);
                [p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]
            } else {
                let w: Vec<f64> = (0..m).map(|_| rng.gen_range(0.0..1.0)).collect();
                let s: f64 = w.iter().sum();
                let mut x = [0.0, 0.0];
                for (wi, p) in w.iter().zip(&poly) {
                    x[0] += wi / s * p[0];
                    x[1] += wi / s * p[1];
                }
                x
            }
        };
        let tri: Vec<[f64; 2]> = (0..3).map(|_| corner(rng)).collect();
        let area = (tri[1][0] - tri[0][0]) * (tri[2][1] - tri[0][1])
            - (tri[2][0] - tri[0][0]) * (tri[1][1] - tri[0][1]);
        if area.abs() < 0.05 {
            continue;
        }
        let mut s_rows: Vec<Vec<f64>> = Vec::new();
        for q in 0..3 {
            if rng.gen_bool(0.7) {
                let mut e = vec![0.0; 3];
                e[q] = 1.0;
                s_rows.push(e);
            }
        }
        for _ in 0..rng.gen_range(2..=5) {
            let mut w: Vec<f64> = (0..3)
                .map(|_| {
                    if rng.gen_bool(0.2) {
                        0.0
                    } else {
                        rng.gen_range(0.05..1.0)
                    }
                })
                .collect();
            let s: f64 = w.iter().sum();
            if s == 0.0 {
                continue;
            }
            w.iter_mut().for_each(|v| *v /= s);
            s_rows.push(w);
        }
        let c_cols: Vec<Vec<f64>> = tri.iter().map(|&x| slack(x)).collect();
        let mut c = DenseMatrix::from_cols(&c_cols).unwrap();
        c.clamp_small(1e-12);
        let s = DenseMatrix::from_rows(&s_rows).unwrap();
        if numeric_rank(&s, &tols) != 3 || numeric_rank(&c, &tols) != 3 {
            continue;
        }
        let r = c.matmul(&s.transpose()).unwrap();
        if nmf_certify::prune_and_normalize(&r, &c, &s, &tols).is_err() {
            continue;
        }
        return (r, c, s);
    }
}

/// Permutes and rescales the columns of both factors; returns the new pair
/// and the permutation, where new column `q` is old column `perm[q]`.
pub fn permute_and_scale<R: Rng>(
    rng: &mut R,
    c: &DenseMatrix,
    s: &DenseMatrix,
) -> (DenseMatrix, DenseMatrix, Vec<usize>) {
    let r = c.cols();
    let mut perm: Vec<usize> = (0..r).collect();
    rand::seq::SliceRandom::shuffle(perm.as_mut_slice(), rng);
    let mut c2 = c.select_cols(&perm);
    let mut s2 = s.select_cols(&perm);
    for q in 0..r {
        let d = 2f64.powi(rng.gen_range(-3..=3));
        c2.scale_col(q, d);
        s2.scale_col(q, 1.0 / d);
    }
    (c2, s2, perm)
}

/// Maximum entrywise difference between `a b^T` and `r`.
pub fn product_residual(r: &DenseMatrix, a: &DenseMatrix, bt: &DenseMatrix) -> f64 {
    a.matmul(bt).unwrap().max_abs_diff(r)
}

/// Minimum of `objective . z` over `{z : C z >= 0, e^T z = 1}` by
/// enumerating the vertices of the polytope.
pub fn min_over_polytope(c: &DenseMatrix, objective: &[f64]) -> Option<f64> {
    let (m, r) = c.shape();
    let mut best: Option<f64> = None;
    let mut idx: Vec<usize> = (0..r - 1).collect();
    loop {
        let mut a = nalgebra::DMatrix::<f64>::zeros(r, r);
        let mut b = nalgebra::DVector::<f64>::zeros(r);
        for (row, &i) in idx.iter().enumerate() {
            for q in 0..r {
                a[(row, q)] = c[(i, q)];
            }
        }
        for q in 0..r {
            a[(r - 1, q)] = 1.0;
        }
        b[r - 1] = 1.0;
        if let Some(z) = a.clone().full_piv_lu().solve(&b) {
            let z: Vec<f64> = z.iter().copied().collect();
            let ok = (a * nalgebra::DVector::from_vec(z.clone()) - &b).amax() < 1e-9
                && (0..m)
                    .all(|i| c.row(i).iter().zip(&z).map(|(x, y)| x * y).sum::<f64>() >= -1e-9);
            if ok {
                let v: f64 = objective.iter().zip(&z).map(|(x, y)| x * y).sum();
                best = Some(best.map_or(v, |b: f64| b.min(v)));
            }
        }
        let mut pos = r - 1;
        loop {
            if pos == 0 {
                return best;
            }
            pos -= 1;
            if idx[pos] < m - (r - 1) + pos {
                idx[pos] += 1;
                for t in pos + 1..r - 1 {
                    idx[t] = idx[t - 1] + 1;
                }
                break;
            }
        }
    }
}
