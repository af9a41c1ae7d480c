//! Sufficient conditions for the identifiability of individual columns,
//! their sequential combination, and the full pipeline over both factors.

mod oracle;
mod report;

use std::collections::{BTreeMap, BTreeSet};

use log::{debug, info};

pub use oracle::{disprove_column, Alternative, Strategy};
pub(crate) use report::IndexMap;
pub use report::{
    matlab_set, Certificate, Diagnostic, Factor, IdentifiabilityReport, LpValue, Method,
    NecessaryViolations, REPORT_VERSION,
};

use crate::faces::{column_face, face_intersection_value, in_conv_point_face, in_conv_two_faces};
use crate::factorization::{prune_and_normalize, StochasticFactorization};
use crate::matrix::{
    independent_columns, is_subset, numeric_rank, scaled_unit_row, support, zero_set, DenseMatrix,
};
use crate::{Error, Result, Tolerances};

/// Options of the full pipeline.
#[derive(Debug, Clone, Copy, Default)]
pub struct CertifyOptions {
    pub tols: Tolerances,
    /// Only test rank-3 pairs whose columns are both certified already.
    pub strict_pairs: bool,
}

impl CertifyOptions {
    pub fn new(tols: Tolerances) -> Self {
        CertifyOptions {
            tols,
            strict_pairs: false,
        }
    }
}

/// Maps each column `k` of `C` to the smallest column `j` of `St` that is a
/// positive multiple of `e_k`.
pub fn selective_window_columns(st: &DenseMatrix, tols: &Tolerances) -> BTreeMap<usize, usize> {
    let mut sel = BTreeMap::new();
    for j in 0..st.cols() {
        if let Some(k) = scaled_unit_row(&st.col(j), tols) {
            sel.entry(k).or_insert(j);
        }
    }
    sel
}

/// Columns whose support contains the support of another column. None of
/// them can be identifiable.
pub fn check_necessary_support(c: &DenseMatrix, tols: &Tolerances) -> Vec<usize> {
    let supports: Vec<Vec<usize>> = (0..c.cols()).map(|k| support(&c.col(k), tols)).collect();
    (0..c.cols())
        .filter(|&k| (0..c.cols()).any(|j| j != k && is_subset(&supports[j], &supports[k])))
        .collect()
}

/// Zero-region window test: the rows where `C(:,k)` vanishes carry a
/// rank `r - 1` submatrix.
pub fn check_frzrw(
    fact: &StochasticFactorization,
    k: usize,
    sel: &BTreeMap<usize, usize>,
    tols: &Tolerances,
) -> Option<Certificate> {
    let &row = sel.get(&k)?;
    let zero_rows = zero_set(&fact.c.col(k), tols);
    let rank = numeric_rank(&fact.c.select_rows(&zero_rows), tols);
    if rank + 1 != fact.rank {
        return None;
    }
    let mut cert = Certificate::new(Factor::C, k, Method::Frzrw, row);
    cert.witness_zero_rows = zero_rows;
    cert.zero_rows_rank = Some(rank);
    Some(cert)
}

/// Face test: enough columns of `R` lie on faces disjoint from the minimal
/// face of `C(:,k)` to span a space of dimension `r - 1`.
pub fn check_geometric(
    fact: &StochasticFactorization,
    k: usize,
    sel: &BTreeMap<usize, usize>,
    tols: &Tolerances,
) -> Result<Option<Certificate>> {
    let Some(&row) = sel.get(&k) else {
        return Ok(None);
    };
    let face_k = column_face(&fact.c, k, tols);
    let mut pool = Vec::new();
    let mut values = Vec::new();
    for j in 0..fact.r.cols() {
        let face_j = column_face(&fact.r, j, tols);
        let v = face_intersection_value(&fact.c, &face_k, &face_j, tols)?;
        if v > tols.lp_threshold {
            pool.push(j);
            values.push(v);
        }
    }
    let needed = fact.rank - 1;
    let chosen = independent_columns(&fact.r.select_cols(&pool), needed, tols);
    if chosen.len() < needed {
        return Ok(None);
    }
    let mut cert = Certificate::new(Factor::C, k, Method::Geometric, row);
    cert.witness_zero_rows = face_k.zero_rows;
    cert.witness_columns = chosen.iter().map(|&i| pool[i]).collect();
    cert.lp_values = chosen
        .iter()
        .map(|&i| LpValue {
            pair: (k, pool[i]),
            objective: values[i],
        })
        .collect();
    Ok(Some(cert))
}

/// Rank-3 pair test. Certifies both `k1` and `k2` when some column of `R`
/// lies outside the hulls built from one column and the other's face
/// (disjoint faces), or outside the hull of both faces (meeting faces).
pub fn check_pair_r3(
    fact: &StochasticFactorization,
    k1: usize,
    k2: usize,
    sel: &BTreeMap<usize, usize>,
    tols: &Tolerances,
) -> Result<Option<(Certificate, Certificate)>> {
    if fact.rank != 3 {
        return Err(Error::PreconditionViolated(format!(
            "pair test needs rank 3, got {}",
            fact.rank
        )));
    }
    let (Some(&row1), Some(&row2)) = (sel.get(&k1), sel.get(&k2)) else {
        return Err(Error::PreconditionViolated(format!(
            "columns {} and {} must both have a selective window",
            k1 + 1,
            k2 + 1
        )));
    };
    let s1 = support(&fact.c.col(k1), tols);
    let s2 = support(&fact.c.col(k2), tols);
    if k1 == k2 || is_subset(&s1, &s2) || is_subset(&s2, &s1) {
        return Err(Error::PreconditionViolated(format!(
            "supports of columns {} and {} are nested",
            k1 + 1,
            k2 + 1
        )));
    }
    let f1 = column_face(&fact.c, k1, tols);
    let f2 = column_face(&fact.c, k2, tols);
    let gap = face_intersection_value(&fact.c, &f1, &f2, tols)?;
    let disjoint = gap > tols.lp_threshold;
    let mut witness = None;
    for j in 0..fact.r.cols() {
        let x = fact.r.col(j);
        let outside = if disjoint {
            !in_conv_point_face(&fact.c, k1, &f2, &x, tols)?
                && !in_conv_point_face(&fact.c, k2, &f1, &x, tols)?
        } else {
            !in_conv_two_faces(&fact.c, &f1, &f2, &x, tols)?
        };
        if outside {
            witness = Some(j);
            break;
        }
    }
    let Some(j) = witness else {
        return Ok(None);
    };
    let make = |k: usize, row: usize, face: &crate::faces::FaceSpec, partner: usize| {
        let mut cert = Certificate::new(Factor::C, k, Method::PairR3, row);
        cert.witness_zero_rows = face.zero_rows.clone();
        cert.witness_columns = vec![j];
        cert.partner = Some(partner);
        cert.pair_case = Some(if disjoint { 1 } else { 2 });
        cert.lp_values = vec![LpValue {
            pair: (k1, k2),
            objective: gap,
        }];
        cert
    };
    Ok(Some((make(k1, row1, &f1, k2), make(k2, row2, &f2, k1))))
}

/// Sufficient condition for full identifiability: every column has a
/// selective window and the minimal faces of the columns of `C` are
/// pairwise disjoint.
pub fn check_full_identifiability(
    fact: &StochasticFactorization,
    tols: &Tolerances,
) -> Result<bool> {
    let sel = selective_window_columns(&fact.st, tols);
    if sel.len() != fact.rank {
        return Ok(false);
    }
    let faces: Vec<_> = (0..fact.rank)
        .map(|k| column_face(&fact.c, k, tols))
        .collect();
    for a in 0..fact.rank {
        for b in a + 1..fact.rank {
            if face_intersection_value(&fact.c, &faces[a], &faces[b], tols)? <= tols.lp_threshold {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The factorization left after fixing a set of certified columns: `R`
/// restricted to the columns whose support does not contain the support of
/// any fixed column, factored by the remaining columns of `C`.
pub(crate) struct Level {
    pub fact: StochasticFactorization,
    /// Level indices to the parent factorization's indices.
    pub map: IndexMap,
}

pub(crate) enum LevelOutcome {
    Ready(Box<Level>),
    Skipped(String),
}

pub(crate) fn reduced_level(
    fact: &StochasticFactorization,
    fixed: &[usize],
    tols: &Tolerances,
) -> LevelOutcome {
    let r = fact.rank;
    let fixed_supports: Vec<Vec<usize>> = fixed
        .iter()
        .map(|&k| support(&fact.c.col(k), tols))
        .collect();
    let kept: Vec<usize> = (0..fact.r.cols())
        .filter(|&j| {
            let supp_j = support(&fact.r.col(j), tols);
            fixed_supports.iter().all(|s| !is_subset(s, &supp_j))
        })
        .collect();
    let rest: Vec<usize> = (0..r).filter(|k| !fixed.contains(k)).collect();
    let s = fact.s();
    let sub = s.select_rows(&kept).select_cols(&rest);
    let rank = numeric_rank(&sub, tols);
    if rank != rest.len() {
        return LevelOutcome::Skipped(format!("rank(S(J,P)) = {rank} < {}", rest.len()));
    }
    let r_sub = fact.r.select_cols(&kept);
    let c_sub = fact.c.select_cols(&rest);
    match prune_and_normalize(&r_sub, &c_sub, &sub, tols) {
        Ok(red) => {
            let map = IndexMap {
                rows: red.kept_rows.clone(),
                r_cols: red.kept_cols.iter().map(|&j| kept[j]).collect(),
                c_cols: rest,
            };
            LevelOutcome::Ready(Box::new(Level { fact: red, map }))
        }
        Err(e) => LevelOutcome::Skipped(format!("reduced factorization rejected: {e}")),
    }
}

fn base_check(
    fact: &StochasticFactorization,
    k: usize,
    sel: &BTreeMap<usize, usize>,
    tols: &Tolerances,
) -> Result<Option<Certificate>> {
    if let Some(cert) = check_frzrw(fact, k, sel, tols) {
        return Ok(Some(cert));
    }
    check_geometric(fact, k, sel, tols)
}

fn subsets_up_to(items: &[usize], max_size: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut frontier: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..max_size {
        let mut next = Vec::new();
        for s in &frontier {
            let start = s.last().map_or(0, |&l| {
                items.iter().position(|&x| x == l).expect("member") + 1
            });
            for &x in &items[start..] {
                let mut t = s.clone();
                t.push(x);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Results of the sequential search in the indexing of the factorization it
/// ran on.
#[derive(Debug, Default)]
pub struct SequentialOutcome {
    pub certificates: Vec<Certificate>,
    pub diagnostics: Vec<Diagnostic>,
}

/// Fixes subsets of the known certified columns, runs the base checks on
/// each reduced factorization, and repeats until no new column is certified.
/// Subsets are explored by size, each at most once.
pub fn certify_sequential(
    fact: &StochasticFactorization,
    known: &BTreeMap<usize, Certificate>,
    tols: &Tolerances,
) -> Result<SequentialOutcome> {
    let r = fact.rank;
    let limit = tols.depth_limit(r).min(r.saturating_sub(1));
    let mut certified = known.clone();
    let mut explored: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut outcome = SequentialOutcome::default();
    loop {
        let members: Vec<usize> = certified.keys().copied().collect();
        let mut progress = false;
        for fixed in subsets_up_to(&members, limit) {
            if !explored.insert(fixed.clone()) {
                continue;
            }
            let level = match reduced_level(fact, &fixed, tols) {
                LevelOutcome::Ready(level) => level,
                LevelOutcome::Skipped(reason) => {
                    debug!("branch fixing {fixed:?} skipped: {reason}");
                    outcome.diagnostics.push(Diagnostic {
                        factor: Factor::C,
                        column: None,
                        message: format!(
                            "sequential branch fixing {} skipped: {reason}",
                            matlab_set(&fixed)
                        ),
                    });
                    continue;
                }
            };
            let via_pair = fixed.iter().any(|k| {
                let c = &certified[k];
                c.method == Method::PairR3 || c.depends_on_pair
            });
            let sel = selective_window_columns(&level.fact.st, tols);
            for q in 0..level.fact.rank {
                let target = level.map.c_cols[q];
                if certified.contains_key(&target) {
                    continue;
                }
                if let Some(mut cert) = base_check(&level.fact, q, &sel, tols)? {
                    cert.method = cert.method.sequential();
                    cert.level_columns = (0..level.fact.r.cols()).collect();
                    cert.remap(&level.map);
                    cert.recursion_path = fixed.clone();
                    cert.depends_on_pair = via_pair;
                    info!("column {} certified after fixing {:?}", target + 1, fixed);
                    certified.insert(target, cert.clone());
                    outcome.certificates.push(cert);
                    progress = true;
                }
            }
        }
        if !progress {
            return Ok(outcome);
        }
    }
}

struct SideOutcome {
    certificates: Vec<Certificate>,
    diagnostics: Vec<Diagnostic>,
    violations: Vec<usize>,
    fact: StochasticFactorization,
}

fn root_map(fact: &StochasticFactorization) -> IndexMap {
    IndexMap {
        rows: fact.kept_rows.clone(),
        r_cols: fact.kept_cols.clone(),
        c_cols: (0..fact.rank).collect(),
    }
}

/// Runs every check for the columns of `c` in `r = c s^T`.
fn certify_side(
    r: &DenseMatrix,
    c: &DenseMatrix,
    s: &DenseMatrix,
    factor: Factor,
    opts: &CertifyOptions,
) -> Result<SideOutcome> {
    let tols = &opts.tols;
    let fact = prune_and_normalize(r, c, s, tols)?;
    let rank = fact.rank;
    let sel = selective_window_columns(&fact.st, tols);
    let violations = check_necessary_support(&fact.c, tols);
    let mut certified: BTreeMap<usize, Certificate> = BTreeMap::new();
    let mut diagnostics: Vec<Diagnostic> = Vec::new();
    fn note(diagnostics: &mut Vec<Diagnostic>, column: Option<usize>, message: String) {
        let d = Diagnostic {
            factor: Factor::C,
            column,
            message,
        };
        if !diagnostics.contains(&d) {
            diagnostics.push(d);
        }
    }

    for k in 0..rank {
        if !sel.contains_key(&k) {
            note(&mut diagnostics, Some(k), "no selective window".into());
            continue;
        }
        if let Some(cert) = base_check(&fact, k, &sel, tols)? {
            certified.insert(k, cert);
        } else {
            note(
                &mut diagnostics,
                Some(k),
                "zero-region window rank below r-1 and too few columns of R on disjoint faces"
                    .into(),
            );
        }
    }

    let mut explored_pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
    loop {
        let before = certified.len();
        if !certified.is_empty() && certified.len() < rank {
            let seq = certify_sequential(&fact, &certified, tols)?;
            for cert in seq.certificates {
                certified.insert(cert.column, cert);
            }
            for d in seq.diagnostics {
                note(&mut diagnostics, d.column, d.message);
            }
        }
        if rank == 3 {
            let keys: Vec<usize> = sel.keys().copied().collect();
            for (a, &k1) in keys.iter().enumerate() {
                for &k2 in &keys[a + 1..] {
                    let both = certified.contains_key(&k1) && certified.contains_key(&k2);
                    if both != opts.strict_pairs || !explored_pairs.insert((k1, k2)) {
                        continue;
                    }
                    match check_pair_r3(&fact, k1, k2, &sel, tols) {
                        Ok(Some((c1, c2))) => {
                            for cert in [c1, c2] {
                                certified.entry(cert.column).or_insert(cert);
                            }
                        }
                        Ok(None) => note(
                            &mut diagnostics,
                            None,
                            format!(
                                "pair {} has no column of R outside the required hulls",
                                matlab_set(&[k1, k2])
                            ),
                        ),
                        Err(Error::PreconditionViolated(msg)) => note(
                            &mut diagnostics,
                            None,
                            format!("pair test not applicable: {msg}"),
                        ),
                        Err(e) => return Err(e),
                    }
                }
            }
        }
        if certified.len() == before {
            break;
        }
    }

    for &k in &violations {
        if certified.remove(&k).is_some() {
            note(
                &mut diagnostics,
                Some(k),
                "certificate discarded: support contains another column's support".into(),
            );
        }
    }

    diagnostics.retain(|d| d.column.is_none_or(|k| !certified.contains_key(&k)));
    let map = root_map(&fact);
    let certificates = certified
        .into_values()
        .map(|mut cert| {
            cert.remap(&map);
            cert.factor = factor;
            cert
        })
        .collect();
    for d in &mut diagnostics {
        d.factor = factor;
    }
    Ok(SideOutcome {
        certificates,
        diagnostics,
        violations,
        fact,
    })
}

/// Certifies columns of both factors of `R = C S^T` with default options.
pub fn certify_all(
    r: &DenseMatrix,
    c: &DenseMatrix,
    s: &DenseMatrix,
    tols: &Tolerances,
) -> Result<IdentifiabilityReport> {
    certify_all_with(r, c, s, &CertifyOptions::new(*tols))
}

pub fn certify_all_with(
    r: &DenseMatrix,
    c: &DenseMatrix,
    s: &DenseMatrix,
    opts: &CertifyOptions,
) -> Result<IdentifiabilityReport> {
    let c_side = certify_side(r, c, s, Factor::C, opts)?;
    let s_side = certify_side(&r.transpose(), s, c, Factor::S, opts)?;
    let fully_identifiable = check_full_identifiability(&c_side.fact, &opts.tols)?;
    let k = c_side.certificates.iter().map(|c| c.column).collect();
    let l = s_side.certificates.iter().map(|c| c.column).collect();
    let mut certificates = c_side.certificates;
    certificates.extend(s_side.certificates);
    let mut diagnostics = c_side.diagnostics;
    diagnostics.extend(s_side.diagnostics);
    Ok(IdentifiabilityReport {
        k,
        l,
        certificates,
        necessary_violations: NecessaryViolations {
            c: c_side.violations,
            s: s_side.violations,
        },
        fully_identifiable,
        diagnostics,
        tolerances: opts.tols,
        version: REPORT_VERSION.into(),
    })
}

fn position(v: &[usize], x: usize) -> Option<usize> {
    v.iter().position(|&y| y == x)
}

/// Re-runs the rank checks and programs recorded in `cert` against the
/// factorization `r = c s^T` of the certificate's own factor (pass the
/// transposed problem for certificates of `S`).
pub fn revalidate(
    cert: &Certificate,
    r: &DenseMatrix,
    c: &DenseMatrix,
    s: &DenseMatrix,
    tols: &Tolerances,
) -> Result<bool> {
    let fact = prune_and_normalize(r, c, s, tols)?;
    let root = root_map(&fact);
    let (level_fact, map) = if cert.recursion_path.is_empty() {
        (fact, root)
    } else {
        match reduced_level(&fact, &cert.recursion_path, tols) {
            LevelOutcome::Ready(level) => {
                let map = level.map.compose(&root);
                (level.fact, map)
            }
            LevelOutcome::Skipped(_) => return Ok(false),
        }
    };
    let f = &level_fact;
    let (Some(q), Some(row)) = (
        position(&map.c_cols, cert.column),
        position(&map.r_cols, cert.selective_row),
    ) else {
        return Ok(false);
    };
    if scaled_unit_row(&f.st.col(row), tols) != Some(q) {
        return Ok(false);
    }
    let local_rows: Option<Vec<usize>> = cert
        .witness_zero_rows
        .iter()
        .map(|&i| position(&map.rows, i))
        .collect();
    let local_cols: Option<Vec<usize>> = cert
        .witness_columns
        .iter()
        .map(|&j| position(&map.r_cols, j))
        .collect();
    let (Some(rows), Some(cols)) = (local_rows, local_cols) else {
        return Ok(false);
    };
    let mut expected_rows = zero_set(&f.c.col(q), tols);
    expected_rows.sort_unstable();
    if rows != expected_rows {
        return Ok(false);
    }
    match cert.method {
        Method::Frzrw | Method::SequentialFrzrw => {
            Ok(numeric_rank(&f.c.select_rows(&rows), tols) + 1 == f.rank)
        }
        Method::Geometric | Method::SequentialGeometric => {
            if cols.len() + 1 != f.rank || numeric_rank(&f.r.select_cols(&cols), tols) != cols.len()
            {
                return Ok(false);
            }
            let face_k = column_face(&f.c, q, tols);
            for &j in &cols {
                let face_j = column_face(&f.r, j, tols);
                if face_intersection_value(&f.c, &face_k, &face_j, tols)? <= tols.lp_threshold {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Method::PairR3 => {
            let Some(p) = cert.partner.and_then(|p| position(&map.c_cols, p)) else {
                return Ok(false);
            };
            let [j] = cols[..] else {
                return Ok(false);
            };
            if f.rank != 3 {
                return Ok(false);
            }
            let f1 = column_face(&f.c, q, tols);
            let f2 = column_face(&f.c, p, tols);
            let disjoint = face_intersection_value(&f.c, &f1, &f2, tols)? > tols.lp_threshold;
            if cert.pair_case != Some(if disjoint { 1 } else { 2 }) {
                return Ok(false);
            }
            let x = f.r.col(j);
            Ok(if disjoint {
                !in_conv_point_face(&f.c, q, &f2, &x, tols)?
                    && !in_conv_point_face(&f.c, p, &f1, &x, tols)?
            } else {
                !in_conv_two_faces(&f.c, &f1, &f2, &x, tols)?
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::npp::fixtures::paper_fixture;

    fn tols() -> Tolerances {
        Tolerances::default()
    }

    fn fact_of(name: &str) -> StochasticFactorization {
        let fx = paper_fixture(name).unwrap();
        prune_and_normalize(&fx.r, &fx.c, &fx.s, &tols()).unwrap()
    }

    #[test]
    fn selective_windows() {
        let f = fact_of("ex_3_2");
        let sel = selective_window_columns(&f.st, &tols());
        assert_eq!(
            sel.into_iter().collect::<Vec<_>>(),
            vec![(0, 0), (1, 1), (2, 2)]
        );
        let f = fact_of("ex_2_3");
        assert!(selective_window_columns(&f.st, &tols()).is_empty());
        let f = fact_of("ex_4_8");
        let sel = selective_window_columns(&f.st, &tols());
        assert_eq!(sel.keys().copied().collect::<Vec<_>>(), vec![0, 1]);
    }

    #[test]
    fn necessary_support() {
        let c = DenseMatrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert_eq!(check_necessary_support(&c, &tols()), vec![0]);
        assert!(check_necessary_support(&DenseMatrix::identity(3), &tols()).is_empty());
        // Columns 2 and 3 have full support and contain the support of column 1.
        let f = fact_of("ex_3_2");
        assert_eq!(check_necessary_support(&f.c, &tols()), vec![1, 2]);
    }

    #[test]
    fn frzrw_examples() {
        let t = tols();
        let f = fact_of("ex_3_2");
        let sel = selective_window_columns(&f.st, &t);
        let cert = check_frzrw(&f, 0, &sel, &t).unwrap();
        assert_eq!(cert.witness_zero_rows, vec![3, 4]);
        assert_eq!(cert.zero_rows_rank, Some(2));
        let f = fact_of("eq_11");
        let sel = selective_window_columns(&f.st, &t);
        assert!(check_frzrw(&f, 0, &sel, &t).is_none());
        let f = fact_of("ex_4_4");
        let sel = selective_window_columns(&f.st, &t);
        for k in 0..4 {
            assert!(check_frzrw(&f, k, &sel, &t).is_none());
        }
    }

    #[test]
    fn geometric_examples() {
        let t = tols();
        let f = fact_of("ex_3_5");
        let sel = selective_window_columns(&f.st, &t);
        let cert = check_geometric(&f, 0, &sel, &t).unwrap().unwrap();
        assert_eq!(cert.witness_columns, vec![1, 2]);
        assert!(cert.lp_values.iter().all(|v| v.objective > 1e-6));
        let f = fact_of("sq_corner");
        let sel = selective_window_columns(&f.st, &t);
        assert!(check_geometric(&f, 0, &sel, &t).unwrap().is_none());
        assert!(check_frzrw(&f, 0, &sel, &t).is_some());
    }

    #[test]
    fn pair_preconditions() {
        let t = tols();
        let f = fact_of("ex_3_2");
        let sel = selective_window_columns(&f.st, &t);
        // Column 1's support lies inside column 2's.
        assert!(matches!(
            check_pair_r3(&f, 0, 1, &sel, &t),
            Err(Error::PreconditionViolated(_))
        ));
        let f = fact_of("ex_4_7");
        let sel = selective_window_columns(&f.st, &t);
        assert!(check_pair_r3(&f, 0, 1, &sel, &t).is_err());
    }

    #[test]
    fn subset_enumeration() {
        let s = subsets_up_to(&[0, 2, 3], 2);
        assert_eq!(
            s,
            vec![
                vec![0],
                vec![2],
                vec![3],
                vec![0, 2],
                vec![0, 3],
                vec![2, 3]
            ]
        );
        assert!(subsets_up_to(&[1], 0).is_empty());
    }

    #[test]
    fn identity_is_fully_identifiable() {
        let id = DenseMatrix::identity(3);
        let rep = certify_all(&id, &id, &id, &tols()).unwrap();
        assert_eq!(rep.k, vec![0, 1, 2]);
        assert_eq!(rep.l, vec![0, 1, 2]);
        assert!(rep.fully_identifiable);
    }
}
