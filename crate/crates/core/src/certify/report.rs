//! Certificates and the identifiability report.
//!
//! Indices are stored 0-based in the caller's original (pre-pruning)
//! indexing. Serialized reports and text output are 1-based.

use std::fmt::Write as _;

use serde::{Serialize, Serializer};

use crate::Tolerances;

pub const REPORT_VERSION: &str = "v1";

fn one_based<S: Serializer>(i: &usize, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_u64(*i as u64 + 1)
}

fn one_based_all<S: Serializer>(v: &[usize], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|i| i + 1))
}

fn one_based_opt<S: Serializer>(v: &Option<usize>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(i) => s.serialize_some(&(i + 1)),
        None => s.serialize_none(),
    }
}

fn one_based_pair<S: Serializer>(p: &(usize, usize), s: S) -> Result<S::Ok, S::Error> {
    (p.0 + 1, p.1 + 1).serialize(s)
}

/// Which factor a certificate or diagnostic refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Factor {
    C,
    S,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Method {
    #[serde(rename = "FRZRW")]
    Frzrw,
    Geometric,
    #[serde(rename = "SequentialFRZRW")]
    SequentialFrzrw,
    SequentialGeometric,
    PairR3,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Frzrw => "FRZRW",
            Method::Geometric => "Geometric",
            Method::SequentialFrzrw => "SequentialFRZRW",
            Method::SequentialGeometric => "SequentialGeometric",
            Method::PairR3 => "PairR3",
        }
    }

    pub(crate) fn sequential(self) -> Method {
        match self {
            Method::Frzrw => Method::SequentialFrzrw,
            Method::Geometric => Method::SequentialGeometric,
            other => other,
        }
    }
}

/// Objective of a face-intersection program. For geometric certificates the
/// pair is (certified column of the factor, column of `R`); for pair
/// certificates it is the two factor columns.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LpValue {
    #[serde(serialize_with = "one_based_pair")]
    pub pair: (usize, usize),
    pub objective: f64,
}

/// Evidence that one column of a factor is identifiable.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub factor: Factor,
    #[serde(serialize_with = "one_based")]
    pub column: usize,
    pub method: Method,
    /// Row of the factor's partner (a column of `R` for factor C) that is a
    /// positive multiple of a unit vector.
    #[serde(serialize_with = "one_based")]
    pub selective_row: usize,
    /// Rows on which the certified column vanishes.
    #[serde(serialize_with = "one_based_all")]
    pub witness_zero_rows: Vec<usize>,
    /// Rank of the factor restricted to `witness_zero_rows` (FRZRW methods).
    pub zero_rows_rank: Option<usize>,
    /// Columns of `R` whose faces avoid the certified column's face
    /// (geometric methods) or the single hull witness (pairs).
    #[serde(serialize_with = "one_based_all")]
    pub witness_columns: Vec<usize>,
    /// Previously certified columns fixed before this check ran.
    #[serde(serialize_with = "one_based_all")]
    pub recursion_path: Vec<usize>,
    /// Columns of `R` kept in the reduced problem (sequential methods).
    #[serde(serialize_with = "one_based_all")]
    pub level_columns: Vec<usize>,
    pub lp_values: Vec<LpValue>,
    #[serde(serialize_with = "one_based_opt")]
    pub partner: Option<usize>,
    /// 1 when the two faces are disjoint, 2 otherwise.
    pub pair_case: Option<u8>,
    /// True when the certificate relies on a pair certificate further up the
    /// recursion.
    pub depends_on_pair: bool,
}

impl Certificate {
    pub(crate) fn new(factor: Factor, column: usize, method: Method, selective_row: usize) -> Self {
        Certificate {
            factor,
            column,
            method,
            selective_row,
            witness_zero_rows: Vec::new(),
            zero_rows_rank: None,
            witness_columns: Vec::new(),
            recursion_path: Vec::new(),
            level_columns: Vec::new(),
            lp_values: Vec::new(),
            partner: None,
            pair_case: None,
            depends_on_pair: false,
        }
    }

    /// Rewrites every index through the level-to-parent maps.
    pub(crate) fn remap(&mut self, map: &IndexMap) {
        let rows = |v: &mut Vec<usize>| v.iter_mut().for_each(|i| *i = map.rows[*i]);
        let rcols = |v: &mut Vec<usize>| v.iter_mut().for_each(|i| *i = map.r_cols[*i]);
        self.column = map.c_cols[self.column];
        self.selective_row = map.r_cols[self.selective_row];
        rows(&mut self.witness_zero_rows);
        rcols(&mut self.witness_columns);
        rcols(&mut self.level_columns);
        self.recursion_path
            .iter_mut()
            .for_each(|i| *i = map.c_cols[*i]);
        if let Some(p) = self.partner.as_mut() {
            *p = map.c_cols[*p];
        }
        for lp in &mut self.lp_values {
            lp.pair = if self.method == Method::PairR3 {
                (map.c_cols[lp.pair.0], map.c_cols[lp.pair.1])
            } else {
                (map.c_cols[lp.pair.0], map.r_cols[lp.pair.1])
            };
        }
    }
}

/// Maps the row, `R`-column and factor-column indices of one level to its
/// parent.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct IndexMap {
    pub rows: Vec<usize>,
    pub r_cols: Vec<usize>,
    pub c_cols: Vec<usize>,
}

impl IndexMap {
    pub fn compose(&self, parent: &IndexMap) -> IndexMap {
        IndexMap {
            rows: self.rows.iter().map(|&i| parent.rows[i]).collect(),
            r_cols: self.r_cols.iter().map(|&i| parent.r_cols[i]).collect(),
            c_cols: self.c_cols.iter().map(|&i| parent.c_cols[i]).collect(),
        }
    }
}

/// A reason why a column was not certified or a branch was skipped.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub factor: Factor,
    #[serde(serialize_with = "one_based_opt")]
    pub column: Option<usize>,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct NecessaryViolations {
    #[serde(rename = "C", serialize_with = "one_based_all")]
    pub c: Vec<usize>,
    #[serde(rename = "S", serialize_with = "one_based_all")]
    pub s: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentifiabilityReport {
    /// Certified columns of `C`.
    #[serde(rename = "K", serialize_with = "one_based_all")]
    pub k: Vec<usize>,
    /// Certified columns of `S`.
    #[serde(rename = "L", serialize_with = "one_based_all")]
    pub l: Vec<usize>,
    pub certificates: Vec<Certificate>,
    pub necessary_violations: NecessaryViolations,
    pub fully_identifiable: bool,
    pub diagnostics: Vec<Diagnostic>,
    pub tolerances: Tolerances,
    pub version: String,
}

impl IdentifiabilityReport {
    pub fn certificate(&self, factor: Factor, column: usize) -> Option<&Certificate> {
        self.certificates
            .iter()
            .find(|c| c.factor == factor && c.column == column)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "K = {}", matlab_set(&self.k));
        let _ = writeln!(out, "L = {}", matlab_set(&self.l));
        let _ = writeln!(out, "fully_identifiable = {}", self.fully_identifiable);
        let _ = writeln!(
            out,
            "necessary_violations: C = {}, S = {}",
            matlab_set(&self.necessary_violations.c),
            matlab_set(&self.necessary_violations.s)
        );
        if !self.certificates.is_empty() {
            out.push_str("certificates:\n");
        }
        for c in &self.certificates {
            let _ = write!(
                out,
                "  {:?}(:,{}) {} selective row {}",
                c.factor,
                c.column + 1,
                c.method.name(),
                c.selective_row + 1
            );
            if let Some(rank) = c.zero_rows_rank {
                let _ = write!(
                    out,
                    ", zero rows {} of rank {rank}",
                    matlab_list(&c.witness_zero_rows)
                );
            }
            if !c.witness_columns.is_empty() {
                let _ = write!(out, ", witnesses {}", matlab_list(&c.witness_columns));
            }
            if let (Some(p), Some(case)) = (c.partner, c.pair_case) {
                let _ = write!(out, ", partner {} (case {case})", p + 1);
            }
            if !c.recursion_path.is_empty() {
                let _ = write!(out, ", fixed {}", matlab_list(&c.recursion_path));
            }
            if c.depends_on_pair {
                out.push_str(", depends on a pair certificate");
            }
            out.push('\n');
        }
        if !self.diagnostics.is_empty() {
            out.push_str("diagnostics:\n");
        }
        for d in &self.diagnostics {
            match d.column {
                Some(col) => {
                    let _ = writeln!(out, "  {:?}(:,{}): {}", d.factor, col + 1, d.message);
                }
                None => {
                    let _ = writeln!(out, "  {:?}: {}", d.factor, d.message);
                }
            }
        }
        out
    }
}

/// 1-based set in the bracket notation `[1 3]`; a single element is printed
/// bare.
pub fn matlab_set(v: &[usize]) -> String {
    match v {
        [single] => (single + 1).to_string(),
        _ => matlab_list(v),
    }
}

fn matlab_list(v: &[usize]) -> String {
    let items: Vec<String> = v.iter().map(|i| (i + 1).to_string()).collect();
    format!("[{}]", items.join(" "))
}
