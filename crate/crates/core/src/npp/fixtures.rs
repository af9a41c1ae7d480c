//! Small exact instances with known certification outcomes.
//!
//! Entries are stored as integers over a common denominator per factor and
//! converted to floating point at load time; `R` is always computed as
//! `C S^T`.

use crate::matrix::DenseMatrix;
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: &'static str,
    pub r: DenseMatrix,
    pub c: DenseMatrix,
    pub s: DenseMatrix,
    /// Expected certified columns of `C`, 0-based.
    pub expected_k: Vec<usize>,
    /// Expected certified columns of `S`, 0-based.
    pub expected_l: Vec<usize>,
    pub notes: &'static str,
}

pub const FIXTURE_NAMES: &[&str] = &[
    "ex_2_3",
    "ex_3_2",
    "eq_11",
    "ex_3_5",
    "sq_corner",
    "ex_4_4",
    "ex_4_7",
    "ex_4_8",
    "thm38_case1",
    "thm38_case2",
];

fn scaled(rows: &[&[i64]], den: i64) -> DenseMatrix {
    let rows: Vec<Vec<f64>> = rows
        .iter()
        .map(|r| r.iter().map(|&v| v as f64 / den as f64).collect())
        .collect();
    DenseMatrix::from_rows(&rows).expect("fixture rows are rectangular")
}

struct Entry {
    name: &'static str,
    c: (&'static [&'static [i64]], i64),
    s: (&'static [&'static [i64]], i64),
    k: &'static [usize],
    l: &'static [usize],
    notes: &'static str,
}

const I3: &[&[i64]] = &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]];
const I4: &[&[i64]] = &[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]];

const ENTRIES: &[Entry] = &[
    Entry {
        name: "ex_2_3",
        c: (&[&[0, 0, 1], &[1, 1, 0], &[0, 1, 0], &[1, 0, 1]], 4),
        s: (&[&[2, 2, 0], &[2, 0, 2], &[0, 1, 3], &[0, 3, 1]], 1),
        k: &[],
        l: &[1, 2],
        notes: "unit square around a quadrilateral; the nested triangle is unique but \
                no row of S is a scaled unit vector",
    },
    Entry {
        name: "ex_3_2",
        c: (
            &[&[2, 2, 2], &[1, 3, 1], &[1, 1, 3], &[0, 2, 2], &[0, 1, 2]],
            1,
        ),
        s: (I3, 1),
        k: &[0],
        l: &[],
        notes: "first column vanishes on rows 4 and 5, where C has rank 2",
    },
    Entry {
        name: "eq_11",
        c: (&[&[2, 2, 2], &[1, 3, 1], &[1, 1, 3], &[0, 2, 2]], 1),
        s: (I3, 1),
        k: &[],
        l: &[],
        notes: "first column has a zero and a selective window but is not identifiable",
    },
    Entry {
        name: "ex_3_5",
        c: (&[&[0, 2, 2], &[2, 0, 0], &[1, 0, 2], &[1, 2, 0]], 2),
        s: (&[&[5, 0, 0], &[0, 4, 1], &[0, 1, 4]], 5),
        k: &[0],
        l: &[0],
        notes: "square with an inscribed triangle; column 1 sits mid-edge and is \
                certified by disjoint faces",
    },
    Entry {
        name: "sq_corner",
        c: (&[&[0, 1, 0], &[2, 1, 2], &[0, 0, 1], &[2, 2, 1]], 2),
        s: (I3, 1),
        k: &[0],
        l: &[1, 2],
        notes: "square with inner triangle (0,0), (0,0.5), (0.5,0); the corner is a \
                vertex whose face meets every other face",
    },
    Entry {
        name: "ex_4_4",
        c: (
            &[
                &[0, 4, 0, 4],
                &[0, 0, 4, 4],
                &[3, 1, 1, 3],
                &[4, 0, 4, 0],
                &[4, 4, 0, 0],
                &[1, 3, 3, 1],
            ],
            4,
        ),
        s: (I4, 1),
        k: &[0, 1, 2, 3],
        l: &[],
        notes: "unit cube with four inner points on pairwise disjoint faces",
    },
    Entry {
        name: "ex_4_7",
        c: (
            &[
                &[0, 1, 1, 1],
                &[0, 1, 2, 3],
                &[0, 1, 2, 1],
                &[1, 0, 1, 2],
                &[1, 0, 2, 1],
                &[1, 1, 0, 1],
                &[1, 1, 1, 0],
            ],
            1,
        ),
        s: (I4, 1),
        k: &[0, 1, 2, 3],
        l: &[],
        notes: "column 1 by its zero window; the others after fixing certified columns",
    },
    Entry {
        name: "ex_4_8",
        c: (
            &[
                &[0, 1, 1, 1],
                &[0, 1, 2, 3],
                &[0, 1, 2, 1],
                &[1, 0, 1, 2],
                &[1, 0, 2, 1],
                &[1, 0, 0, 1],
                &[1, 1, 1, 0],
            ],
            1,
        ),
        s: (
            &[&[1, 0, 0, 0], &[0, 1, 0, 0], &[1, 0, 1, 0], &[1, 0, 0, 1]],
            1,
        ),
        k: &[0, 1],
        l: &[],
        notes: "columns 3 and 4 have no selective window and the reduced problems are \
                rank deficient",
    },
    Entry {
        name: "thm38_case1",
        c: (&[&[0, 10, 4], &[10, 0, 6], &[5, 5, 10], &[5, 5, 0]], 10),
        s: (&[&[50, 0, 0], &[0, 50, 0], &[6, 4, 40], &[19, 21, 10]], 50),
        k: &[0, 1],
        l: &[],
        notes: "columns 1 and 2 on opposite edges of the square; R(:,3) lies outside \
                both point-face hulls",
    },
    Entry {
        name: "thm38_case2",
        c: (&[&[0, 1, 2], &[2, 1, 0], &[1, 0, 2], &[1, 2, 0]], 2),
        s: (&[&[30, 0, 0], &[0, 30, 0], &[5, 5, 20], &[14, 14, 2]], 30),
        k: &[0, 1],
        l: &[],
        notes: "columns 1 and 2 on adjacent edges of the square; R(:,3) lies outside \
                the hull of both edges",
    },
];

pub fn paper_fixture(name: &str) -> Result<Fixture> {
    let entry = ENTRIES
        .iter()
        .find(|s| s.name == name)
        .ok_or_else(|| Error::UnknownFixture(name.to_string()))?;
    let c = scaled(entry.c.0, entry.c.1);
    let s = scaled(entry.s.0, entry.s.1);
    let r = c.matmul(&s.transpose())?;
    Ok(Fixture {
        name: entry.name,
        r,
        c,
        s,
        expected_k: entry.k.to_vec(),
        expected_l: entry.l.to_vec(),
        notes: entry.notes,
    })
}

pub fn all_fixtures() -> Vec<Fixture> {
    FIXTURE_NAMES
        .iter()
        .map(|n| paper_fixture(n).expect("listed fixture exists"))
        .collect()
}
