//! SVG drawing of two-dimensional nested-polytope instances.

use std::fmt::Write as _;
use std::path::Path;

use super::NppInstance;
use crate::{Error, Result};

const CANVAS: f64 = 800.0;
const MARGIN: f64 = 0.05 * CANVAS;
const OUTER_STROKE: &str = "#1f4e79";
const INNER_FILL: &str = "#f4b183";
const INNER_STROKE: &str = "#c55a11";
const SOLUTION_STROKE: &str = "#2e7d32";
const HIGHLIGHT_STROKE: &str = "#c00000";
const EPS: f64 = 1e-9;

/// A face of the outer polygon to emphasize.
#[derive(Debug, Clone, PartialEq)]
pub enum Highlight {
    Vertex([f64; 2]),
    Edge([f64; 2], [f64; 2]),
}

fn check_2d(npp: &NppInstance) -> Result<()> {
    match npp.dimension() {
        2 => Ok(()),
        d => Err(Error::UnsupportedDimension(d)),
    }
}

fn angle_sorted(mut pts: Vec<[f64; 2]>) -> Vec<[f64; 2]> {
    let n = pts.len() as f64;
    let cx = pts.iter().map(|p| p[0]).sum::<f64>() / n;
    let cy = pts.iter().map(|p| p[1]).sum::<f64>() / n;
    pts.sort_by(|a, b| {
        let ta = (a[1] - cy).atan2(a[0] - cx);
        let tb = (b[1] - cy).atan2(b[0] - cx);
        ta.total_cmp(&tb)
    });
    pts
}

/// Vertices of `{x : F x + g >= 0}` in counter-clockwise order.
pub fn outer_polygon(npp: &NppInstance) -> Result<Vec<[f64; 2]>> {
    check_2d(npp)?;
    let f = npp.f();
    let g = npp.g();
    let m = f.rows();
    let mut pts: Vec<[f64; 2]> = Vec::new();
    for a in 0..m {
        for b in a + 1..m {
            let (a1, a2, b1, b2) = (f[(a, 0)], f[(a, 1)], f[(b, 0)], f[(b, 1)]);
            let det = a1 * b2 - a2 * b1;
            if det.abs() < 1e-12 {
                continue;
            }
            let x = (-g[a] * b2 + a2 * g[b]) / det;
            let y = (-a1 * g[b] + g[a] * b1) / det;
            let p = [x, y];
            let scale = 1.0 + x.abs().max(y.abs());
            if npp.slack(&p).iter().all(|&s| s >= -EPS * scale)
                && !pts
                    .iter()
                    .any(|q| (q[0] - x).abs() < 1e-9 && (q[1] - y).abs() < 1e-9)
            {
                pts.push(p);
            }
        }
    }
    if pts.len() < 3 {
        return Err(Error::InvalidNpp("outer polygon is degenerate".into()));
    }
    Ok(angle_sorted(pts))
}

fn cross(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Convex hull by the monotone chain method, counter-clockwise.
fn convex_hull(points: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    pts.dedup_by(|a, b| (a[0] - b[0]).abs() < 1e-12 && (a[1] - b[1]).abs() < 1e-12);
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<[f64; 2]> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<[f64; 2]> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// The face of the outer polygon on which the facets in `zero_rows` are
/// tight: a vertex, an edge, or `None` for the whole polygon.
pub fn face_highlight(npp: &NppInstance, zero_rows: &[usize]) -> Result<Option<Highlight>> {
    if zero_rows.is_empty() {
        return Ok(None);
    }
    let polygon = outer_polygon(npp)?;
    let tight: Vec<[f64; 2]> = polygon
        .into_iter()
        .filter(|p| {
            let s = npp.slack(p);
            zero_rows
                .iter()
                .all(|&i| s.get(i).is_some_and(|v| v.abs() <= 1e-7))
        })
        .collect();
    Ok(match tight.as_slice() {
        [] => None,
        [p] => Some(Highlight::Vertex(*p)),
        [a, b] => Some(Highlight::Edge(*a, *b)),
        _ => None,
    })
}

struct Frame {
    min: [f64; 2],
    scale: f64,
}

impl Frame {
    fn new(points: &[[f64; 2]]) -> Self {
        let mut min = [f64::INFINITY; 2];
        let mut max = [f64::NEG_INFINITY; 2];
        for p in points {
            for a in 0..2 {
                min[a] = min[a].min(p[a]);
                max[a] = max[a].max(p[a]);
            }
        }
        let span = (max[0] - min[0]).max(max[1] - min[1]).max(1e-12);
        Frame {
            min,
            scale: (CANVAS - 2.0 * MARGIN) / span,
        }
    }

    fn map(&self, p: [f64; 2]) -> (f64, f64) {
        (
            MARGIN + (p[0] - self.min[0]) * self.scale,
            CANVAS - MARGIN - (p[1] - self.min[1]) * self.scale,
        )
    }

    fn points(&self, pts: &[[f64; 2]]) -> String {
        pts.iter()
            .map(|&p| {
                let (x, y) = self.map(p);
                format!("{x:.3},{y:.3}")
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn as_point(v: &[f64]) -> [f64; 2] {
    [v[0], v[1]]
}

/// SVG document for a 2-D instance. Identical input yields identical text.
pub fn render_svg(
    npp: &NppInstance,
    solution: Option<&[Vec<f64>]>,
    highlights: &[Highlight],
) -> Result<String> {
    check_2d(npp)?;
    if npp.inner_vertices().is_empty() {
        return Err(Error::InvalidNpp(
            "nothing to draw: no inner vertices".into(),
        ));
    }
    let outer = outer_polygon(npp)?;
    let inner_pts: Vec<[f64; 2]> = npp.inner_vertices().iter().map(|v| as_point(v)).collect();
    let inner = convex_hull(&inner_pts);
    let sol: Vec<[f64; 2]> = solution
        .unwrap_or(&[])
        .iter()
        .map(|v| {
            if v.len() == 2 {
                Ok(as_point(v))
            } else {
                Err(Error::InvalidSolution(format!(
                    "solution vertex of length {} in a 2-D plot",
                    v.len()
                )))
            }
        })
        .collect::<Result<_>>()?;

    let mut all = outer.clone();
    all.extend(&inner_pts);
    all.extend(&sol);
    let frame = Frame::new(&all);

    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{c}" height="{c}" viewBox="0 0 {c} {c}">"#,
        c = CANVAS
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<polygon class="outer" points="{}" fill="none" stroke="{OUTER_STROKE}" stroke-width="2"/>"#,
        frame.points(&outer)
    );
    if inner.len() >= 3 {
        let _ = writeln!(
            svg,
            r#"<polygon class="inner" points="{}" fill="{INNER_FILL}" fill-opacity="0.6" stroke="{INNER_STROKE}" stroke-width="1.5"/>"#,
            frame.points(&inner)
        );
    } else {
        let _ = writeln!(
            svg,
            r#"<polyline class="inner" points="{}" fill="none" stroke="{INNER_STROKE}" stroke-width="1.5"/>"#,
            frame.points(&inner)
        );
    }
    for &p in &inner_pts {
        let (x, y) = frame.map(p);
        let _ = writeln!(
            svg,
            r#"<circle class="inner-vertex" cx="{x:.3}" cy="{y:.3}" r="3" fill="{INNER_STROKE}"/>"#
        );
    }
    if !sol.is_empty() {
        let _ = writeln!(
            svg,
            r#"<polygon class="solution" points="{}" fill="none" stroke="{SOLUTION_STROKE}" stroke-width="2" stroke-dasharray="6 4"/>"#,
            frame.points(&sol)
        );
    }
    for h in highlights {
        match *h {
            Highlight::Vertex(p) => {
                let (x, y) = frame.map(p);
                let _ = writeln!(
                    svg,
                    r#"<circle class="face" cx="{x:.3}" cy="{y:.3}" r="8" fill="none" stroke="{HIGHLIGHT_STROKE}" stroke-width="3"/>"#
                );
            }
            Highlight::Edge(a, b) => {
                let (x1, y1) = frame.map(a);
                let (x2, y2) = frame.map(b);
                let _ = writeln!(
                    svg,
                    r#"<line class="face" x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}" stroke="{HIGHLIGHT_STROKE}" stroke-width="4"/>"#
                );
            }
        }
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

pub fn render_npp(
    npp: &NppInstance,
    solution: Option<&[Vec<f64>]>,
    highlights: &[Highlight],
    out: &Path,
) -> Result<()> {
    let svg = render_svg(npp, solution, highlights)?;
    std::fs::write(out, svg)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::DenseMatrix;
    use crate::Tolerances;

    fn square_npp(inner: Vec<Vec<f64>>) -> NppInstance {
        let f = DenseMatrix::from_rows(&[
            vec![0.0, 1.0],
            vec![0.0, -1.0],
            vec![1.0, 0.0],
            vec![-1.0, 0.0],
        ])
        .unwrap();
        NppInstance::new(f, vec![0.0, 1.0, 0.0, 1.0], inner, &Tolerances::default()).unwrap()
    }

    fn quad() -> Vec<Vec<f64>> {
        vec![
            vec![0.5, 0.0],
            vec![0.0, 0.5],
            vec![0.25, 0.75],
            vec![0.75, 0.25],
        ]
    }

    #[test]
    fn square_polygon() {
        let npp = square_npp(quad());
        let poly = outer_polygon(&npp).unwrap();
        assert_eq!(poly.len(), 4);
        for corner in [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]] {
            assert!(poly
                .iter()
                .any(|p| (p[0] - corner[0]).abs() < 1e-12 && (p[1] - corner[1]).abs() < 1e-12));
        }
    }

    #[test]
    fn hull_drops_interior_points() {
        let pts = [[0.0, 0.0], [1.0, 0.0], [0.2, 0.2], [0.0, 1.0]];
        assert_eq!(convex_hull(&pts).len(), 3);
    }

    #[test]
    fn highlights_pick_faces() {
        let npp = square_npp(quad());
        assert_eq!(
            face_highlight(&npp, &[0, 2]).unwrap(),
            Some(Highlight::Vertex([0.0, 0.0]))
        );
        match face_highlight(&npp, &[0]).unwrap() {
            Some(Highlight::Edge(a, b)) => assert!(a[1].abs() < 1e-12 && b[1].abs() < 1e-12),
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(face_highlight(&npp, &[]).unwrap(), None);
    }

    #[test]
    fn svg_is_deterministic_and_well_formed() {
        let npp = square_npp(quad());
        let sol = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]];
        let hl = [Highlight::Vertex([0.0, 0.0])];
        let a = render_svg(&npp, Some(&sol), &hl).unwrap();
        let b = render_svg(&npp, Some(&sol), &hl).unwrap();
        assert_eq!(a, b);
        assert!(a.starts_with("<?xml"));
        assert!(a.trim_end().ends_with("</svg>"));
        assert_eq!(a.matches("<polygon").count(), 3);
        assert!(a.contains(r#"class="face""#));
        // The unit square fills the drawable area exactly.
        assert!(a.contains("40.000,760.000"));
        assert!(a.contains("760.000,40.000"));
    }

    #[test]
    fn wrong_dimension() {
        let f = DenseMatrix::from_rows(&[vec![1.0], vec![-1.0]]).unwrap();
        let npp = NppInstance::new(
            f,
            vec![0.0, 1.0],
            vec![vec![0.2], vec![0.8]],
            &Tolerances::default(),
        )
        .unwrap();
        assert!(matches!(
            render_svg(&npp, None, &[]),
            Err(Error::UnsupportedDimension(1))
        ));
    }
}
