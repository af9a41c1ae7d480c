//! Plain-text matrix files.
//!
//! The native format starts with a `rows cols` header followed by one
//! whitespace-separated line per row. Blank lines and lines starting with
//! `#` are ignored. Files ending in `.csv` are read as comma-separated rows
//! without a header.

use std::fmt::Write as _;
use std::path::Path;

use crate::matrix::DenseMatrix;
use crate::{Error, Result};

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_value(token: &str, line: usize) -> Result<f64> {
    let v: f64 = token
        .parse()
        .map_err(|_| parse_error(line, format!("`{token}` is not a number")))?;
    if !v.is_finite() {
        return Err(parse_error(line, format!("`{token}` is not finite")));
    }
    Ok(v)
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// Parses the `rows cols` header format.
pub fn parse_matrix_text(text: &str) -> Result<DenseMatrix> {
    let mut lines = content_lines(text);
    let (header_line, header) = lines
        .next()
        .ok_or_else(|| parse_error(1, "missing `rows cols` header"))?;
    let dims: Vec<&str> = header.split_whitespace().collect();
    let [rows, cols] = dims[..] else {
        return Err(parse_error(header_line, "header must be `rows cols`"));
    };
    let parse_dim = |s: &str| -> Result<usize> {
        match s.parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(parse_error(
                header_line,
                format!("`{s}` is not a positive dimension"),
            )),
        }
    };
    let (rows, cols) = (parse_dim(rows)?, parse_dim(cols)?);
    if rows.checked_mul(cols).is_none() {
        return Err(parse_error(header_line, "dimensions are too large"));
    }
    let mut data = Vec::new();
    let mut seen = 0;
    for (line, content) in lines {
        if seen == rows {
            return Err(parse_error(line, format!("more than {rows} rows")));
        }
        let before = data.len();
        for token in content.split_whitespace() {
            data.push(parse_value(token, line)?);
        }
        let found = data.len() - before;
        if found != cols {
            return Err(parse_error(
                line,
                format!("expected {cols} entries, found {found}"),
            ));
        }
        seen += 1;
    }
    if seen != rows {
        return Err(parse_error(
            text.lines().count().max(1),
            format!("expected {rows} rows, found {seen}"),
        ));
    }
    DenseMatrix::new(rows, cols, data)
}

/// Parses comma-separated rows without a header.
pub fn parse_matrix_csv(text: &str) -> Result<DenseMatrix> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (line, content) in content_lines(text) {
        let row = content
            .split(',')
            .map(|t| parse_value(t.trim(), line))
            .collect::<Result<Vec<f64>>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(parse_error(
                    line,
                    format!("expected {} entries, found {}", first.len(), row.len()),
                ));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(parse_error(1, "no rows"));
    }
    DenseMatrix::from_rows(&rows)
}

fn is_csv(path: &Path) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

pub fn read_matrix(path: &Path) -> Result<DenseMatrix> {
    let text = std::fs::read_to_string(path)?;
    if is_csv(path) {
        parse_matrix_csv(&text)
    } else {
        parse_matrix_text(&text)
    }
}

/// Renders `m` in the header format; values use the shortest representation
/// that reads back exactly.
pub fn format_matrix_text(m: &DenseMatrix) -> String {
    let mut out = format!("{} {}\n", m.rows(), m.cols());
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|v| format!("{v}")).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}

pub fn format_matrix_csv(m: &DenseMatrix) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|v| format!("{v}")).collect();
        let _ = writeln!(out, "{}", row.join(","));
    }
    out
}

pub fn write_matrix(path: &Path, m: &DenseMatrix) -> Result<()> {
    let text = if is_csv(path) {
        format_matrix_csv(m)
    } else {
        format_matrix_text(m)
    };
    std::fs::write(path, text)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_header_format() {
        let m = parse_matrix_text("# comment\n2 3\n1 2 3\n\n4 5 6.5\n").unwrap();
        assert_eq!(m.shape(), (2, 3));
        assert_eq!(m[(1, 2)], 6.5);
    }

    #[test]
    fn reports_line_numbers() {
        match parse_matrix_text("2 2\n1 2\n3\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_matrix_text("").is_err());
        assert!(parse_matrix_text("0 2\n").is_err());
        assert!(parse_matrix_text("1 1\nnan\n").is_err());
        assert!(parse_matrix_text("1 1\n1\n2\n").is_err());
        assert!(parse_matrix_text("2 1\n1\n").is_err());
        assert!(parse_matrix_text("99999999999 99999999999\n").is_err());
    }

    #[test]
    fn parses_csv() {
        let m = parse_matrix_csv("1, 2\n3,4\n").unwrap();
        assert_eq!(m.shape(), (2, 2));
        assert!(parse_matrix_csv("1,2\n3\n").is_err());
        assert!(parse_matrix_csv("a,b\n").is_err());
        assert!(parse_matrix_csv("\n").is_err());
    }

    #[test]
    fn text_round_trip() {
        let m = DenseMatrix::from_rows(&[vec![0.1, 1.0 / 3.0], vec![-2.5, 1e-300]]).unwrap();
        let back = parse_matrix_text(&format_matrix_text(&m)).unwrap();
        assert_eq!(back, m);
        let back = parse_matrix_csv(&format_matrix_csv(&m)).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn files_by_extension() {
        let dir = tempfile::tempdir().unwrap();
        let m = DenseMatrix::identity(2);
        for name in ["a.txt", "b.csv"] {
            let p = dir.path().join(name);
            write_matrix(&p, &m).unwrap();
            assert_eq!(read_matrix(&p).unwrap(), m);
        }
    }
}
