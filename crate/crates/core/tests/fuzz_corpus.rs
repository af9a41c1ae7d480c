use std::path::Path;

use nmf_certify::certify::certify_all;
use nmf_certify::io::{format_matrix_csv, format_matrix_text, parse_matrix_csv, parse_matrix_text};
use nmf_certify::Tolerances;

fn seeds(target: &str) -> Vec<(String, String)> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut out: Vec<(String, String)> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let p = e.unwrap().path();
            (
                p.display().to_string(),
                std::fs::read_to_string(&p).unwrap(),
            )
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn text_seeds_round_trip() {
    for (name, text) in seeds("matrix_text") {
        if let Ok(m) = parse_matrix_text(&text) {
            assert_eq!(
                parse_matrix_text(&format_matrix_text(&m)).unwrap(),
                m,
                "{name}"
            );
        }
    }
}

#[test]
fn csv_seeds_round_trip() {
    for (name, text) in seeds("matrix_csv") {
        if let Ok(m) = parse_matrix_csv(&text) {
            assert_eq!(
                parse_matrix_csv(&format_matrix_csv(&m)).unwrap(),
                m,
                "{name}"
            );
        }
    }
}

#[test]
fn certify_seeds_run() {
    for (name, text) in seeds("certify_input") {
        let (c, s) = text.split_once("\n---\n").expect(&name);
        let c = parse_matrix_text(c).unwrap();
        let s = parse_matrix_text(s).unwrap();
        let r = c.matmul(&s.transpose()).unwrap();
        certify_all(&r, &c, &s, &Tolerances::default()).unwrap();
    }
}
