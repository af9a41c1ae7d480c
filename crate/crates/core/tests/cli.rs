use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use nmf_certify::io::read_matrix;
use nmf_certify::npp::fixtures::all_fixtures;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_nmf-certify"))
}

fn fixture_file(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn checked_in_fixtures_match_the_embedded_ones() {
    for fx in all_fixtures() {
        for (tag, m) in [("R", &fx.r), ("C", &fx.c), ("S", &fx.s)] {
            let file = read_matrix(&fixture_file(&format!("{}_{tag}.txt", fx.name))).unwrap();
            assert_eq!(&file, m, "{} {tag}", fx.name);
        }
    }
}

#[test]
fn certify_from_files_without_r() {
    let c = fixture_file("ex_3_2_C.txt");
    let s = fixture_file("ex_3_2_S.txt");
    let out = run(&["certify", "--C", path(&c), "--S", path(&s)]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["K"], serde_json::json!([1]));
    assert_eq!(json["certificates"][0]["method"], "FRZRW");
    assert_eq!(json["certificates"][0]["selective_row"], 1);
    assert_eq!(json["version"], "v1");
}

#[test]
fn json_output_is_byte_identical_across_runs() {
    let a = run(&["certify", "--fixture", "ex_4_7"]);
    let b = run(&["certify", "--fixture", "ex_4_7"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("report.json");
    let c = run(&["certify", "--fixture", "ex_4_7", "--out", path(&file)]);
    assert_eq!(c.status.code(), Some(0));
    assert_eq!(std::fs::read(&file).unwrap(), a.stdout);
}

#[test]
fn empty_certified_set_still_succeeds() {
    let out = run(&["certify", "--fixture", "eq_11", "--format", "text"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("K = []\n"));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["certify", "--bogus"]).status.code(), Some(2));
    assert_eq!(
        run(&["certify", "--fixture", "nope"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["certify", "--fixture", "ex_3_2", "--tol-zero", "-1"])
            .status
            .code(),
        Some(2)
    );

    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.txt");
    let out = run(&[
        "certify",
        "--C",
        path(&missing),
        "--S",
        path(&fixture_file("ex_3_2_S.txt")),
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--C"));

    let negative = dir.path().join("neg.txt");
    std::fs::write(&negative, "2 2\n1 -1\n0 1\n").unwrap();
    let out = run(&["certify", "--C", path(&negative), "--S", path(&negative)]);
    assert_eq!(out.status.code(), Some(3));

    let garbled = dir.path().join("bad.txt");
    std::fs::write(&garbled, "2 2\n1 x\n0 1\n").unwrap();
    let out = run(&["certify", "--C", path(&garbled), "--S", path(&garbled)]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let inexact = dir.path().join("r.txt");
    std::fs::write(&inexact, "5 3\n1 1 1\n1 1 1\n1 1 1\n1 1 1\n1 1 1\n").unwrap();
    let out = run(&[
        "certify",
        "--R",
        path(&inexact),
        "--C",
        path(&fixture_file("ex_3_2_C.txt")),
        "--S",
        path(&fixture_file("ex_3_2_S.txt")),
    ]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn fixtures_subcommand() {
    let list = run(&["fixtures"]);
    assert_eq!(list.status.code(), Some(0));
    assert!(stdout(&list).contains("thm38_case2"));
    let all = run(&["fixtures", "--run", "all"]);
    assert_eq!(all.status.code(), Some(0));
    assert!(!stdout(&all).contains("MISMATCH"));
}

#[test]
fn oracle_subcommand() {
    let out = run(&[
        "oracle",
        "--fixture",
        "eq_11",
        "--column",
        "1",
        "--seed",
        "7",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["found"], true);
}

#[test]
fn plot_and_roundtrip_subcommands() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("plot.svg");
    let out = run(&["plot", "--fixture", "ex_3_5", "--out", path(&svg)]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<svg") || text.starts_with("<?xml"));
    let again = dir.path().join("again.svg");
    run(&["plot", "--fixture", "ex_3_5", "--out", path(&again)]);
    assert_eq!(std::fs::read(&again).unwrap(), text.as_bytes());

    let out = run(&["plot", "--fixture", "ex_4_4", "--out", path(&svg)]);
    assert_ne!(out.status.code(), Some(0));

    let out = run(&["roundtrip", "--fixture", "ex_2_3"]);
    assert_eq!(out.status.code(), Some(0));
}
