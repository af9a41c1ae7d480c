//! Command-line front end.
//!
//! Exit codes: 0 success, 2 usage errors, 3 unreadable or invalid input
//! files, 4 numerical or certification failures.

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::certify::{certify_all_with, disprove_column, CertifyOptions, Factor};
use crate::factorization::prune_and_normalize;
use crate::io::{format_matrix_text, read_matrix, write_matrix};
use crate::matrix::DenseMatrix;
use crate::npp::fixtures::{all_fixtures, paper_fixture, FIXTURE_NAMES};
use crate::npp::{face_highlight, nmf_to_npp, npp_to_nmf, render_npp};
use crate::{Error, Tolerances};

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "nmf-certify",
    version,
    about = "Certify identifiable columns of an exact nonnegative matrix factorization R = C S^T",
    after_help = "All column and row indices in reports are 1-based."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Certify columns of C and S and print the report.
    Certify {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        tols: TolArgs,
        /// Write the report here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Only test rank-3 pairs whose columns are both certified already.
        #[arg(long)]
        strict_pairs: bool,
    },
    /// List, export or run the built-in example instances.
    Fixtures {
        /// Run one fixture by name, or `all`, and compare with the expected sets.
        #[arg(long, value_name = "NAME")]
        run: Option<String>,
        /// Write every fixture as R, C and S matrix files into this directory.
        #[arg(long, value_name = "DIR")]
        export: Option<PathBuf>,
        #[command(flatten)]
        tols: TolArgs,
    },
    /// Search for an alternative factorization that does not contain a column of C.
    Oracle {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        tols: TolArgs,
        /// Column of C to attack (1-based).
        #[arg(long)]
        column: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Draw a rank-3 instance as an SVG nested-polygon plot.
    Plot {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        tols: TolArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Map the factorization to a nested-polytope instance and back.
    Roundtrip {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        tols: TolArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Matrix file for R; computed as C S^T when omitted.
    #[arg(long = "R", value_name = "FILE")]
    pub r: Option<PathBuf>,
    /// Matrix file for C.
    #[arg(long = "C", value_name = "FILE")]
    pub c: Option<PathBuf>,
    /// Matrix file for S.
    #[arg(long = "S", value_name = "FILE")]
    pub s: Option<PathBuf>,
    /// Use a built-in instance instead of files.
    #[arg(long, conflicts_with_all = ["r", "c", "s"])]
    pub fixture: Option<String>,
}

#[derive(Debug, Args)]
pub struct TolArgs {
    /// Entries with magnitude at most this are zero [default: 1e-9].
    #[arg(long)]
    pub tol_zero: Option<f64>,
    /// Relative singular-value cutoff [default: 1e-10].
    #[arg(long)]
    pub tol_rank: Option<f64>,
    /// Face-intersection values above this mean disjoint faces [default: 1e-6].
    #[arg(long)]
    pub lp_threshold: Option<f64>,
    /// Relative residual allowed between R and C S^T [default: 1e-9].
    #[arg(long)]
    pub residual_tol: Option<f64>,
    /// Largest number of fixed columns in the sequential search [default: r - 1].
    #[arg(long)]
    pub max_depth: Option<usize>,
}

impl TolArgs {
    fn resolve(&self) -> Result<Tolerances, CliError> {
        let d = Tolerances::default();
        let t = Tolerances {
            tol_zero: self.tol_zero.unwrap_or(d.tol_zero),
            tol_rank: self.tol_rank.unwrap_or(d.tol_rank),
            lp_threshold: self.lp_threshold.unwrap_or(d.lp_threshold),
            residual_tol: self.residual_tol.unwrap_or(d.residual_tol),
            max_depth: self.max_depth,
        };
        t.validate().map_err(|e| CliError::usage(e.to_string()))?;
        Ok(t)
    }
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn from_error(context: &str, e: Error) -> Self {
        CliError {
            code: exit_code(&e),
            message: format!("{context}: {e}"),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

/// Exit status for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::UnknownFixture(_) => EXIT_USAGE,
        Error::Io(_)
        | Error::Parse { .. }
        | Error::NegativeEntry { .. }
        | Error::DimensionMismatch(_)
        | Error::NonFinite { .. }
        | Error::InvalidNpp(_)
        | Error::InvalidSolution(_) => EXIT_INPUT,
        Error::NotExact { .. }
        | Error::RankDeficient { .. }
        | Error::NumericalFailure(_)
        | Error::NotInPolytope(_)
        | Error::PreconditionViolated(_)
        | Error::UnsupportedDimension(_) => EXIT_NUMERICAL,
    }
}

struct Inputs {
    r: DenseMatrix,
    c: DenseMatrix,
    s: DenseMatrix,
    label: String,
}

fn load(flag: &str, path: &Path) -> Result<DenseMatrix, CliError> {
    read_matrix(path).map_err(|e| CliError::from_error(&format!("--{flag} {}", path.display()), e))
}

fn load_inputs(input: &InputArgs) -> Result<Inputs, CliError> {
    if let Some(name) = &input.fixture {
        let fx = paper_fixture(name).map_err(|e| CliError::from_error("--fixture", e))?;
        return Ok(Inputs {
            r: fx.r,
            c: fx.c,
            s: fx.s,
            label: format!("fixture {name}"),
        });
    }
    let (Some(cp), Some(sp)) = (&input.c, &input.s) else {
        return Err(CliError::usage(
            "both --C and --S are required (or use --fixture)",
        ));
    };
    let c = load("C", cp)?;
    let s = load("S", sp)?;
    let r = match &input.r {
        Some(rp) => load("R", rp)?,
        None => {
            if c.cols() != s.cols() {
                return Err(CliError::from_error(
                    "--C/--S",
                    Error::DimensionMismatch(format!(
                        "C has {} columns but S has {}",
                        c.cols(),
                        s.cols()
                    )),
                ));
            }
            c.matmul(&s.transpose())
                .map_err(|e| CliError::from_error("--C/--S", e))?
        }
    };
    Ok(Inputs {
        r,
        c,
        s,
        label: format!("--C {}", cp.display()),
    })
}

fn emit(out: &Option<PathBuf>, text: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| CliError::from_error(&format!("--out {}", p.display()), e.into())),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| CliError::from_error("stdout", e.into())),
    }
}

fn cmd_certify(
    input: &InputArgs,
    tols: &TolArgs,
    out: &Option<PathBuf>,
    format: Format,
    strict_pairs: bool,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    let tols = tols.resolve()?;
    let inp = load_inputs(input)?;
    let opts = CertifyOptions { tols, strict_pairs };
    let report = certify_all_with(&inp.r, &inp.c, &inp.s, &opts)
        .map_err(|e| CliError::from_error(&inp.label, e))?;
    let text = match format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    };
    emit(out, &text, stdout)
}

fn cmd_fixtures(
    run: &Option<String>,
    export: &Option<PathBuf>,
    tols: &TolArgs,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    let tols = tols.resolve()?;
    let io_err = |e: std::io::Error| CliError::from_error("stdout", e.into());
    if let Some(dir) = export {
        std::fs::create_dir_all(dir)
            .map_err(|e| CliError::from_error(&format!("--export {}", dir.display()), e.into()))?;
        for fx in all_fixtures() {
            for (tag, m) in [("R", &fx.r), ("C", &fx.c), ("S", &fx.s)] {
                let p = dir.join(format!("{}_{tag}.txt", fx.name));
                write_matrix(&p, m)
                    .map_err(|e| CliError::from_error(&format!("--export {}", p.display()), e))?;
            }
        }
        writeln!(
            stdout,
            "wrote {} fixtures to {}",
            FIXTURE_NAMES.len(),
            dir.display()
        )
        .map_err(io_err)?;
    }
    let Some(which) = run else {
        if export.is_none() {
            for fx in all_fixtures() {
                writeln!(stdout, "{:<12} {}", fx.name, fx.notes).map_err(io_err)?;
            }
        }
        return Ok(());
    };
    let fixtures = if which == "all" {
        all_fixtures()
    } else {
        vec![paper_fixture(which).map_err(|e| CliError::from_error("--run", e))?]
    };
    let set = crate::certify::matlab_set;
    writeln!(
        stdout,
        "{:<12} {:<10} {:<10} {:<10} {:<10} status",
        "fixture", "K", "expected", "L", "expected"
    )
    .map_err(io_err)?;
    let mut failures = 0;
    for fx in fixtures {
        let report = certify_all_with(&fx.r, &fx.c, &fx.s, &CertifyOptions::new(tols))
            .map_err(|e| CliError::from_error(&format!("fixture {}", fx.name), e))?;
        let ok = report.k == fx.expected_k && report.l == fx.expected_l;
        if !ok {
            failures += 1;
        }
        writeln!(
            stdout,
            "{:<12} {:<10} {:<10} {:<10} {:<10} {}",
            fx.name,
            set(&report.k),
            set(&fx.expected_k),
            set(&report.l),
            set(&fx.expected_l),
            if ok { "ok" } else { "MISMATCH" }
        )
        .map_err(io_err)?;
    }
    if failures > 0 {
        return Err(CliError {
            code: EXIT_NUMERICAL,
            message: format!("{failures} fixture(s) did not match their expected sets"),
        });
    }
    Ok(())
}

#[derive(Serialize)]
struct OracleOutput {
    column: usize,
    found: bool,
    strategy: Option<crate::certify::Strategy>,
    residual: Option<f64>,
    #[serde(rename = "C")]
    c: Option<Vec<Vec<f64>>>,
    #[serde(rename = "St")]
    st: Option<Vec<Vec<f64>>>,
}

fn rows_of(m: &DenseMatrix) -> Vec<Vec<f64>> {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

#[allow(clippy::too_many_arguments)]
fn cmd_oracle(
    input: &InputArgs,
    tols: &TolArgs,
    column: usize,
    seed: u64,
    trials: usize,
    format: Format,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    let tols = tols.resolve()?;
    let inp = load_inputs(input)?;
    let fact = prune_and_normalize(&inp.r, &inp.c, &inp.s, &tols)
        .map_err(|e| CliError::from_error(&inp.label, e))?;
    if column == 0 || column > fact.rank() {
        return Err(CliError::usage(format!(
            "--column must be between 1 and {}",
            fact.rank()
        )));
    }
    let alt = disprove_column(&fact, column - 1, trials, seed, &tols);
    let text = match format {
        Format::Json => {
            let out = OracleOutput {
                column,
                found: alt.is_some(),
                strategy: alt.as_ref().map(|a| a.strategy),
                residual: alt.as_ref().map(|a| a.residual),
                c: alt.as_ref().map(|a| rows_of(&a.c)),
                st: alt.as_ref().map(|a| rows_of(&a.st)),
            };
            let mut s = serde_json::to_string_pretty(&out).expect("serializable");
            s.push('\n');
            s
        }
        Format::Text => match &alt {
            None => format!(
                "no alternative factorization without column {column} found in {trials} trials\n"
            ),
            Some(a) => format!(
                "column {column} is not identifiable: {:?} alternative with residual {:e}\nC =\n{}St =\n{}",
                a.strategy,
                a.residual,
                format_matrix_text(&a.c),
                format_matrix_text(&a.st)
            ),
        },
    };
    emit(&None, &text, stdout)
}

fn cmd_plot(
    input: &InputArgs,
    tols: &TolArgs,
    out: &Path,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    let tols = tols.resolve()?;
    let inp = load_inputs(input)?;
    let ctx = |e| CliError::from_error(&inp.label, e);
    let fact = prune_and_normalize(&inp.r, &inp.c, &inp.s, &tols).map_err(ctx)?;
    if fact.rank() != 3 {
        return Err(ctx(Error::UnsupportedDimension(fact.rank() - 1)));
    }
    let red = nmf_to_npp(&fact, &tols).map_err(ctx)?;
    let solution: Vec<Vec<f64>> = (0..3)
        .map(|k| red.coordinates_of(&fact.c().col(k)))
        .collect::<Result<_, _>>()
        .map_err(ctx)?;
    let report =
        certify_all_with(&inp.r, &inp.c, &inp.s, &CertifyOptions::new(tols)).map_err(ctx)?;
    let mut highlights = Vec::new();
    for cert in report.certificates.iter().filter(|c| c.factor == Factor::C) {
        let zero_rows: Vec<usize> = crate::matrix::zero_set(&fact.c().col(cert.column), &tols);
        if let Some(h) = face_highlight(&red.npp, &zero_rows).map_err(ctx)? {
            highlights.push(h);
        }
    }
    render_npp(&red.npp, Some(&solution), &highlights, out)
        .map_err(|e| CliError::from_error(&format!("--out {}", out.display()), e))?;
    writeln!(stdout, "wrote {}", out.display())
        .map_err(|e| CliError::from_error("stdout", e.into()))
}

fn cmd_roundtrip(
    input: &InputArgs,
    tols: &TolArgs,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    let tols = tols.resolve()?;
    let inp = load_inputs(input)?;
    let ctx = |e| CliError::from_error(&inp.label, e);
    let fact = prune_and_normalize(&inp.r, &inp.c, &inp.s, &tols).map_err(ctx)?;
    let red = nmf_to_npp(&fact, &tols).map_err(ctx)?;
    let solution: Vec<Vec<f64>> = (0..fact.rank())
        .map(|k| red.coordinates_of(&fact.c().col(k)))
        .collect::<Result<_, _>>()
        .map_err(ctx)?;
    let back = npp_to_nmf(&red.npp, Some(&solution), &tols).map_err(ctx)?;
    let r_err = back.r.max_abs_diff(fact.r());
    let c_err = back.c.as_ref().map_or(0.0, |c| c.max_abs_diff(fact.c()));
    let distinct = {
        let mut v = red.classes.clone();
        v.sort_unstable();
        v.dedup();
        v.len()
    };
    let basis: Vec<usize> = red.basis.iter().map(|&j| fact.kept_cols()[j]).collect();
    writeln!(
        stdout,
        "dimension {}\ninner vertices {} ({} distinct)\nbasis columns {}\nmax |R - R'| = {:e}\nmax |C - C'| = {:e}",
        red.npp.dimension(),
        red.npp.inner_vertices().len(),
        distinct,
        crate::certify::matlab_set(&basis),
        r_err,
        c_err
    )
    .map_err(|e| CliError::from_error("stdout", e.into()))?;
    if r_err > 1e-10 || c_err > 1e-8 {
        return Err(CliError {
            code: EXIT_NUMERICAL,
            message: format!("{}: round trip error {r_err:e} exceeds 1e-10", inp.label),
        });
    }
    Ok(())
}

/// Parses `args` (including the program name) and executes the command.
/// Returns the process exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = stdout.write_all(rendered.as_bytes());
            } else {
                let _ = stderr.write_all(rendered.as_bytes());
            }
            return code;
        }
    };
    let result = match &cli.command {
        Command::Certify {
            input,
            tols,
            out,
            format,
            strict_pairs,
        } => cmd_certify(input, tols, out, *format, *strict_pairs, stdout),
        Command::Fixtures { run, export, tols } => cmd_fixtures(run, export, tols, stdout),
        Command::Oracle {
            input,
            tols,
            column,
            seed,
            trials,
            format,
        } => cmd_oracle(input, tols, *column, *seed, *trials, *format, stdout),
        Command::Plot { input, tols, out } => cmd_plot(input, tols, out, stdout),
        Command::Roundtrip { input, tols } => cmd_roundtrip(input, tols, stdout),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.code
        }
    }
}
