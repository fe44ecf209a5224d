//! Command-line front end: file ingestion, oracle dispatch, and report
//! emission.
//!
//! Exit statuses form the contract scripts rely on:
//!
//! * `0` — the command ran and every checked property passed;
//! * `1` — an inequality check failed (a would-be counterexample) — this
//!   status is reserved for genuine mathematical failures;
//! * `2` — usage or input errors, including inputs that violate an
//!   oracle's preconditions.
//!
//! Reports go to the primary stream, warnings and errors to the diagnostic
//! stream. All JSON output prints floats with 17 significant digits so that
//! reported tuples round-trip bit-for-bit. The `DDVV_THREADS` environment
//! variable caps the worker pool used by `fuzz` and `search`; results do
//! not depend on it.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::bw::{build_t_operator, bw_check, bw_spectrum, bw_trivial_case_check, pair_eigenvector};
use crate::canonical::canonicalize;
use crate::ddvv::{
    check_conjecture1, evaluate_matrix_form, geometric_quantities, InequalityReport,
    SecondFundamentalForm, DEFAULT_TOL,
};
use crate::error::{Error, Result};
use crate::jsonio;
use crate::lemmas::{
    delta_bound_check, lemma1_check, lemma2_check, remark_bound_check, ArrowheadMatrix,
    DetIdentityCheck, EtaVector, WeightSet,
};
use crate::linalg::{Matrix, MatrixTuple, SymMatrix};
use crate::search::{
    extremal_search, fuzz_campaign_with_records, FuzzConfig, FuzzSummary, OracleKind,
    SampleDistribution, SearchConfig, TrialRecord,
};

/// Everything ran and passed.
pub const EXIT_OK: i32 = 0;
/// An inequality check failed — the report describes a counterexample.
pub const EXIT_FAIL: i32 = 1;
/// Usage error, unreadable input, or violated precondition.
pub const EXIT_USAGE: i32 = 2;

/// A search result above this ratio would contradict the tuple inequality.
const SEARCH_RATIO_CAP: f64 = 1.0 + 1e-6;
/// Relative asymmetry beyond which ingestion warns before symmetrizing.
const ASYMMETRY_WARN: f64 = 1e-9;

#[derive(Parser)]
#[command(
    name = "ddvv",
    version,
    about = "Numerical laboratory for the DDVV and Böttcher-Wenzel commutator inequalities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CheckFormat {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FuzzFormat {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Check the tuple inequality (matrix form) on a tuple file.
    Check {
        /// Tuple file: {"n": .., "m": .., "matrices": [[[..]]]}.
        #[arg(long, value_name = "FILE")]
        input: PathBuf,
        /// Relative tolerance of the pass verdict.
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = CheckFormat::Json)]
        format: CheckFormat,
        /// Write the canonicalized tuple and its witness beside the report
        /// (JSON format only).
        #[arg(long)]
        emit_canonical: bool,
    },
    /// Canonicalize a tuple: emit the normal form and the group witness.
    Canon {
        #[arg(long, value_name = "FILE")]
        input: PathBuf,
    },
    /// Evaluate the curvature inequality on second-fundamental-form data.
    Geom {
        /// Data file: {"n": .., "m": .., "c": .., "h": [[[..]]]}.
        #[arg(long, value_name = "FILE")]
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
        format: ReportFormat,
    },
    /// Check one of the supporting inequalities.
    Lemma {
        #[command(subcommand)]
        oracle: LemmaCommand,
    },
    /// Commutator-operator analyses.
    Bw {
        #[command(subcommand)]
        analysis: BwCommand,
    },
    /// Multi-start gradient ascent on the commutator ratio.
    Search {
        /// Matrix size.
        #[arg(long)]
        n: usize,
        /// Tuple length.
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 50)]
        restarts: usize,
        #[arg(long, default_value_t = 2000)]
        max_iters: usize,
        /// Initial ascent step (adapted during the run).
        #[arg(long, default_value_t = 0.05)]
        step: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Ratio improvement below which an iteration counts as stalled.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
        format: ReportFormat,
    },
    /// Run a randomized campaign against one oracle.
    Fuzz {
        /// Oracle name: ddvv-matrix, ddvv-coeff, conjecture1, lemma1,
        /// lemma2, delta, remark, bw, bw-trivial, or arrowhead.
        #[arg(long)]
        oracle: String,
        #[arg(long)]
        trials: usize,
        /// Matrix size (interpreted per oracle).
        #[arg(long)]
        n: usize,
        /// Tuple length; ignored by single-input oracles.
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Input distribution: gaussian, or orthogonal-canonical
        /// (tuple oracles only).
        #[arg(long, default_value = "gaussian")]
        dist: String,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = FuzzFormat::Json)]
        format: FuzzFormat,
        /// With --format csv, write one row per trial instead of the
        /// aggregate row; with --format json, include per-trial records.
        #[arg(long)]
        verbose: bool,
    },
}

#[derive(Subcommand)]
enum LemmaCommand {
    /// Weighted spread bound on a zero-sum unit vector.
    /// Input: {"eta": [..], "weights": [..]}.
    Lemma1 {
        #[arg(long, value_name = "FILE")]
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
        format: ReportFormat,
    },
    /// Diagonal commutator bound on an orthogonal family.
    /// Input: {"a_diagonal": [..], "family": [[[..]]]}.
    Lemma2 {
        #[arg(long, value_name = "FILE")]
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
        format: ReportFormat,
    },
    /// Concentration bound on a zero-diagonal orthogonal family.
    /// Input: {"family": [[[..]]]}.
    Delta {
        #[arg(long, value_name = "FILE")]
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
        format: ReportFormat,
    },
    /// Entrywise two-matrix commutator bound.
    /// Input: {"a_diagonal": [..], "b": [[..]]}.
    Remark {
        #[arg(long, value_name = "FILE")]
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
        format: ReportFormat,
    },
    /// Arrowhead spectral bound plus the determinant identity.
    /// Input: {"weights": [..]}.
    Arrowhead {
        #[arg(long, value_name = "FILE")]
        input: PathBuf,
        /// Where to probe the determinant identity; defaults to one unit
        /// above the spectral bound, safely past every pole.
        #[arg(long)]
        probe: Option<f64>,
        #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
        format: ReportFormat,
    },
}

#[derive(Subcommand)]
enum BwCommand {
    /// Top eigenvalue and eigenvector of the operator Y -> [X^T, [X, Y]].
    Spectrum {
        /// Matrix file for X: a bare nested array [[..]].
        #[arg(long, value_name = "FILE")]
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        /// Refuse larger matrices: the dense operator is n^2 x n^2.
        #[arg(long, default_value_t = 32)]
        max_n: usize,
        #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
        format: ReportFormat,
    },
    /// The commutator inequality |[X,Y]|^2 <= 2 |X|^2 |Y|^2.
    Check {
        #[arg(long, value_name = "FILE")]
        input: PathBuf,
        /// Matrix file for Y.
        #[arg(long, value_name = "FILE")]
        y: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
        format: ReportFormat,
    },
    /// Pair an eigenvector Y with its companion [X^T, Y^T].
    Pair {
        #[arg(long, value_name = "FILE")]
        input: PathBuf,
        #[arg(long, value_name = "FILE")]
        y: PathBuf,
        #[arg(long, default_value_t = 32)]
        max_n: usize,
        #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
        format: ReportFormat,
    },
    /// The inequality in the flat-spectrum regime (s_1^2 <= 1/2).
    Trivial {
        #[arg(long, value_name = "FILE")]
        input: PathBuf,
        #[arg(long, value_name = "FILE")]
        y: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
        format: ReportFormat,
    },
}

/// Run one CLI invocation against explicit output streams.
///
/// `argv` starts with the program name, mirroring `std::env::args`. The
/// primary report goes to `out`, warnings and errors to `err`; the return
/// value is the process exit status.
pub fn run_command<O: Write, E: Write>(argv: &[String], out: &mut O, err: &mut E) -> i32 {
    if let Err(e) = configure_threads() {
        let _ = writeln!(err, "error: {e}");
        return EXIT_USAGE;
    }
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(parse_err) => {
            let rendered = parse_err.render().to_string();
            return match parse_err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{rendered}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{rendered}");
                    EXIT_USAGE
                }
            };
        }
    };
    match dispatch(cli.command, err) {
        Ok((body, code)) => {
            let _ = write!(out, "{body}");
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

/// Apply `DDVV_THREADS` to the global worker pool.
///
/// The first configuration in a process wins; later attempts (other calls
/// of [`run_command`] in the same process) are silently no-ops, which is
/// harmless because results never depend on the worker count.
fn configure_threads() -> Result<()> {
    let raw = match std::env::var("DDVV_THREADS") {
        Ok(raw) => raw,
        Err(std::env::VarError::NotPresent) => return Ok(()),
        Err(e) => return Err(Error::invalid(format!("DDVV_THREADS: {e}"))),
    };
    let workers: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&w| w >= 1)
        .ok_or_else(|| {
            Error::invalid(format!(
                "DDVV_THREADS must be a positive integer, got '{raw}'"
            ))
        })?;
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build_global();
    Ok(())
}

fn dispatch<E: Write>(cmd: Command, err: &mut E) -> Result<(String, i32)> {
    match cmd {
        Command::Check {
            input,
            tol,
            format,
            emit_canonical,
        } => cmd_check(&input, tol, format, emit_canonical, err),
        Command::Canon { input } => cmd_canon(&input, err),
        Command::Geom { input, tol, format } => cmd_geom(&input, tol, format, err),
        Command::Lemma { oracle } => cmd_lemma(oracle, err),
        Command::Bw { analysis } => cmd_bw(analysis),
        Command::Search {
            n,
            m,
            restarts,
            max_iters,
            step,
            seed,
            tol,
            format,
        } => cmd_search(SearchConfig {
            n,
            m,
            restarts,
            max_iters,
            step,
            seed,
            tol,
        }, format),
        Command::Fuzz {
            oracle,
            trials,
            n,
            m,
            seed,
            dist,
            tol,
            format,
            verbose,
        } => {
            let cfg = FuzzConfig {
                oracle: oracle.parse::<OracleKind>()?,
                trials,
                n,
                m,
                seed,
                dist: dist.parse::<SampleDistribution>()?,
                tol,
            };
            cmd_fuzz(cfg, format, verbose)
        }
    }
}

// ---------------------------------------------------------------------------
// Input files
// ---------------------------------------------------------------------------

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TupleFile {
    n: usize,
    m: usize,
    matrices: Vec<Vec<Vec<f64>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SffFile {
    n: usize,
    m: usize,
    c: f64,
    h: Vec<Vec<Vec<f64>>>,
}

fn slurp(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn parse_json<'a, T: Deserialize<'a>>(label: &str, text: &'a str) -> Result<T> {
    serde_json::from_str(text).map_err(|source| Error::Json {
        path: label.to_string(),
        source,
    })
}

/// Validate one `n x n` block of a tuple-style file, naming the offending
/// matrix and row on failure, and symmetrize it (warning when the asymmetry
/// is worse than `1e-9` relative to the largest entry).
fn ingest_square_block(
    raw: &[Vec<f64>],
    n: usize,
    label: &str,
    warnings: &mut Vec<String>,
) -> Result<SymMatrix> {
    if raw.len() != n {
        return Err(Error::invalid(format!(
            "{label} has {} rows, expected n = {n}",
            raw.len()
        )));
    }
    for (i, row) in raw.iter().enumerate() {
        if row.len() != n {
            return Err(Error::invalid(format!(
                "{label} row {i} has {} entries, expected n = {n}",
                row.len()
            )));
        }
        for (j, v) in row.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::invalid(format!(
                    "{label} entry ({i}, {j}) is not finite"
                )));
            }
        }
    }
    let full = Matrix::from_nested(raw)?;
    let scale = full.max_abs();
    let mut defect = 0.0f64;
    for i in 0..n {
        for j in (i + 1)..n {
            defect = defect.max((full[(i, j)] - full[(j, i)]).abs());
        }
    }
    if scale > 0.0 && defect > ASYMMETRY_WARN * scale {
        warnings.push(format!(
            "{label}: asymmetry {defect:.3e} exceeds {ASYMMETRY_WARN:.0e} of the largest entry; symmetrizing"
        ));
    }
    SymMatrix::from_matrix(&full)
}

fn ingest_tuple(
    n: usize,
    m: usize,
    nested: &[Vec<Vec<f64>>],
    what: &str,
    warnings: &mut Vec<String>,
) -> Result<MatrixTuple> {
    if n == 0 || m == 0 {
        return Err(Error::invalid(format!(
            "{what} declares n = {n}, m = {m}; both must be positive"
        )));
    }
    if nested.len() != m {
        return Err(Error::invalid(format!(
            "{what} declares m = {m} but contains {} matrices",
            nested.len()
        )));
    }
    let matrices = nested
        .iter()
        .enumerate()
        .map(|(k, raw)| ingest_square_block(raw, n, &format!("matrix {k}"), warnings))
        .collect::<Result<Vec<_>>>()?;
    MatrixTuple::new(matrices)
}

/// Parse a tuple file (keys `n`, `m`, `matrices`).
///
/// `label` names the source in error messages — typically the file path.
/// The second return value carries human-readable warnings (asymmetric
/// inputs that were symmetrized); the caller decides where they go.
pub fn parse_tuple_file(label: &str, text: &str) -> Result<(MatrixTuple, Vec<String>)> {
    let file: TupleFile = parse_json(label, text)?;
    let mut warnings = Vec::new();
    let tuple = ingest_tuple(file.n, file.m, &file.matrices, label, &mut warnings)?;
    Ok((tuple, warnings))
}

/// Parse a second-fundamental-form file (keys `n`, `m`, `c`, `h`).
pub fn parse_sff_file(label: &str, text: &str) -> Result<(SecondFundamentalForm, Vec<String>)> {
    let file: SffFile = parse_json(label, text)?;
    let mut warnings = Vec::new();
    let h = ingest_tuple(file.n, file.m, &file.h, label, &mut warnings)?;
    Ok((SecondFundamentalForm::new(file.c, h)?, warnings))
}

/// Parse a bare matrix file: a nested array `[[..]]`, not necessarily
/// symmetric or square.
pub fn parse_matrix_file(label: &str, text: &str) -> Result<Matrix> {
    let nested: Vec<Vec<f64>> = parse_json(label, text)?;
    Matrix::from_nested(&nested)
        .map_err(|e| Error::invalid(format!("{label}: {e}")))
}

fn load_tuple<E: Write>(path: &Path, err: &mut E) -> Result<MatrixTuple> {
    let text = slurp(path)?;
    let (tuple, warnings) = parse_tuple_file(&path.display().to_string(), &text)?;
    for w in warnings {
        let _ = writeln!(err, "warning: {w}");
    }
    Ok(tuple)
}

fn load_sff<E: Write>(path: &Path, err: &mut E) -> Result<SecondFundamentalForm> {
    let text = slurp(path)?;
    let (sff, warnings) = parse_sff_file(&path.display().to_string(), &text)?;
    for w in warnings {
        let _ = writeln!(err, "warning: {w}");
    }
    Ok(sff)
}

fn load_matrix(path: &Path) -> Result<Matrix> {
    let text = slurp(path)?;
    parse_matrix_file(&path.display().to_string(), &text)
}

// ---------------------------------------------------------------------------
// Output shapes
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct TupleOut {
    n: usize,
    m: usize,
    matrices: Vec<Vec<Vec<f64>>>,
}

impl TupleOut {
    fn of(t: &MatrixTuple) -> Self {
        Self {
            n: t.dim(),
            m: t.len(),
            matrices: t.to_nested(),
        }
    }
}

#[derive(Serialize)]
struct WitnessOut {
    p: Vec<Vec<f64>>,
    q: Vec<Vec<f64>>,
}

#[derive(Serialize)]
struct CheckCanonicalOut<'a> {
    report: &'a InequalityReport,
    canonical: TupleOut,
    witness: WitnessOut,
}

#[derive(Serialize)]
struct CanonOut {
    canonical: TupleOut,
    witness: WitnessOut,
    invariants_ok: bool,
}

#[derive(Serialize)]
struct GeomOut<'a> {
    c: f64,
    rho: f64,
    rho_perp: f64,
    h_mean_sq: f64,
    #[serde(flatten)]
    report: &'a InequalityReport,
}

#[derive(Serialize)]
struct SpectrumOut<'a> {
    alpha: f64,
    #[serde(flatten)]
    report: &'a InequalityReport,
    eigenvector: Vec<Vec<f64>>,
}

#[derive(Serialize)]
struct PairOut {
    alpha: f64,
    paired: Vec<Vec<f64>>,
}

#[derive(Serialize)]
struct ArrowheadOut {
    lambda_max: f64,
    bound: f64,
    pass: bool,
    probe: f64,
    det: DetIdentityCheck,
}

#[derive(Serialize)]
struct SearchOut {
    n: usize,
    m: usize,
    restarts: usize,
    max_iters: usize,
    step: f64,
    seed: u64,
    tol: f64,
    best_ratio: f64,
    iterations_used: usize,
    converged: bool,
    best_tuple: TupleOut,
}

#[derive(Serialize)]
struct VerboseFuzzOut<'a> {
    #[serde(flatten)]
    summary: &'a FuzzSummary,
    records: &'a [TrialRecord],
}

fn json_line<T: Serialize>(value: &T) -> String {
    let mut s = jsonio::to_string(value);
    s.push('\n');
    s
}

fn report_text(title: &str, report: &InequalityReport) -> String {
    format!(
        "{title}\n  lhs    = {}\n  rhs    = {}\n  ratio  = {}\n  margin = {}\n  pass   = {} (tol = {})\n",
        report.lhs, report.rhs, report.ratio, report.margin, report.pass, report.tol
    )
}

fn report_csv(report: &InequalityReport) -> String {
    format!(
        "lhs,rhs,ratio,margin,pass,tol\n{:.16e},{:.16e},{:.16e},{:.16e},{},{:.16e}\n",
        report.lhs, report.rhs, report.ratio, report.margin, report.pass, report.tol
    )
}

fn pass_code(pass: bool) -> i32 {
    if pass {
        EXIT_OK
    } else {
        EXIT_FAIL
    }
}

// ---------------------------------------------------------------------------
// Command handlers
// ---------------------------------------------------------------------------

fn cmd_check<E: Write>(
    input: &Path,
    tol: f64,
    format: CheckFormat,
    emit_canonical: bool,
    err: &mut E,
) -> Result<(String, i32)> {
    if emit_canonical && format != CheckFormat::Json {
        return Err(Error::invalid("--emit-canonical requires --format json"));
    }
    let tuple = load_tuple(input, err)?;
    let report = evaluate_matrix_form(&tuple, tol);
    let body = match format {
        CheckFormat::Json => {
            if emit_canonical {
                let canonical = canonicalize(&tuple)?;
                json_line(&CheckCanonicalOut {
                    report: &report,
                    canonical: TupleOut::of(&canonical.tuple),
                    witness: WitnessOut {
                        p: canonical.witness.p().to_nested(),
                        q: canonical.witness.q().to_nested(),
                    },
                })
            } else {
                json_line(&report)
            }
        }
        CheckFormat::Csv => report_csv(&report),
        CheckFormat::Text => report_text("tuple inequality (matrix form)", &report),
    };
    Ok((body, pass_code(report.pass)))
}

fn cmd_canon<E: Write>(input: &Path, err: &mut E) -> Result<(String, i32)> {
    let tuple = load_tuple(input, err)?;
    let canonical = canonicalize(&tuple)?;
    let verdict = canonical.check_invariants();
    if let Err(violation) = &verdict {
        let _ = writeln!(err, "canonical form violates its invariants: {violation}");
    }
    let body = json_line(&CanonOut {
        canonical: TupleOut::of(&canonical.tuple),
        witness: WitnessOut {
            p: canonical.witness.p().to_nested(),
            q: canonical.witness.q().to_nested(),
        },
        invariants_ok: verdict.is_ok(),
    });
    Ok((body, pass_code(verdict.is_ok())))
}

fn cmd_geom<E: Write>(
    input: &Path,
    tol: f64,
    format: ReportFormat,
    err: &mut E,
) -> Result<(String, i32)> {
    let sff = load_sff(input, err)?;
    let quantities = geometric_quantities(&sff)?;
    let report = check_conjecture1(&sff, tol)?;
    let body = match format {
        ReportFormat::Json => json_line(&GeomOut {
            c: sff.c(),
            rho: quantities.rho,
            rho_perp: quantities.rho_perp,
            h_mean_sq: quantities.h_mean_sq,
            report: &report,
        }),
        ReportFormat::Text => format!(
            "curvature check (n = {}, m = {})\n  c        = {}\n  rho      = {}\n  rho_perp = {}\n  |H|^2    = {}\n{}",
            sff.dim(),
            sff.codim(),
            sff.c(),
            quantities.rho,
            quantities.rho_perp,
            quantities.h_mean_sq,
            report_text("curvature inequality (rho + rho_perp <= |H|^2 + c)", &report)
        ),
    };
    Ok((body, pass_code(report.pass)))
}

fn cmd_lemma<E: Write>(oracle: LemmaCommand, err: &mut E) -> Result<(String, i32)> {
    match oracle {
        LemmaCommand::Lemma1 { input, tol, format } => {
            #[derive(Deserialize)]
            #[serde(deny_unknown_fields)]
            struct File {
                eta: Vec<f64>,
                weights: Vec<f64>,
            }
            let text = slurp(&input)?;
            let file: File = parse_json(&input.display().to_string(), &text)?;
            let n = file.eta.len();
            let eta = EtaVector::new(file.eta)?;
            let weights = WeightSet::new(n, file.weights)?;
            let report = lemma1_check(&eta, &weights, tol)?;
            Ok(render_report("weighted spread bound", &report, format))
        }
        LemmaCommand::Lemma2 { input, tol, format } => {
            #[derive(Deserialize)]
            #[serde(deny_unknown_fields)]
            struct File {
                a_diagonal: Vec<f64>,
                family: Vec<Vec<Vec<f64>>>,
            }
            let text = slurp(&input)?;
            let file: File = parse_json(&input.display().to_string(), &text)?;
            let a = SymMatrix::from_diagonal(&file.a_diagonal)?;
            let family = ingest_family(&file.family, a.dim(), err)?;
            let report = lemma2_check(&a, &family, tol)?;
            Ok(render_report("diagonal commutator bound", &report, format))
        }
        LemmaCommand::Delta { input, tol, format } => {
            #[derive(Deserialize)]
            #[serde(deny_unknown_fields)]
            struct File {
                family: Vec<Vec<Vec<f64>>>,
            }
            let text = slurp(&input)?;
            let file: File = parse_json(&input.display().to_string(), &text)?;
            let dim = file
                .family
                .first()
                .map(Vec::len)
                .ok_or_else(|| Error::invalid("family must contain at least one matrix"))?;
            let family = ingest_family(&file.family, dim, err)?;
            let report = delta_bound_check(&family, tol)?;
            Ok(render_report("concentration bound", &report, format))
        }
        LemmaCommand::Remark { input, tol, format } => {
            #[derive(Deserialize)]
            #[serde(deny_unknown_fields)]
            struct File {
                a_diagonal: Vec<f64>,
                b: Vec<Vec<f64>>,
            }
            let text = slurp(&input)?;
            let file: File = parse_json(&input.display().to_string(), &text)?;
            let a = SymMatrix::from_diagonal(&file.a_diagonal)?;
            let mut warnings = Vec::new();
            let b = ingest_square_block(&file.b, a.dim(), "matrix b", &mut warnings)?;
            for w in warnings {
                let _ = writeln!(err, "warning: {w}");
            }
            let report = remark_bound_check(&a, &b, tol)?;
            Ok(render_report("entrywise commutator bound", &report, format))
        }
        LemmaCommand::Arrowhead {
            input,
            probe,
            format,
        } => {
            #[derive(Deserialize)]
            #[serde(deny_unknown_fields)]
            struct File {
                weights: Vec<f64>,
            }
            let text = slurp(&input)?;
            let file: File = parse_json(&input.display().to_string(), &text)?;
            let arrow = ArrowheadMatrix::new(file.weights)?;
            let spectral = arrow.spectral_bound();
            let probe = probe.unwrap_or(arrow.bound() + 1.0);
            let det = arrow.det_identity_check(probe)?;
            let pass = spectral.pass && det.agree;
            let body = match format {
                ReportFormat::Json => json_line(&ArrowheadOut {
                    lambda_max: spectral.lambda_max,
                    bound: spectral.bound,
                    pass,
                    probe,
                    det,
                }),
                ReportFormat::Text => format!(
                    "arrowhead bound\n  lambda_max = {}\n  bound      = {}\n  pass       = {pass}\n  det at probe {probe}: direct = {}, formula = {}, agree = {}\n",
                    spectral.lambda_max, spectral.bound, det.direct, det.formula, det.agree
                ),
            };
            Ok((body, pass_code(pass)))
        }
    }
}

fn ingest_family<E: Write>(
    nested: &[Vec<Vec<f64>>],
    n: usize,
    err: &mut E,
) -> Result<MatrixTuple> {
    if nested.is_empty() {
        return Err(Error::invalid("family must contain at least one matrix"));
    }
    let mut warnings = Vec::new();
    let matrices = nested
        .iter()
        .enumerate()
        .map(|(k, raw)| ingest_square_block(raw, n, &format!("family matrix {k}"), &mut warnings))
        .collect::<Result<Vec<_>>>()?;
    for w in warnings {
        let _ = writeln!(err, "warning: {w}");
    }
    MatrixTuple::new(matrices)
}

fn render_report(title: &str, report: &InequalityReport, format: ReportFormat) -> (String, i32) {
    let body = match format {
        ReportFormat::Json => json_line(report),
        ReportFormat::Text => report_text(title, report),
    };
    (body, pass_code(report.pass))
}

fn cmd_bw(analysis: BwCommand) -> Result<(String, i32)> {
    match analysis {
        BwCommand::Spectrum {
            input,
            tol,
            max_n,
            format,
        } => {
            let x = load_matrix(&input)?;
            guard_operator_size(&x, max_n)?;
            let op = build_t_operator(&x)?;
            let top = bw_spectrum(&op)?;
            // The sharp constant: the top eigenvalue never exceeds 2 |X|^2.
            let report = InequalityReport::new(2.0 * x.norm_sq(), top.alpha, tol);
            let body = match format {
                ReportFormat::Json => json_line(&SpectrumOut {
                    alpha: top.alpha,
                    report: &report,
                    eigenvector: top.eigenvector.to_nested(),
                }),
                ReportFormat::Text => format!(
                    "commutator operator spectrum (n = {})\n  alpha      = {}\n  2 |X|^2    = {}\n  pass       = {} (tol = {})\n",
                    x.n_rows(),
                    top.alpha,
                    report.lhs,
                    report.pass,
                    report.tol
                ),
            };
            Ok((body, pass_code(report.pass)))
        }
        BwCommand::Check {
            input,
            y,
            tol,
            format,
        } => {
            let x = load_matrix(&input)?;
            let y = load_matrix(&y)?;
            let report = bw_check(&x, &y, tol)?;
            Ok(render_report("commutator inequality", &report, format))
        }
        BwCommand::Pair {
            input,
            y,
            max_n,
            format,
        } => {
            let x = load_matrix(&input)?;
            guard_operator_size(&x, max_n)?;
            let y = load_matrix(&y)?;
            let op = build_t_operator(&x)?;
            let paired = pair_eigenvector(&op, &y)?;
            let alpha = y.frobenius_inner(&op.apply(&y)?)? / y.norm_sq();
            let body = match format {
                ReportFormat::Json => json_line(&PairOut {
                    alpha,
                    paired: paired.to_nested(),
                }),
                ReportFormat::Text => {
                    format!("eigenvector pairing\n  alpha = {alpha}\n  paired =\n{paired}")
                }
            };
            Ok((body, EXIT_OK))
        }
        BwCommand::Trivial {
            input,
            y,
            tol,
            format,
        } => {
            let x = load_matrix(&input)?;
            let y = load_matrix(&y)?;
            let report = bw_trivial_case_check(&x, &y, tol)?;
            Ok(render_report(
                "commutator inequality (flat-spectrum regime)",
                &report,
                format,
            ))
        }
    }
}

fn guard_operator_size(x: &Matrix, max_n: usize) -> Result<()> {
    if x.n_rows() > max_n || x.n_cols() > max_n {
        return Err(Error::invalid(format!(
            "matrix size {} exceeds --max-n = {max_n}; the dense operator needs n^2 x n^2 storage",
            x.n_rows()
        )));
    }
    Ok(())
}

fn cmd_search(cfg: SearchConfig, format: ReportFormat) -> Result<(String, i32)> {
    let result = extremal_search(&cfg)?;
    let body = match format {
        ReportFormat::Json => json_line(&SearchOut {
            n: cfg.n,
            m: cfg.m,
            restarts: cfg.restarts,
            max_iters: cfg.max_iters,
            step: cfg.step,
            seed: cfg.seed,
            tol: cfg.tol,
            best_ratio: result.best_ratio,
            iterations_used: result.iterations_used,
            converged: result.converged,
            best_tuple: TupleOut::of(&result.best_tuple),
        }),
        ReportFormat::Text => format!(
            "extremal search (n = {}, m = {}, restarts = {}, seed = {})\n  best_ratio      = {}\n  iterations_used = {}\n  converged       = {}\n",
            cfg.n, cfg.m, cfg.restarts, cfg.seed, result.best_ratio, result.iterations_used, result.converged
        ),
    };
    // A ratio meaningfully above 1 would be a counterexample to the tuple
    // inequality; flag it through the exit status.
    let code = if result.best_ratio > SEARCH_RATIO_CAP {
        EXIT_FAIL
    } else {
        EXIT_OK
    };
    Ok((body, code))
}

fn cmd_fuzz(cfg: FuzzConfig, format: FuzzFormat, verbose: bool) -> Result<(String, i32)> {
    let (summary, records) = fuzz_campaign_with_records(&cfg)?;
    let body = match format {
        FuzzFormat::Json => {
            if verbose {
                json_line(&VerboseFuzzOut {
                    summary: &summary,
                    records: &records,
                })
            } else {
                json_line(&summary)
            }
        }
        FuzzFormat::Csv => {
            if verbose {
                let mut csv = String::from("trial_index,ratio,pass\n");
                for r in &records {
                    csv.push_str(&format!("{},{:.16e},{}\n", r.trial_index, r.ratio, r.pass));
                }
                csv
            } else {
                format!(
                    "oracle,trials,n,m,seed,dist,passes,failures,max_ratio,argmax_trial,argmax_digest\n{},{},{},{},{},{},{},{},{:.16e},{},{}\n",
                    summary.oracle,
                    summary.trials,
                    summary.n,
                    summary.m,
                    summary.seed,
                    summary.dist,
                    summary.passes,
                    summary.failures,
                    summary.max_ratio,
                    summary
                        .argmax_trial
                        .map_or(String::new(), |t| t.to_string()),
                    summary.argmax_digest.as_deref().unwrap_or(""),
                )
            }
        }
    };
    Ok((body, pass_code(summary.failures == 0)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (i32, String, String) {
        let argv: Vec<String> = std::iter::once("ddvv")
            .chain(args.iter().copied())
            .map(str::to_string)
            .collect();
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run_command(&argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    fn write_temp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    const EQUALITY_PAIR: &str = r#"{
        "n": 2, "m": 2,
        "matrices": [[[0.0, 1.0], [1.0, 0.0]], [[1.0, 0.0], [0.0, -1.0]]]
    }"#;

    #[test]
    fn tuple_parsing_accepts_the_documented_example() {
        let (tuple, warnings) =
            parse_tuple_file("test", r#"{"n":2,"m":1,"matrices":[[[1,0],[0,-1]]]}"#).unwrap();
        assert_eq!(tuple.dim(), 2);
        assert_eq!(tuple.len(), 1);
        assert_eq!(tuple[0].diagonal(), vec![1.0, -1.0]);
        assert!(warnings.is_empty());
    }

    #[test]
    fn tuple_parsing_names_the_offending_matrix() {
        let bad_rows = r#"{"n":2,"m":2,"matrices":[[[1,0],[0,1]],[[1,0]]]}"#;
        let e = parse_tuple_file("test", bad_rows).unwrap_err().to_string();
        assert!(e.contains("matrix 1"), "{e}");

        let bad_cols = r#"{"n":2,"m":1,"matrices":[[[1,0],[0]]]}"#;
        let e = parse_tuple_file("test", bad_cols).unwrap_err().to_string();
        assert!(e.contains("matrix 0 row 1"), "{e}");

        let wrong_count = r#"{"n":2,"m":3,"matrices":[[[1,0],[0,1]]]}"#;
        let e = parse_tuple_file("test", wrong_count).unwrap_err().to_string();
        assert!(e.contains("declares m = 3"), "{e}");
    }

    #[test]
    fn tuple_parsing_warns_on_asymmetric_input() {
        let asymmetric = r#"{"n":2,"m":1,"matrices":[[[0.0, 1.0],[1.001, 0.0]]]}"#;
        let (tuple, warnings) = parse_tuple_file("test", asymmetric).unwrap();
        assert_eq!(warnings.len(), 1);
        assert!(warnings[0].contains("asymmetry"), "{}", warnings[0]);
        // Symmetrized to the average.
        assert_eq!(tuple[0][(0, 1)], (1.0 + 1.001) / 2.0);

        // Asymmetry at rounding scale is repaired silently.
        let tiny = r#"{"n":2,"m":1,"matrices":[[[0.0, 1.0],[1.0000000000000002, 0.0]]]}"#;
        let (_, warnings) = parse_tuple_file("test", tiny).unwrap();
        assert!(warnings.is_empty());
    }

    #[test]
    fn sff_parsing_round_trips() {
        let text = r#"{"n":2,"m":1,"c":0.5,"h":[[[1,0],[0,1]]]}"#;
        let (sff, warnings) = parse_sff_file("test", text).unwrap();
        assert_eq!(sff.c(), 0.5);
        assert_eq!(sff.dim(), 2);
        assert!(warnings.is_empty());
    }

    #[test]
    fn check_passes_on_the_equality_pair() {
        let f = write_temp(EQUALITY_PAIR);
        let (code, out, err) = run(&["check", "--input", f.path().to_str().unwrap()]);
        assert_eq!(code, EXIT_OK, "stderr: {err}");
        let value: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(value["lhs"].as_f64().unwrap(), 16.0);
        assert_eq!(value["rhs"].as_f64().unwrap(), 16.0);
        assert!((value["ratio"].as_f64().unwrap() - 1.0).abs() < 1e-12);
        assert!(value["pass"].as_bool().unwrap());
    }

    #[test]
    fn check_emits_canonical_form_on_request() {
        let f = write_temp(EQUALITY_PAIR);
        let (code, out, _) = run(&[
            "check",
            "--input",
            f.path().to_str().unwrap(),
            "--emit-canonical",
        ]);
        assert_eq!(code, EXIT_OK);
        let value: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert!(value["report"]["pass"].as_bool().unwrap());
        assert_eq!(value["canonical"]["n"].as_u64().unwrap(), 2);
        assert!(value["witness"]["p"].is_array());

        // The flag is JSON-only.
        let (code, _, err) = run(&[
            "check",
            "--input",
            f.path().to_str().unwrap(),
            "--emit-canonical",
            "--format",
            "csv",
        ]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("--format json"), "{err}");
    }

    #[test]
    fn check_csv_and_text_formats() {
        let f = write_temp(EQUALITY_PAIR);
        let (code, out, _) = run(&[
            "check",
            "--input",
            f.path().to_str().unwrap(),
            "--format",
            "csv",
        ]);
        assert_eq!(code, EXIT_OK);
        let mut lines = out.lines();
        assert_eq!(lines.next().unwrap(), "lhs,rhs,ratio,margin,pass,tol");
        assert!(lines.next().unwrap().starts_with("1.6000000000000000e1,"));

        let (code, out, _) = run(&[
            "check",
            "--input",
            f.path().to_str().unwrap(),
            "--format",
            "text",
        ]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("pass   = true"), "{out}");
    }

    #[test]
    fn unknown_flags_exit_with_usage_status() {
        let (code, _, err) = run(&["check", "--no-such-flag"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(!err.is_empty());

        let (code, out, _) = run(&["--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("Usage"), "{out}");
    }

    #[test]
    fn missing_files_and_bad_json_are_usage_errors() {
        let (code, _, err) = run(&["check", "--input", "/nonexistent/tuple.json"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.starts_with("error: "), "{err}");

        let f = write_temp("{not json");
        let (code, _, err) = run(&["check", "--input", f.path().to_str().unwrap()]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("error: "), "{err}");
    }

    #[test]
    fn canon_emits_form_witness_and_verdict() {
        let f = write_temp(EQUALITY_PAIR);
        let (code, out, err) = run(&["canon", "--input", f.path().to_str().unwrap()]);
        assert_eq!(code, EXIT_OK, "stderr: {err}");
        let value: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert!(value["invariants_ok"].as_bool().unwrap());
        // The canonical block is itself a valid tuple file.
        let nested = jsonio::to_string(&value["canonical"]);
        assert!(parse_tuple_file("roundtrip", &nested).is_ok());
    }

    #[test]
    fn geom_reports_curvatures() {
        let f = write_temp(r#"{"n":2,"m":1,"c":1.0,"h":[[[1.0,0.0],[0.0,1.0]]]}"#);
        let (code, out, _) = run(&["geom", "--input", f.path().to_str().unwrap()]);
        assert_eq!(code, EXIT_OK);
        let value: serde_json::Value = serde_json::from_str(&out).unwrap();
        // Umbilical data attains equality: rho = c + 1, |H|^2 = 1, rho_perp = 0.
        assert_eq!(value["rho"].as_f64().unwrap(), 2.0);
        assert_eq!(value["rho_perp"].as_f64().unwrap(), 0.0);
        assert_eq!(value["h_mean_sq"].as_f64().unwrap(), 1.0);
        assert!(value["pass"].as_bool().unwrap());
    }

    #[test]
    fn lemma_commands_dispatch() {
        let inv = 1.0 / 2.0f64.sqrt();
        let f = write_temp(&format!(
            r#"{{"eta":[{inv},{}],"weights":[1.0]}}"#,
            -inv
        ));
        let (code, out, _) = run(&["lemma", "lemma1", "--input", f.path().to_str().unwrap()]);
        assert_eq!(code, EXIT_OK);
        let value: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert!(value["pass"].as_bool().unwrap());
        assert_eq!(value["lhs"].as_f64().unwrap(), 2.0);

        let f = write_temp(&format!(
            r#"{{"a_diagonal":[{inv},{}],"family":[[[0.0,1.0],[1.0,0.0]]]}}"#,
            -inv
        ));
        let (code, out, _) = run(&["lemma", "lemma2", "--input", f.path().to_str().unwrap()]);
        assert_eq!(code, EXIT_OK);
        let value: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert!(value["pass"].as_bool().unwrap());

        let f = write_temp(r#"{"family":[[[0.0,1.0],[1.0,0.0]]]}"#);
        let (code, _, _) = run(&["lemma", "delta", "--input", f.path().to_str().unwrap()]);
        assert_eq!(code, EXIT_OK);

        let f = write_temp(&format!(
            r#"{{"a_diagonal":[{inv},{}],"b":[[0.0,1.0],[1.0,0.0]]}}"#,
            -inv
        ));
        let (code, _, _) = run(&["lemma", "remark", "--input", f.path().to_str().unwrap()]);
        assert_eq!(code, EXIT_OK);

        let f = write_temp(r#"{"weights":[1.0,1.0]}"#);
        let (code, out, _) = run(&[
            "lemma",
            "arrowhead",
            "--input",
            f.path().to_str().unwrap(),
            "--probe",
            "4.0",
        ]);
        assert_eq!(code, EXIT_OK);
        let value: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert!((value["lambda_max"].as_f64().unwrap() - 3.0).abs() < 1e-12);
        assert!(value["det"]["agree"].as_bool().unwrap());
        assert!((value["det"]["direct"].as_f64().unwrap() - 12.0).abs() < 1e-9);
    }

    #[test]
    fn lemma_precondition_violations_are_usage_errors() {
        // eta fails its unit-norm precondition: exit 2, not 1.
        let f = write_temp(r#"{"eta":[1.0,1.0],"weights":[1.0]}"#);
        let (code, _, err) = run(&["lemma", "lemma1", "--input", f.path().to_str().unwrap()]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("error"), "{err}");
    }

    #[test]
    fn bw_commands_dispatch() {
        let x = write_temp("[[0.0, 1.0], [0.0, 0.0]]");
        let (code, out, _) = run(&["bw", "spectrum", "--input", x.path().to_str().unwrap()]);
        assert_eq!(code, EXIT_OK);
        let value: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert!((value["alpha"].as_f64().unwrap() - 2.0).abs() < 1e-12);
        assert!(value["pass"].as_bool().unwrap());

        let y = write_temp("[[0.0, 0.0], [1.0, 0.0]]");
        let (code, out, _) = run(&[
            "bw",
            "check",
            "--input",
            x.path().to_str().unwrap(),
            "--y",
            y.path().to_str().unwrap(),
        ]);
        assert_eq!(code, EXIT_OK);
        let value: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(value["lhs"].as_f64().unwrap(), 2.0);
        assert_eq!(value["rhs"].as_f64().unwrap(), 2.0);

        let (code, out, _) = run(&[
            "bw",
            "pair",
            "--input",
            x.path().to_str().unwrap(),
            "--y",
            y.path().to_str().unwrap(),
        ]);
        assert_eq!(code, EXIT_OK);
        let value: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert!((value["alpha"].as_f64().unwrap() - 2.0).abs() < 1e-12);

        // Pairing a non-eigenvector is a precondition violation: exit 2.
        let bad = write_temp("[[1.0, 0.0], [0.0, 0.0]]");
        let (code, _, _) = run(&[
            "bw",
            "pair",
            "--input",
            x.path().to_str().unwrap(),
            "--y",
            bad.path().to_str().unwrap(),
        ]);
        assert_eq!(code, EXIT_USAGE);
    }

    #[test]
    fn bw_spectrum_respects_the_size_cap() {
        let x = write_temp("[[0.0, 1.0], [0.0, 0.0]]");
        let (code, _, err) = run(&[
            "bw",
            "spectrum",
            "--input",
            x.path().to_str().unwrap(),
            "--max-n",
            "1",
        ]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("--max-n"), "{err}");
    }

    #[test]
    fn bw_trivial_dispatches() {
        let inv = 1.0 / 2.0f64.sqrt();
        let x = write_temp(&format!("[[{inv}, 0.0], [0.0, {inv}]]"));
        let y = write_temp(&format!("[[0.0, {inv}], [{inv}, 0.0]]"));
        let (code, out, _) = run(&[
            "bw",
            "trivial",
            "--input",
            x.path().to_str().unwrap(),
            "--y",
            y.path().to_str().unwrap(),
        ]);
        assert_eq!(code, EXIT_OK);
        let value: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(value["lhs"].as_f64().unwrap(), 2.0);
    }

    #[test]
    fn search_reports_its_seed_and_configuration() {
        let (code, out, err) = run(&[
            "search", "--n", "2", "--m", "2", "--restarts", "2", "--max-iters", "150",
            "--seed", "5",
        ]);
        assert_eq!(code, EXIT_OK, "stderr: {err}");
        let value: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(value["seed"].as_u64().unwrap(), 5);
        assert_eq!(value["restarts"].as_u64().unwrap(), 2);
        let best = value["best_ratio"].as_f64().unwrap();
        assert!(best > 0.5 && best <= 1.0 + 1e-6, "best_ratio = {best}");
        assert!(value["best_tuple"]["matrices"].is_array());
    }

    #[test]
    fn fuzz_emits_summaries_and_csv() {
        let args = [
            "fuzz",
            "--oracle",
            "ddvv-matrix",
            "--trials",
            "8",
            "--n",
            "3",
            "--m",
            "2",
            "--seed",
            "42",
        ];
        let (code, out, err) = run(&args);
        assert_eq!(code, EXIT_OK, "stderr: {err}");
        let value: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(value["passes"].as_u64().unwrap(), 8);
        assert_eq!(value["seed"].as_u64().unwrap(), 42);
        assert_eq!(value["argmax_digest"].as_str().unwrap().len(), 64);

        let mut csv_args = args.to_vec();
        csv_args.extend_from_slice(&["--format", "csv"]);
        let (code, out, _) = run(&csv_args);
        assert_eq!(code, EXIT_OK);
        assert!(out.starts_with("oracle,trials,n,m,seed,dist,"), "{out}");
        assert!(out.contains("ddvv-matrix,8,3,2,42,gaussian,8,0,"), "{out}");

        csv_args.push("--verbose");
        let (code, out, _) = run(&csv_args);
        assert_eq!(code, EXIT_OK);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], "trial_index,ratio,pass");
        assert_eq!(lines.len(), 9); // header + 8 trials
        assert!(lines[1].starts_with("0,"), "{}", lines[1]);
    }

    #[test]
    fn fuzz_rejects_unknown_oracles_and_bad_dims() {
        let (code, _, err) = run(&[
            "fuzz", "--oracle", "nope", "--trials", "1", "--n", "2",
        ]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("unknown oracle"), "{err}");

        let (code, _, err) = run(&[
            "fuzz", "--oracle", "delta", "--trials", "1", "--n", "2", "--m", "5",
        ]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("orthogonal"), "{err}");
    }

    #[test]
    fn fuzz_repeats_are_byte_identical() {
        let args = [
            "fuzz", "--oracle", "lemma1", "--trials", "16", "--n", "4", "--seed", "9",
        ];
        let (code_a, out_a, _) = run(&args);
        let (code_b, out_b, _) = run(&args);
        assert_eq!(code_a, EXIT_OK);
        assert_eq!(code_b, EXIT_OK);
        assert_eq!(out_a, out_b);
    }

    #[test]
    fn json_reports_round_trip_through_17_digits() {
        let f = write_temp(
            r#"{"n":2,"m":2,"matrices":[[[0.1,0.7],[0.7,-0.3]],[[1.4,-0.2],[-0.2,0.9]]]}"#,
        );
        let (code, out, _) = run(&["check", "--input", f.path().to_str().unwrap()]);
        assert_eq!(code, EXIT_OK);
        let value: InequalityReport = serde_json::from_str(&out).unwrap();
        let reprinted = jsonio::to_string(&value);
        let reparsed: InequalityReport = serde_json::from_str(&reprinted).unwrap();
        assert_eq!(value.lhs.to_bits(), reparsed.lhs.to_bits());
        assert_eq!(value.rhs.to_bits(), reparsed.rhs.to_bits());
        assert_eq!(value.ratio.to_bits(), reparsed.ratio.to_bits());
    }
}
