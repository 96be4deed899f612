//! Command-line front end. Every invocation writes exactly one JSON
//! document to standard output; diagnostics go to standard error.
//!
//! Exit codes: 0 success or a true verdict, 1 a false verdict or mismatch,
//! 2 bad input, 3 a non-finite numerical result.

use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::oracle::{oracle_spectrum, spectra_equal, OracleConfig};
use crate::preserver::{
    battery_gen, check_preserver, recover_q, Failure, LinearMap3, BASIS_COLMAJOR_EIJ,
};
use crate::smallmat::Mat3;
use crate::spectrum::{full_spectrum, Interval, LEigenvalue, Nature, Spectrum};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "lspec", version, about = "Lorentz spectra of 3x3 matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Relative tolerance.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Angular grid size for the brute-force oracle.
    #[arg(long, default_value_t = 100_000)]
    theta_steps: usize,
    /// Battery seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Battery size.
    #[arg(long, default_value_t = 60)]
    count: usize,
    /// Matrix file; standard input when absent.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Operator file; standard input when absent.
    #[arg(long)]
    operator: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// L-spectrum of a matrix.
    Spectrum(Common),
    /// L-spectrum by brute-force sweep.
    Oracle(Common),
    /// Solver and oracle side by side.
    Compare(Common),
    /// Sampling check that an operator preserves L-spectra.
    PreserverCheck(Common),
    /// Read Q back from a canonical preserver.
    RecoverQ(Common),
    /// Print the test battery for a seed.
    Battery(Common),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub matrix: Vec<Vec<f64>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorFile {
    pub operator: Vec<Vec<f64>>,
    pub basis: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointReport {
    pub value: f64,
    pub interior: bool,
    pub boundary: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalReport {
    pub lo: f64,
    pub hi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub points: Vec<PointReport>,
    pub intervals: Vec<IntervalReport>,
    pub infinite: bool,
}

impl From<&Spectrum> for SpectrumReport {
    fn from(s: &Spectrum) -> Self {
        SpectrumReport {
            points: s
                .points
                .iter()
                .map(|p| PointReport {
                    value: p.value,
                    interior: p.nature.interior,
                    boundary: p.nature.boundary,
                })
                .collect(),
            intervals: s
                .intervals
                .iter()
                .map(|iv| IntervalReport {
                    lo: iv.lo,
                    hi: iv.hi,
                })
                .collect(),
            infinite: s.is_infinite(),
        }
    }
}

impl From<&SpectrumReport> for Spectrum {
    fn from(r: &SpectrumReport) -> Self {
        let points = r
            .points
            .iter()
            .map(|p| {
                LEigenvalue::bare(
                    p.value,
                    Nature {
                        interior: p.interior,
                        boundary: p.boundary,
                    },
                )
            })
            .collect();
        let intervals = r
            .intervals
            .iter()
            .map(|i| Interval::new(i.lo, i.hi))
            .collect();
        Spectrum::canonical(points, intervals)
    }
}

#[derive(Debug, Serialize)]
struct CompareReport {
    solver: SpectrumReport,
    oracle: SpectrumReport,
    hausdorff_distance: f64,
    tol: f64,
    equal: bool,
}

#[derive(Debug, Serialize)]
struct VerdictReport {
    is_preserver: bool,
    failure: Option<String>,
    witness: Option<[[f64; 3]; 3]>,
    witness_spectrum: Option<SpectrumReport>,
    image_spectrum: Option<SpectrumReport>,
    q: Option<[[f64; 2]; 2]>,
}

#[derive(Debug, Serialize)]
struct QReport {
    q: [[f64; 2]; 2],
}

#[derive(Debug, Serialize)]
struct ErrorReport {
    error: ErrorBody,
}

#[derive(Debug, Serialize)]
struct ErrorBody {
    kind: &'static str,
    message: String,
}

#[derive(Debug, Serialize)]
struct BatteryReport {
    seed: u64,
    count: usize,
    matrices: Vec<[[f64; 3]; 3]>,
}

/// Writes floats in the shortest form that parses back to the same value,
/// with integers printed bare (`1`, not `1.0`) and `-0` printed as `0`.
struct NumberFormatter;

impl serde_json::ser::Formatter for NumberFormatter {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{}", format_number(value))
    }
}

pub fn format_number(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    let ax = x.abs();
    if ax == 0.0 || (1e-5..1e16).contains(&ax) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

/// Serializes `value` as one line of JSON using [`NumberFormatter`].
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, NumberFormatter);
    value
        .serialize(&mut ser)
        .expect("serializing plain data cannot fail");
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

#[derive(Debug)]
enum CliError {
    Input(String),
    Numeric(String),
}

fn read_source(path: Option<&Path>) -> Result<String, CliError> {
    match path {
        Some(p) => std::fs::read_to_string(p)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", p.display()))),
        None => {
            let mut s = String::new();
            io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| CliError::Input(format!("cannot read standard input: {e}")))?;
            Ok(s)
        }
    }
}

pub fn parse_matrix(text: &str) -> Result<Mat3, String> {
    let file: MatrixFile =
        serde_json::from_str(text).map_err(|e| format!("bad matrix file: {e}"))?;
    if file.matrix.len() != 3 || file.matrix.iter().any(|r| r.len() != 3) {
        return Err("matrix must be 3x3".into());
    }
    let m = Mat3(std::array::from_fn(|i| {
        std::array::from_fn(|j| file.matrix[i][j])
    }));
    if !m.is_finite() {
        return Err("matrix entries must be finite".into());
    }
    Ok(m)
}

pub fn parse_operator(text: &str) -> Result<LinearMap3, String> {
    let file: OperatorFile =
        serde_json::from_str(text).map_err(|e| format!("bad operator file: {e}"))?;
    if file.basis != BASIS_COLMAJOR_EIJ {
        return Err(format!(
            "basis must be \"{BASIS_COLMAJOR_EIJ}\", got \"{}\"",
            file.basis
        ));
    }
    if file.operator.len() != 9 || file.operator.iter().any(|r| r.len() != 9) {
        return Err("operator must be 9x9".into());
    }
    let m = LinearMap3 {
        matrix: std::array::from_fn(|i| std::array::from_fn(|j| file.operator[i][j])),
    };
    if !m.is_finite() {
        return Err("operator entries must be finite".into());
    }
    Ok(m)
}

pub fn operator_json(m: &LinearMap3) -> String {
    to_json(&OperatorFile {
        operator: m.matrix.iter().map(|r| r.to_vec()).collect(),
        basis: BASIS_COLMAJOR_EIJ.to_string(),
    })
}

pub fn matrix_json(a: &Mat3) -> String {
    to_json(&MatrixFile {
        matrix: a.0.iter().map(|r| r.to_vec()).collect(),
    })
}

fn checked_report(s: &Spectrum) -> Result<SpectrumReport, CliError> {
    if s.is_finite() {
        Ok(SpectrumReport::from(s))
    } else {
        Err(CliError::Numeric("spectrum has non-finite values".into()))
    }
}

fn load_matrix(c: &Common) -> Result<Mat3, CliError> {
    parse_matrix(&read_source(c.input.as_deref())?).map_err(CliError::Input)
}

fn load_operator(c: &Common) -> Result<LinearMap3, CliError> {
    parse_operator(&read_source(c.operator.as_deref())?).map_err(CliError::Input)
}

fn validate(c: &Common) -> Result<(), CliError> {
    if !(c.tol.is_finite() && c.tol > 0.0) {
        return Err(CliError::Input("--tol must be positive".into()));
    }
    if c.theta_steps < 16 {
        return Err(CliError::Input("--theta-steps must be at least 16".into()));
    }
    Ok(())
}

/// Output document and exit code.
fn execute(cmd: Command) -> Result<(String, i32), CliError> {
    match cmd {
        Command::Spectrum(c) => {
            validate(&c)?;
            let a = load_matrix(&c)?;
            Ok((
                to_json(&checked_report(&full_spectrum(&a, c.tol))?),
                EXIT_OK,
            ))
        }
        Command::Oracle(c) => {
            validate(&c)?;
            let a = load_matrix(&c)?;
            let cfg = OracleConfig {
                theta_steps: c.theta_steps,
                ..OracleConfig::default()
            };
            Ok((
                to_json(&checked_report(&oracle_spectrum(&a, &cfg))?),
                EXIT_OK,
            ))
        }
        Command::Compare(c) => {
            validate(&c)?;
            let a = load_matrix(&c)?;
            let solver = full_spectrum(&a, c.tol);
            let cfg = OracleConfig {
                theta_steps: c.theta_steps,
                ..OracleConfig::default()
            };
            let oracle = oracle_spectrum(&a, &cfg);
            // The sweep cannot resolve finer than its angular step.
            let grid = std::f64::consts::TAU * a.max_abs().max(1.0) / c.theta_steps as f64;
            let tol = c.tol.max(grid);
            let diff = spectra_equal(&solver, &oracle, tol);
            if !diff.hausdorff_distance.is_finite() && !(solver.is_empty() || oracle.is_empty()) {
                return Err(CliError::Numeric("non-finite distance".into()));
            }
            let equal = diff.is_equal();
            let report = CompareReport {
                solver: checked_report(&solver)?,
                oracle: checked_report(&oracle)?,
                hausdorff_distance: diff.hausdorff_distance,
                tol,
                equal,
            };
            Ok((to_json(&report), if equal { EXIT_OK } else { EXIT_FALSE }))
        }
        Command::PreserverCheck(c) => {
            validate(&c)?;
            let m = load_operator(&c)?;
            let v = check_preserver(&m, c.seed, c.count, c.tol);
            let failure = v.failure.as_ref().map(|f| match f {
                Failure::IdentityNotFixed => "identity-not-fixed".to_string(),
                Failure::NotInvertible => "not-invertible".to_string(),
                Failure::SpectrumMismatch => "spectrum-mismatch".to_string(),
                Failure::NotCanonical(msg) => format!("not-canonical: {msg}"),
            });
            let (witness_spectrum, image_spectrum) = match &v.spectra {
                Some((s1, s2)) => (Some(checked_report(s1)?), Some(checked_report(s2)?)),
                None => (None, None),
            };
            let report = VerdictReport {
                is_preserver: v.is_preserver,
                failure,
                witness: v.witness.map(|w| w.0),
                witness_spectrum,
                image_spectrum,
                q: v.q_recovered.map(|q| q.matrix().0),
            };
            let code = if v.is_preserver { EXIT_OK } else { EXIT_FALSE };
            Ok((to_json(&report), code))
        }
        Command::RecoverQ(c) => {
            validate(&c)?;
            let m = load_operator(&c)?;
            match recover_q(&m, c.tol) {
                Ok(q) => Ok((to_json(&QReport { q: q.matrix().0 }), EXIT_OK)),
                Err(e) => {
                    let body = ErrorBody {
                        kind: "not-canonical",
                        message: e.to_string(),
                    };
                    Ok((to_json(&ErrorReport { error: body }), EXIT_FALSE))
                }
            }
        }
        Command::Battery(c) => {
            let matrices =
                battery_gen(c.seed, c.count).map_err(|e| CliError::Input(e.to_string()))?;
            let report = BatteryReport {
                seed: c.seed,
                count: c.count,
                matrices: matrices.iter().map(|m| m.0).collect(),
            };
            Ok((to_json(&report), EXIT_OK))
        }
    }
}

/// Runs the CLI on `args` (including the program name) and returns the
/// exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(stderr, "{e}");
                EXIT_INPUT
            } else {
                let _ = write!(stdout, "{e}");
                EXIT_OK
            };
            return code;
        }
    };
    match execute(cli.command) {
        Ok((doc, code)) => {
            let _ = writeln!(stdout, "{doc}");
            code
        }
        Err(CliError::Input(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_INPUT
        }
        Err(CliError::Numeric(msg)) => {
            let _ = writeln!(stderr, "numerical failure: {msg}");
            EXIT_NUMERIC
        }
    }
}
