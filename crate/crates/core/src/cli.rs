//! Command-line front end.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or parameter
//! error, 3 genericity or degeneracy error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::km_cube::{km_start_code, objective_c, objective_d, KmError, KmParams, VertexCode};
use crate::linalg::{format_vector, parse_rational, LinalgError, Rational, DEFAULT_DECIMAL_DIGITS};
use crate::parametric::{gass_saaty_path, shadow_vertex_solve, SimplexError};
use crate::polytope::{
    make_box, make_klee_minty, Basis, BoxBounds, Generator, HPolytope, PolytopeError,
};
use crate::render::{path_csv, polygon_csv, shadow_svg};
use crate::shadow::{project_all, shadow_of_vertices, ProjectionPair, ShadowError};
use crate::verify::{box_bound, km_lemmas, km_path, km_shadow, Report, VerifyError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    Km(#[from] KmError),
    #[error(transparent)]
    Shadow(#[from] ShadowError),
    #[error(transparent)]
    Simplex(#[from] SimplexError),
    #[error("verification failed")]
    VerificationFailed,
}

impl From<LinalgError> for CliError {
    fn from(e: LinalgError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<VerifyError> for CliError {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::Km(e) => e.into(),
            VerifyError::Shadow(e) => e.into(),
            VerifyError::Simplex(e) => e.into(),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::VerificationFailed => 1,
            CliError::Simplex(
                SimplexError::Genericity { .. } | SimplexError::Degenerate { .. },
            ) => 3,
            CliError::Km(KmError::FormulaMismatch(_)) => 1,
            _ => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "shadowlab",
    version,
    about = "Exact polytope shadows and parametric simplex paths"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a generated polytope in .hpoly format.
    Gen(GenArgs),
    /// Hull of the projected vertices of a polytope.
    Shadow(ShadowArgs),
    /// Parametric simplex path for (c + lambda d)^T x.
    Path(PathArgs),
    /// Maximize c^T x with the shadow vertex method.
    Solve(SolveArgs),
    /// Run a verification suite and print a key: value report.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum GenKind {
    Box,
    Km,
}

#[derive(Debug, Args)]
struct GenArgs {
    kind: GenKind,
    /// Dimension; for a box it may be omitted when --bounds is given.
    #[arg(long)]
    dim: Option<usize>,
    /// Klee-Minty parameter, 0 < eps < 1/2.
    #[arg(long, default_value = "1/4")]
    eps: String,
    /// Box bounds as l1,u1,l2,u2,...; defaults to the unit cube.
    #[arg(long)]
    bounds: Option<String>,
    /// Output file; stdout when omitted.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ObjectiveArgs {
    /// Comma-separated rationals.
    #[arg(long, allow_hyphen_values = true)]
    c: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    d: Option<String>,
    /// Use the Klee-Minty shadow pair c = (eps^{3(d-1)}, ..., eps^3, 0), d = (0, ..., 0, 1).
    #[arg(long, conflicts_with_all = ["c", "d"])]
    km_objectives: bool,
}

#[derive(Debug, Args)]
struct ShadowArgs {
    polytope: PathBuf,
    #[command(flatten)]
    objectives: ObjectiveArgs,
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Overlay the parametric path on the SVG (needs --km-start or --basis).
    #[arg(long)]
    path_overlay: bool,
    #[command(flatten)]
    start: StartArgs,
    #[arg(long, default_value_t = DEFAULT_DECIMAL_DIGITS)]
    digits: usize,
}

#[derive(Debug, Args)]
struct StartArgs {
    /// Start basis as comma-separated 0-based row indices.
    #[arg(long)]
    basis: Option<String>,
    /// Start from the Klee-Minty vertex minimizing x_d.
    #[arg(long, conflicts_with = "basis")]
    km_start: bool,
}

#[derive(Debug, Args)]
struct PathArgs {
    polytope: PathBuf,
    #[command(flatten)]
    objectives: ObjectiveArgs,
    #[command(flatten)]
    start: StartArgs,
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_DECIMAL_DIGITS)]
    digits: usize,
}

#[derive(Debug, Args)]
struct SolveArgs {
    polytope: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    c: String,
    #[command(flatten)]
    start: StartArgs,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Suite {
    KmShadow,
    KmLemmas,
    BoxBound,
    PathOracle,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    suite: Suite,
    #[arg(long, default_value_t = 4)]
    dim: usize,
    #[arg(long, default_value = "1/4")]
    eps: String,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Extra evenly spaced lambda samples for the path oracle.
    #[arg(long, default_value_t = 16)]
    samples: usize,
    /// Also write the report to this file.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Parse arguments, run, and return the process exit code. Normal output
/// goes to `out`; errors are printed to stderr.
pub fn run<I, T>(args: I, out: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            if !matches!(e, CliError::VerificationFailed) {
                eprintln!("error: {e}");
            }
            e.exit_code()
        }
    }
}

fn dispatch(command: Command, out: &mut impl Write) -> Result<(), CliError> {
    match command {
        Command::Gen(a) => cmd_gen(a, out),
        Command::Shadow(a) => cmd_shadow(a, out),
        Command::Path(a) => cmd_path(a, out),
        Command::Solve(a) => cmd_solve(a, out),
        Command::Verify(a) => cmd_verify(a, out),
    }
}

fn say(out: &mut impl Write, line: impl AsRef<str>) -> Result<(), CliError> {
    writeln!(out, "{}", line.as_ref()).map_err(|source| CliError::Io {
        path: PathBuf::from("<stdout>"),
        source,
    })
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn parse_list(text: &str) -> Result<Vec<Rational>, CliError> {
    text.split(',')
        .map(|s| parse_rational(s).map_err(CliError::from))
        .collect()
}

fn parse_indices(text: &str) -> Result<Vec<usize>, CliError> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("invalid row index {s:?}")))
        })
        .collect()
}

fn load_polytope(path: &Path) -> Result<HPolytope, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(HPolytope::from_hpoly(&text)?)
}

fn km_params_of(p: &HPolytope) -> Option<KmParams> {
    match p.generator() {
        Some(Generator::KleeMinty { eps }) => KmParams::new(p.dim(), eps.clone()).ok(),
        _ => None,
    }
}

fn objectives(
    p: &HPolytope,
    a: &ObjectiveArgs,
) -> Result<(Vec<Rational>, Vec<Rational>), CliError> {
    if a.km_objectives {
        let params = km_params_of(p).ok_or_else(|| {
            CliError::Usage("--km-objectives needs a polytope generated as klee-minty".into())
        })?;
        return Ok((objective_c(&params), objective_d(&params)));
    }
    match (&a.c, &a.d) {
        (Some(c), Some(d)) => Ok((parse_list(c)?, parse_list(d)?)),
        _ => Err(CliError::Usage(
            "give --c and --d, or --km-objectives".into(),
        )),
    }
}

fn start_basis(p: &HPolytope, s: &StartArgs) -> Result<Basis, CliError> {
    if s.km_start {
        let params = km_params_of(p).ok_or_else(|| {
            CliError::Usage("--km-start needs a polytope generated as klee-minty".into())
        })?;
        return Ok(km_start_code(&params)?.basis());
    }
    match &s.basis {
        Some(b) => Ok(Basis::new(parse_indices(b)?)),
        None => Err(CliError::Usage("give --basis or --km-start".into())),
    }
}

fn vertex_label(p: &HPolytope, basis: &Basis) -> String {
    if let Some(code) = km_params_of(p).and_then(|_| VertexCode::from_basis(basis, p.dim())) {
        return code.to_string();
    }
    basis
        .indices()
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("+")
}

fn cmd_gen(a: GenArgs, out: &mut impl Write) -> Result<(), CliError> {
    let poly = match a.kind {
        GenKind::Km => {
            let d = a
                .dim
                .ok_or_else(|| CliError::Usage("--dim is required".into()))?;
            make_klee_minty(d, &parse_rational(&a.eps)?)?
        }
        GenKind::Box => {
            let bounds = match &a.bounds {
                Some(text) => {
                    let vals = parse_list(text)?;
                    let d = a.dim.unwrap_or(vals.len() / 2);
                    if d == 0 || vals.len() != 2 * d {
                        return Err(CliError::Usage(format!(
                            "--bounds needs 2 values per coordinate, got {} for dimension {d}",
                            vals.len()
                        )));
                    }
                    let lowers = vals.iter().step_by(2).cloned().collect();
                    let uppers = vals.iter().skip(1).step_by(2).cloned().collect();
                    BoxBounds::new(lowers, uppers)?
                }
                None => match a.dim {
                    Some(d) if d > 0 => BoxBounds::unit_cube(d),
                    _ => return Err(CliError::Usage("--dim must be at least 1".into())),
                },
            };
            make_box(&bounds)
        }
    };
    let text = poly.to_hpoly();
    match &a.out {
        Some(path) => {
            write_file(path, &text)?;
            say(out, format!("rows: {}", poly.num_rows()))?;
            say(out, format!("dim: {}", poly.dim()))?;
            say(out, format!("sparsity: {}", poly.sparsity()))?;
            say(out, format!("written: {}", path.display()))
        }
        None => out
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io {
                path: PathBuf::from("<stdout>"),
                source,
            }),
    }
}

fn cmd_shadow(a: ShadowArgs, out: &mut impl Write) -> Result<(), CliError> {
    let poly = load_polytope(&a.polytope)?;
    let (c, d) = objectives(&poly, &a.objectives)?;
    let pp = ProjectionPair::new(c, d)?;
    let enumeration = poly.enumerate_vertices()?;
    if enumeration.duplicate_bases > 0 {
        eprintln!(
            "warning: {} bases repeat a vertex; the polytope is not simple",
            enumeration.duplicate_bases
        );
    }
    let mut labels = Vec::new();
    let mut points = Vec::new();
    let mut seen = std::collections::BTreeMap::new();
    for (basis, x) in &enumeration.vertices {
        if !seen.contains_key(x) {
            seen.insert(x.clone(), points.len());
            labels.push(vertex_label(&poly, basis));
            points.push(x.clone());
        }
    }
    let shadow = shadow_of_vertices(&pp, &points)?;
    say(out, format!("vertices: {}", points.len()))?;
    say(out, format!("hull_vertices: {}", shadow.len()))?;
    if shadow.polygon.is_degenerate() {
        say(out, "degenerate: true")?;
    }
    if let Some(path) = &a.csv {
        write_file(path, &polygon_csv(&shadow, &labels, a.digits))?;
    }
    if let Some(path) = &a.svg {
        let overlay = if a.path_overlay {
            let start = start_basis(&poly, &a.start)?;
            let route = gass_saaty_path(&poly, pp.c(), pp.d(), &start)?;
            let vertices: Vec<Vec<Rational>> = route.steps.into_iter().map(|s| s.vertex).collect();
            Some(project_all(&pp, &vertices)?)
        } else {
            None
        };
        write_file(
            path,
            &shadow_svg(&shadow.polygon.vertices, overlay.as_deref()),
        )?;
    }
    Ok(())
}

fn cmd_path(a: PathArgs, out: &mut impl Write) -> Result<(), CliError> {
    let poly = load_polytope(&a.polytope)?;
    let (c, d) = objectives(&poly, &a.objectives)?;
    let start = start_basis(&poly, &a.start)?;
    let path = gass_saaty_path(&poly, &c, &d, &start)?;
    say(out, format!("vertices: {}", path.len()))?;
    say(out, format!("finite_breakpoints: {}", path.pivots.len()))?;
    if let Some(file) = &a.csv {
        write_file(file, &path_csv(&path, a.digits))?;
    }
    Ok(())
}

fn cmd_solve(a: SolveArgs, out: &mut impl Write) -> Result<(), CliError> {
    let poly = load_polytope(&a.polytope)?;
    let c = parse_list(&a.c)?;
    let start = start_basis(&poly, &a.start)?;
    let (basis, x) = shadow_vertex_solve(&poly, &c, &start)?;
    say(out, format!("basis: {}", vertex_label(&poly, &basis)))?;
    say(out, format!("vertex: {}", format_vector(&x)))?;
    let value = crate::linalg::dot(&c, &x)?;
    say(out, format!("objective: {value}"))
}

fn cmd_verify(a: VerifyArgs, out: &mut impl Write) -> Result<(), CliError> {
    let eps = parse_rational(&a.eps)?;
    let report: Report = match a.suite {
        Suite::KmShadow => km_shadow(&KmParams::new(a.dim, eps)?)?,
        Suite::KmLemmas => km_lemmas(&KmParams::new(a.dim, eps)?)?,
        Suite::BoxBound => {
            if a.dim == 0 {
                return Err(CliError::Usage("--dim must be at least 1".into()));
            }
            box_bound(a.dim, a.trials, a.seed)?
        }
        Suite::PathOracle => km_path(&KmParams::new(a.dim, eps)?, true, a.samples)?,
    };
    let text = report.to_text();
    out.write_all(text.as_bytes())
        .map_err(|source| CliError::Io {
            path: PathBuf::from("<stdout>"),
            source,
        })?;
    if let Some(path) = &a.out {
        write_file(path, &text)?;
    }
    if report.passed() {
        Ok(())
    } else {
        Err(CliError::VerificationFailed)
    }
}
