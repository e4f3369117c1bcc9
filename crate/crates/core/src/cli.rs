//! Command-line driver. Reports are `key: value` lines on standard output.
//!
//! Exit codes: 0 success, 1 usage error, 2 unreadable or invalid input,
//! 3 search budget exhausted, 4 check failed (invalid diagram, rejected
//! certificate, failed round trip).

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;

use crate::colimit::{cone_member, divisible, equal_at, ColimitElement};
use crate::confluence::{
    induced_map, search_confluence, verify_certificate, ConfluenceCertificate, Direction, SearchBudget,
};
use crate::diagram::SequenceDiagram;
use crate::formats::{emit_certificate, parse_certificate, parse_diagram, parse_diagram_unchecked, FormatError};
use crate::invariants::{colimit_rank, noniso_evidence, steinitz};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_EXHAUSTED: i32 = 3;
pub const EXIT_CHECK_FAILED: i32 = 4;

/// Stages beyond the stored ones considered by default for periodic
/// diagrams.
const DEFAULT_HORIZON: usize = 32;

type Diagram = SequenceDiagram<BigInt>;
type Element = ColimitElement<BigInt>;

#[derive(Parser, Debug)]
#[command(name = "confluent", version, about = "Confluence certificates for colimits of Z^r sequences")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a diagram's invariants.
    Validate { diagram: PathBuf },
    /// Check a certificate between two diagrams.
    Verify { a: PathBuf, b: PathBuf, cert: PathBuf },
    /// Search for a certificate within a budget.
    Search {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        bound: u64,
        #[arg(long)]
        horizon: usize,
        #[arg(long, default_value_t = 1_000_000)]
        nodes: usize,
        /// Write the certificate here instead of printing it.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Image of a colimit element under the induced isomorphism.
    Map {
        a: PathBuf,
        b: PathBuf,
        cert: PathBuf,
        #[arg(long)]
        element: String,
        /// Map from B to A.
        #[arg(long)]
        backward: bool,
    },
    /// Whether two elements agree in the colimit.
    Equal {
        diagram: PathBuf,
        #[arg(long)]
        e1: String,
        #[arg(long)]
        e2: String,
        #[command(flatten)]
        horizon: HorizonArg,
    },
    /// Whether an element lies in the positive cone.
    Cone {
        diagram: PathBuf,
        #[arg(long)]
        element: String,
        #[command(flatten)]
        horizon: HorizonArg,
    },
    /// Whether an element is divisible by m in the colimit.
    Divisible {
        diagram: PathBuf,
        #[arg(long)]
        element: String,
        #[arg(long)]
        m: BigInt,
        #[command(flatten)]
        horizon: HorizonArg,
    },
    /// Colimit rank, supernatural number and non-isomorphism evidence.
    Invariants { a: PathBuf, b: Option<PathBuf> },
}

#[derive(Args, Debug)]
struct HorizonArg {
    /// Last stage to look at; defaults to the stored length, or 32 stages
    /// for periodic diagrams.
    #[arg(long)]
    horizon: Option<usize>,
}

impl HorizonArg {
    fn resolve(&self, d: &Diagram, stages: &[usize]) -> usize {
        self.horizon.unwrap_or_else(|| {
            let base = if d.is_periodic() { d.len().max(DEFAULT_HORIZON) } else { d.len() };
            stages.iter().copied().fold(base, usize::max)
        })
    }
}

/// Input problem reported with exit code 2.
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

type Outcome = Result<i32, InputError>;

/// Runs the command line `args` (program name first), writing the report to
/// `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    let mut report = Vec::new();
    let code = match dispatch(cli.command, &mut report) {
        Ok(code) => code,
        Err(InputError(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INPUT
        }
    };
    let _ = out.write_all(&report);
    code
}

fn read(path: &Path) -> Result<String, InputError> {
    fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn load_diagram(path: &Path) -> Result<Diagram, InputError> {
    parse_diagram(&read(path)?).map_err(|e| in_file(path, e))
}

fn load_certificate(path: &Path) -> Result<ConfluenceCertificate<BigInt>, InputError> {
    parse_certificate(&read(path)?).map_err(|e| in_file(path, e))
}

fn in_file(path: &Path, e: FormatError) -> InputError {
    InputError(format!("{}: {e}", path.display()))
}

fn element(text: &str) -> Result<Element, InputError> {
    Ok(text.parse::<Element>()?)
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn dispatch(command: Command, out: &mut Vec<u8>) -> Outcome {
    match command {
        Command::Validate { diagram } => validate(&diagram, out),
        Command::Verify { a, b, cert } => verify(&a, &b, &cert, out),
        Command::Search {
            a,
            b,
            depth,
            bound,
            horizon,
            nodes,
            emit,
        } => {
            let budget = SearchBudget {
                depth,
                entry_bound: bound,
                stage_horizon: horizon,
                node_limit: nodes,
            };
            search(&a, &b, budget, emit.as_deref(), out)
        }
        Command::Map {
            a,
            b,
            cert,
            element: e,
            backward,
        } => map(&a, &b, &cert, &e, backward, out),
        Command::Equal {
            diagram,
            e1,
            e2,
            horizon,
        } => {
            let d = load_diagram(&diagram)?;
            let (x, y) = (element(&e1)?, element(&e2)?);
            let h = horizon.resolve(&d, &[x.stage, y.stage]);
            writeln!(out, "equal: {}", equal_at(&d, &x, &y, h)?)?;
            Ok(EXIT_OK)
        }
        Command::Cone {
            diagram,
            element: e,
            horizon,
        } => {
            let d = load_diagram(&diagram)?;
            let x = element(&e)?;
            let h = horizon.resolve(&d, &[x.stage]);
            writeln!(out, "cone: {}", cone_member(&d, &x, h)?)?;
            Ok(EXIT_OK)
        }
        Command::Divisible {
            diagram,
            element: e,
            m,
            horizon,
        } => {
            let d = load_diagram(&diagram)?;
            let x = element(&e)?;
            let h = horizon.resolve(&d, &[x.stage]);
            writeln!(out, "divisible: {}", divisible(&d, &x, &m, h)?)?;
            Ok(EXIT_OK)
        }
        Command::Invariants { a, b } => invariants(&a, b.as_deref(), out),
    }
}

fn validate(path: &Path, out: &mut Vec<u8>) -> Outcome {
    let d = parse_diagram_unchecked(&read(path)?).map_err(|e| in_file(path, e))?;
    let report = d.validate();
    writeln!(out, "valid: {}", yes_no(report.is_clean()))?;
    writeln!(out, "mode: {}", d.mode())?;
    writeln!(out, "stages: {}", d.len())?;
    for v in &report.violations {
        writeln!(out, "violation: {v}")?;
    }
    Ok(if report.is_clean() { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn verify(a: &Path, b: &Path, cert: &Path, out: &mut Vec<u8>) -> Outcome {
    let (da, db, c) = (load_diagram(a)?, load_diagram(b)?, load_certificate(cert)?);
    let report = verify_certificate(&da, &db, &c)?;
    writeln!(out, "accepted: {}", yes_no(report.accepted()))?;
    writeln!(out, "levels: {}", report.levels)?;
    writeln!(out, "infinite: {}", yes_no(report.infinite))?;
    if let Some(f) = &report.failure {
        writeln!(out, "failure: {f}")?;
        return Ok(EXIT_CHECK_FAILED);
    }
    Ok(EXIT_OK)
}

fn search(a: &Path, b: &Path, budget: SearchBudget, emit: Option<&Path>, out: &mut Vec<u8>) -> Outcome {
    let (da, db) = (load_diagram(a)?, load_diagram(b)?);
    let outcome = search_confluence(&da, &db, budget)?;
    let Some(cert) = outcome.certificate else {
        writeln!(out, "result: budget exhausted")?;
        writeln!(out, "nodes: {}", outcome.nodes)?;
        writeln!(out, "node_limit_reached: {}", yes_no(outcome.hit_node_limit))?;
        return Ok(EXIT_EXHAUSTED);
    };
    writeln!(out, "result: found")?;
    writeln!(out, "nodes: {}", outcome.nodes)?;
    writeln!(out, "depth: {}", cert.depth())?;
    let text = emit_certificate(&cert);
    match emit {
        Some(path) => {
            fs::write(path, &text).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
            writeln!(out, "certificate: {}", path.display())?;
        }
        None => write!(out, "{text}")?,
    }
    Ok(EXIT_OK)
}

fn map(a: &Path, b: &Path, cert: &Path, e: &str, backward: bool, out: &mut Vec<u8>) -> Outcome {
    let (da, db, c) = (load_diagram(a)?, load_diagram(b)?, load_certificate(cert)?);
    let x = element(e)?;
    let report = verify_certificate(&da, &db, &c)?;
    if let Some(f) = report.failure {
        writeln!(out, "accepted: no")?;
        writeln!(out, "failure: {f}")?;
        return Ok(EXIT_CHECK_FAILED);
    }
    let direction = if backward { Direction::Backward } else { Direction::Forward };
    let image = induced_map(&da, &db, &c, direction, &x)?;
    writeln!(out, "image: {image}")?;
    Ok(EXIT_OK)
}

fn invariants(a: &Path, b: Option<&Path>, out: &mut Vec<u8>) -> Outcome {
    let da = load_diagram(a)?;
    let db = b.map(load_diagram).transpose()?;
    let named = std::iter::once(("A", &da)).chain(db.as_ref().map(|d| ("B", d)));
    for (name, d) in named {
        match colimit_rank(d) {
            Ok(r) => {
                writeln!(out, "{name}.rank: {}", r.rank)?;
                writeln!(out, "{name}.rank_stabilized: {}", yes_no(r.stabilized))?;
            }
            Err(e) => writeln!(out, "{name}.rank: unavailable ({e})")?,
        }
        match steinitz(d) {
            Ok(s) => writeln!(out, "{name}.supernatural: {s}")?,
            Err(e) => writeln!(out, "{name}.supernatural: unavailable ({e})")?,
        }
    }
    if let Some(db) = &db {
        let report = noniso_evidence(&da, db);
        writeln!(out, "evidence: {}", report.evidence.len())?;
        for e in &report.evidence {
            writeln!(out, "{}: {}", e.strength, e.detail)?;
        }
        for n in &report.notes {
            writeln!(out, "note: {n}")?;
        }
    }
    Ok(EXIT_OK)
}
