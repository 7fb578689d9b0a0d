use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use grbott::census::records;
use grbott::digraph::{build_digraph, to_dot};
use grbott::model::MatrixFile;
use grbott::report::ReportOptions;
use grbott::{BlockPermutation, DimensionVector, Error, Report, VectorMatrix};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "grbott", version, about = "Invariants of generalized real Bott manifolds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a matrix file describes an admissible matrix.
    Validate { file: PathBuf },
    /// Print every computed invariant.
    Report {
        file: PathBuf,
        #[arg(long)]
        json: bool,
        /// Include the labeled digraph in DOT form.
        #[arg(long)]
        dot: bool,
        /// Include the j-th homotopy group, j >= 2.
        #[arg(long, value_name = "J")]
        homotopy: Option<usize>,
    },
    /// Enumerate all normalized matrices with the given block sizes.
    Census {
        #[arg(long, value_delimiter = ',', required = true)]
        dims: Vec<usize>,
        /// Keep one matrix per conjugation orbit.
        #[arg(long)]
        dedupe: bool,
    },
    /// Print the normal form as a matrix file.
    Normalize { file: PathBuf },
    /// Print the labeled digraph of the normal form in DOT format.
    Dot { file: PathBuf },
}

enum Failure {
    /// Exit 1: the input is well formed but the matrix is rejected.
    Domain(String),
    /// Exit 2: the input could not be read.
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Inadmissible(_) | Error::NotTriangulable(_) | Error::NonUnitDiagonal { .. } => {
                Failure::Domain(e.to_string())
            }
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn load(path: &Path) -> Result<VectorMatrix, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let file: MatrixFile = serde_json::from_str(&text)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    file.to_matrix()
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn normal_form(a: &VectorMatrix) -> Result<(BlockPermutation, VectorMatrix), Failure> {
    if let Some(failure) = a.first_failing_minor() {
        return Err(Error::Inadmissible(failure.to_string()).into());
    }
    Ok(a.normalize()?)
}

fn print_json(out: &mut impl Write, value: &impl Serialize) -> Result<(), Failure> {
    serde_json::to_writer(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

#[derive(Serialize)]
struct SummaryLine<'a> {
    summary: &'a grbott::census::Summary,
}

fn run(cli: Cli) -> Result<(), Failure> {
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    match cli.command {
        Command::Validate { file } => {
            let a = load(&file)?;
            match a.first_failing_minor() {
                None => writeln!(out, "valid")?,
                Some(failure) => return Err(Failure::Domain(format!("invalid: {failure}"))),
            }
        }
        Command::Report {
            file,
            json,
            dot,
            homotopy,
        } => {
            let a = load(&file)?;
            let report = Report::build(&a, &ReportOptions { dot, homotopy })?;
            if json {
                print_json(&mut out, &report)?;
            } else {
                write!(out, "{report}")?;
            }
        }
        Command::Census { dims, dedupe } => {
            let dims = DimensionVector::new(dims).map_err(|e| Failure::Input(e.to_string()))?;
            let (recs, summary) =
                records(&dims, dedupe).map_err(|e| Failure::Input(e.to_string()))?;
            for r in &recs {
                print_json(&mut out, r)?;
            }
            print_json(&mut out, &SummaryLine { summary: &summary })?;
        }
        Command::Normalize { file } => {
            let (perm, b) = normal_form(&load(&file)?)?;
            print_json(&mut out, &MatrixFile::from(&b))?;
            let order: Vec<String> = perm.order().iter().map(|i| (i + 1).to_string()).collect();
            eprintln!("block order {}", order.join(","));
        }
        Command::Dot { file } => {
            let (_, b) = normal_form(&load(&file)?)?;
            write!(out, "{}", to_dot(&build_digraph(&b)?))?;
        }
    }
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
