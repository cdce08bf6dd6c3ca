//! Command line front end.
//!
//! Exit codes: 0 success, 2 bad input or violated hypothesis, 3 form not
//! negative definite, 4 capacity exceeded or missing free part, 5 a failed
//! exactness, audit or grading check.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::cubecx::max_cells_from_env;
use crate::error::{Error, Result};
use crate::fixtures;
use crate::plumbing::PlumbingGraph;
use crate::quadratic::TParam;
use crate::report::{self, SpincSelector};

#[derive(Debug, Parser)]
#[command(name = "plumbcalc", version, about = "Upsilon, tau and d invariants of graph knots from plumbing trees")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Υ(t) breakpoints, τ and d for each Spin^c class.
    Invariants {
        #[command(flatten)]
        common: Common,
        /// Audit Υ against the disk bound on rep + 2Qz with ‖z‖∞ ≤ R; 0 disables.
        #[arg(long, default_value_t = 2)]
        audit_radius: i64,
        /// Also sample Υ at t = 2m/D.
        #[arg(long, value_name = "D")]
        t_grid: Option<i64>,
    },
    /// Persistent homology of the deformed lattice complex at one t.
    Homology {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = parse_t)]
        t: TParam,
        /// Origin box [−N, N]^s; grown around the minimiser if too small.
        #[arg(long = "box", value_name = "N")]
        box_radius: Option<i64>,
    },
    /// Checks the surgery exact sequence at a vertex away from v0.
    Verify {
        #[arg(value_name = "INPUT")]
        input: String,
        #[arg(long)]
        vertex: String,
        #[arg(long, value_parser = parse_t, default_value = "0")]
        t: TParam,
        /// Window multiplier W: coordinate i ranges over ±(2W + 1)|Q_ii|.
        #[arg(long, value_name = "W")]
        window: Option<i64>,
        /// Exponent cutoff for the truncated coefficient ring.
        #[arg(long, default_value_t = 10)]
        qmax: i64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// CSV of Υ(t) at breakpoints and on a grid, one series per class.
    Plot {
        #[arg(value_name = "INPUT")]
        input: String,
        #[arg(long, default_value = "all")]
        spinc: SpincSelector,
        #[arg(long, default_value_t = 8, value_name = "D")]
        t_grid: i64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Built-in fixture graphs.
    Fixtures {
        #[command(subcommand)]
        action: FixtureAction,
    },
}

#[derive(Debug, Args)]
pub struct Common {
    /// Path to a graph file, or the name of a built-in fixture.
    #[arg(value_name = "INPUT")]
    pub input: String,
    #[arg(long, default_value = "all")]
    pub spinc: SpincSelector,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum FixtureAction {
    List,
    /// Prints a fixture in the text format.
    Show { name: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

fn parse_t(s: &str) -> std::result::Result<TParam, String> {
    TParam::parse(s).map_err(|e| e.to_string())
}

/// Reads a graph from a path, falling back to a built-in fixture name.
pub fn load_input(input: &str) -> Result<(String, PlumbingGraph)> {
    let path = Path::new(input);
    if path.exists() {
        let text = std::fs::read_to_string(path)?;
        let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| input.to_string());
        return Ok((name, PlumbingGraph::parse(&text)?));
    }
    match fixtures::fixture(input) {
        Some(f) => Ok((f.name.to_string(), fixtures::load(f.name)?)),
        None => Err(Error::Io(std::io::Error::new(std::io::ErrorKind::NotFound, format!("no such file or fixture: {input}")))),
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn json<T: serde::Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Invariants { common, audit_radius, t_grid } => {
            let (name, graph) = load_input(&common.input)?;
            let audit = (audit_radius > 0).then_some(audit_radius);
            let r = report::invariant_report(&name, &graph, common.spinc, audit, t_grid)?;
            let text = match common.format {
                Format::Json => json(&r)?,
                Format::Csv => report::upsilon_csv(&r, t_grid.unwrap_or(8)),
            };
            emit(&common.out, &text)
        }
        Command::Homology { common, t, box_radius } => {
            if box_radius.is_some_and(|n| n < 0) {
                return Err(Error::InvalidParams("box radius must be nonnegative".into()));
            }
            let (name, graph) = load_input(&common.input)?;
            let r = report::homology_report(&name, &graph, common.spinc, &t, box_radius, max_cells_from_env())?;
            let text = match common.format {
                Format::Json => json(&r)?,
                Format::Csv => report::homology_csv(&r),
            };
            emit(&common.out, &text)
        }
        Command::Verify { input, vertex, t, window, qmax, out } => {
            let (name, graph) = load_input(&input)?;
            let r = report::verify_report(&name, &graph, &vertex, &t, window, qmax)?;
            emit(&out, &json(&r)?)?;
            match r.exactness.first_failure() {
                Some(c) => Err(Error::Exactness { check: c.name.clone(), detail: c.detail.clone() }),
                None => Ok(()),
            }
        }
        Command::Plot { input, spinc, t_grid, out } => {
            if t_grid <= 0 {
                return Err(Error::InvalidParams("t-grid denominator must be positive".into()));
            }
            let (name, graph) = load_input(&input)?;
            let r = report::invariant_report(&name, &graph, spinc, None, None)?;
            emit(&out, &report::upsilon_csv(&r, t_grid))
        }
        Command::Fixtures { action: FixtureAction::List } => {
            let mut text = String::new();
            for f in fixtures::FIXTURES {
                text.push_str(&format!("{:<14} {}\n", f.name, f.description));
            }
            emit(&None, &text)
        }
        Command::Fixtures { action: FixtureAction::Show { name } } => match fixtures::fixture(&name) {
            Some(f) => emit(&None, f.text),
            None => Err(Error::InvalidParams(format!("unknown fixture {name}"))),
        },
    }
}

/// Parses arguments, runs, and maps errors to the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
