//! Command-line front end: `check`, `schemes`, `extend`, `eval` and `verify`.
//!
//! Exit codes: 0 success, 1 unreadable input or bad usage, 2 an invalid
//! document or diagram, 3 a failed verification suite.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use pasting::format::{self, DiagramDocument, FormatError, ModelBlock};
use pasting::harness::{HarnessError, Strategy};

mod commands;
mod render;

pub const SCHEMA_VERSION: u64 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "pasting",
    version,
    about = "Check, extend and evaluate pasting diagrams"
)]
pub struct Cli {
    /// Emit a machine-readable JSON report on stdout.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Span,
    Matrix,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Canonical,
    RedundantPair,
    Reordered,
    ShortestRoute,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Canonical => Strategy::Canonical,
            StrategyArg::RedundantPair => Strategy::RedundantPair,
            StrategyArg::Reordered => Strategy::Reordered,
            StrategyArg::ShortestRoute => Strategy::ShortestRoute,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate the anchored graph and look for a pasting scheme presentation.
    Check { file: PathBuf },
    /// Show the greedy presentation, or all of them.
    Schemes {
        file: PathBuf,
        /// List every presentation (graphs of up to 7 faces)
        #[arg(long)]
        all: bool,
    },
    /// Extend the diagram to a composition scheme.
    Extend {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "canonical")]
        strategy: StrategyArg,
        /// Seed for the redundant-pair strategy.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Evaluate the composite 2-cell in a model.
    Eval {
        file: PathBuf,
        #[arg(long, value_enum)]
        model: ModelArg,
        /// Model assignment file; defaults to the document's model block.
        #[arg(long)]
        assignments: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "canonical")]
        strategy: StrategyArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the uniqueness, Mac Lane and presentation suites on random diagrams.
    Verify {
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "span")]
        model: ModelArg,
        #[arg(long, default_value_t = 5)]
        max_faces: usize,
        #[arg(long, default_value_t = 5)]
        max_path_len: usize,
        #[arg(long, default_value_t = 3)]
        max_object_size: usize,
        /// Random paths per bracketing length in the Mac Lane suite.
        #[arg(long, default_value_t = 3)]
        skeletons: usize,
    },
}

/// A failed command: the exit code and a diagnostic.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }

    pub fn invalid(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INVALID,
            message: message.into(),
        }
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        Failure::invalid(e.to_string())
    }
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::Config(_) => Failure::input(e.to_string()),
            _ => Failure::invalid(e.to_string()),
        }
    }
}

/// What a command produced: human text, the JSON report and the exit code.
pub struct Report {
    pub text: String,
    pub json: Value,
    pub code: i32,
}

pub(crate) fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

pub(crate) fn load(path: &Path) -> Result<DiagramDocument, Failure> {
    let text = read(path)?;
    format::parse(&text).map_err(|e| Failure::invalid(format!("{}:{e}", path.display())))
}

pub(crate) fn load_assignments(path: &Path) -> Result<ModelBlock, Failure> {
    let text = read(path)?;
    format::parse_assignments(&text)
        .map_err(|e| Failure::invalid(format!("{}:{e}", path.display())))
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Check { .. } => "check",
        Command::Schemes { .. } => "schemes",
        Command::Extend { .. } => "extend",
        Command::Eval { .. } => "eval",
        Command::Verify { .. } => "verify",
    }
}

/// Runs one parsed command.
pub fn execute(cli: &Cli) -> Result<Report, Failure> {
    let mut report = match &cli.command {
        Command::Check { file } => commands::check(file)?,
        Command::Schemes { file, all } => commands::schemes(file, *all)?,
        Command::Extend {
            file,
            strategy,
            seed,
        } => commands::extend(file, (*strategy).into(), *seed)?,
        Command::Eval {
            file,
            model,
            assignments,
            strategy,
            seed,
        } => commands::eval(
            file,
            *model,
            assignments.as_deref(),
            (*strategy).into(),
            *seed,
        )?,
        Command::Verify {
            trials,
            seed,
            model,
            max_faces,
            max_path_len,
            max_object_size,
            skeletons,
        } => {
            let cfg = pasting::harness::GeneratorConfig {
                seed: *seed,
                max_faces: *max_faces,
                max_path_len: *max_path_len,
                max_object_size: *max_object_size,
                trials: *trials,
            };
            commands::verify(&cfg, *model, *skeletons)?
        }
    };
    if let Value::Object(map) = &mut report.json {
        let mut full = serde_json::Map::new();
        full.insert("schema_version".into(), json!(SCHEMA_VERSION));
        full.insert("command".into(), json!(command_name(&cli.command)));
        full.extend(std::mem::take(map));
        report.json = Value::Object(full);
    }
    Ok(report)
}

/// Parses `args`, runs the command and writes its output; returns the exit
/// code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{rendered}");
            } else {
                let _ = write!(out, "{rendered}");
            }
            return code;
        }
    };
    match execute(&cli) {
        Ok(report) => {
            if cli.json {
                let text =
                    serde_json::to_string_pretty(&report.json).expect("JSON values serialize");
                let _ = writeln!(out, "{text}");
            } else {
                let _ = write!(out, "{}", report.text);
            }
            report.code
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            if cli.json {
                let value = json!({
                    "schema_version": SCHEMA_VERSION,
                    "command": command_name(&cli.command),
                    "error": f.message,
                    "exit_code": f.code,
                });
                let _ = writeln!(
                    out,
                    "{}",
                    serde_json::to_string_pretty(&value).expect("JSON values serialize")
                );
            }
            f.code
        }
    }
}
