//! Command-line driver for `graphheat`.
//!
//! Every run is reproducible from the graph file, the flags and the root
//! seed. Suites draw their random functions from sub-seeds derived from the
//! root seed and the suite name.

use std::hash::Hasher;
use std::io::Write;
use std::path::Path;

use fnv::FnvHasher;

pub mod args;
mod generate;
mod kernel;
mod verify;

pub use args::{Cli, Command};
pub use verify::{Suite, FUNCTION_RANGE};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("suite `{suite}` not applicable: {reason}")]
    Hypothesis { suite: &'static str, reason: String },
    #[error("{path}: {source}")]
    Graph { path: String, source: graphheat::Error },
    #[error(transparent)]
    Core(#[from] graphheat::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    CheckFailed(String),
}

impl CliError {
    /// 1 for failed checks, 2 for usage, hypothesis, input and I/O errors.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::CheckFailed(_) => 1,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

/// Seed for a named stream under `root`.
pub fn sub_seed(root: u64, label: &str) -> u64 {
    let mut h = FnvHasher::default();
    h.write(label.as_bytes());
    h.write_u64(root);
    h.finish()
}

pub fn run(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Generate(a) => generate::run(&a, stdout),
        Command::Verify(a) => verify::run(&a, stdout, stderr),
        Command::Kernel(a) => kernel::run(&a, stdout, stderr),
    }
}

fn load_graph(path: &Path) -> Result<graphheat::WeightedGraph> {
    graphheat::io::read_graph(path).map_err(|source| CliError::Graph { path: path.display().to_string(), source })
}

/// Writes `bytes` to `path`, or to `stdout` when there is no path.
fn emit(path: Option<&Path>, bytes: &[u8], stdout: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(|source| CliError::Io { path: p.display().to_string(), source }),
        None => stdout.write_all(bytes).map_err(|source| CliError::Io { path: "<stdout>".into(), source }),
    }
}

fn check_times(times: &[f64]) -> Result<()> {
    if times.is_empty() {
        return Err(CliError::Usage("--t needs at least one time".into()));
    }
    match times.iter().find(|t| !(t.is_finite() && **t >= 0.0)) {
        Some(t) => Err(CliError::Usage(format!("times must be finite and >= 0, got {t}"))),
        None => Ok(()),
    }
}

fn console(w: &mut dyn Write, line: std::fmt::Arguments<'_>) {
    // diagnostics only; a closed pipe is not worth failing the run over
    let _ = writeln!(w, "{line}");
}
