//! Trace, summary and table writers. Files are written to a temporary
//! sibling and renamed into place.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use restart_lp::restart::{ConvergenceTrace, SolveOutcome, SolveStatus};

use crate::{CliError, CliResult};

/// Bumped whenever a summary field is added, removed or renamed.
pub const SUMMARY_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Summary {
    pub schema_version: u32,
    /// `optimal`, `iteration_limit` or `diverged`.
    pub status: String,
    pub iterations: usize,
    /// `None` when the run diverged before any finite check.
    pub kkt_error: Option<f64>,
    pub restart_count: usize,
    pub restart_lengths: Vec<usize>,
    pub wall_time_seconds: f64,
    pub eta: f64,
    pub omega: f64,
}

impl Summary {
    pub fn from_outcome(out: &SolveOutcome, record_wall_time: bool) -> Self {
        Self {
            schema_version: SUMMARY_SCHEMA_VERSION,
            status: match out.status {
                SolveStatus::Optimal => "optimal",
                SolveStatus::IterationLimit => "iteration_limit",
            }
            .into(),
            iterations: out.iterations,
            kkt_error: Some(out.residuals.kkt_error),
            restart_count: out.restart_lengths.len(),
            restart_lengths: out.restart_lengths.clone(),
            wall_time_seconds: if record_wall_time { out.wall_time_seconds } else { 0.0 },
            eta: out.eta,
            omega: out.omega,
        }
    }

    /// A diverged run keeps only the iteration and the last finite check.
    pub fn diverged(iteration: usize, last_kkt: Option<f64>, eta: f64, omega: f64) -> Self {
        Self {
            schema_version: SUMMARY_SCHEMA_VERSION,
            status: "diverged".into(),
            iterations: iteration,
            kkt_error: last_kkt,
            restart_count: 0,
            restart_lengths: Vec::new(),
            wall_time_seconds: 0.0,
            eta,
            omega,
        }
    }
}

pub fn write_atomic(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let io = |e: std::io::Error| CliError::Io(format!("cannot write {}: {e}", path.display()));
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path
        .file_name()
        .ok_or_else(|| CliError::Io(format!("{} is not a file path", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp", name.to_string_lossy()));
    let mut f = std::fs::File::create(&tmp).map_err(io)?;
    f.write_all(bytes).map_err(io)?;
    f.sync_all().map_err(io)?;
    std::fs::rename(&tmp, path).map_err(io)
}

/// CSV of serializable rows with a header row.
pub fn csv_bytes<T: Serialize>(rows: &[T], header: &[&str]) -> CliResult<Vec<u8>> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(header).map_err(|e| CliError::Io(e.to_string()))?;
    for r in rows {
        w.serialize(r).map_err(|e| CliError::Io(e.to_string()))?;
    }
    w.into_inner().map_err(|e| CliError::Io(e.to_string()))
}

pub const TRACE_COLUMNS: [&str; 9] = [
    "iteration",
    "outer_n",
    "inner_t",
    "normalized_gap",
    "kkt_avg",
    "kkt_last",
    "radius",
    "restart_flag",
    "elapsed_seconds",
];

pub fn trace_csv(trace: &ConvergenceTrace) -> CliResult<Vec<u8>> {
    csv_bytes(&trace.records, &TRACE_COLUMNS)
}

pub fn json_bytes<T: Serialize>(value: &T) -> CliResult<Vec<u8>> {
    let mut v = serde_json::to_vec_pretty(value).map_err(|e| CliError::Io(e.to_string()))?;
    v.push(b'\n');
    Ok(v)
}

/// Writes to `path`, or to stdout without one.
pub fn emit(path: Option<&Path>, bytes: &[u8]) -> CliResult<()> {
    match path {
        Some(p) => write_atomic(p, bytes),
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|e| CliError::Io(format!("stdout: {e}"))),
    }
}
