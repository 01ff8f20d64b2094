//! `sweep-restarts`: Fixed(4ᵏ) for k = 1..9, adaptive and no restarts on
//! one instance, run in parallel and ranked by iterations to reach the gap
//! target, then by the final gap.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use restart_lp::restart::{run_restarted, RestartScheme};

use crate::args::SweepArgs;
use crate::config::{load_problem, resolve_step, solve_options};
use crate::output::{csv_bytes, json_bytes, trace_csv, write_atomic, Summary};
use crate::{CliError, CliResult};

/// Sweeps run past the usual tolerance so the gap target can be reached.
pub const DEFAULT_SWEEP_KKT_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub rank: usize,
    pub scheme: String,
    pub status: String,
    pub iterations: Option<usize>,
    /// First traced iteration whose normalized gap is below the target.
    pub iterations_to_gap: Option<usize>,
    /// Normalized gap at the last traced check; NaN when the run failed.
    pub final_gap: f64,
}

pub fn schemes() -> Vec<(String, RestartScheme)> {
    let mut out: Vec<(String, RestartScheme)> = (1..=9)
        .map(|k| {
            let period = 4usize.pow(k);
            (format!("fixed_{period}"), RestartScheme::Fixed { period })
        })
        .collect();
    out.push(("adaptive".into(), RestartScheme::adaptive()));
    out.push(("none".into(), RestartScheme::NoRestart));
    out
}

/// Best first: reaching the target beats not reaching it, fewer iterations
/// beat more, then a smaller final gap (NaN last), then the label.
pub fn compare_rows(a: &SweepRow, b: &SweepRow) -> Ordering {
    let first = match (a.iterations_to_gap, b.iterations_to_gap) {
        (Some(x), Some(y)) => x.cmp(&y),
        (Some(_), None) => Ordering::Less,
        (None, Some(_)) => Ordering::Greater,
        (None, None) => Ordering::Equal,
    };
    first
        .then_with(|| match (a.final_gap.is_nan(), b.final_gap.is_nan()) {
            (false, false) => a.final_gap.total_cmp(&b.final_gap),
            (x, y) => x.cmp(&y),
        })
        .then_with(|| a.scheme.cmp(&b.scheme))
}

pub fn rank(rows: &mut [SweepRow]) {
    rows.sort_by(compare_rows);
    for (i, r) in rows.iter_mut().enumerate() {
        r.rank = i + 1;
    }
}

pub fn cmd_sweep(args: &SweepArgs) -> CliResult<Vec<SweepRow>> {
    if !(args.gap_target > 0.0) {
        return Err(CliError::Usage("--gap-target must be positive".into()));
    }
    let problem = load_problem(&args.run)?;
    let step = resolve_step(&args.run, &problem)?;
    std::fs::create_dir_all(&args.output_dir)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", args.output_dir.display())))?;
    let results: Vec<CliResult<SweepRow>> = schemes()
        .into_par_iter()
        .map(|(label, scheme)| {
            let options = solve_options(&args.run, &problem, step, scheme, DEFAULT_SWEEP_KKT_TOLERANCE);
            let dir = &args.output_dir;
            match run_restarted(&problem, &options) {
                Ok(out) => {
                    write_atomic(&dir.join(format!("trace_{label}.csv")), &trace_csv(&out.trace)?)?;
                    let summary = Summary::from_outcome(&out, options.record_wall_time);
                    write_atomic(&dir.join(format!("summary_{label}.json")), &json_bytes(&summary)?)?;
                    let iterations_to_gap = out
                        .trace
                        .records
                        .iter()
                        .find(|r| r.normalized_gap < args.gap_target)
                        .map(|r| r.iteration);
                    Ok(SweepRow {
                        rank: 0,
                        scheme: label,
                        status: summary.status,
                        iterations: Some(out.iterations),
                        iterations_to_gap,
                        final_gap: out.trace.records.last().map_or(f64::NAN, |r| r.normalized_gap),
                    })
                }
                Err(e) => {
                    log::warn!("{label}: {e}");
                    let status = match e {
                        restart_lp::Error::Diverged { .. } => "diverged".to_string(),
                        other => format!("error: {other}"),
                    };
                    Ok(SweepRow {
                        rank: 0,
                        scheme: label,
                        status,
                        iterations: None,
                        iterations_to_gap: None,
                        final_gap: f64::NAN,
                    })
                }
            }
        })
        .collect();
    let mut rows = results.into_iter().collect::<CliResult<Vec<_>>>()?;
    rank(&mut rows);
    let header = ["rank", "scheme", "status", "iterations", "iterations_to_gap", "final_gap"];
    write_atomic(&args.output_dir.join("ranking.csv"), &csv_bytes(&rows, &header)?)?;
    for r in &rows {
        println!(
            "{:>2} {:<12} {:<16} to-gap {:>10} final gap {:.3e}",
            r.rank,
            r.scheme,
            r.status,
            r.iterations_to_gap.map_or("-".to_string(), |v| v.to_string()),
            r.final_gap
        );
    }
    Ok(rows)
}
