//! Grid search over `4⁻⁵..4⁵` for the primal weight (PDHG, EGM) or the
//! step size (ADMM, PPM), scored by the KKT error of the last iterate
//! after a fixed budget of non-restarted iterations.

use serde::{Deserialize, Serialize};

use restart_lp::restart::{run_restarted, RestartScheme, SolveOptions};
use restart_lp::steps::{Method, StepConfig};
use restart_lp::StandardFormLp;

use crate::args::{RunArgs, TuneArgs};
use crate::config::{load_problem, parse_method, parse_setting, resolve_eta, start_point, Setting};
use crate::output::{emit, json_bytes};
use crate::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tuned {
    Omega,
    Eta,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub value: f64,
    /// `None` when the run diverged.
    pub kkt_error: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TuneReport {
    pub parameter: Tuned,
    pub iterations: usize,
    pub grid: Vec<GridPoint>,
    pub chosen: f64,
    pub all_diverged: bool,
}

/// `4⁻⁵, …, 4⁵`.
pub fn grid() -> Vec<f64> {
    (-5..=5).map(|k| 4f64.powi(k)).collect()
}

/// Index of the smallest error; ties and later equal values keep the
/// earlier (smaller) grid value. `None` when every run diverged.
pub fn select(points: &[GridPoint]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, p) in points.iter().enumerate() {
        if let Some(e) = p.kkt_error {
            if best.is_none_or(|(_, b)| e < b) {
                best = Some((i, e));
            }
        }
    }
    best.map(|(i, _)| i)
}

/// Runs the grid. `fixed` is the other parameter's value.
pub fn tune(
    args: &RunArgs,
    problem: &StandardFormLp,
    method: Method,
    which: Tuned,
    fixed: Option<f64>,
) -> CliResult<TuneReport> {
    match (which, method) {
        (Tuned::Omega, Method::Pdhg | Method::Egm) | (Tuned::Eta, Method::Admm | Method::Ppm) => {}
        (Tuned::Omega, _) => {
            return Err(CliError::Usage(
                "the primal weight is tuned for PDHG and EGM; use --eta tune for ADMM and PPM".into(),
            ))
        }
        (Tuned::Eta, _) => {
            return Err(CliError::Usage(
                "the step size is tuned for ADMM and PPM; use --omega tune for PDHG and EGM".into(),
            ))
        }
    }
    if args.tune_iterations == 0 {
        return Err(CliError::Usage("--tune-iterations must be at least 1".into()));
    }
    let mut points = Vec::new();
    for value in grid() {
        let (eta, omega) = match which {
            Tuned::Omega => (fixed.unwrap_or(1.0), value),
            Tuned::Eta => (value, fixed.unwrap_or(1.0)),
        };
        let step = StepConfig::new(method, eta, omega);
        let mut o = SolveOptions::new(step, RestartScheme::NoRestart);
        o.kkt_tolerance = 0.0;
        o.iteration_limit = args.tune_iterations;
        // One check, at the end of the budget.
        o.check_cadence = args.tune_iterations;
        o.trace_every = 1;
        o.start = Some(start_point(args, problem));
        o.record_wall_time = false;
        let kkt_error = match run_restarted(problem, &o) {
            Ok(out) => out.trace.records.last().map(|r| r.kkt_last).filter(|e| e.is_finite()),
            Err(restart_lp::Error::Diverged { .. }) => None,
            Err(e) => return Err(e.into()),
        };
        points.push(GridPoint { value, kkt_error });
    }
    let chosen = select(&points);
    if chosen.is_none() {
        log::warn!("every tuning run diverged; using 1");
    }
    Ok(TuneReport {
        parameter: which,
        iterations: args.tune_iterations,
        chosen: chosen.map_or(1.0, |i| points[i].value),
        all_diverged: chosen.is_none(),
        grid: points,
    })
}

pub fn cmd_tune(args: &TuneArgs) -> CliResult<TuneReport> {
    let problem = load_problem(&args.run)?;
    let method = parse_method(&args.run.method)?;
    let report = match method {
        Method::Pdhg | Method::Egm => {
            let eta = match parse_setting("eta", &args.run.eta)? {
                Setting::Tune => return Err(CliError::Usage("--eta tune applies to ADMM and PPM".into())),
                s => resolve_eta(method, s, &problem, args.run.seed)?,
            };
            tune(&args.run, &problem, method, Tuned::Omega, Some(eta))?
        }
        Method::Admm | Method::Ppm => {
            let omega = match parse_setting("omega", &args.run.omega)? {
                Setting::Value(w) => w,
                _ => return Err(CliError::Usage("--omega must be a number when tuning the step size".into())),
            };
            tune(&args.run, &problem, method, Tuned::Eta, Some(omega))?
        }
    };
    emit(args.output.as_deref(), &json_bytes(&report)?)?;
    Ok(report)
}
