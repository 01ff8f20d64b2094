//! `solve`: one restarted run with its trace and summary.

use restart_lp::restart::{run_restarted, SolveStatus};

use crate::args::SolveArgs;
use crate::config::{load_problem, parse_scheme, resolve_step, solve_options};
use crate::output::{emit, json_bytes, trace_csv, write_atomic, Summary};
use crate::{exit, CliError, CliResult};

pub const DEFAULT_KKT_TOLERANCE: f64 = 1e-6;

pub fn cmd_solve(args: &SolveArgs) -> CliResult<i32> {
    let scheme = parse_scheme(&args.scheme)?;
    let problem = load_problem(&args.run)?;
    let step = resolve_step(&args.run, &problem)?;
    let options = solve_options(&args.run, &problem, step, scheme, DEFAULT_KKT_TOLERANCE);
    match run_restarted(&problem, &options) {
        Ok(out) => {
            if let Some(path) = &args.trace {
                write_atomic(path, &trace_csv(&out.trace)?)?;
            }
            let summary = Summary::from_outcome(&out, options.record_wall_time);
            emit(args.summary.as_deref(), &json_bytes(&summary)?)?;
            Ok(match out.status {
                SolveStatus::Optimal => exit::OPTIMAL,
                SolveStatus::IterationLimit => exit::ITERATION_LIMIT,
            })
        }
        Err(restart_lp::Error::Diverged { iteration, last_finite }) => {
            let kkt = last_finite.as_ref().map(|r| r.kkt_avg.min(r.kkt_last));
            let summary = Summary::diverged(iteration, kkt, step.eta, step.omega);
            emit(args.summary.as_deref(), &json_bytes(&summary)?)?;
            Err(CliError::Diverged(format!("iterates diverged at iteration {iteration}")))
        }
        Err(e) => Err(e.into()),
    }
}
