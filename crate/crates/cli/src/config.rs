//! Problem loading and resolution of the step size and primal weight.

use std::io::BufReader;

use restart_lp::ingest::{generate, parse_mps, to_standard_form, GeneratorSpec};
use restart_lp::restart::{RestartScheme, SolveOptions};
use restart_lp::steps::{Method, StepConfig};
use restart_lp::{power_method_sigma_max, SaddlePoint, StandardFormLp};

use crate::args::RunArgs;
use crate::{CliError, CliResult};

const POWER_TOL: f64 = 1e-10;
const POWER_MAX_ITERS: usize = 10_000;

/// How a scalar flag is to be resolved.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Setting {
    Auto,
    Tune,
    Value(f64),
}

pub fn parse_setting(flag: &str, raw: &str) -> CliResult<Setting> {
    match raw {
        "auto" => Ok(Setting::Auto),
        "tune" => Ok(Setting::Tune),
        _ => match raw.parse::<f64>() {
            Ok(v) if v.is_finite() && v > 0.0 => Ok(Setting::Value(v)),
            _ => Err(CliError::Usage(format!(
                "--{flag} must be `auto`, `tune` or a positive number, got `{raw}`"
            ))),
        },
    }
}

pub fn parse_method(raw: &str) -> CliResult<Method> {
    raw.parse().map_err(|e: restart_lp::Error| CliError::Usage(e.to_string()))
}

pub fn parse_scheme(raw: &str) -> CliResult<RestartScheme> {
    let scheme: RestartScheme = raw
        .parse()
        .map_err(|e: restart_lp::Error| CliError::Usage(e.to_string()))?;
    scheme.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(scheme)
}

/// Reads the MPS input or builds the generated instance.
pub fn load_problem(args: &RunArgs) -> CliResult<StandardFormLp> {
    match (&args.input, &args.generate) {
        (Some(path), None) => {
            let file = std::fs::File::open(path)
                .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
            let model = parse_mps(BufReader::new(file))
                .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
            let conv = to_standard_form(&model)
                .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
            log::info!(
                "{}: {} rows, {} columns after conversion",
                path.display(),
                conv.lp.m(),
                conv.lp.n()
            );
            Ok(conv.lp)
        }
        (None, Some(spec)) => {
            let spec: GeneratorSpec = spec
                .parse()
                .map_err(|e: restart_lp::Error| CliError::Parse(e.to_string()))?;
            Ok(generate(&spec).map_err(|e| CliError::Parse(e.to_string()))?.problem)
        }
        _ => Err(CliError::Usage(
            "exactly one of --input and --generate is required".into(),
        )),
    }
}

pub fn sigma_max(problem: &StandardFormLp, seed: u64) -> CliResult<f64> {
    if problem.a.nnz() == 0 {
        return Ok(0.0);
    }
    let est = power_method_sigma_max(&problem.a, POWER_TOL, POWER_MAX_ITERS, seed)?;
    if !est.converged {
        log::warn!("power method did not converge; using sigma_max = {}", est.sigma_max);
    }
    Ok(est.sigma_max)
}

/// Step size from `auto` or an explicit value.
pub fn resolve_eta(method: Method, setting: Setting, problem: &StandardFormLp, seed: u64) -> CliResult<f64> {
    match setting {
        Setting::Value(v) => Ok(v),
        Setting::Auto => {
            let s = match method {
                Method::Pdhg | Method::Egm => sigma_max(problem, seed)?,
                Method::Admm | Method::Ppm => 1.0,
            };
            Ok(if s > 0.0 { StepConfig::default_eta(method, s) } else { 1.0 })
        }
        Setting::Tune => Err(CliError::Usage("--eta tune is resolved by tuning".into())),
    }
}

pub fn start_point(args: &RunArgs, problem: &StandardFormLp) -> SaddlePoint {
    SaddlePoint::new(vec![args.start_x; problem.n()], vec![args.start_y; problem.m()])
}

/// Solver options from the shared flags.
pub fn solve_options(
    args: &RunArgs,
    problem: &StandardFormLp,
    step: StepConfig,
    scheme: RestartScheme,
    default_kkt_tolerance: f64,
) -> SolveOptions {
    let mut o = SolveOptions::new(step, scheme);
    o.kkt_tolerance = args.kkt_tolerance.unwrap_or(default_kkt_tolerance);
    o.iteration_limit = args.iteration_limit;
    o.check_cadence = args.check_cadence;
    o.trace_every = args.trace_every;
    o.start = Some(start_point(args, problem));
    o.record_wall_time = !args.no_wall_time;
    o
}

/// Method, step size and primal weight, tuning whichever is requested.
pub fn resolve_step(args: &RunArgs, problem: &StandardFormLp) -> CliResult<StepConfig> {
    let method = parse_method(&args.method)?;
    let eta = parse_setting("eta", &args.eta)?;
    let omega = parse_setting("omega", &args.omega)?;
    if omega == Setting::Auto {
        return Err(CliError::Usage("--omega must be `tune` or a positive number".into()));
    }
    let step = match (eta, omega) {
        (Setting::Tune, Setting::Tune) => {
            return Err(CliError::Usage("tune either --eta or --omega, not both".into()))
        }
        (Setting::Tune, Setting::Value(w)) => {
            let report = crate::tune::tune(args, problem, method, crate::tune::Tuned::Eta, Some(w))?;
            StepConfig::new(method, report.chosen, w)
        }
        (e, Setting::Tune) => {
            let eta = resolve_eta(method, e, problem, args.seed)?;
            let report = crate::tune::tune(args, problem, method, crate::tune::Tuned::Omega, Some(eta))?;
            StepConfig::new(method, eta, report.chosen)
        }
        (e, Setting::Value(w)) => StepConfig::new(method, resolve_eta(method, e, problem, args.seed)?, w),
        (_, Setting::Auto) => unreachable!(),
    };
    step.validate(problem, None).map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(step)
}
