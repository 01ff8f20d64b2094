//! The restarted averaging loop.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::engine::{AdmmEngine, Engine, PdEngine};
use super::{RestartScheme, RestartState};
use crate::error::{Error, Result};
use crate::kkt::Residuals;
use crate::problem::{SaddlePoint, StandardFormLp};
use crate::steps::{Iterate, Method, StepConfig};

/// Norm used for restart radii and gaps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GapNorm {
    /// `√(ω‖x‖² + ‖y‖²/ω)` for PDHG, EGM and PPM; the ADMM norm for ADMM.
    Euclidean,
    /// The norm in which the method is non-expansive. Differs from
    /// `Euclidean` only for PDHG, where it needs an unconstrained problem.
    MethodNorm,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveOptions {
    pub step: StepConfig,
    pub scheme: RestartScheme,
    /// Stop once `min(kkt(average), kkt(last)) ≤ kkt_tolerance` at a check.
    pub kkt_tolerance: f64,
    pub iteration_limit: usize,
    /// Termination and gap-based restart checks happen every this many
    /// iterations. Fixed restarts and the first adaptive epoch are exact.
    pub check_cadence: usize,
    /// Record every this many checks.
    pub trace_every: usize,
    /// Defaults to the origin.
    pub start: Option<SaddlePoint>,
    pub gap_norm: GapNorm,
    /// When false the trace's elapsed time column is zero, which makes
    /// traces reproducible byte for byte.
    pub record_wall_time: bool,
    /// Keep every restart anchor in the outcome.
    pub keep_anchors: bool,
}

impl SolveOptions {
    pub fn new(step: StepConfig, scheme: RestartScheme) -> Self {
        Self {
            step,
            scheme,
            kkt_tolerance: 1e-6,
            iteration_limit: 100_000,
            check_cadence: 30,
            trace_every: 1,
            start: None,
            gap_norm: GapNorm::Euclidean,
            record_wall_time: true,
            keep_anchors: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolveStatus {
    Optimal,
    IterationLimit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolutionSource {
    Average,
    LastIterate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub iteration: usize,
    pub outer_n: usize,
    pub inner_t: usize,
    /// Gap of the average (of the last iterate without restarts) at the
    /// radius below.
    pub normalized_gap: f64,
    pub kkt_avg: f64,
    pub kkt_last: f64,
    /// Distance of the gap point from the current anchor.
    pub radius: f64,
    /// A restart happened since the previous record, this iteration included.
    pub restart_flag: bool,
    pub elapsed_seconds: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceTrace {
    pub records: Vec<TraceRecord>,
}

#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub status: SolveStatus,
    pub solution: SaddlePoint,
    pub source: SolutionSource,
    pub residuals: Residuals,
    pub iterations: usize,
    pub restart_lengths: Vec<usize>,
    pub trace: ConvergenceTrace,
    /// Anchors `z^{n,0}` in order, starting with the initial point; empty
    /// unless requested.
    pub anchors: Vec<SaddlePoint>,
    pub wall_time_seconds: f64,
    pub eta: f64,
    pub omega: f64,
}

/// Runs the configured method with the configured restart scheme.
pub fn run_restarted(problem: &StandardFormLp, options: &SolveOptions) -> Result<SolveOutcome> {
    options.scheme.validate()?;
    if options.check_cadence == 0 || options.trace_every == 0 {
        return Err(Error::InvalidParameter(
            "check cadence and trace interval must be at least 1".into(),
        ));
    }
    options.step.validate(problem, None)?;
    let start = match &options.start {
        Some(s) => {
            problem.check_point(s)?;
            s.clone()
        }
        None => problem.zero_point(),
    };
    match options.step.method {
        Method::Admm => {
            let mut engine = AdmmEngine::new(problem, options.step.eta);
            drive(&mut engine, &start, options)
        }
        _ => {
            let mut engine = PdEngine::new(problem, options.step, options.gap_norm)?;
            drive(&mut engine, &start, options)
        }
    }
}

fn drive<E: Engine>(
    engine: &mut E,
    start: &SaddlePoint,
    options: &SolveOptions,
) -> Result<SolveOutcome> {
    let clock = Instant::now();
    let elapsed = |clock: &Instant| {
        if options.record_wall_time {
            clock.elapsed().as_secs_f64()
        } else {
            0.0
        }
    };
    let scheme = options.scheme;
    let mut last = engine.init(start);
    let mut state = RestartState::new(last.clone());
    let mut anchors = Vec::new();
    if options.keep_anchors {
        anchors.push(engine.saddle(&last));
    }
    let mut trace = ConvergenceTrace::default();
    let mut restarted_since_record = false;
    let mut checks = 0usize;
    let mut last_record: Option<TraceRecord> = None;

    let do_restart = |engine: &mut E,
                          state: &mut RestartState<E::Point>,
                          anchors: &mut Vec<SaddlePoint>,
                          candidate: E::Point,
                          k: usize|
     -> Result<E::Point> {
        let gap = if scheme.is_gap_based() {
            let r = engine.distance(&candidate, &state.anchor);
            if !r.is_finite() {
                return Err(Error::Diverged {
                    iteration: k,
                    last_finite: None,
                });
            }
            Some(if r > 0.0 { engine.gap(&candidate, r)? } else { 0.0 })
        } else {
            None
        };
        if options.keep_anchors {
            anchors.push(engine.saddle(&candidate));
        }
        state.restart(candidate.clone(), gap);
        Ok(candidate)
    };

    for k in 1..=options.iteration_limit {
        let (next, target) = engine.step(&last)?;
        last = next;
        state.push_target(&target);
        let mut restarted = false;
        if k.is_multiple_of(options.check_cadence) || k == options.iteration_limit {
            checks += 1;
            if !last.is_finite() || !state.average.is_finite() {
                return Err(Error::Diverged {
                    iteration: k,
                    last_finite: last_record.map(Box::new),
                });
            }
            let res_avg = engine.residuals(&state.average);
            let res_last = engine.residuals(&last);
            let use_last = matches!(scheme, RestartScheme::NoRestart);
            let point = if use_last { &last } else { &state.average };
            let radius = engine.distance(point, &state.anchor);
            // Finite points can still overflow the norm.
            if !radius.is_finite() {
                return Err(Error::Diverged {
                    iteration: k,
                    last_finite: last_record.map(Box::new),
                });
            }
            let gap = if radius > 0.0 {
                engine.gap(point, radius)?
            } else {
                0.0
            };
            let optimal = res_avg.kkt_error.min(res_last.kkt_error) <= options.kkt_tolerance;

            if optimal {
                // Reported below without restarting.
            } else if scheme.is_gap_based() && state.outer > 0 {
                let mut candidate_gap = gap;
                let mut use_last_candidate = false;
                if matches!(scheme, RestartScheme::Flexible { .. }) {
                    let r_last = engine.distance(&last, &state.anchor);
                    let g_last = if r_last > 0.0 {
                        engine.gap(&last, r_last)?
                    } else {
                        0.0
                    };
                    if g_last < gap {
                        candidate_gap = g_last;
                        use_last_candidate = true;
                    }
                }
                if radius == 0.0 || state.should_restart(&scheme, Some(candidate_gap)) {
                    let candidate = if use_last_candidate {
                        last.clone()
                    } else {
                        state.average.clone()
                    };
                    last = do_restart(engine, &mut state, &mut anchors, candidate, k)?;
                    restarted = true;
                }
            } else if state.should_restart(&scheme, None) {
                let candidate = state.average.clone();
                last = do_restart(engine, &mut state, &mut anchors, candidate, k)?;
                restarted = true;
            }

            if checks.is_multiple_of(options.trace_every) || optimal {
                let record = TraceRecord {
                    iteration: k,
                    outer_n: state.outer - usize::from(restarted),
                    inner_t: if restarted {
                        *state.restart_lengths.last().unwrap()
                    } else {
                        state.inner
                    },
                    normalized_gap: gap,
                    kkt_avg: res_avg.kkt_error,
                    kkt_last: res_last.kkt_error,
                    radius,
                    restart_flag: restarted || restarted_since_record,
                    elapsed_seconds: elapsed(&clock),
                };
                last_record = Some(record.clone());
                trace.records.push(record);
                restarted_since_record = false;
            } else {
                restarted_since_record |= restarted;
            }

            if optimal {
                let (solution, source, residuals) = if res_avg.kkt_error <= res_last.kkt_error {
                    (engine.saddle(&state.average), SolutionSource::Average, res_avg)
                } else {
                    (engine.saddle(&last), SolutionSource::LastIterate, res_last)
                };
                return Ok(SolveOutcome {
                    status: SolveStatus::Optimal,
                    solution,
                    source,
                    residuals,
                    iterations: k,
                    restart_lengths: state.restart_lengths,
                    trace,
                    anchors,
                    wall_time_seconds: clock.elapsed().as_secs_f64(),
                    eta: options.step.eta,
                    omega: options.step.omega,
                });
            }
        } else if (!scheme.is_gap_based() || state.outer == 0)
            && state.should_restart(&scheme, None)
        {
            let candidate = state.average.clone();
            last = do_restart(engine, &mut state, &mut anchors, candidate, k)?;
            restarted_since_record = true;
        }
    }

    let res_avg = engine.residuals(&state.average);
    let res_last = engine.residuals(&last);
    if !last.is_finite() || !state.average.is_finite() {
        return Err(Error::Diverged {
            iteration: options.iteration_limit,
            last_finite: last_record.map(Box::new),
        });
    }
    let (solution, source, residuals) = if res_avg.kkt_error <= res_last.kkt_error {
        (engine.saddle(&state.average), SolutionSource::Average, res_avg)
    } else {
        (engine.saddle(&last), SolutionSource::LastIterate, res_last)
    };
    Ok(SolveOutcome {
        status: SolveStatus::IterationLimit,
        solution,
        source,
        residuals,
        iterations: options.iteration_limit,
        restart_lengths: state.restart_lengths,
        trace,
        anchors,
        wall_time_seconds: clock.elapsed().as_secs_f64(),
        eta: options.step.eta,
        omega: options.step.omega,
    })
}
