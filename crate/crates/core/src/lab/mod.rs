//! Laboratory for PDHG on `min_x max_y y⊤diag(σ)x`: closed-form dynamics,
//! the eigenbasis norm, average-iterate envelopes, iteration-count scaling
//! and the two-dimensional toy trajectory.

mod spectral;

pub use spectral::{
    apply_dynamics, average_iterate_b_norm, b_norm, b_norm_blocks, dynamics_matrix,
    eigen_decomposition, theoretical_average_bound, Cx, EigenData,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::{generate, GeneratorSpec};
use crate::linalg::norm_sq;
use crate::problem::{SaddlePoint, StandardFormLp};
use crate::restart::{fixed_frequency_tstar, RestartState, DEFAULT_BETA};
use crate::steps::{method_constants, pdhg_advance, Method, PdPoint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum IterateMode {
    LastIterate,
    Average,
    Restarted,
}

impl IterateMode {
    pub fn label(self) -> &'static str {
        match self {
            IterateMode::LastIterate => "last",
            IterateMode::Average => "average",
            IterateMode::Restarted => "restarted",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingConfig {
    /// Condition numbers `κ = σmax/σmin`; the spectrum is `(1/κ, 1)`.
    pub kappas: Vec<f64>,
    /// Target for `‖zᵗ‖²/‖z⁰‖²` in the last-iterate and restarted sweeps.
    pub epsilon: f64,
    /// Targets for `‖z̄ᴷ‖/‖z⁰‖` in the average-iterate sweep.
    pub average_epsilons: Vec<f64>,
    pub average_kappa: f64,
    pub max_iterations: usize,
}

impl Default for ScalingConfig {
    fn default() -> Self {
        Self {
            kappas: vec![4.0, 8.0, 16.0, 32.0],
            epsilon: 1e-6,
            average_epsilons: vec![1e-2, 1e-3, 1e-4],
            average_kappa: 4.0,
            max_iterations: 10_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub mode: IterateMode,
    pub kappa: f64,
    pub epsilon: f64,
    /// `None` when the target was not reached within the budget.
    pub iterations: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub rows: Vec<ScalingRow>,
    /// Log-log slope of last-iterate iterations against `κ`.
    pub last_kappa_slope: f64,
    /// Log-log slope of restarted iterations against `κ`.
    pub restarted_kappa_slope: f64,
    /// Log-log slope of average-iterate iterations against `1/ε`.
    pub average_epsilon_slope: f64,
}

/// Least-squares slope of `log y` against `log x`.
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let lx: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ly: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

fn instance(kappa: f64) -> Result<StandardFormLp> {
    Ok(generate(&GeneratorSpec::DiagonalBilinear {
        singular_values: vec![1.0 / kappa, 1.0],
    })?
    .problem)
}

fn sq(z: &SaddlePoint) -> f64 {
    norm_sq(&z.x) + norm_sq(&z.y)
}

/// Counts PDHG iterations at `η = 1/(2σmax)` until the chosen iterate
/// reaches its target. Restarts use `Fixed(t⋆)` with `α = σmin`.
pub fn iterations_to_target(
    kappa: f64,
    mode: IterateMode,
    epsilon: f64,
    max_iterations: usize,
) -> Result<Option<usize>> {
    if !(kappa >= 1.0 && epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidParameter(
            "need kappa >= 1 and epsilon in (0, 1)".into(),
        ));
    }
    let problem = instance(kappa)?;
    let eta = 0.5;
    let z0 = SaddlePoint::new(vec![1.0; 2], vec![1.0; 2]);
    let d0 = sq(&z0);
    let mut z = PdPoint::new(&problem, z0);
    match mode {
        IterateMode::LastIterate => {
            for t in 1..=max_iterations {
                z = pdhg_advance(&problem, &z, eta, 1.0);
                if sq(&z.z) <= epsilon * d0 {
                    return Ok(Some(t));
                }
            }
        }
        IterateMode::Average => {
            let mut sum = SaddlePoint::zeros(2, 2);
            for t in 1..=max_iterations {
                z = pdhg_advance(&problem, &z, eta, 1.0);
                for i in 0..2 {
                    sum.x[i] += z.z.x[i];
                    sum.y[i] += z.z.y[i];
                }
                let k2 = (t as f64).powi(2);
                if sq(&sum) / k2 <= epsilon * epsilon * d0 {
                    return Ok(Some(t));
                }
            }
        }
        IterateMode::Restarted => {
            let tstar =
                fixed_frequency_tstar(method_constants(Method::Pdhg, eta), 1.0 / kappa, DEFAULT_BETA)?;
            let mut state = RestartState::new(z.clone());
            for t in 1..=max_iterations {
                z = pdhg_advance(&problem, &z, eta, 1.0);
                state.push_target(&z);
                if state.inner >= tstar {
                    let anchor = state.average.clone();
                    state.restart(anchor.clone(), None);
                    z = anchor;
                    if sq(&z.z) <= epsilon * d0 {
                        return Ok(Some(t));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Iteration counts for the three modes and their log-log slopes.
pub fn scaling_experiment(config: &ScalingConfig) -> Result<ScalingReport> {
    if config.kappas.len() < 2 || config.average_epsilons.len() < 2 {
        return Err(Error::InvalidParameter(
            "need at least two kappas and two average epsilons".into(),
        ));
    }
    let mut rows = Vec::new();
    let slope_of = |mode: IterateMode, rows: &mut Vec<ScalingRow>| -> Result<f64> {
        let mut pts = Vec::new();
        for &kappa in &config.kappas {
            let it = iterations_to_target(kappa, mode, config.epsilon, config.max_iterations)?;
            rows.push(ScalingRow {
                mode,
                kappa,
                epsilon: config.epsilon,
                iterations: it,
            });
            if let Some(it) = it {
                pts.push((kappa, it as f64));
            }
        }
        Ok(if pts.len() >= 2 { log_log_slope(&pts) } else { f64::NAN })
    };
    let last_kappa_slope = slope_of(IterateMode::LastIterate, &mut rows)?;
    let restarted_kappa_slope = slope_of(IterateMode::Restarted, &mut rows)?;
    let mut pts = Vec::new();
    for &eps in &config.average_epsilons {
        let it = iterations_to_target(
            config.average_kappa,
            IterateMode::Average,
            eps,
            config.max_iterations,
        )?;
        rows.push(ScalingRow {
            mode: IterateMode::Average,
            kappa: config.average_kappa,
            epsilon: eps,
            iterations: it,
        });
        if let Some(it) = it {
            pts.push((1.0 / eps, it as f64));
        }
    }
    let average_epsilon_slope = if pts.len() >= 2 {
        log_log_slope(&pts)
    } else {
        f64::NAN
    };
    Ok(ScalingReport {
        rows,
        last_kappa_slope,
        restarted_kappa_slope,
        average_epsilon_slope,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRow {
    pub series: String,
    pub iteration: usize,
    pub x: f64,
    pub y: f64,
    pub distance: f64,
}

/// PDHG on `min_x max_y xy` from `start`, without restarts and with
/// `Fixed(period)`, recording the last iterate and the running average of
/// each run at every iteration.
pub fn toy_trajectory(
    eta: f64,
    start: [f64; 2],
    iterations: usize,
    period: usize,
) -> Result<Vec<TrajectoryRow>> {
    if !(eta > 0.0 && eta < 1.0) || period == 0 {
        return Err(Error::InvalidParameter(
            "need 0 < eta < 1 and a positive restart period".into(),
        ));
    }
    let problem = generate(&GeneratorSpec::TwoDimToy)?.problem;
    let z0 = PdPoint::new(&problem, SaddlePoint::new(vec![start[0]], vec![start[1]]));
    let mut rows = Vec::with_capacity(4 * iterations);
    let push = |rows: &mut Vec<TrajectoryRow>, series: &str, t: usize, p: &PdPoint| {
        let (x, y) = (p.z.x[0], p.z.y[0]);
        rows.push(TrajectoryRow {
            series: series.to_string(),
            iteration: t,
            x,
            y,
            distance: x.hypot(y),
        });
    };

    let mut plain = z0.clone();
    let mut plain_state = RestartState::new(z0.clone());
    let mut restarted = z0.clone();
    let mut restart_state = RestartState::new(z0);
    for t in 1..=iterations {
        plain = pdhg_advance(&problem, &plain, eta, 1.0);
        plain_state.push_target(&plain);
        restarted = pdhg_advance(&problem, &restarted, eta, 1.0);
        restart_state.push_target(&restarted);
        push(&mut rows, "no_restart_last", t, &plain);
        push(&mut rows, "no_restart_average", t, &plain_state.average);
        push(&mut rows, "restarted_last", t, &restarted);
        push(&mut rows, "restarted_average", t, &restart_state.average);
        if restart_state.inner >= period {
            let anchor = restart_state.average.clone();
            restart_state.restart(anchor.clone(), None);
            restarted = anchor;
        }
    }
    Ok(rows)
}
