//! Numerical checks of the linear-rate guarantees on diagonal bilinear
//! problems, where the sharpness constant is known in closed form.

use serde::{Deserialize, Serialize};

use super::driver::{run_restarted, GapNorm, SolveOptions};
use super::{fixed_frequency_tstar, RestartScheme};
use crate::error::{Error, Result};
use crate::ingest::{generate, GeneratorSpec};
use crate::kkt::kkt_error;
use crate::linalg::norm_sq;
use crate::norm::pdhg_norm_sq;
use crate::problem::{SaddlePoint, StandardFormLp};
use crate::steps::{method_constants, Method, StepConfig};

/// Sharpness of `min_x max_y y⊤diag(σ)x` in the norm of `method`.
///
/// In the Euclidean norm the normalized gap is `‖F(z)‖ ≥ σmin‖z‖`. In the
/// PDHG norm each 2×2 block satisfies `J⊤M⁻¹J = σ²M/det M`, so the ratio
/// `‖F(z)‖_{M⁻¹}/‖z‖_M` equals `σ/√(1 − η²σ²)` on that block.
pub fn sharpness_in_method_norm(singular_values: &[f64], method: Method, eta: f64) -> f64 {
    match method {
        Method::Pdhg => singular_values
            .iter()
            .map(|&s| s / (1.0 - eta * eta * s * s).sqrt())
            .fold(f64::INFINITY, f64::min),
        _ => singular_values.iter().copied().fold(f64::INFINITY, f64::min),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoryCheckConfig {
    pub singular_values: Vec<f64>,
    pub method: Method,
    pub eta: f64,
    pub beta: f64,
    pub start: SaddlePoint,
    /// Number of fixed-frequency epochs to run.
    pub epochs: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoryReport {
    pub alpha: f64,
    pub tstar: usize,
    /// Method-norm distance of each fixed-frequency anchor to the saddle
    /// point, starting with the initial point.
    pub fixed_anchor_distances: Vec<f64>,
    /// `dist(z^{n,0}) ≤ βⁿ·dist(z^{0,0})·(1 + 10⁻⁶)` for every anchor.
    pub contraction_holds: bool,
    /// Adaptive restart lengths of epochs `n ≥ 1`.
    pub adaptive_lengths: Vec<usize>,
    pub adaptive_lengths_hold: bool,
    pub flexible_lengths: Vec<usize>,
    pub flexible_lengths_hold: bool,
}

fn method_distance(problem: &StandardFormLp, method: Method, eta: f64, z: &SaddlePoint) -> f64 {
    match method {
        Method::Pdhg => pdhg_norm_sq(problem, eta, 1.0, &z.x, &z.y).max(0.0).sqrt(),
        _ => (norm_sq(&z.x) + norm_sq(&z.y)).sqrt(),
    }
}

/// Runs fixed-frequency restarts at `t⋆` and checks the per-epoch
/// contraction, then runs adaptive and flexible restarts and checks that
/// every restart length after the first epoch is at most `t⋆`.
pub fn theoretical_linear_rate_check(config: &TheoryCheckConfig) -> Result<TheoryReport> {
    if config.method == Method::Admm {
        return Err(Error::InvalidParameter(
            "the bilinear rate check covers PDHG, EGM and PPM".into(),
        ));
    }
    let instance = generate(&GeneratorSpec::DiagonalBilinear {
        singular_values: config.singular_values.clone(),
    })?;
    let problem = &instance.problem;
    let sigma_max = config
        .singular_values
        .iter()
        .copied()
        .fold(0.0, f64::max);
    let step = StepConfig::new(config.method, config.eta, 1.0);
    step.validate(problem, Some(sigma_max))?;
    if config.method == Method::Pdhg && config.eta * sigma_max >= 1.0 {
        return Err(Error::InvalidParameter(
            "the PDHG norm needs eta * sigma_max < 1".into(),
        ));
    }
    let alpha = sharpness_in_method_norm(&config.singular_values, config.method, config.eta);
    let tstar = fixed_frequency_tstar(method_constants(config.method, config.eta), alpha, config.beta)?;

    let base = SolveOptions {
        step,
        scheme: RestartScheme::Fixed { period: tstar },
        kkt_tolerance: 0.0,
        iteration_limit: config.epochs * tstar,
        check_cadence: 1,
        trace_every: usize::MAX,
        start: Some(config.start.clone()),
        gap_norm: GapNorm::MethodNorm,
        record_wall_time: false,
        keep_anchors: true,
    };
    let fixed = run_restarted(problem, &base)?;
    let fixed_anchor_distances: Vec<f64> = fixed
        .anchors
        .iter()
        .map(|a| method_distance(problem, config.method, config.eta, a))
        .collect();
    let d0 = fixed_anchor_distances[0];
    let contraction_holds = fixed_anchor_distances
        .iter()
        .enumerate()
        .all(|(n, &d)| d <= config.beta.powi(n as i32) * d0 * (1.0 + 1e-6));

    // Stop before round-off dominates the gap ratios.
    let kkt0 = kkt_error(problem, &config.start)?;
    let lengths = |scheme: RestartScheme| -> Result<Vec<usize>> {
        let opts = SolveOptions {
            scheme,
            kkt_tolerance: 1e-10 * kkt0,
            iteration_limit: (config.epochs + 1) * tstar,
            keep_anchors: false,
            ..base.clone()
        };
        let out = run_restarted(problem, &opts)?;
        Ok(out.restart_lengths.into_iter().skip(1).collect())
    };
    let adaptive_lengths = lengths(RestartScheme::Adaptive {
        beta: config.beta,
        tau0: 1,
    })?;
    let flexible_lengths = lengths(RestartScheme::Flexible {
        beta: config.beta,
        tau0: 1,
    })?;
    Ok(TheoryReport {
        alpha,
        tstar,
        contraction_holds,
        fixed_anchor_distances,
        adaptive_lengths_hold: adaptive_lengths.iter().all(|&t| t <= tstar),
        adaptive_lengths,
        flexible_lengths_hold: flexible_lengths.iter().all(|&t| t <= tstar),
        flexible_lengths,
    })
}
