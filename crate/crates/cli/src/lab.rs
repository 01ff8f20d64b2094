//! `bilinear-lab`: the iteration-count scaling table and the toy
//! trajectory as CSV.

use serde::{Deserialize, Serialize};

use restart_lp::lab::{iterations_to_target, log_log_slope, toy_trajectory, IterateMode};

use crate::args::LabArgs;
use crate::output::{csv_bytes, json_bytes, write_atomic};
use crate::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingCsvRow {
    pub kappa: f64,
    pub mode: String,
    pub epsilon: f64,
    pub iterations: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabReport {
    pub rows: Vec<ScalingCsvRow>,
    /// Slopes need at least two finished points.
    pub last_kappa_slope: Option<f64>,
    pub restarted_kappa_slope: Option<f64>,
    pub average_epsilon_slope: Option<f64>,
    pub trajectory_rows: usize,
}

fn slope(points: &[(f64, f64)]) -> Option<f64> {
    (points.len() >= 2).then(|| log_log_slope(points))
}

pub fn cmd_bilinear_lab(args: &LabArgs) -> CliResult<LabReport> {
    if args.kappas.is_empty() {
        return Err(CliError::Usage("--kappas needs at least one condition number".into()));
    }
    if args.average_epsilons.is_empty() {
        return Err(CliError::Usage("--average-epsilons needs at least one target".into()));
    }
    if args.toy_start.len() != 2 {
        return Err(CliError::Usage("--toy-start takes two values".into()));
    }
    let mut rows = Vec::new();
    let mut slopes = Vec::new();
    for mode in [IterateMode::LastIterate, IterateMode::Restarted] {
        let mut pts = Vec::new();
        for &kappa in &args.kappas {
            let it = iterations_to_target(kappa, mode, args.epsilon, args.max_iterations)?;
            if let Some(it) = it {
                pts.push((kappa, it as f64));
            }
            rows.push(ScalingCsvRow { kappa, mode: mode.label().into(), epsilon: args.epsilon, iterations: it });
        }
        slopes.push(slope(&pts));
    }
    let mut pts = Vec::new();
    for &eps in &args.average_epsilons {
        let it = iterations_to_target(args.average_kappa, IterateMode::Average, eps, args.max_iterations)?;
        if let Some(it) = it {
            pts.push((1.0 / eps, it as f64));
        }
        rows.push(ScalingCsvRow {
            kappa: args.average_kappa,
            mode: IterateMode::Average.label().into(),
            epsilon: eps,
            iterations: it,
        });
    }
    slopes.push(slope(&pts));

    let trajectory = toy_trajectory(
        args.toy_eta,
        [args.toy_start[0], args.toy_start[1]],
        args.toy_iterations,
        args.toy_period,
    )?;
    std::fs::create_dir_all(&args.output_dir)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", args.output_dir.display())))?;
    let dir = &args.output_dir;
    write_atomic(&dir.join("scaling.csv"), &csv_bytes(&rows, &["kappa", "mode", "epsilon", "iterations"])?)?;
    write_atomic(
        &dir.join("toy_trajectory.csv"),
        &csv_bytes(&trajectory, &["series", "iteration", "x", "y", "distance"])?,
    )?;
    let report = LabReport {
        rows,
        last_kappa_slope: slopes[0],
        restarted_kappa_slope: slopes[1],
        average_epsilon_slope: slopes[2],
        trajectory_rows: trajectory.len(),
    };
    write_atomic(&dir.join("report.json"), &json_bytes(&report)?)?;
    Ok(report)
}
