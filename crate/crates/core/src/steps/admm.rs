use super::{Iterate, StepConfig, StepOutput};
use crate::error::{check_len, Result};
use crate::linalg::{conjugate_gradient, norm};
use crate::problem::StandardFormLp;
use crate::sparse::SparseMatrix;

/// ADMM state for the splitting `x_U ∈ {Ax = b}`, `x_V ≥ 0`, `x_U = x_V`,
/// with multiplier `y ∈ ℝⁿ`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdmmState {
    pub x_u: Vec<f64>,
    pub x_v: Vec<f64>,
    pub y: Vec<f64>,
}

impl AdmmState {
    pub fn zeros(n: usize) -> Self {
        Self {
            x_u: vec![0.0; n],
            x_v: vec![0.0; n],
            y: vec![0.0; n],
        }
    }

    /// `(x_U, x_V, y)` stacked.
    pub fn to_flat(&self) -> Vec<f64> {
        let mut v = self.x_u.clone();
        v.extend_from_slice(&self.x_v);
        v.extend_from_slice(&self.y);
        v
    }
}

impl Iterate for AdmmState {
    fn parts(&self) -> Vec<&[f64]> {
        vec![&self.x_u, &self.x_v, &self.y]
    }

    fn parts_mut(&mut self) -> Vec<&mut [f64]> {
        vec![&mut self.x_u, &mut self.x_v, &mut self.y]
    }
}

/// Result of a projection onto `{x : Ax = b}`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineProjection {
    pub point: Vec<f64>,
    /// `‖A·point − b‖₂`.
    pub residual_norm: f64,
    pub cg_iterations: usize,
    pub converged: bool,
}

/// Euclidean projection onto `{x : Ax = b}` via CG on `AA⊤w = Ap − b`,
/// returning `p − A⊤w`. The multiplier `w` is kept between calls as a warm
/// start. When `AA⊤` is singular the iterates follow least-squares semantics.
#[derive(Debug, Clone)]
pub struct AffineProjector {
    pub tol: f64,
    warm: Vec<f64>,
}

pub const AFFINE_TOL: f64 = 1e-10;

impl AffineProjector {
    pub fn new(tol: f64) -> Self {
        Self {
            tol,
            warm: Vec::new(),
        }
    }

    pub fn project(&mut self, a: &SparseMatrix, b: &[f64], p: &[f64]) -> AffineProjection {
        let rhs: Vec<f64> = a.apply_vec(p).iter().zip(b).map(|(v, b)| v - b).collect();
        if self.warm.len() != a.rows() {
            self.warm = vec![0.0; a.rows()];
        }
        let w = &mut self.warm;
        let target = self.tol * (1.0 + norm(b));
        let max_iters = 10 * a.rows() + 100;
        let mut tmp = vec![0.0; a.cols()];
        let mut iterations = 0;
        let mut point = p.to_vec();
        let mut residual = f64::INFINITY;
        // The recursive CG residual can drift from the true feasibility
        // residual, so a few restarts refresh it.
        for _ in 0..4 {
            let out = conjugate_gradient(
                |v, o| {
                    a.apply_transpose(v, &mut tmp);
                    a.apply(&tmp, o);
                },
                &rhs,
                w,
                target,
                max_iters,
            );
            iterations += out.iterations;
            let atw = a.apply_transpose_vec(w);
            point = p.iter().zip(&atw).map(|(p, v)| p - v).collect();
            residual = norm(
                &a.apply_vec(&point)
                    .iter()
                    .zip(b)
                    .map(|(v, b)| v - b)
                    .collect::<Vec<_>>(),
            );
            if residual <= target || !out.converged {
                break;
            }
        }
        let converged = residual <= target;
        if !converged {
            log::warn!("affine projection stopped at residual {residual:e}");
        }
        AffineProjection {
            point,
            residual_norm: residual,
            cg_iterations: iterations,
            converged,
        }
    }

    /// Least-squares solution of `A⊤w = v` through `AA⊤w = Av`. Keeps its own
    /// warm start, so use a separate instance from the projection.
    pub(crate) fn least_squares_transpose(&mut self, a: &SparseMatrix, v: &[f64]) -> Vec<f64> {
        let rhs = a.apply_vec(v);
        if self.warm.len() != a.rows() {
            self.warm = vec![0.0; a.rows()];
        }
        let w = &mut self.warm;
        let mut tmp = vec![0.0; a.cols()];
        conjugate_gradient(
            |u, o| {
                a.apply_transpose(u, &mut tmp);
                a.apply(&tmp, o);
            },
            &rhs,
            w,
            self.tol * (1.0 + norm(&rhs)),
            10 * a.rows() + 100,
        );
        w.clone()
    }
}

/// Projects `point` onto `{x : Ax = b}` with a cold start.
pub fn affine_project(
    a: &SparseMatrix,
    b: &[f64],
    point: &[f64],
    tol: f64,
) -> Result<AffineProjection> {
    check_len("projection point", a.cols(), point.len())?;
    check_len("projection rhs", a.rows(), b.len())?;
    Ok(AffineProjector::new(tol).project(a, b, point))
}

/// `x_U' = Π(x_V + y/η)`, `x_V' = (x_U' − y/η − c/η)⁺`,
/// `y' = y − η(x_U' − x_V')`; target `(x_U', x_V', y − η(x_U' − x_V))`.
pub(crate) fn admm_advance(
    problem: &StandardFormLp,
    projector: &mut AffineProjector,
    s: &AdmmState,
    eta: f64,
) -> (AdmmState, AdmmState) {
    let n = problem.n();
    let shifted: Vec<f64> = (0..n).map(|j| s.x_v[j] + s.y[j] / eta).collect();
    let x_u = projector.project(&problem.a, &problem.b, &shifted).point;
    let x_v: Vec<f64> = (0..n)
        .map(|j| problem.project_primal(x_u[j] - s.y[j] / eta - problem.c[j] / eta))
        .collect();
    let y: Vec<f64> = (0..n).map(|j| s.y[j] - eta * (x_u[j] - x_v[j])).collect();
    let y_hat: Vec<f64> = (0..n).map(|j| s.y[j] - eta * (x_u[j] - s.x_v[j])).collect();
    let target = AdmmState {
        x_u: x_u.clone(),
        x_v: x_v.clone(),
        y: y_hat,
    };
    (AdmmState { x_u, x_v, y }, target)
}

/// One ADMM step with a cold-started projection.
pub fn admm_step(
    problem: &StandardFormLp,
    state: &AdmmState,
    config: &StepConfig,
) -> Result<StepOutput<AdmmState>> {
    let n = problem.n();
    check_len("ADMM x_U", n, state.x_u.len())?;
    check_len("ADMM x_V", n, state.x_v.len())?;
    check_len("ADMM y", n, state.y.len())?;
    let mut projector = AffineProjector::new(AFFINE_TOL);
    let (next, target) = admm_advance(problem, &mut projector, state, config.eta);
    Ok(StepOutput { next, target })
}
