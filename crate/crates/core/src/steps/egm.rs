use super::{PdPoint, StepConfig, StepOutput};
use crate::error::Result;
use crate::problem::{SaddlePoint, StandardFormLp};

fn projected_move(problem: &StandardFormLp, base: &PdPoint, at: &PdPoint, tau: f64, sigma: f64) -> PdPoint {
    let x = base
        .z
        .x
        .iter()
        .zip(&problem.c)
        .zip(&at.aty)
        .map(|((x, c), aty)| problem.project_primal(x - tau * (c - aty)))
        .collect();
    let y = base
        .z
        .y
        .iter()
        .zip(&problem.b)
        .zip(&at.ax)
        .map(|((y, b), ax)| y + sigma * (b - ax))
        .collect();
    PdPoint::from_parts(problem, x, y)
}

/// `ẑ = Π(z − ηF(z))`, `z' = Π(z − ηF(ẑ))`; returns `(z', ẑ)`.
pub(crate) fn egm_advance(
    problem: &StandardFormLp,
    p: &PdPoint,
    eta: f64,
    omega: f64,
) -> (PdPoint, PdPoint) {
    let tau = eta / omega;
    let sigma = eta * omega;
    let half = projected_move(problem, p, p, tau, sigma);
    let next = projected_move(problem, p, &half, tau, sigma);
    (next, half)
}

/// One extragradient step. The averaging target is the midpoint `ẑ`.
pub fn egm_step(
    problem: &StandardFormLp,
    z: &SaddlePoint,
    config: &StepConfig,
) -> Result<StepOutput<SaddlePoint>> {
    problem.check_point(z)?;
    let p = PdPoint::new(problem, z.clone());
    let (next, half) = egm_advance(problem, &p, config.eta, config.omega);
    Ok(StepOutput {
        next: next.z,
        target: half.z,
    })
}
