use super::{PdPoint, StepConfig, StepOutput};
use crate::error::Result;
use crate::problem::{SaddlePoint, StandardFormLp};

/// `x' = Π(x − (η/ω)(c − A⊤y))`, `y' = y + ηω(b − A(2x' − x))`.
pub(crate) fn pdhg_advance(problem: &StandardFormLp, p: &PdPoint, eta: f64, omega: f64) -> PdPoint {
    let tau = eta / omega;
    let sigma = eta * omega;
    let x: Vec<f64> = p
        .z
        .x
        .iter()
        .zip(&problem.c)
        .zip(&p.aty)
        .map(|((x, c), aty)| problem.project_primal(x - tau * (c - aty)))
        .collect();
    let ax = problem.a.apply_vec(&x);
    let y: Vec<f64> = p
        .z
        .y
        .iter()
        .zip(&problem.b)
        .zip(ax.iter().zip(&p.ax))
        .map(|((y, b), (ax_new, ax_old))| y + sigma * (b - (2.0 * ax_new - ax_old)))
        .collect();
    let aty = problem.a.apply_transpose_vec(&y);
    PdPoint {
        z: SaddlePoint { x, y },
        ax,
        aty,
    }
}

/// One PDHG step. The averaging target is the next iterate.
pub fn pdhg_step(
    problem: &StandardFormLp,
    z: &SaddlePoint,
    config: &StepConfig,
) -> Result<StepOutput<SaddlePoint>> {
    problem.check_point(z)?;
    let p = PdPoint::new(problem, z.clone());
    let next = pdhg_advance(problem, &p, config.eta, config.omega).z;
    Ok(StepOutput {
        target: next.clone(),
        next,
    })
}
