use super::{PdPoint, StepConfig, StepOutput};
use crate::error::{Error, Result};
use crate::linalg::{conjugate_gradient, norm};
use crate::problem::{PrimalDomain, SaddlePoint, StandardFormLp};

const PPM_CG_TOL: f64 = 1e-12;

/// Exact proximal point step on an unconstrained problem: solves
/// `x − ηA⊤y = xᵗ − ηc`, `y + ηAx = yᵗ + ηb` by eliminating `x` and running
/// CG on `(I + η²AA⊤)y = yᵗ + η(b − Axᵗ) + η²Ac`.
pub(crate) fn ppm_advance(problem: &StandardFormLp, p: &PdPoint, eta: f64) -> Result<PdPoint> {
    if problem.domain != PrimalDomain::Free {
        return Err(Error::InvalidParameter(
            "PPM is only available for unconstrained bilinear problems".into(),
        ));
    }
    let a = &problem.a;
    let ac = a.apply_vec(&problem.c);
    let rhs: Vec<f64> = (0..problem.m())
        .map(|i| p.z.y[i] + eta * (problem.b[i] - p.ax[i]) + eta * eta * ac[i])
        .collect();
    let mut y = p.z.y.clone();
    let mut tmp = vec![0.0; problem.n()];
    let tol = PPM_CG_TOL * (1.0 + norm(&rhs));
    let outcome = conjugate_gradient(
        |v, out| {
            a.apply_transpose(v, &mut tmp);
            a.apply(&tmp, out);
            for (o, vi) in out.iter_mut().zip(v) {
                *o = vi + eta * eta * *o;
            }
        },
        &rhs,
        &mut y,
        tol,
        10 * problem.m() + 100,
    );
    if !outcome.converged {
        return Err(Error::Breakdown(format!(
            "PPM linear solve stopped at residual {:e}",
            outcome.residual_norm
        )));
    }
    let aty = a.apply_transpose_vec(&y);
    let x: Vec<f64> = (0..problem.n())
        .map(|j| p.z.x[j] - eta * problem.c[j] + eta * aty[j])
        .collect();
    let ax = a.apply_vec(&x);
    Ok(PdPoint {
        z: SaddlePoint { x, y },
        ax,
        aty,
    })
}

/// One proximal point step. The averaging target is the next iterate.
pub fn ppm_step(
    problem: &StandardFormLp,
    z: &SaddlePoint,
    config: &StepConfig,
) -> Result<StepOutput<SaddlePoint>> {
    problem.check_point(z)?;
    let p = PdPoint::new(problem, z.clone());
    let next = ppm_advance(problem, &p, config.eta)?.z;
    Ok(StepOutput {
        target: next.clone(),
        next,
    })
}
