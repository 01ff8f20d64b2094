//! Normalized duality gap
//! `ρ_r(z) = (1/r)·max{L(x, ŷ) − L(x̂, y) : ẑ ∈ Z, ‖ẑ − z‖ ≤ r}`.
//!
//! For an LP the inner maximization is linear in `ẑ`, since
//! `L(x, ŷ) − L(x̂, y) = F(z)⊤(z − ẑ)`, so it reduces to a trust-region
//! problem with a linear objective.

mod bisection;
mod select;
mod trust_region;

pub use bisection::{normalized_gap_bisection, solve_trust_region_by_bisection};
pub use select::select_kth;
pub use trust_region::{solve_linear_trust_region, TrustRegionProblem, TrustRegionSolution};

use crate::error::{check_len, Error, Result};
use crate::linalg::{conjugate_gradient, dot, norm};
use crate::problem::{PrimalDomain, SaddlePoint, StandardFormLp};
use crate::steps::{AdmmState, PdPoint};

#[derive(Debug, Clone, PartialEq)]
pub struct GapResult {
    pub value: f64,
    pub maximizer: SaddlePoint,
}

fn check_radius(r: f64) -> Result<()> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "gap radius must be positive, got {r}"
        )))
    }
}

fn check_nonnegative(problem: &StandardFormLp, x: &[f64]) -> Result<()> {
    if problem.domain == PrimalDomain::NonNegative && x.iter().any(|&v| v < 0.0) {
        return Err(Error::InvalidParameter(
            "gap centre violates x >= 0".into(),
        ));
    }
    Ok(())
}

/// Normalized gap of an LP in the Euclidean norm.
pub fn normalized_gap_lp(problem: &StandardFormLp, z: &SaddlePoint, r: f64) -> Result<GapResult> {
    problem.check_point(z)?;
    check_radius(r)?;
    check_nonnegative(problem, &z.x)?;
    let p = PdPoint::new(problem, z.clone());
    weighted_gap(problem, &p, r, 1.0)
}

/// Normalized gap in the primal-weighted norm `√(ω‖x‖² + ‖y‖²/ω)`, using the
/// cached products of `p`. Works in the rescaled coordinates
/// `(√ω·x, y/√ω)` where the norm is Euclidean.
pub(crate) fn weighted_gap(
    problem: &StandardFormLp,
    p: &PdPoint,
    r: f64,
    omega: f64,
) -> Result<GapResult> {
    let (n, m) = (problem.n(), problem.m());
    let s = omega.sqrt();
    let mut g = Vec::with_capacity(n + m);
    let mut center = Vec::with_capacity(n + m);
    let mut lower = Vec::with_capacity(n + m);
    for j in 0..n {
        g.push((problem.c[j] - p.aty[j]) / s);
        // Clamp slightly infeasible averages onto the domain for the centre.
        center.push(s * problem.project_primal(p.z.x[j]));
        lower.push(problem.primal_lower_bound());
    }
    for i in 0..m {
        g.push(s * (p.ax[i] - problem.b[i]));
        center.push(p.z.y[i] / s);
        lower.push(f64::NEG_INFINITY);
    }
    let tr = TrustRegionProblem {
        g,
        z: center,
        lower,
        radius: r,
    };
    let sol = solve_linear_trust_region(&tr)?;
    let maximizer = SaddlePoint {
        x: sol.point[..n].iter().map(|v| v / s).collect(),
        y: sol.point[n..].iter().map(|v| v * s).collect(),
    };
    // The centre used above may differ from x by a clamp; evaluate the gap
    // at the true point.
    let gx: Vec<f64> = (0..n).map(|j| problem.c[j] - p.aty[j]).collect();
    let gy: Vec<f64> = (0..m).map(|i| p.ax[i] - problem.b[i]).collect();
    let dx: Vec<f64> = (0..n).map(|j| p.z.x[j] - maximizer.x[j]).collect();
    let dy: Vec<f64> = (0..m).map(|i| p.z.y[i] - maximizer.y[i]).collect();
    Ok(GapResult {
        value: (dot(&gx, &dx) + dot(&gy, &dy)) / r,
        maximizer,
    })
}

/// Maximizer of the ADMM gap.
#[derive(Debug, Clone, PartialEq)]
pub struct AdmmGapResult {
    pub value: f64,
    pub x_v: Vec<f64>,
    pub y: Vec<f64>,
}

/// Normalized gap of the ADMM splitting in the norm
/// `√(η‖Δx_V‖² + ‖Δy‖²/η)`:
/// `(1/r)·sup −(y + c)⊤(x̂_V − x_V) + (x_V − x_U)⊤(ŷ − y)` over `x̂_V ≥ 0`.
/// With `u = √η·x̂_V`, `w = ŷ/√η` the ball is Euclidean.
pub fn normalized_gap_admm(
    problem: &StandardFormLp,
    state: &AdmmState,
    r: f64,
    eta: f64,
) -> Result<AdmmGapResult> {
    let n = problem.n();
    check_len("ADMM x_U", n, state.x_u.len())?;
    check_len("ADMM x_V", n, state.x_v.len())?;
    check_len("ADMM y", n, state.y.len())?;
    check_radius(r)?;
    check_nonnegative(problem, &state.x_v)?;
    if !(eta > 0.0) {
        return Err(Error::InvalidParameter("ADMM gap needs eta > 0".into()));
    }
    let se = eta.sqrt();
    let mut g = Vec::with_capacity(2 * n);
    let mut center = Vec::with_capacity(2 * n);
    let mut lower = Vec::with_capacity(2 * n);
    for j in 0..n {
        g.push((state.y[j] + problem.c[j]) / se);
        center.push(se * problem.project_primal(state.x_v[j]));
        lower.push(problem.primal_lower_bound());
    }
    for j in 0..n {
        g.push(-se * (state.x_v[j] - state.x_u[j]));
        center.push(state.y[j] / se);
        lower.push(f64::NEG_INFINITY);
    }
    let sol = solve_linear_trust_region(&TrustRegionProblem {
        g,
        z: center,
        lower,
        radius: r,
    })?;
    let x_v: Vec<f64> = sol.point[..n].iter().map(|v| v / se).collect();
    let y: Vec<f64> = sol.point[n..].iter().map(|v| v * se).collect();
    let mut value = 0.0;
    for j in 0..n {
        value += -(state.y[j] + problem.c[j]) * (x_v[j] - state.x_v[j])
            + (state.x_v[j] - state.x_u[j]) * (y[j] - state.y[j]);
    }
    Ok(AdmmGapResult {
        value: value / r,
        x_v,
        y,
    })
}

/// Normalized gap of an unconstrained problem in the PDHG norm
/// `‖z‖²_M = ω‖x‖² + 2η·y⊤Ax + ‖y‖²/ω`. Without constraints the
/// maximization is over a full ellipsoid, so `ρ_r(z) = ‖F(z)‖_{M⁻¹}` for
/// every `r`.
pub(crate) fn pdhg_norm_gap_unconstrained(
    problem: &StandardFormLp,
    p: &PdPoint,
    eta: f64,
    omega: f64,
) -> Result<f64> {
    let (n, m) = (problem.n(), problem.m());
    let mut f: Vec<f64> = (0..n).map(|j| problem.c[j] - p.aty[j]).collect();
    f.extend((0..m).map(|i| p.ax[i] - problem.b[i]));
    let mut sol = vec![0.0; n + m];
    let a = &problem.a;
    let mut ax = vec![0.0; m];
    let mut aty = vec![0.0; n];
    let out = conjugate_gradient(
        |v, o| {
            let (vx, vy) = v.split_at(n);
            a.apply(vx, &mut ax);
            a.apply_transpose(vy, &mut aty);
            for j in 0..n {
                o[j] = omega * vx[j] + eta * aty[j];
            }
            for i in 0..m {
                o[n + i] = eta * ax[i] + vy[i] / omega;
            }
        },
        &f,
        &mut sol,
        1e-14 * (1.0 + norm(&f)),
        20 * (n + m) + 100,
    );
    if !out.converged && out.residual_norm > 1e-10 * (1.0 + norm(&f)) {
        return Err(Error::Breakdown(format!(
            "PDHG-norm solve stopped at residual {:e}",
            out.residual_norm
        )));
    }
    Ok(dot(&f, &sol).max(0.0).sqrt())
}
