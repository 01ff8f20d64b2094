//! Bisection solvers on the radius equation, used as reference oracles.

use super::trust_region::{TrustRegionProblem, TrustRegionSolution};
use super::GapResult;
use crate::error::{Error, Result};
use crate::linalg::{dist, dot};
use crate::problem::{SaddlePoint, StandardFormLp};

const MAX_BRACKET_STEPS: usize = 200;
const MAX_BISECTIONS: usize = 400;

/// Solves the trust-region problem by bisecting `‖ẑ(λ) − z‖ = r` in `λ`.
pub fn solve_trust_region_by_bisection(
    p: &TrustRegionProblem,
    tol: f64,
) -> Result<TrustRegionSolution> {
    p.validate()?;
    if p.endpoint_inside() {
        return Ok(p.solution_at(f64::INFINITY));
    }
    let h = |lambda: f64| dist(&p.point_at(lambda), &p.z) - p.radius;
    let mut hi = 1.0;
    let mut steps = 0;
    while h(hi) < 0.0 {
        hi *= 2.0;
        steps += 1;
        if steps > MAX_BRACKET_STEPS {
            return Err(Error::NoBracket(
                "radius not reached after 200 doublings".into(),
            ));
        }
    }
    let mut lo = 0.0;
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= tol * hi {
            break;
        }
        if h(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(p.solution_at(0.5 * (lo + hi)))
}

/// Normalized duality gap of an LP by bisection on the proximal parameter
/// of the split subproblem
/// `x̂ = argmin_{x̂ ∈ X} L(x̂, y) + (λ/2)‖x̂ − x‖²`,
/// `ŷ = argmax_ŷ L(x, ŷ) − (λ/2)‖ŷ − y‖²`,
/// driving `‖ẑ(λ) − z‖ − r` to zero.
pub fn normalized_gap_bisection(
    problem: &StandardFormLp,
    z: &SaddlePoint,
    r: f64,
    tol: f64,
) -> Result<GapResult> {
    problem.check_point(z)?;
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "gap radius must be positive, got {r}"
        )));
    }
    let aty = problem.a.apply_transpose_vec(&z.y);
    let ax = problem.a.apply_vec(&z.x);
    let prox = |lambda: f64| -> SaddlePoint {
        let x = (0..problem.n())
            .map(|j| problem.project_primal(z.x[j] - (problem.c[j] - aty[j]) / lambda))
            .collect();
        let y = (0..problem.m())
            .map(|i| z.y[i] + (problem.b[i] - ax[i]) / lambda)
            .collect();
        SaddlePoint { x, y }
    };
    let dist_at = |lambda: f64| {
        let p = prox(lambda);
        (dist(&p.x, &z.x).powi(2) + dist(&p.y, &z.y).powi(2)).sqrt()
    };
    // λ → 0 leaves the ball unless every moving coordinate stops at a bound.
    let tiny = f64::MIN_POSITIVE.sqrt();
    let (mut lo, mut hi) = (tiny, 1.0);
    let mut steps = 0;
    while dist_at(hi) > r {
        hi *= 2.0;
        steps += 1;
        if steps > MAX_BRACKET_STEPS {
            return Err(Error::NoBracket(
                "prox step never re-enters the ball".into(),
            ));
        }
    }
    let maximizer = if dist_at(lo) <= r {
        // λ = 0 branch: the unregularized maximizer lies inside the ball.
        prox(tiny)
    } else {
        for _ in 0..MAX_BISECTIONS {
            let mid = (lo * hi).sqrt();
            if mid <= lo || mid >= hi || hi - lo <= tol * lo {
                break;
            }
            if dist_at(mid) > r {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        prox((lo * hi).sqrt())
    };
    let gx: Vec<f64> = (0..problem.n()).map(|j| problem.c[j] - aty[j]).collect();
    let gy: Vec<f64> = (0..problem.m()).map(|i| ax[i] - problem.b[i]).collect();
    let dx: Vec<f64> = (0..problem.n()).map(|j| z.x[j] - maximizer.x[j]).collect();
    let dy: Vec<f64> = (0..problem.m()).map(|i| z.y[i] - maximizer.y[i]).collect();
    let value = (dot(&gx, &dx) + dot(&gy, &dy)) / r;
    Ok(GapResult { value, maximizer })
}
