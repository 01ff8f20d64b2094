//! Dense vector helpers and a matrix-free conjugate gradient solver.

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm_sq(a: &[f64]) -> f64 {
    dot(a, a)
}

pub fn norm(a: &[f64]) -> f64 {
    norm_sq(a).sqrt()
}

pub fn dist_sq(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    dist_sq(a, b).sqrt()
}

/// `y += alpha * x`
pub fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    debug_assert_eq!(x.len(), y.len());
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

pub fn all_finite(a: &[f64]) -> bool {
    a.iter().all(|v| v.is_finite())
}

/// Outcome of a conjugate gradient solve.
#[derive(Debug, Clone, Copy)]
pub struct CgOutcome {
    pub iterations: usize,
    pub residual_norm: f64,
    pub converged: bool,
}

/// Solves `Px = rhs` for a symmetric positive semidefinite operator `P`,
/// starting from the contents of `x`. Stops once `‖rhs − Px‖₂ ≤ tol`.
///
/// On a singular but consistent system the iterates stay in the shifted
/// Krylov space and converge to a solution.
pub fn conjugate_gradient<F>(
    mut apply: F,
    rhs: &[f64],
    x: &mut [f64],
    tol: f64,
    max_iters: usize,
) -> CgOutcome
where
    F: FnMut(&[f64], &mut [f64]),
{
    let n = rhs.len();
    let mut p_x = vec![0.0; n];
    apply(x, &mut p_x);
    let mut r: Vec<f64> = rhs.iter().zip(&p_x).map(|(b, v)| b - v).collect();
    let mut rr = norm_sq(&r);
    if rr.sqrt() <= tol {
        return CgOutcome {
            iterations: 0,
            residual_norm: rr.sqrt(),
            converged: true,
        };
    }
    let mut d = r.clone();
    let mut p_d = vec![0.0; n];
    for it in 1..=max_iters {
        apply(&d, &mut p_d);
        let curvature = dot(&d, &p_d);
        if curvature <= 0.0 || !curvature.is_finite() {
            return CgOutcome {
                iterations: it,
                residual_norm: rr.sqrt(),
                converged: false,
            };
        }
        let step = rr / curvature;
        axpy(step, &d, x);
        axpy(-step, &p_d, &mut r);
        let rr_next = norm_sq(&r);
        if rr_next.sqrt() <= tol {
            return CgOutcome {
                iterations: it,
                residual_norm: rr_next.sqrt(),
                converged: true,
            };
        }
        let beta = rr_next / rr;
        for (di, ri) in d.iter_mut().zip(&r) {
            *di = ri + beta * *di;
        }
        rr = rr_next;
    }
    CgOutcome {
        iterations: max_iters,
        residual_norm: rr.sqrt(),
        converged: false,
    }
}
