//! Power iteration for `σmax(A)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::norm_sq;
use crate::sparse::SparseMatrix;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerEstimate {
    pub sigma_max: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Estimates the largest singular value of `A` by power iteration on `A⊤A`
/// from a seeded random start. Each estimate is the Rayleigh quotient
/// `√(‖Av‖²/‖v‖²)`; iteration stops when successive estimates agree to a
/// relative `tol`.
pub fn power_method_sigma_max(
    a: &SparseMatrix,
    tol: f64,
    max_iters: usize,
    seed: u64,
) -> Result<PowerEstimate> {
    if a.nnz() == 0 {
        return Err(Error::InvalidParameter(
            "sigma_max of a zero matrix is undefined".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<f64> = (0..a.cols()).map(|_| rng.random_range(0.5..1.5)).collect();
    let mut av = vec![0.0; a.rows()];
    let mut prev = f64::NAN;
    let mut sigma = 0.0;
    for it in 1..=max_iters {
        let vv = norm_sq(&v);
        a.apply(&v, &mut av);
        sigma = (norm_sq(&av) / vv).sqrt();
        if it > 1 && (sigma - prev).abs() <= tol * sigma {
            return Ok(PowerEstimate {
                sigma_max: sigma,
                iterations: it,
                converged: true,
            });
        }
        prev = sigma;
        a.apply_transpose(&av, &mut v);
        let scale = norm_sq(&v).sqrt();
        if scale == 0.0 {
            return Err(Error::Breakdown(
                "power iteration hit the null space of A".into(),
            ));
        }
        v.iter_mut().for_each(|x| *x /= scale);
    }
    Ok(PowerEstimate {
        sigma_max: sigma,
        iterations: max_iters,
        converged: false,
    })
}
