//! Norms in which the primal-dual methods are non-expansive.

use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};
use crate::linalg::{dot, norm_sq};
use crate::problem::StandardFormLp;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum NormKind {
    /// Plain `‖z‖₂` on the `(x, y)` layout.
    Euclidean,
    /// PDHG norm on the `(x, y)` layout.
    PdhgM,
    /// ADMM norm `√(η‖x_V‖² + ‖y‖²/η)` on the `(x_U, x_V, y)` layout.
    AdmmM,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormSpec {
    pub kind: NormKind,
    pub eta: f64,
    pub omega: f64,
}

impl NormSpec {
    pub fn euclidean() -> Self {
        Self {
            kind: NormKind::Euclidean,
            eta: 0.0,
            omega: 1.0,
        }
    }

    /// PDHG norm for step size `η` and primal weight `ω`. Requires
    /// `η·σmax(A) < 1` so that the norm is positive definite.
    pub fn pdhg(eta: f64, omega: f64, sigma_max: f64) -> Result<Self> {
        if !(eta > 0.0 && omega > 0.0) {
            return Err(Error::InvalidParameter(
                "PDHG norm needs eta > 0 and omega > 0".into(),
            ));
        }
        if eta * sigma_max >= 1.0 {
            return Err(Error::InvalidParameter(format!(
                "PDHG norm needs eta * sigma_max < 1, got {}",
                eta * sigma_max
            )));
        }
        Ok(Self {
            kind: NormKind::PdhgM,
            eta,
            omega,
        })
    }

    pub fn admm(eta: f64) -> Result<Self> {
        if !(eta > 0.0) {
            return Err(Error::InvalidParameter("ADMM norm needs eta > 0".into()));
        }
        Ok(Self {
            kind: NormKind::AdmmM,
            eta,
            omega: 1.0,
        })
    }
}

/// Evaluates the norm of a flat vector laid out as described by `spec.kind`.
///
/// The PDHG norm is computed in the primal-weight rescaled space,
/// `‖z‖² = ω‖x‖² − 2η·y⊤Kx + ‖y‖²/ω` where `K = −A` is the bilinear coupling
/// of the Lagrangian.
pub fn norm_value(spec: &NormSpec, problem: &StandardFormLp, z: &[f64]) -> Result<f64> {
    let (n, m) = (problem.n(), problem.m());
    match spec.kind {
        NormKind::Euclidean => {
            check_len("saddle point", n + m, z.len())?;
            Ok(norm_sq(z).sqrt())
        }
        NormKind::PdhgM => {
            check_len("saddle point", n + m, z.len())?;
            let (x, y) = z.split_at(n);
            Ok(pdhg_norm_sq(problem, spec.eta, spec.omega, x, y).max(0.0).sqrt())
        }
        NormKind::AdmmM => {
            check_len("ADMM state", 3 * n, z.len())?;
            let x_v = &z[n..2 * n];
            let y = &z[2 * n..];
            Ok(admm_norm_sq(spec.eta, x_v, y).sqrt())
        }
    }
}

pub(crate) fn pdhg_norm_sq(
    problem: &StandardFormLp,
    eta: f64,
    omega: f64,
    x: &[f64],
    y: &[f64],
) -> f64 {
    let ax = problem.a.apply_vec(x);
    omega * norm_sq(x) + 2.0 * eta * dot(y, &ax) + norm_sq(y) / omega
}

pub(crate) fn admm_norm_sq(eta: f64, x_v: &[f64], y: &[f64]) -> f64 {
    eta * norm_sq(x_v) + norm_sq(y) / eta
}
