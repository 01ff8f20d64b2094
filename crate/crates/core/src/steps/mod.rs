//! One-step updates of the primal-dual methods. Each step returns the next
//! iterate together with the target point that enters the running average.

mod admm;
mod egm;
mod pdhg;
mod ppm;

pub use admm::{
    admm_step, affine_project, AdmmState, AffineProjection, AffineProjector, AFFINE_TOL,
};
pub use egm::egm_step;
pub use pdhg::pdhg_step;
pub use ppm::ppm_step;

pub(crate) use admm::admm_advance;
pub(crate) use egm::egm_advance;
pub(crate) use pdhg::pdhg_advance;
pub(crate) use ppm::ppm_advance;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::{PrimalDomain, SaddlePoint, StandardFormLp};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    Pdhg,
    Egm,
    Admm,
    /// Proximal point, only for unconstrained bilinear problems.
    Ppm,
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "pdhg" => Ok(Method::Pdhg),
            "egm" => Ok(Method::Egm),
            "admm" => Ok(Method::Admm),
            "ppm" => Ok(Method::Ppm),
            other => Err(Error::InvalidParameter(format!("unknown method `{other}`"))),
        }
    }
}

/// Constants `(C, q)` of the sublinear rate and iterate-boundedness
/// properties satisfied by each method.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MethodConstants {
    pub c: f64,
    pub q: f64,
}

pub fn method_constants(method: Method, eta: f64) -> MethodConstants {
    match method {
        Method::Pdhg => MethodConstants { c: 1.0 / eta, q: 0.0 },
        Method::Egm => MethodConstants { c: 1.0 / eta, q: 3.0 },
        Method::Admm => MethodConstants { c: 1.0, q: 2.0 },
        Method::Ppm => MethodConstants { c: 1.0 / eta, q: 0.0 },
    }
}

/// Safety factor applied to the `σmax` estimate to get the EGM Lipschitz
/// constant.
pub const EGM_LIPSCHITZ_SAFETY: f64 = 1.01;

/// Step parameters. `omega` is the primal weight: primal step `η/ω`, dual
/// step `ηω` (PDHG and EGM only).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepConfig {
    pub method: Method,
    pub eta: f64,
    pub omega: f64,
}

impl StepConfig {
    pub fn new(method: Method, eta: f64, omega: f64) -> Self {
        Self { method, eta, omega }
    }

    /// Default step size: `0.9/σmax` for PDHG and EGM, `1` for ADMM and PPM.
    pub fn default_eta(method: Method, sigma_max: f64) -> f64 {
        match method {
            Method::Pdhg | Method::Egm => 0.9 / sigma_max,
            Method::Admm | Method::Ppm => 1.0,
        }
    }

    pub fn constants(&self) -> MethodConstants {
        method_constants(self.method, self.eta)
    }

    /// Checks the step against the problem and, when given, the `σmax`
    /// estimate.
    pub fn validate(&self, problem: &StandardFormLp, sigma_max: Option<f64>) -> Result<()> {
        let sigma_max = sigma_max.unwrap_or(0.0);
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if !(self.eta > 0.0 && self.eta.is_finite()) {
            return bad(format!("step size must be positive, got {}", self.eta));
        }
        if !(self.omega > 0.0 && self.omega.is_finite()) {
            return bad(format!("primal weight must be positive, got {}", self.omega));
        }
        match self.method {
            Method::Pdhg if self.eta * sigma_max > 1.0 => bad(format!(
                "PDHG needs eta <= 1/sigma_max = {}, got {}",
                1.0 / sigma_max,
                self.eta
            )),
            Method::Egm if self.eta * EGM_LIPSCHITZ_SAFETY * sigma_max > 1.0 => bad(format!(
                "EGM needs eta <= 1/L = {}, got {}",
                1.0 / (EGM_LIPSCHITZ_SAFETY * sigma_max),
                self.eta
            )),
            Method::Ppm if problem.domain != PrimalDomain::Free => {
                bad("PPM is only available for unconstrained bilinear problems".into())
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepOutput<T> {
    pub next: T,
    pub target: T,
}

/// A method state that can be averaged component-wise.
pub trait Iterate: Clone {
    fn parts(&self) -> Vec<&[f64]>;
    fn parts_mut(&mut self) -> Vec<&mut [f64]>;

    fn is_finite(&self) -> bool {
        self.parts().iter().all(|p| crate::linalg::all_finite(p))
    }

    /// `self ← (1 − w)·self + w·other`.
    fn blend(&mut self, other: &Self, w: f64) {
        let src = other.parts();
        for (dst, src) in self.parts_mut().into_iter().zip(src) {
            for (d, s) in dst.iter_mut().zip(src) {
                *d += w * (s - *d);
            }
        }
    }
}

/// Saddle point with cached `Ax` and `A⊤y`. The products are linear in the
/// point, so averages of cached points carry valid products.
#[derive(Debug, Clone, PartialEq)]
pub struct PdPoint {
    pub z: SaddlePoint,
    pub ax: Vec<f64>,
    pub aty: Vec<f64>,
}

impl PdPoint {
    pub fn new(problem: &StandardFormLp, z: SaddlePoint) -> Self {
        let ax = problem.a.apply_vec(&z.x);
        let aty = problem.a.apply_transpose_vec(&z.y);
        Self { z, ax, aty }
    }

    pub(crate) fn from_parts(problem: &StandardFormLp, x: Vec<f64>, y: Vec<f64>) -> Self {
        Self::new(problem, SaddlePoint { x, y })
    }
}

impl Iterate for PdPoint {
    fn parts(&self) -> Vec<&[f64]> {
        vec![&self.z.x, &self.z.y, &self.ax, &self.aty]
    }

    fn parts_mut(&mut self) -> Vec<&mut [f64]> {
        vec![&mut self.z.x, &mut self.z.y, &mut self.ax, &mut self.aty]
    }
}

impl Iterate for SaddlePoint {
    fn parts(&self) -> Vec<&[f64]> {
        vec![&self.x, &self.y]
    }

    fn parts_mut(&mut self) -> Vec<&mut [f64]> {
        vec![&mut self.x, &mut self.y]
    }
}
