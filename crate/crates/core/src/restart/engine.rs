//! Uniform interface over the methods for the restart driver.

use crate::error::{Error, Result};
use crate::gap::{normalized_gap_admm, pdhg_norm_gap_unconstrained, weighted_gap};
use crate::kkt::{residuals_from_products, Residuals};
use crate::linalg::{dot, norm_sq};
use crate::problem::{PrimalDomain, SaddlePoint, StandardFormLp};
use crate::steps::{
    admm_advance, egm_advance, pdhg_advance, ppm_advance, AdmmState, AffineProjector, Iterate,
    Method, PdPoint, StepConfig, AFFINE_TOL,
};

use super::GapNorm;

pub(crate) trait Engine {
    type Point: Iterate;

    fn init(&mut self, start: &SaddlePoint) -> Self::Point;
    /// Returns `(next, target)`.
    fn step(&mut self, z: &Self::Point) -> Result<(Self::Point, Self::Point)>;
    /// Distance in the norm of the gap computation.
    fn distance(&self, a: &Self::Point, b: &Self::Point) -> f64;
    fn gap(&mut self, z: &Self::Point, r: f64) -> Result<f64>;
    fn residuals(&mut self, z: &Self::Point) -> Residuals;
    fn saddle(&mut self, z: &Self::Point) -> SaddlePoint;
}

pub(crate) struct PdEngine<'a> {
    pub problem: &'a StandardFormLp,
    pub config: StepConfig,
    pub gap_norm: GapNorm,
}

impl<'a> PdEngine<'a> {
    pub fn new(problem: &'a StandardFormLp, config: StepConfig, gap_norm: GapNorm) -> Result<Self> {
        if gap_norm == GapNorm::MethodNorm
            && config.method == Method::Pdhg
            && problem.domain != PrimalDomain::Free
        {
            return Err(Error::InvalidParameter(
                "PDHG-norm gaps are only available for unconstrained problems".into(),
            ));
        }
        Ok(Self {
            problem,
            config,
            gap_norm,
        })
    }

    fn uses_pdhg_norm(&self) -> bool {
        self.gap_norm == GapNorm::MethodNorm && self.config.method == Method::Pdhg
    }
}

impl Engine for PdEngine<'_> {
    type Point = PdPoint;

    fn init(&mut self, start: &SaddlePoint) -> PdPoint {
        PdPoint::new(self.problem, start.clone())
    }

    fn step(&mut self, z: &PdPoint) -> Result<(PdPoint, PdPoint)> {
        let StepConfig { eta, omega, .. } = self.config;
        match self.config.method {
            Method::Pdhg => {
                let next = pdhg_advance(self.problem, z, eta, omega);
                Ok((next.clone(), next))
            }
            Method::Egm => Ok(egm_advance(self.problem, z, eta, omega)),
            Method::Ppm => {
                let next = ppm_advance(self.problem, z, eta)?;
                Ok((next.clone(), next))
            }
            Method::Admm => unreachable!("ADMM runs on its own engine"),
        }
    }

    fn distance(&self, a: &PdPoint, b: &PdPoint) -> f64 {
        let w = self.config.omega;
        let dx: Vec<f64> = a.z.x.iter().zip(&b.z.x).map(|(p, q)| p - q).collect();
        let dy: Vec<f64> = a.z.y.iter().zip(&b.z.y).map(|(p, q)| p - q).collect();
        let mut sq = w * norm_sq(&dx) + norm_sq(&dy) / w;
        if self.uses_pdhg_norm() {
            let dax: Vec<f64> = a.ax.iter().zip(&b.ax).map(|(p, q)| p - q).collect();
            sq += 2.0 * self.config.eta * dot(&dy, &dax);
        }
        sq.max(0.0).sqrt()
    }

    fn gap(&mut self, z: &PdPoint, r: f64) -> Result<f64> {
        if self.uses_pdhg_norm() {
            pdhg_norm_gap_unconstrained(self.problem, z, self.config.eta, self.config.omega)
        } else {
            Ok(weighted_gap(self.problem, z, r, self.config.omega)?.value)
        }
    }

    fn residuals(&mut self, z: &PdPoint) -> Residuals {
        residuals_from_products(self.problem, &z.z, &z.ax, &z.aty)
    }

    fn saddle(&mut self, z: &PdPoint) -> SaddlePoint {
        z.z.clone()
    }
}

/// ADMM on `x_U ∈ {Ax = b}`, `x_V ∈ domain`. LP duals are recovered as the
/// least-squares solution of `A⊤y_lp = −y`, since at a saddle point the
/// reduced cost `c − A⊤y_lp` equals `c + y`.
pub(crate) struct AdmmEngine<'a> {
    pub problem: &'a StandardFormLp,
    pub eta: f64,
    projector: AffineProjector,
    dual_solver: AffineProjector,
}

impl<'a> AdmmEngine<'a> {
    pub fn new(problem: &'a StandardFormLp, eta: f64) -> Self {
        Self {
            problem,
            eta,
            projector: AffineProjector::new(AFFINE_TOL),
            dual_solver: AffineProjector::new(AFFINE_TOL),
        }
    }
}

impl Engine for AdmmEngine<'_> {
    type Point = AdmmState;

    fn init(&mut self, start: &SaddlePoint) -> AdmmState {
        let y = self
            .problem
            .a
            .apply_transpose_vec(&start.y)
            .into_iter()
            .map(|v| -v)
            .collect();
        AdmmState {
            x_u: start.x.clone(),
            x_v: start.x.clone(),
            y,
        }
    }

    fn step(&mut self, z: &AdmmState) -> Result<(AdmmState, AdmmState)> {
        Ok(admm_advance(self.problem, &mut self.projector, z, self.eta))
    }

    fn distance(&self, a: &AdmmState, b: &AdmmState) -> f64 {
        let dx: f64 = a.x_v.iter().zip(&b.x_v).map(|(p, q)| (p - q).powi(2)).sum();
        let dy: f64 = a.y.iter().zip(&b.y).map(|(p, q)| (p - q).powi(2)).sum();
        (self.eta * dx + dy / self.eta).sqrt()
    }

    fn gap(&mut self, z: &AdmmState, r: f64) -> Result<f64> {
        Ok(normalized_gap_admm(self.problem, z, r, self.eta)?.value)
    }

    fn residuals(&mut self, z: &AdmmState) -> Residuals {
        let s = self.saddle(z);
        let ax = self.problem.a.apply_vec(&s.x);
        let aty = self.problem.a.apply_transpose_vec(&s.y);
        residuals_from_products(self.problem, &s, &ax, &aty)
    }

    fn saddle(&mut self, z: &AdmmState) -> SaddlePoint {
        let neg_y: Vec<f64> = z.y.iter().map(|v| -v).collect();
        let y = self
            .dual_solver
            .least_squares_transpose(&self.problem.a, &neg_y);
        SaddlePoint {
            x: z.x_v.clone(),
            y,
        }
    }
}
