//! Standard-form LP data, primal-dual points and the Lagrangian.

use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};
use crate::sparse::SparseMatrix;

/// Domain of the primal variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PrimalDomain {
    /// `x ≥ 0`, the usual LP case.
    NonNegative,
    /// `x` unconstrained. Used for the unconstrained bilinear problems.
    Free,
}

/// `min c⊤x  s.t.  Ax = b, x ∈ domain`, with Lagrangian
/// `L(x, y) = c⊤x + y⊤b − y⊤Ax`.
#[derive(Debug, Clone)]
pub struct StandardFormLp {
    pub a: SparseMatrix,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    pub domain: PrimalDomain,
    /// Constant added to `c⊤x` to recover the original objective.
    pub objective_offset: f64,
}

impl StandardFormLp {
    pub fn new(a: SparseMatrix, b: Vec<f64>, c: Vec<f64>) -> Result<Self> {
        Self::with_domain(a, b, c, PrimalDomain::NonNegative)
    }

    pub fn with_domain(
        a: SparseMatrix,
        b: Vec<f64>,
        c: Vec<f64>,
        domain: PrimalDomain,
    ) -> Result<Self> {
        check_len("right-hand side", a.rows(), b.len())?;
        check_len("objective", a.cols(), c.len())?;
        if !b.iter().chain(&c).all(|v| v.is_finite()) {
            return Err(Error::InvalidParameter(
                "problem data must be finite".into(),
            ));
        }
        Ok(Self {
            a,
            b,
            c,
            domain,
            objective_offset: 0.0,
        })
    }

    /// The unconstrained bilinear problem `min_x max_y y⊤Kx`. In LP form
    /// this is `c = 0`, `b = 0` and constraint matrix `A = −K`.
    pub fn bilinear(coupling: &SparseMatrix) -> Self {
        Self {
            a: coupling.scaled(-1.0),
            b: vec![0.0; coupling.rows()],
            c: vec![0.0; coupling.cols()],
            domain: PrimalDomain::Free,
            objective_offset: 0.0,
        }
    }

    /// Number of primal variables.
    pub fn n(&self) -> usize {
        self.a.cols()
    }

    /// Number of equality constraints.
    pub fn m(&self) -> usize {
        self.a.rows()
    }

    pub fn zero_point(&self) -> SaddlePoint {
        SaddlePoint::zeros(self.n(), self.m())
    }

    pub(crate) fn project_primal(&self, v: f64) -> f64 {
        match self.domain {
            PrimalDomain::NonNegative => v.max(0.0),
            PrimalDomain::Free => v,
        }
    }

    pub(crate) fn primal_lower_bound(&self) -> f64 {
        match self.domain {
            PrimalDomain::NonNegative => 0.0,
            PrimalDomain::Free => f64::NEG_INFINITY,
        }
    }

    pub fn check_point(&self, z: &SaddlePoint) -> Result<()> {
        check_len("primal point", self.n(), z.x.len())?;
        check_len("dual point", self.m(), z.y.len())
    }
}

/// A primal-dual pair `z = (x, y)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SaddlePoint {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl SaddlePoint {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Self {
        Self { x, y }
    }

    pub fn zeros(n: usize, m: usize) -> Self {
        Self {
            x: vec![0.0; n],
            y: vec![0.0; m],
        }
    }

    /// `(x, y)` stacked into one vector.
    pub fn to_flat(&self) -> Vec<f64> {
        let mut v = self.x.clone();
        v.extend_from_slice(&self.y);
        v
    }

    pub fn from_flat(v: &[f64], n: usize) -> Self {
        Self {
            x: v[..n].to_vec(),
            y: v[n..].to_vec(),
        }
    }

    pub fn is_finite(&self) -> bool {
        crate::linalg::all_finite(&self.x) && crate::linalg::all_finite(&self.y)
    }
}

/// `L(x, y) = c⊤x + y⊤b − y⊤Ax`.
pub fn lagrangian(problem: &StandardFormLp, z: &SaddlePoint) -> Result<f64> {
    problem.check_point(z)?;
    let ax = problem.a.apply_vec(&z.x);
    Ok(crate::linalg::dot(&problem.c, &z.x) + crate::linalg::dot(&z.y, &problem.b)
        - crate::linalg::dot(&z.y, &ax))
}

/// `F(z) = (∇ₓL, −∇ᵧL) = (c − A⊤y, Ax − b)`.
pub fn gradient_field(problem: &StandardFormLp, z: &SaddlePoint) -> Result<SaddlePoint> {
    problem.check_point(z)?;
    let aty = problem.a.apply_transpose_vec(&z.y);
    let ax = problem.a.apply_vec(&z.x);
    Ok(SaddlePoint {
        x: problem.c.iter().zip(&aty).map(|(c, v)| c - v).collect(),
        y: ax.iter().zip(&problem.b).map(|(v, b)| v - b).collect(),
    })
}
