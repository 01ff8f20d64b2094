//! KKT system `Kz ≥ h` of a standard-form LP and its residuals.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::linalg::dot;
use crate::problem::{PrimalDomain, SaddlePoint, StandardFormLp};
use crate::sparse::SparseMatrix;

/// Explicit KKT operator. For `x ≥ 0` the rows are
/// `[I 0; −A 0; A 0; 0 −A⊤; −c⊤ b⊤]` with `h = (0, −b, b, −c, 0)`.
/// For a free primal the `I` block is dropped and dual feasibility becomes
/// the equality pair `0 −A⊤ ≥ −c`, `0 A⊤ ≥ c`.
#[derive(Debug, Clone)]
pub struct KktSystem {
    pub k: SparseMatrix,
    pub h: Vec<f64>,
}

impl KktSystem {
    pub fn build(problem: &StandardFormLp) -> Result<Self> {
        let (m, n) = (problem.m(), problem.n());
        let a = problem.a.triplets();
        let mut t = Vec::with_capacity(4 * a.len() + 2 * n + m);
        let mut h = Vec::new();
        let mut row = 0;
        if problem.domain == PrimalDomain::NonNegative {
            for j in 0..n {
                t.push((j, j, 1.0));
            }
            h.extend(std::iter::repeat_n(0.0, n));
            row = n;
        }
        for &(i, j, v) in &a {
            t.push((row + i, j, -v));
            t.push((row + m + i, j, v));
        }
        h.extend(problem.b.iter().map(|v| -v));
        h.extend(problem.b.iter().copied());
        row += 2 * m;
        for &(i, j, v) in &a {
            t.push((row + j, n + i, -v));
        }
        h.extend(problem.c.iter().map(|v| -v));
        row += n;
        if problem.domain == PrimalDomain::Free {
            for &(i, j, v) in &a {
                t.push((row + j, n + i, v));
            }
            h.extend(problem.c.iter().copied());
            row += n;
        }
        for (j, &cj) in problem.c.iter().enumerate() {
            t.push((row, j, -cj));
        }
        for (i, &bi) in problem.b.iter().enumerate() {
            t.push((row, n + i, bi));
        }
        h.push(0.0);
        row += 1;
        let k = SparseMatrix::from_triplets(row, n + m, &t)?;
        Ok(Self { k, h })
    }

    /// `‖(h − Kz)⁺‖₂` evaluated through the explicit operator.
    pub fn error(&self, z: &SaddlePoint) -> Result<f64> {
        let flat = z.to_flat();
        let kz = self.k.matvec(&flat)?;
        Ok(self
            .h
            .iter()
            .zip(&kz)
            .map(|(h, v)| (h - v).max(0.0).powi(2))
            .sum::<f64>()
            .sqrt())
    }

    /// The vector `(h − Kz)⁺`.
    pub fn violation(&self, z: &SaddlePoint) -> Result<Vec<f64>> {
        let kz = self.k.matvec(&z.to_flat())?;
        Ok(self.h.iter().zip(&kz).map(|(h, v)| (h - v).max(0.0)).collect())
    }
}

/// Norms of the individual KKT blocks at a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Residuals {
    /// `‖x⁻‖₂` (zero for a free primal).
    pub bound_violation: f64,
    /// `‖Ax − b‖₂`.
    pub primal_residual: f64,
    /// `‖(c − A⊤y)⁻‖₂`, or `‖c − A⊤y‖₂` for a free primal.
    pub dual_residual: f64,
    /// `(c⊤x − b⊤y)⁺`.
    pub gap_residual: f64,
    /// `‖(h − Kz)⁺‖₂`.
    pub kkt_error: f64,
}

/// Residuals at `z` computed from the block structure.
pub fn residuals(problem: &StandardFormLp, z: &SaddlePoint) -> Result<Residuals> {
    problem.check_point(z)?;
    let ax = problem.a.apply_vec(&z.x);
    let aty = problem.a.apply_transpose_vec(&z.y);
    Ok(residuals_from_products(problem, z, &ax, &aty))
}

/// KKT error `‖(h − Kz)⁺‖₂`.
pub fn kkt_error(problem: &StandardFormLp, z: &SaddlePoint) -> Result<f64> {
    Ok(residuals(problem, z)?.kkt_error)
}

/// Residuals given cached products `Ax` and `A⊤y`.
pub(crate) fn residuals_from_products(
    problem: &StandardFormLp,
    z: &SaddlePoint,
    ax: &[f64],
    aty: &[f64],
) -> Residuals {
    let bound_sq = match problem.domain {
        PrimalDomain::NonNegative => z.x.iter().map(|v| v.min(0.0).powi(2)).sum(),
        PrimalDomain::Free => 0.0,
    };
    let primal_sq: f64 = ax.iter().zip(&problem.b).map(|(v, b)| (v - b).powi(2)).sum();
    let dual_sq: f64 = match problem.domain {
        PrimalDomain::NonNegative => problem
            .c
            .iter()
            .zip(aty)
            .map(|(c, v)| (c - v).min(0.0).powi(2))
            .sum(),
        PrimalDomain::Free => problem.c.iter().zip(aty).map(|(c, v)| (c - v).powi(2)).sum(),
    };
    let gap = (dot(&problem.c, &z.x) - dot(&problem.b, &z.y)).max(0.0);
    Residuals {
        bound_violation: bound_sq.sqrt(),
        primal_residual: primal_sq.sqrt(),
        dual_residual: dual_sq.sqrt(),
        gap_residual: gap,
        kkt_error: (bound_sq + primal_sq + dual_sq + gap * gap).sqrt(),
    }
}
