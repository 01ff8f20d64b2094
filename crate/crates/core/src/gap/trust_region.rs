//! `min g⊤ẑ  s.t.  ẑ ≥ l, ‖ẑ − z‖₂ ≤ r` in linear time.
//!
//! The solution is `ẑ(λ) = max(z − λg, l)` for the `λ` at which the path
//! leaves the ball. Sorting the breakpoints `λ̂ᵢ = (zᵢ − lᵢ)/gᵢ` would cost
//! `n log n`; halving the candidate set around its median instead keeps the
//! total work linear.

use super::select::select_kth;
use crate::error::{check_len, Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct TrustRegionProblem {
    pub g: Vec<f64>,
    pub z: Vec<f64>,
    /// Lower bounds; `-inf` for unbounded coordinates.
    pub lower: Vec<f64>,
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrustRegionSolution {
    pub point: Vec<f64>,
    /// Step multiplier; infinite when every moving coordinate sits at its
    /// bound inside the ball.
    pub lambda: f64,
    /// `g⊤(ẑ − z)`, never positive.
    pub objective_change: f64,
}

impl TrustRegionProblem {
    pub(crate) fn validate(&self) -> Result<()> {
        let n = self.z.len();
        check_len("trust-region gradient", n, self.g.len())?;
        check_len("trust-region bounds", n, self.lower.len())?;
        if !(self.radius >= 0.0 && self.radius.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "trust-region radius must be finite and >= 0, got {}",
                self.radius
            )));
        }
        for i in 0..n {
            if !self.g[i].is_finite() || !self.z[i].is_finite() {
                return Err(Error::InvalidParameter(
                    "trust-region data must be finite".into(),
                ));
            }
            if self.lower[i] > self.z[i] || self.lower[i].is_nan() {
                return Err(Error::InvalidParameter(format!(
                    "center violates its lower bound at coordinate {i}"
                )));
            }
        }
        Ok(())
    }

    /// `ẑ(λ)`; a negative gradient component moves away from its bound and
    /// is never clamped.
    pub fn point_at(&self, lambda: f64) -> Vec<f64> {
        (0..self.z.len())
            .map(|i| {
                let g = self.g[i];
                if g > 0.0 {
                    if lambda.is_infinite() {
                        self.lower[i]
                    } else {
                        (self.z[i] - lambda * g).max(self.lower[i])
                    }
                } else if g < 0.0 {
                    self.z[i] - lambda * g
                } else {
                    self.z[i]
                }
            })
            .collect()
    }

    pub(crate) fn solution_at(&self, lambda: f64) -> TrustRegionSolution {
        let point = self.point_at(lambda);
        let objective_change = (0..point.len())
            .map(|i| self.g[i] * (point[i] - self.z[i]))
            .sum();
        TrustRegionSolution {
            point,
            lambda,
            objective_change,
        }
    }

    /// Whether the whole path stays inside the ball, so the answer is the
    /// bound-limited endpoint.
    pub(crate) fn endpoint_inside(&self) -> bool {
        let mut sq = 0.0;
        for i in 0..self.z.len() {
            let g = self.g[i];
            if g < 0.0 || (g > 0.0 && self.lower[i] == f64::NEG_INFINITY) {
                return false;
            }
            if g > 0.0 {
                sq += (self.lower[i] - self.z[i]).powi(2);
            }
        }
        sq <= self.radius * self.radius
    }
}

pub fn solve_linear_trust_region(p: &TrustRegionProblem) -> Result<TrustRegionSolution> {
    p.validate()?;
    if p.endpoint_inside() {
        return Ok(p.solution_at(f64::INFINITY));
    }
    let r2 = p.radius * p.radius;
    let n = p.z.len();
    // Breakpoints and per-coordinate terms for coordinates that can hit a bound.
    let mut bp = Vec::new();
    let mut dist2 = Vec::new();
    let mut g2 = Vec::new();
    let mut f_lo = 0.0;
    let mut f_hi = 0.0;
    for i in 0..n {
        let g = p.g[i];
        if g > 0.0 && p.lower[i].is_finite() {
            let d = p.z[i] - p.lower[i];
            if d > 0.0 {
                bp.push(d / g);
                dist2.push(d * d);
                g2.push(g * g);
            }
        } else if g != 0.0 {
            f_hi += g * g;
        }
    }
    let mut active: Vec<usize> = (0..bp.len()).collect();
    let mut scratch = Vec::with_capacity(active.len());
    while !active.is_empty() {
        scratch.clear();
        scratch.extend(active.iter().map(|&k| bp[k]));
        let k = (scratch.len() - 1) / 2;
        let mid = select_kth(&mut scratch, k);
        let mut f_mid = f_lo + f_hi * mid * mid;
        for &k in &active {
            f_mid += if bp[k] <= mid {
                dist2[k]
            } else {
                mid * mid * g2[k]
            };
        }
        if f_mid < r2 {
            active.retain(|&k| {
                if bp[k] <= mid {
                    f_lo += dist2[k];
                    false
                } else {
                    true
                }
            });
        } else {
            active.retain(|&k| {
                if bp[k] >= mid {
                    f_hi += g2[k];
                    false
                } else {
                    true
                }
            });
        }
    }
    let lambda = if f_hi > 0.0 {
        ((r2 - f_lo).max(0.0) / f_hi).sqrt()
    } else {
        f64::INFINITY
    };
    Ok(p.solution_at(lambda))
}
