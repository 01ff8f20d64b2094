//! Closed-form PDHG dynamics on one block `L = σxy` of the diagonal
//! bilinear problem.

use std::ops::{Add, Div, Mul, Sub};

use crate::error::{Error, Result};

/// Minimal complex arithmetic for the eigenbasis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cx {
    pub re: f64,
    pub im: f64,
}

impl Cx {
    pub const fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }

    pub fn abs(self) -> f64 {
        self.re.hypot(self.im)
    }

    pub fn conj(self) -> Self {
        Self::new(self.re, -self.im)
    }

    pub fn scale(self, s: f64) -> Self {
        Self::new(self.re * s, self.im * s)
    }
}

impl Add for Cx {
    type Output = Cx;
    fn add(self, o: Cx) -> Cx {
        Cx::new(self.re + o.re, self.im + o.im)
    }
}

impl Sub for Cx {
    type Output = Cx;
    fn sub(self, o: Cx) -> Cx {
        Cx::new(self.re - o.re, self.im - o.im)
    }
}

impl Mul for Cx {
    type Output = Cx;
    fn mul(self, o: Cx) -> Cx {
        Cx::new(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )
    }
}

impl Div for Cx {
    type Output = Cx;
    fn div(self, o: Cx) -> Cx {
        let d = o.re * o.re + o.im * o.im;
        Cx::new(
            (self.re * o.re + self.im * o.im) / d,
            (self.im * o.re - self.re * o.im) / d,
        )
    }
}

fn check_block(eta: f64, sigma: f64) -> Result<()> {
    if !(eta > 0.0 && sigma > 0.0 && eta * sigma < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "need 0 < eta*sigma < 1, got eta = {eta}, sigma = {sigma}"
        )));
    }
    Ok(())
}

/// PDHG update matrix on `(x, y)`: `[[1, −ησ], [ησ, 1 − 2η²σ²]]`.
pub fn dynamics_matrix(eta: f64, sigma: f64) -> [[f64; 2]; 2] {
    let a = eta * sigma;
    [[1.0, -a], [a, 1.0 - 2.0 * a * a]]
}

pub fn apply_dynamics(p: &[[f64; 2]; 2], v: [f64; 2]) -> [f64; 2] {
    [
        p[0][0] * v[0] + p[0][1] * v[1],
        p[1][0] * v[0] + p[1][1] * v[1],
    ]
}

/// Eigenvalues `γ± = (1 − η²σ²) ∓ iησ√(1 − η²σ²)` and eigenvector matrix
/// `Q = [[ησ − i√(1 − η²σ²), ησ + i√(1 − η²σ²)], [1, 1]]`, so that
/// `P = Q·diag(γ+, γ−)·Q⁻¹`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenData {
    pub gamma_plus: Cx,
    pub gamma_minus: Cx,
    pub q: [[Cx; 2]; 2],
}

pub fn eigen_decomposition(eta: f64, sigma: f64) -> Result<EigenData> {
    check_block(eta, sigma)?;
    let a = eta * sigma;
    let s = (1.0 - a * a).sqrt();
    let one = Cx::new(1.0, 0.0);
    Ok(EigenData {
        gamma_plus: Cx::new(1.0 - a * a, -a * s),
        gamma_minus: Cx::new(1.0 - a * a, a * s),
        q: [[Cx::new(a, -s), Cx::new(a, s)], [one, one]],
    })
}

impl EigenData {
    /// `Q⁻¹v` for a real vector `v`.
    pub fn to_eigen_coords(&self, v: [f64; 2]) -> [Cx; 2] {
        let [[q11, q12], [q21, q22]] = self.q;
        let det = q11 * q22 - q12 * q21;
        let v1 = Cx::new(v[0], 0.0);
        let v2 = Cx::new(v[1], 0.0);
        [
            (q22 * v1 - q12 * v2) / det,
            (q11 * v2 - q21 * v1) / det,
        ]
    }

    /// `Q·diag(γ+, γ−)·Q⁻¹` reassembled; its imaginary part vanishes.
    pub fn reconstruct(&self) -> [[Cx; 2]; 2] {
        let mut out = [[Cx::new(0.0, 0.0); 2]; 2];
        for (col, e) in [[1.0, 0.0], [0.0, 1.0]].into_iter().enumerate() {
            let w = self.to_eigen_coords(e);
            let g = [w[0] * self.gamma_plus, w[1] * self.gamma_minus];
            for (row, out_row) in out.iter_mut().enumerate() {
                out_row[col] = self.q[row][0] * g[0] + self.q[row][1] * g[1];
            }
        }
        out
    }
}

/// `‖v‖_B = ‖Q⁻¹v‖₂` with `B = (Q⁻¹)†Q⁻¹`.
pub fn b_norm(eta: f64, sigma: f64, v: [f64; 2]) -> Result<f64> {
    let e = eigen_decomposition(eta, sigma)?;
    let w = e.to_eigen_coords(v);
    Ok((w[0].abs().powi(2) + w[1].abs().powi(2)).sqrt())
}

/// `‖z‖_B` summed over blocks, where `z = (x, y)` and block `i` is
/// `(xᵢ, yᵢ)` with singular value `σᵢ`.
pub fn b_norm_blocks(eta: f64, sigmas: &[f64], x: &[f64], y: &[f64]) -> Result<f64> {
    let mut sq = 0.0;
    for (i, &s) in sigmas.iter().enumerate() {
        sq += b_norm(eta, s, [x[i], y[i]])?.powi(2);
    }
    Ok(sq.sqrt())
}

/// Envelope `(lower, upper)` on `‖z̄^K‖_B` for the average of the first `K`
/// PDHG iterates: upper `2‖z⁰‖_B/(Kησ)`, lower
/// `(√3/2)·ησ‖z⁰‖_B/(2 + Kη²σ²)`. Needs `ησ ≤ 1/2`.
pub fn theoretical_average_bound(eta: f64, sigma: f64, k: usize, z0_b: f64) -> Result<(f64, f64)> {
    check_block(eta, sigma)?;
    if eta * sigma > 0.5 {
        return Err(Error::InvalidParameter(
            "the average-iterate envelope needs eta*sigma <= 1/2".into(),
        ));
    }
    if k == 0 {
        return Err(Error::InvalidParameter("K must be at least 1".into()));
    }
    let a = eta * sigma;
    let kf = k as f64;
    let upper = 2.0 * z0_b / (kf * a);
    let lower = 3f64.sqrt() / 2.0 * a * z0_b / (2.0 + kf * a * a);
    Ok((lower, upper))
}

/// `‖z̄^K‖_B` by direct simulation, with `z̄^K = (1/K)Σ_{t=1}^K zᵗ`.
pub fn average_iterate_b_norm(eta: f64, sigma: f64, z0: [f64; 2], k: usize) -> Result<f64> {
    check_block(eta, sigma)?;
    let p = dynamics_matrix(eta, sigma);
    let mut z = z0;
    let mut sum = [0.0; 2];
    for _ in 0..k {
        z = apply_dynamics(&p, z);
        sum[0] += z[0];
        sum[1] += z[1];
    }
    let kf = k as f64;
    b_norm(eta, sigma, [sum[0] / kf, sum[1] / kf])
}
