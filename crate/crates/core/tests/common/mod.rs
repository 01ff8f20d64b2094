//! Shared helpers and independent reference routines for the integration
//! tests.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use restart_lp::{SaddlePoint, SparseMatrix, StandardFormLp};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Sparse matrix with roughly `density·m·n` entries drawn from `[-2, 2)`.
pub fn random_sparse(rng: &mut ChaCha8Rng, m: usize, n: usize, density: f64) -> SparseMatrix {
    let mut t = Vec::new();
    for i in 0..m {
        for j in 0..n {
            if rng.random::<f64>() < density {
                t.push((i, j, rng.random_range(-2.0..2.0)));
            }
        }
    }
    SparseMatrix::from_triplets(m, n, &t).unwrap()
}

pub fn random_vec(rng: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(lo..hi)).collect()
}

/// Random LP data (not necessarily feasible) with a random point `x ≥ 0`.
pub fn random_problem_and_point(
    rng: &mut ChaCha8Rng,
    m: usize,
    n: usize,
) -> (StandardFormLp, SaddlePoint) {
    let a = random_sparse(rng, m, n, 0.4);
    let b = random_vec(rng, m, -1.0, 1.0);
    let c = random_vec(rng, n, -1.0, 1.0);
    let p = StandardFormLp::new(a, b, c).unwrap();
    let z = SaddlePoint::new(random_vec(rng, n, 0.0, 2.0), random_vec(rng, m, -2.0, 2.0));
    (p, z)
}

pub fn to_dmatrix(a: &SparseMatrix) -> DMatrix<f64> {
    let mut d = DMatrix::zeros(a.rows(), a.cols());
    for (i, j, v) in a.triplets() {
        d[(i, j)] = v;
    }
    d
}

/// Largest singular value from a dense SVD.
pub fn dense_sigma_max(a: &SparseMatrix) -> f64 {
    to_dmatrix(a)
        .singular_values()
        .iter()
        .copied()
        .fold(0.0, f64::max)
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for j in start..n {
            cur.push(j);
            rec(j + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Every basic feasible solution of `Ax = b, x ≥ 0`, by brute force over
/// column subsets.
pub fn basic_feasible_solutions(problem: &StandardFormLp) -> Vec<Vec<f64>> {
    let a = to_dmatrix(&problem.a);
    let b = DVector::from_vec(problem.b.clone());
    let (m, n) = (problem.m(), problem.n());
    let rank = a.rank(1e-10);
    let mut out = Vec::new();
    for basis in subsets(n, rank) {
        let cols: Vec<_> = basis.iter().map(|&j| a.column(j).into_owned()).collect();
        let ab = if cols.is_empty() {
            DMatrix::zeros(m, 0)
        } else {
            DMatrix::from_columns(&cols)
        };
        if ab.rank(1e-10) < rank {
            continue;
        }
        let xb = match ab.clone().svd(true, true).solve(&b, 1e-12) {
            Ok(v) => v,
            Err(_) => continue,
        };
        if (&ab * &xb - &b).norm() > 1e-9 || xb.iter().any(|&v| v < -1e-10) {
            continue;
        }
        let mut x = vec![0.0; n];
        for (k, &j) in basis.iter().enumerate() {
            x[j] = xb[k].max(0.0);
        }
        out.push(x);
    }
    out
}

/// `min c⊤x s.t. Ax = b, x ≥ 0` by vertex enumeration. Assumes the LP is
/// bounded; returns `None` when infeasible.
pub fn vertex_enumeration(problem: &StandardFormLp) -> Option<(f64, Vec<f64>)> {
    let mut best: Option<(f64, Vec<f64>)> = None;
    for x in basic_feasible_solutions(problem) {
        let obj: f64 = x.iter().zip(&problem.c).map(|(x, c)| x * c).sum();
        if best.as_ref().is_none_or(|(o, _)| obj < *o) {
            best = Some((obj, x));
        }
    }
    best
}

/// PDHG from `(x, y)` on `min_x max_y σxy` without projections, written
/// out directly from the update rule.
pub fn direct_bilinear_pdhg(sigma: f64, eta: f64, mut x: f64, mut y: f64, steps: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(steps);
    for _ in 0..steps {
        let x_new = x - eta * sigma * y;
        y += eta * sigma * (2.0 * x_new - x);
        x = x_new;
        out.push((x, y));
    }
    out
}

/// Random trust-region problem with mixed signs, zeros, finite and infinite
/// bounds, and centres both on and above their bounds.
pub fn random_trust_region(rng: &mut ChaCha8Rng, dim: usize) -> restart_lp::gap::TrustRegionProblem {
    let mut g = Vec::with_capacity(dim);
    let mut z = Vec::with_capacity(dim);
    let mut lower = Vec::with_capacity(dim);
    for _ in 0..dim {
        let gi = match rng.random_range(0..10) {
            0 => 0.0,
            _ => rng.random_range(-3.0..3.0),
        };
        let zi = rng.random_range(-2.0..2.0);
        let li = match rng.random_range(0..3) {
            0 => f64::NEG_INFINITY,
            1 => zi,
            _ => zi - rng.random_range(0.0..1.5),
        };
        g.push(gi);
        z.push(zi);
        lower.push(li);
    }
    let radius = rng.random_range(0.01..3.0) * (dim as f64).sqrt().max(1.0) * 0.5;
    restart_lp::gap::TrustRegionProblem { g, z, lower, radius }
}

/// Lowest objective `g⊤p` over `count` random feasible points: a random
/// point of the ball, clamped onto the bounds (which never increases its
/// distance from the centre).
pub fn best_random_probe(rng: &mut ChaCha8Rng, p: &restart_lp::gap::TrustRegionProblem, count: usize) -> f64 {
    let dim = p.z.len();
    let mut dir = vec![0.0; dim];
    let mut best = f64::INFINITY;
    for _ in 0..count {
        let mut nrm = 0.0f64;
        for d in dir.iter_mut() {
            *d = rng.random_range(-1.0..1.0);
            nrm += *d * *d;
        }
        let scale = p.radius * rng.random::<f64>().sqrt() / nrm.sqrt().max(1e-300);
        let mut obj = 0.0;
        for i in 0..dim {
            let v = (p.z[i] + scale * dir[i]).max(p.lower[i]);
            obj += p.g[i] * v;
        }
        best = best.min(obj);
    }
    best
}

pub fn tr_objective(p: &restart_lp::gap::TrustRegionProblem, point: &[f64]) -> f64 {
    p.g.iter().zip(point).map(|(g, v)| g * v).sum()
}
