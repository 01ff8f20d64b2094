//! Synthetic instances with known saddle points.

use std::str::FromStr;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::{SaddlePoint, StandardFormLp};
use crate::sparse::SparseMatrix;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum GeneratorSpec {
    /// `min_x max_y y⊤ diag(σ) x` with saddle point `0`.
    DiagonalBilinear { singular_values: Vec<f64> },
    /// Sparse LP whose optimum `(x⋆, y⋆)` is planted.
    RandomLpKnownOptimum {
        m: usize,
        n: usize,
        density: f64,
        seed: u64,
    },
    /// `min_x max_y xy`.
    TwoDimToy,
}

#[derive(Debug, Clone)]
pub struct GeneratedInstance {
    pub problem: StandardFormLp,
    pub optimum: SaddlePoint,
}

pub fn generate(spec: &GeneratorSpec) -> Result<GeneratedInstance> {
    match spec {
        GeneratorSpec::DiagonalBilinear { singular_values } => {
            if singular_values.is_empty() || singular_values.iter().any(|&s| !(s > 0.0)) {
                return Err(Error::InvalidParameter(
                    "singular values must be positive and non-empty".into(),
                ));
            }
            let k = SparseMatrix::diagonal(singular_values)?;
            let problem = StandardFormLp::bilinear(&k);
            let optimum = problem.zero_point();
            Ok(GeneratedInstance { problem, optimum })
        }
        GeneratorSpec::TwoDimToy => {
            let problem = StandardFormLp::bilinear(&SparseMatrix::identity(1));
            let optimum = problem.zero_point();
            Ok(GeneratedInstance { problem, optimum })
        }
        &GeneratorSpec::RandomLpKnownOptimum {
            m,
            n,
            density,
            seed,
        } => random_lp(m, n, density, seed),
    }
}

fn random_lp(m: usize, n: usize, density: f64, seed: u64) -> Result<GeneratedInstance> {
    if m == 0 || n == 0 || !(density > 0.0 && density <= 1.0) {
        return Err(Error::InvalidParameter(
            "random LP needs m, n >= 1 and density in (0, 1]".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut triplets = Vec::new();
    for i in 0..m {
        for j in 0..n {
            if rng.random::<f64>() < density {
                triplets.push((i, j, rng.sample::<f64, _>(StandardNormal)));
            }
        }
    }
    // Keep every row and column nonempty.
    let mut row_hit = vec![false; m];
    let mut col_hit = vec![false; n];
    for &(i, j, _) in &triplets {
        row_hit[i] = true;
        col_hit[j] = true;
    }
    for (i, hit) in row_hit.iter().enumerate() {
        if !hit {
            let j = rng.random_range(0..n);
            col_hit[j] = true;
            triplets.push((i, j, rng.sample::<f64, _>(StandardNormal)));
        }
    }
    for (j, hit) in col_hit.iter().enumerate() {
        if !hit && !triplets.iter().any(|t| t.1 == j) {
            let i = rng.random_range(0..m);
            triplets.push((i, j, rng.sample::<f64, _>(StandardNormal)));
        }
    }
    triplets.sort_by_key(|t| (t.0, t.1));
    triplets.dedup_by_key(|t| (t.0, t.1));
    let a = SparseMatrix::from_triplets(m, n, &triplets)?;

    let support_size = m.min(n).div_ceil(2);
    let support = sample(&mut rng, n, support_size);
    let mut x = vec![0.0; n];
    for j in support.iter() {
        x[j] = rng.random_range(0.5..1.5);
    }
    let y: Vec<f64> = (0..m).map(|_| rng.sample(StandardNormal)).collect();
    let s: Vec<f64> = x
        .iter()
        .map(|&xj| {
            if xj > 0.0 {
                0.0
            } else {
                rng.random_range(0.5..1.5)
            }
        })
        .collect();
    let b = a.apply_vec(&x);
    let aty = a.apply_transpose_vec(&y);
    let c = aty.iter().zip(&s).map(|(v, s)| v + s).collect();
    let problem = StandardFormLp::new(a, b, c)?;
    Ok(GeneratedInstance {
        problem,
        optimum: SaddlePoint::new(x, y),
    })
}

impl FromStr for GeneratorSpec {
    type Err = Error;

    /// Accepts `toy`, `diag:σ1,σ2,...` and
    /// `random:m=50,n=100,density=0.2,seed=1`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: &str| Error::InvalidParameter(format!("generator `{s}`: {msg}"));
        let (kind, args) = s.split_once(':').unwrap_or((s, ""));
        match kind {
            "toy" => Ok(GeneratorSpec::TwoDimToy),
            "diag" => {
                let singular_values = args
                    .split(',')
                    .map(|t| t.trim().parse::<f64>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| bad("expected comma-separated singular values"))?;
                Ok(GeneratorSpec::DiagonalBilinear { singular_values })
            }
            "random" => {
                let (mut m, mut n, mut density, mut seed) = (None, None, 0.2, 0u64);
                for kv in args.split(',').filter(|t| !t.is_empty()) {
                    let (k, v) = kv.split_once('=').ok_or_else(|| bad("expected key=value"))?;
                    match k.trim() {
                        "m" => m = Some(v.parse().map_err(|_| bad("bad m"))?),
                        "n" => n = Some(v.parse().map_err(|_| bad("bad n"))?),
                        "density" => density = v.parse().map_err(|_| bad("bad density"))?,
                        "seed" => seed = v.parse().map_err(|_| bad("bad seed"))?,
                        other => return Err(bad(&format!("unknown key `{other}`"))),
                    }
                }
                Ok(GeneratorSpec::RandomLpKnownOptimum {
                    m: m.ok_or_else(|| bad("missing m"))?,
                    n: n.ok_or_else(|| bad("missing n"))?,
                    density,
                    seed,
                })
            }
            _ => Err(bad("unknown generator")),
        }
    }
}
