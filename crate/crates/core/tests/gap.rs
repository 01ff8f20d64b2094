mod common;

use common::*;
use proptest::prelude::*;
use rand::Rng;
use restart_lp::gap::*;
use restart_lp::ingest::{generate, GeneratorSpec};
use restart_lp::steps::AdmmState;
use restart_lp::*;

const INF: f64 = f64::INFINITY;

fn tr(g: &[f64], z: &[f64], lower: &[f64], radius: f64) -> TrustRegionProblem {
    TrustRegionProblem {
        g: g.to_vec(),
        z: z.to_vec(),
        lower: lower.to_vec(),
        radius,
    }
}

fn planted(seed: u64) -> (StandardFormLp, SaddlePoint) {
    let inst = generate(&GeneratorSpec::RandomLpKnownOptimum {
        m: 6,
        n: 12,
        density: 0.4,
        seed,
    })
    .unwrap();
    (inst.problem, inst.optimum)
}

fn random_point(r: &mut rand_chacha::ChaCha8Rng, p: &StandardFormLp, scale: f64) -> SaddlePoint {
    SaddlePoint::new(random_vec(r, p.n(), 0.0, scale), random_vec(r, p.m(), -scale, scale))
}

/// ADMM gap by bisection on the weighted prox
/// `x̂_V = (x_V − (y + c)/(λη))⁺`, `ŷ = y + η(x_V − x_U)/λ`, in the
/// original variables.
fn admm_gap_oracle(p: &StandardFormLp, s: &AdmmState, r: f64, eta: f64) -> f64 {
    let n = p.n();
    let point = |lam: f64| -> (Vec<f64>, Vec<f64>) {
        let xv = (0..n).map(|j| (s.x_v[j] - (s.y[j] + p.c[j]) / (lam * eta)).max(0.0)).collect();
        let y = (0..n).map(|j| s.y[j] + eta * (s.x_v[j] - s.x_u[j]) / lam).collect();
        (xv, y)
    };
    let norm = |(xv, y): &(Vec<f64>, Vec<f64>)| -> f64 {
        (0..n)
            .map(|j| eta * (xv[j] - s.x_v[j]).powi(2) + (y[j] - s.y[j]).powi(2) / eta)
            .sum::<f64>()
            .sqrt()
    };
    let (mut lo, mut hi) = (1e-300f64, 1.0f64);
    while norm(&point(hi)) > r {
        hi *= 2.0;
    }
    for _ in 0..3000 {
        let mid = (lo * hi).sqrt();
        if norm(&point(mid)) > r {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (xv, y) = point(hi);
    (0..n)
        .map(|j| -(s.y[j] + p.c[j]) * (xv[j] - s.x_v[j]) + (s.x_v[j] - s.x_u[j]) * (y[j] - s.y[j]))
        .sum::<f64>()
        / r
}

#[test]
fn trust_region_examples() {
    let s = solve_linear_trust_region(&tr(&[1.0, 1.0], &[0.0, 0.0], &[-INF, -INF], 1.0)).unwrap();
    let h = -(0.5f64).sqrt();
    assert!((s.point[0] - h).abs() <= 1e-15 && (s.point[1] - h).abs() <= 1e-15);

    let s = solve_linear_trust_region(&tr(&[1.0], &[0.5], &[0.0], 1.0)).unwrap();
    assert_eq!(s.point, vec![0.0]);
    assert_eq!(s.lambda, INF);

    let s = solve_linear_trust_region(&tr(&[3.0, 4.0], &[1.0, 1.0], &[0.0, -INF], 1.0)).unwrap();
    assert!((s.lambda - 0.2).abs() <= 1e-14);
    assert!((s.point[0] - 0.4).abs() <= 1e-14 && (s.point[1] - 0.2).abs() <= 1e-14);
    let b = solve_trust_region_by_bisection(&tr(&[3.0, 4.0], &[1.0, 1.0], &[0.0, -INF], 1.0), 1e-15).unwrap();
    assert!((b.lambda - 0.2).abs() <= 1e-12);
}

#[test]
fn trust_region_edge_cases() {
    assert!(solve_linear_trust_region(&tr(&[1.0], &[0.0], &[-INF], -1.0)).is_err());
    assert!(solve_linear_trust_region(&tr(&[1.0], &[0.0], &[1.0], 1.0)).is_err());
    assert!(solve_linear_trust_region(&tr(&[1.0], &[0.0, 1.0], &[0.0], 1.0)).is_err());
    // Zero gradient coordinates never move.
    let s = solve_linear_trust_region(&tr(&[0.0, 2.0], &[5.0, 0.0], &[0.0, -INF], 1.0)).unwrap();
    assert_eq!(s.point, vec![5.0, -1.0]);
    // A negative gradient moves away from the bound.
    let s = solve_linear_trust_region(&tr(&[-1.0], &[0.0], &[0.0], 2.0)).unwrap();
    assert_eq!(s.point, vec![2.0]);
    // Zero radius and an all-zero gradient are both the centre.
    let s = solve_linear_trust_region(&tr(&[1.0, -1.0], &[1.0, 1.0], &[0.0, 0.0], 0.0)).unwrap();
    assert_eq!(s.point, vec![1.0, 1.0]);
    let s = solve_linear_trust_region(&tr(&[0.0], &[1.0], &[0.0], 1.0)).unwrap();
    assert_eq!(s.point, vec![1.0]);
    assert_eq!(s.objective_change, 0.0);
    // Empty problem.
    let s = solve_linear_trust_region(&tr(&[], &[], &[], 1.0)).unwrap();
    assert!(s.point.is_empty());
}

#[test]
fn trust_region_matches_bisection_and_probes() {
    let mut r = rng(100);
    for trial in 0..200 {
        let dim = 1 + trial % 50;
        let p = random_trust_region(&mut r, dim);
        let fast = solve_linear_trust_region(&p).unwrap();
        let slow = solve_trust_region_by_bisection(&p, 1e-15).unwrap();
        let (fo, so) = (tr_objective(&p, &fast.point), tr_objective(&p, &slow.point));
        let scale = 1.0 + fo.abs();
        assert!((fo - so).abs() <= 1e-9 * scale, "trial {trial}: {fo} vs {so}");
        let d = dist(&fast.point, &p.z);
        assert!(d <= p.radius * (1.0 + 1e-12) + 1e-15);
        assert!(fast.point.iter().zip(&p.lower).all(|(v, l)| v >= l));
        let probe = best_random_probe(&mut r, &p, 2000);
        assert!(fo <= probe + 1e-12 * scale);
    }
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| (p - q).powi(2)).sum::<f64>().sqrt()
}

#[test]
fn select_kth_matches_sorting() {
    let mut r = rng(101);
    for n in [1usize, 2, 3, 5, 7, 10, 31, 100, 1001] {
        for _ in 0..5 {
            let v: Vec<f64> = (0..n).map(|_| (r.random_range(0..20) as f64) * 0.5).collect();
            let mut sorted = v.clone();
            sorted.sort_by(f64::total_cmp);
            for k in [0, n / 3, n / 2, n - 1] {
                let mut w = v.clone();
                assert_eq!(select_kth(&mut w, k), sorted[k]);
            }
        }
    }
}

#[test]
fn lp_gap_examples() {
    let toy = generate(&GeneratorSpec::TwoDimToy).unwrap().problem;
    let z = SaddlePoint::new(vec![1.0], vec![1.0]);
    for r in [1e-3, 0.5, 1.0, 10.0] {
        let g = normalized_gap_lp(&toy, &z, r).unwrap();
        assert!((g.value - 2f64.sqrt()).abs() <= 1e-12, "r={r}");
    }
    for seed in 0..5 {
        let (p, star) = planted(seed);
        for r in [1e-2, 1.0, 100.0] {
            assert!(normalized_gap_lp(&p, &star, r).unwrap().value.abs() <= 1e-12);
        }
    }
    assert!(normalized_gap_lp(&toy, &z, 0.0).is_err());
    assert!(normalized_gap_lp(&toy, &z, -1.0).is_err());
    let (p, _) = planted(0);
    let mut bad = p.zero_point();
    bad.x[0] = -1.0;
    assert!(normalized_gap_lp(&p, &bad, 1.0).is_err());
}

#[test]
fn lp_gap_matches_prox_bisection() {
    let mut r = rng(102);
    for trial in 0..300 {
        let (m, n) = (1 + trial % 5, 1 + (trial * 3) % 7);
        let (p, z) = random_problem_and_point(&mut r, m, n);
        let radius = r.random_range(0.05..5.0);
        let fast = normalized_gap_lp(&p, &z, radius).unwrap().value;
        let slow = normalized_gap_bisection(&p, &z, radius, 1e-15).unwrap().value;
        assert!((fast - slow).abs() <= 1e-8 * (1.0 + fast.abs()), "trial {trial}: {fast} vs {slow}");
    }
}

#[test]
fn bisection_lambda_zero_branch() {
    // Ax = b and c > A⊤y: the linear model is maximized at (0, y), inside
    // the ball once r ≥ ‖x‖.
    let a = SparseMatrix::from_dense(&[vec![1.0, 2.0]]).unwrap();
    let p = StandardFormLp::new(a, vec![3.0], vec![2.0, 3.0]).unwrap();
    let z = SaddlePoint::new(vec![1.0, 1.0], vec![0.5]);
    let r = 5.0;
    let expect = ((2.0 - 0.5) * 1.0 + (3.0 - 1.0) * 1.0) / r;
    let slow = normalized_gap_bisection(&p, &z, r, 1e-14).unwrap();
    assert!((slow.value - expect).abs() <= 1e-9);
    assert!(slow.maximizer.x.iter().all(|&v| v.abs() <= 1e-12));
    let fast = normalized_gap_lp(&p, &z, r).unwrap();
    assert!((fast.value - expect).abs() <= 1e-12);
}

#[test]
fn small_radius_limit_is_the_field_norm() {
    let toy = generate(&GeneratorSpec::TwoDimToy).unwrap().problem;
    let z = SaddlePoint::new(vec![1.0], vec![1.0]);
    let g = normalized_gap_bisection(&toy, &z, 1e-6, 1e-15).unwrap();
    assert!((g.value - 2f64.sqrt()).abs() <= 1e-8);
}

#[test]
fn admm_gap_examples() {
    for seed in 0..5 {
        let (p, star) = planted(seed);
        let y: Vec<f64> = p.a.matvec_transpose(&star.y).unwrap().iter().map(|v| -v).collect();
        let s = AdmmState { x_u: star.x.clone(), x_v: star.x.clone(), y };
        for r in [1e-2, 1.0, 10.0] {
            assert!(normalized_gap_admm(&p, &s, r, 0.8).unwrap().value.abs() <= 1e-12);
        }
        let flat = AdmmState {
            x_u: star.x.clone(),
            x_v: star.x.clone(),
            y: p.c.iter().map(|c| -c).collect(),
        };
        assert_eq!(normalized_gap_admm(&p, &flat, 1.0, 1.3).unwrap().value, 0.0);
        assert!(normalized_gap_admm(&p, &flat, 0.0, 1.3).is_err());
        let mut bad = flat.clone();
        bad.x_v[0] = -1.0;
        assert!(normalized_gap_admm(&p, &bad, 1.0, 1.3).is_err());
    }
}

#[test]
fn admm_gap_matches_oracle() {
    let mut r = rng(103);
    for trial in 0..100 {
        let (p, _) = planted(trial);
        let n = p.n();
        let s = AdmmState {
            x_u: random_vec(&mut r, n, -1.0, 2.0),
            x_v: random_vec(&mut r, n, 0.0, 2.0),
            y: random_vec(&mut r, n, -2.0, 2.0),
        };
        let eta = r.random_range(0.2..4.0);
        let radius = r.random_range(0.05..5.0);
        let fast = normalized_gap_admm(&p, &s, radius, eta).unwrap();
        let slow = admm_gap_oracle(&p, &s, radius, eta);
        assert!((fast.value - slow).abs() <= 1e-9 * (1.0 + slow.abs()), "trial {trial}: {} vs {slow}", fast.value);
        assert!(fast.x_v.iter().all(|&v| v >= 0.0));
    }
}

#[test]
fn gap_properties_on_random_probes() {
    let mut r = rng(104);
    for trial in 0..300 {
        let (p, star) = planted(trial as u64 % 20);
        let z = if trial % 2 == 0 {
            random_point(&mut r, &p, 2.0)
        } else {
            let mut z = star.clone();
            z.x.iter_mut().for_each(|v| *v = (*v + r.random_range(-0.1..0.1)).max(0.0));
            z
        };
        let r1 = r.random_range(0.01..3.0);
        let r2 = r1 * r.random_range(1.0..10.0);
        let g1 = normalized_gap_lp(&p, &z, r1).unwrap().value;
        let g2 = normalized_gap_lp(&p, &z, r2).unwrap().value;
        assert!(g1 >= 0.0 && g2 >= 0.0);
        assert!(g2 <= g1 + 1e-12);
        assert!(r2 * g2 >= r1 * g1 - 1e-12);
        if kkt_error(&p, &z).unwrap() > 1e-6 {
            assert!(g1 > 0.0);
        }
    }
}

#[test]
fn kkt_error_bounded_by_gap() {
    let mut r = rng(105);
    for trial in 0..300 {
        let (p, _) = planted(trial as u64 % 20);
        let z = random_point(&mut r, &p, 2.0);
        let zn = z.to_flat().iter().map(|v| v * v).sum::<f64>().sqrt();
        let big_r = zn * r.random_range(1.0..3.0);
        let radius = big_r * r.random_range(0.01..1.0);
        let rho = normalized_gap_lp(&p, &z, radius).unwrap().value;
        let kkt = kkt_error(&p, &z).unwrap();
        assert!(kkt <= rho * (1.0 + big_r * big_r).sqrt() + 1e-9, "{kkt} > {rho}·√(1+R²)");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn trust_region_solution_is_feasible_and_optimal(seed in any::<u64>(), dim in 1usize..40) {
        let mut r = rng(seed);
        let p = random_trust_region(&mut r, dim);
        let s = solve_linear_trust_region(&p).unwrap();
        prop_assert!(dist(&s.point, &p.z) <= p.radius * (1.0 + 1e-12) + 1e-15);
        prop_assert!(s.objective_change <= 1e-15);
        let probe = best_random_probe(&mut r, &p, 200);
        prop_assert!(tr_objective(&p, &s.point) <= probe + 1e-12 * (1.0 + probe.abs()));
    }

    #[test]
    fn gap_is_monotone_in_radius(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (p, z) = random_problem_and_point(&mut r, 3, 5);
        let r1 = r.random_range(0.01..2.0);
        let r2 = r1 + r.random_range(0.0..5.0);
        let g1 = normalized_gap_lp(&p, &z, r1).unwrap().value;
        let g2 = normalized_gap_lp(&p, &z, r2).unwrap().value;
        prop_assert!(g2 <= g1 + 1e-12);
        prop_assert!(r2 * g2 >= r1 * g1 - 1e-12);
    }
}
