mod common;

use common::*;
use rand::Rng;
use restart_lp::ingest::{generate, GeneratorSpec};
use restart_lp::restart::*;
use restart_lp::steps::*;
use restart_lp::*;

const E_INV: f64 = DEFAULT_BETA;

fn toy() -> StandardFormLp {
    generate(&GeneratorSpec::TwoDimToy).unwrap().problem
}

fn planted(m: usize, n: usize, seed: u64) -> (StandardFormLp, SaddlePoint) {
    let inst = generate(&GeneratorSpec::RandomLpKnownOptimum {
        m,
        n,
        density: 0.4,
        seed,
    })
    .unwrap();
    (inst.problem, inst.optimum)
}

fn pdhg_options(p: &StandardFormLp, scheme: RestartScheme) -> SolveOptions {
    let s = dense_sigma_max(&p.a);
    let mut o = SolveOptions::new(StepConfig::new(Method::Pdhg, 0.9 / s, 1.0), scheme);
    o.record_wall_time = false;
    o
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Averages of consecutive blocks of `period` iterates of the toy PDHG
/// recurrence, restarting from each average.
fn toy_anchors_direct(eta: f64, start: (f64, f64), period: usize, epochs: usize) -> Vec<(f64, f64)> {
    let mut anchors = vec![start];
    let mut z = start;
    for _ in 0..epochs {
        let it = direct_bilinear_pdhg(1.0, eta, z.0, z.1, period);
        let n = it.len() as f64;
        z = (it.iter().map(|p| p.0).sum::<f64>() / n, it.iter().map(|p| p.1).sum::<f64>() / n);
        anchors.push(z);
    }
    anchors
}

#[test]
fn tstar_examples() {
    let pdhg = fixed_frequency_tstar(method_constants(Method::Pdhg, 0.5), 1.0, E_INV).unwrap();
    assert_eq!(pdhg, 22);
    assert_eq!(pdhg, (8.0 * std::f64::consts::E).ceil() as usize);
    for (alpha, eta) in [(0.3, 0.7), (1.0, 0.1), (0.05, 0.9)] {
        let egm = fixed_frequency_tstar(method_constants(Method::Egm, eta), alpha, E_INV).unwrap();
        assert_eq!(egm, (10.0 / (alpha * E_INV * eta)).ceil() as usize);
        let admm = fixed_frequency_tstar(method_constants(Method::Admm, eta), alpha, E_INV).unwrap();
        assert_eq!(admm, (8.0 / (alpha * E_INV)).ceil() as usize);
        let ppm = fixed_frequency_tstar(method_constants(Method::Ppm, eta), alpha, E_INV).unwrap();
        assert_eq!(ppm, (4.0 / (alpha * E_INV * eta)).ceil() as usize);
    }
    let k = method_constants(Method::Pdhg, 0.5);
    assert!(fixed_frequency_tstar(k, 0.0, E_INV).is_err());
    assert!(fixed_frequency_tstar(k, 1.0, 1.0).is_err());
    assert!(fixed_frequency_tstar(k, 1.0, 0.0).is_err());
}

#[test]
fn should_restart_examples() {
    let p = toy();
    let z = PdPoint::new(&p, p.zero_point());
    let mut s = RestartState::new(z.clone());
    let adaptive = RestartScheme::Adaptive { beta: E_INV, tau0: 1 };
    assert!(!should_restart(&s, &adaptive, None));
    s.push_target(&z);
    assert!(should_restart(&s, &adaptive, None));
    s.restart(z.clone(), Some(1.0));
    s.push_target(&z);
    assert!(should_restart(&s, &adaptive, Some(0.3)));
    assert!(!should_restart(&s, &adaptive, Some(0.4)));
    assert!(!should_restart(&s, &adaptive, None));
    assert!(!should_restart(&s, &RestartScheme::NoRestart, Some(0.0)));

    let fixed = RestartScheme::Fixed { period: 25 };
    let mut f = RestartState::new(z.clone());
    for _ in 0..24 {
        f.push_target(&z);
    }
    assert!(!should_restart(&f, &fixed, None));
    f.push_target(&z);
    assert!(should_restart(&f, &fixed, None));
}

#[test]
fn scheme_parsing_and_validation() {
    assert_eq!("none".parse::<RestartScheme>().unwrap(), RestartScheme::NoRestart);
    assert_eq!("fixed:64".parse::<RestartScheme>().unwrap(), RestartScheme::Fixed { period: 64 });
    assert_eq!("adaptive".parse::<RestartScheme>().unwrap(), RestartScheme::adaptive());
    assert_eq!(
        RestartScheme::flexible(),
        RestartScheme::Flexible { beta: E_INV, tau0: 1 }
    );
    assert!("fixed:x".parse::<RestartScheme>().is_err());
    assert!("sometimes".parse::<RestartScheme>().is_err());
    assert!(RestartScheme::Fixed { period: 0 }.validate().is_err());
    assert!(RestartScheme::Adaptive { beta: 1.0, tau0: 1 }.validate().is_err());
    assert!(RestartScheme::Adaptive { beta: 0.5, tau0: 0 }.validate().is_err());
    assert!((E_INV - (-1f64).exp()).abs() <= 1e-16);
}

#[test]
fn running_average_matches_explicit_mean() {
    let mut r = rng(30);
    let (p, _) = planted(5, 10, 0);
    let s = dense_sigma_max(&p.a);
    let z0 = PdPoint::new(&p, p.zero_point());
    let mut state = RestartState::new(z0.clone());
    let mut z = p.zero_point();
    let mut targets: Vec<SaddlePoint> = Vec::new();
    let cfg = StepConfig::new(Method::Egm, 0.8 / s, 1.0);
    for k in 1..=500 {
        let out = egm_step(&p, &z, &cfg).unwrap();
        state.push_target(&PdPoint::new(&p, out.target.clone()));
        targets.push(out.target);
        z = out.next;
        if k % 30 == 0 {
            let t = targets.len() as f64;
            let mut mean = vec![0.0; p.n() + p.m()];
            for tg in &targets {
                for (m, v) in mean.iter_mut().zip(tg.to_flat()) {
                    *m += v / t;
                }
            }
            let avg = state.average.z.to_flat();
            let scale = norm(&mean).max(1e-300);
            let err: f64 = avg.iter().zip(&mean).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
            assert!(err <= 1e-12 * scale);
            // Cached products follow the average.
            let ax = p.a.matvec(&state.average.z.x).unwrap();
            assert!(ax.iter().zip(&state.average.ax).all(|(a, b)| (a - b).abs() <= 1e-12 * (1.0 + a.abs())));
        }
        if r.random::<f64>() < 0.01 {
            let a = state.average.clone();
            state.restart(a, None);
            targets.clear();
        }
    }
}

#[test]
fn toy_fixed_restarts_contract_towards_the_origin() {
    let p = toy();
    let mut o = SolveOptions::new(StepConfig::new(Method::Pdhg, 0.2, 1.0), RestartScheme::Fixed { period: 25 });
    o.kkt_tolerance = 0.0;
    o.iteration_limit = 100;
    o.start = Some(SaddlePoint::new(vec![1.0], vec![1.0]));
    o.keep_anchors = true;
    o.check_cadence = 1;
    let out = run_restarted(&p, &o).unwrap();
    assert_eq!(out.restart_lengths, vec![25, 25, 25, 25]);
    let direct = toy_anchors_direct(0.2, (1.0, 1.0), 25, 4);
    assert_eq!(out.anchors.len(), 5);
    let mut prev = f64::INFINITY;
    for (a, d) in out.anchors.iter().zip(&direct) {
        assert!((a.x[0] - d.0).abs() <= 1e-12 && (a.y[0] - d.1).abs() <= 1e-12);
        let dist = a.x[0].hypot(a.y[0]);
        assert!(dist < prev);
        prev = dist;
    }
}

#[test]
fn toy_restarts_beat_no_restart_after_fifty_iterations() {
    let last = direct_bilinear_pdhg(1.0, 0.2, 1.0, 1.0, 50)[49];
    let restarted = toy_anchors_direct(0.2, (1.0, 1.0), 25, 2)[2];
    assert!(restarted.0.hypot(restarted.1) < last.0.hypot(last.1));

    let p = toy();
    let mut o = SolveOptions::new(StepConfig::new(Method::Pdhg, 0.2, 1.0), RestartScheme::NoRestart);
    o.kkt_tolerance = 0.0;
    o.iteration_limit = 50;
    o.start = Some(SaddlePoint::new(vec![1.0], vec![1.0]));
    let out = run_restarted(&p, &o).unwrap();
    assert_eq!(out.status, SolveStatus::IterationLimit);
    assert!(out.restart_lengths.is_empty());
}

#[test]
fn adaptive_pdhg_solves_planted_lps() {
    for seed in 0..20 {
        let (p, _) = planted(10, 20, seed);
        let mut o = pdhg_options(&p, RestartScheme::adaptive());
        o.iteration_limit = 1_000_000;
        let out = run_restarted(&p, &o).unwrap();
        assert_eq!(out.status, SolveStatus::Optimal, "seed {seed}");
        assert!(out.residuals.kkt_error <= 1e-6);
        assert!((kkt_error(&p, &out.solution).unwrap() - out.residuals.kkt_error).abs() <= 1e-12);
        assert!(out.iterations.is_multiple_of(o.check_cadence));
    }
}

#[test]
fn every_method_and_scheme_reaches_optimality() {
    let (p, _) = planted(8, 16, 3);
    let s = dense_sigma_max(&p.a);
    for method in [Method::Pdhg, Method::Egm, Method::Admm] {
        for scheme in [
            RestartScheme::NoRestart,
            RestartScheme::Fixed { period: 64 },
            RestartScheme::adaptive(),
            RestartScheme::flexible(),
        ] {
            let eta = StepConfig::default_eta(method, s);
            let mut o = SolveOptions::new(StepConfig::new(method, eta, 1.0), scheme);
            o.iteration_limit = 500_000;
            let out = run_restarted(&p, &o).unwrap();
            assert_eq!(out.status, SolveStatus::Optimal, "{method:?} {scheme:?}");
            assert!(kkt_error(&p, &out.solution).unwrap() <= 1e-6 * (1.0 + 1e-9));
        }
    }
}

#[test]
fn ppm_runs_on_bilinear_problems() {
    let p = generate(&GeneratorSpec::DiagonalBilinear { singular_values: vec![0.2, 0.5, 1.0] })
        .unwrap()
        .problem;
    let mut o = SolveOptions::new(StepConfig::new(Method::Ppm, 1.0, 1.0), RestartScheme::adaptive());
    o.start = Some(SaddlePoint::new(vec![1.0; 3], vec![1.0; 3]));
    o.kkt_tolerance = 1e-8;
    let out = run_restarted(&p, &o).unwrap();
    assert_eq!(out.status, SolveStatus::Optimal);
    assert!(norm(&out.solution.to_flat()) <= 1e-7);
}

#[test]
fn long_fixed_period_matches_no_restart_prefix() {
    let (p, _) = planted(5, 10, 1);
    let mut none = pdhg_options(&p, RestartScheme::NoRestart);
    none.iteration_limit = 20_000;
    let mut fixed = none.clone();
    fixed.scheme = RestartScheme::Fixed { period: 4usize.pow(9) };
    let a = run_restarted(&p, &none).unwrap();
    let b = run_restarted(&p, &fixed).unwrap();
    assert_eq!(a.status, SolveStatus::Optimal);
    assert!(a.iterations < 4usize.pow(9));
    assert_eq!(a.iterations, b.iterations);
    assert_eq!(a.solution, b.solution);
    assert_eq!(a.trace.records.len(), b.trace.records.len());
    for (x, y) in a.trace.records.iter().zip(&b.trace.records) {
        assert_eq!(
            (x.iteration, x.outer_n, x.inner_t, x.kkt_avg, x.kkt_last, x.restart_flag),
            (y.iteration, y.outer_n, y.inner_t, y.kkt_avg, y.kkt_last, y.restart_flag)
        );
    }
}

#[test]
fn trace_records_are_ordered_and_deterministic() {
    let (p, _) = planted(6, 12, 2);
    let mut o = pdhg_options(&p, RestartScheme::adaptive());
    o.trace_every = 2;
    let a = run_restarted(&p, &o).unwrap();
    let b = run_restarted(&p, &o).unwrap();
    assert_eq!(a.trace, b.trace);
    assert!(a.trace.records.windows(2).all(|w| w[0].iteration < w[1].iteration));
    assert!(a.trace.records.iter().all(|r| r.elapsed_seconds == 0.0));
    assert!(a.trace.records.iter().any(|r| r.restart_flag));
    let last = a.trace.records.last().unwrap();
    assert_eq!(last.iteration, a.iterations);
    assert!(last.kkt_avg.min(last.kkt_last) <= 1e-6);
    let restarts_flagged = a.trace.records.iter().filter(|r| r.restart_flag).count();
    assert!(restarts_flagged <= a.restart_lengths.len());
    let lengths: usize = a.restart_lengths.iter().sum();
    assert!(lengths <= a.iterations);
}

#[test]
fn optimal_start_terminates_at_the_first_check() {
    let (p, star) = planted(5, 10, 4);
    let mut o = pdhg_options(&p, RestartScheme::adaptive());
    o.start = Some(star);
    let out = run_restarted(&p, &o).unwrap();
    assert_eq!(out.status, SolveStatus::Optimal);
    assert_eq!(out.iterations, o.check_cadence);
}

#[test]
fn divergence_is_reported() {
    let p = toy();
    let mut o = SolveOptions::new(StepConfig::new(Method::Pdhg, 1e3, 1.0), RestartScheme::NoRestart);
    o.start = Some(SaddlePoint::new(vec![1.0], vec![1.0]));
    o.iteration_limit = 100_000;
    match run_restarted(&p, &o) {
        Err(Error::Diverged { iteration, last_finite }) => {
            assert!(iteration < 1000);
            if let Some(rec) = last_finite {
                assert!(rec.iteration < iteration);
                assert!(rec.kkt_last.is_finite());
            }
        }
        other => panic!("expected divergence, got {other:?}"),
    }
}

#[test]
fn invalid_options_are_rejected() {
    let p = toy();
    let base = SolveOptions::new(StepConfig::new(Method::Pdhg, 0.5, 1.0), RestartScheme::adaptive());
    let mut o = base.clone();
    o.check_cadence = 0;
    assert!(run_restarted(&p, &o).is_err());
    let mut o = base.clone();
    o.start = Some(SaddlePoint::zeros(2, 1));
    assert!(run_restarted(&p, &o).is_err());
    let mut o = base.clone();
    o.step.eta = 0.0;
    assert!(run_restarted(&p, &o).is_err());
    let (lp, _) = planted(3, 6, 0);
    let mut o = base.clone();
    o.gap_norm = GapNorm::MethodNorm;
    assert!(run_restarted(&lp, &o).is_err());
}

#[test]
fn theory_check_on_two_point_spectrum() {
    let rep = theoretical_linear_rate_check(&TheoryCheckConfig {
        singular_values: vec![0.5, 1.0],
        method: Method::Pdhg,
        eta: 0.9,
        beta: E_INV,
        start: SaddlePoint::new(vec![1.0, -0.5], vec![0.3, 1.0]),
        epochs: 20,
    })
    .unwrap();
    assert_eq!(rep.fixed_anchor_distances.len(), 21);
    assert!(rep.contraction_holds, "{:?}", rep.fixed_anchor_distances);
    assert!(rep.adaptive_lengths_hold, "{:?} vs {}", rep.adaptive_lengths, rep.tstar);
    assert!(rep.flexible_lengths_hold, "{:?} vs {}", rep.flexible_lengths, rep.tstar);
    assert!(!rep.adaptive_lengths.is_empty());
    let alpha = sharpness_in_method_norm(&[0.5, 1.0], Method::Pdhg, 0.9);
    assert_eq!(rep.alpha, alpha);
    assert_eq!(rep.tstar, fixed_frequency_tstar(method_constants(Method::Pdhg, 0.9), alpha, E_INV).unwrap());
}

#[test]
fn theory_check_for_other_methods_and_perfect_conditioning() {
    for (method, eta) in [(Method::Egm, 0.9), (Method::Ppm, 1.0), (Method::Pdhg, 0.5)] {
        for sigma in [vec![1.0, 1.0, 1.0], vec![0.3, 1.0]] {
            let rep = theoretical_linear_rate_check(&TheoryCheckConfig {
                singular_values: sigma.clone(),
                method,
                eta,
                beta: E_INV,
                start: SaddlePoint::new(vec![1.0; sigma.len()], vec![-0.5; sigma.len()]),
                epochs: 10,
            })
            .unwrap();
            assert!(rep.contraction_holds, "{method:?} {sigma:?}");
            assert!(rep.adaptive_lengths_hold, "{method:?} {sigma:?}: {:?} vs {}", rep.adaptive_lengths, rep.tstar);
            assert!(rep.flexible_lengths_hold, "{method:?} {sigma:?}");
        }
    }
    assert!(theoretical_linear_rate_check(&TheoryCheckConfig {
        singular_values: vec![1.0],
        method: Method::Admm,
        eta: 1.0,
        beta: E_INV,
        start: SaddlePoint::new(vec![1.0], vec![1.0]),
        epochs: 2,
    })
    .is_err());
}

#[test]
fn anchors_stay_in_the_initial_ball() {
    let mut r = rng(31);
    let sigma = vec![0.2, 0.6, 1.0];
    let p = generate(&GeneratorSpec::DiagonalBilinear { singular_values: sigma }).unwrap().problem;
    for (method, eta) in [(Method::Pdhg, 0.9), (Method::Ppm, 1.5)] {
        for scheme in [RestartScheme::adaptive(), RestartScheme::Fixed { period: 7 }] {
            for _ in 0..10 {
                let z0 = SaddlePoint::new(random_vec(&mut r, 3, -2.0, 2.0), random_vec(&mut r, 3, -2.0, 2.0));
                let mut o = SolveOptions::new(StepConfig::new(method, eta, 1.0), scheme);
                o.start = Some(z0.clone());
                o.keep_anchors = true;
                o.kkt_tolerance = 1e-9;
                o.check_cadence = 5;
                let out = run_restarted(&p, &o).unwrap();
                let mnorm = |v: &[f64]| -> f64 {
                    if method == Method::Pdhg {
                        norm_value(&NormSpec::pdhg(eta, 1.0, 1.0).unwrap(), &p, v).unwrap()
                    } else {
                        norm(v)
                    }
                };
                let d0 = mnorm(&z0.to_flat());
                for a in &out.anchors {
                    let diff: Vec<f64> = a.to_flat().iter().zip(z0.to_flat()).map(|(p, q)| p - q).collect();
                    assert!(mnorm(&diff) <= 2.0 * d0 * (1.0 + 1e-12));
                }
            }
        }
    }
    // PDHG on planted LPs, Euclidean distance in the PDHG norm.
    for seed in 0..5 {
        let (p, star) = planted(6, 12, seed);
        let mut o = pdhg_options(&p, RestartScheme::adaptive());
        o.keep_anchors = true;
        let out = run_restarted(&p, &o).unwrap();
        let smax = dense_sigma_max(&p.a);
        let spec = NormSpec::pdhg(o.step.eta, 1.0, smax).unwrap();
        let z0 = p.zero_point().to_flat();
        let d0 = norm_value(&spec, &p, &star.to_flat().iter().zip(&z0).map(|(a, b)| a - b).collect::<Vec<_>>()).unwrap();
        for a in &out.anchors {
            let diff: Vec<f64> = a.to_flat().iter().zip(&z0).map(|(p, q)| p - q).collect();
            assert!(norm_value(&spec, &p, &diff).unwrap() <= 2.0 * d0 * (1.0 + 1e-12), "seed {seed}");
        }
    }
}

#[test]
fn beta_comparison_is_recorded() {
    // Iterations to reach distance 1e-8 for two restart thresholds.
    let p = generate(&GeneratorSpec::DiagonalBilinear { singular_values: vec![0.1, 1.0] }).unwrap().problem;
    let mut counts = Vec::new();
    for beta in [0.9, E_INV] {
        let mut o = SolveOptions::new(StepConfig::new(Method::Pdhg, 0.9, 1.0), RestartScheme::Adaptive { beta, tau0: 1 });
        o.start = Some(SaddlePoint::new(vec![1.0, 1.0], vec![1.0, 1.0]));
        o.kkt_tolerance = 1e-8 * 0.1;
        o.check_cadence = 1;
        o.iteration_limit = 1_000_000;
        let out = run_restarted(&p, &o).unwrap();
        assert_eq!(out.status, SolveStatus::Optimal);
        counts.push((beta, out.iterations));
    }
    println!("adaptive iterations by beta: {counts:?}");
}
