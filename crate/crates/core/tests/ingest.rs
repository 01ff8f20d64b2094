mod common;

use std::path::PathBuf;

use common::*;
use rand::Rng;
use restart_lp::ingest::mps::{BoundKind, ObjectiveSense, RowSense};
use restart_lp::ingest::standard_form::VarTransform;
use restart_lp::ingest::*;
use restart_lp::{kkt_error, Error, PrimalDomain};

fn fixture(name: &str) -> MpsModel {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name);
    read_mps_file(&path).unwrap()
}

fn parse(text: &str) -> restart_lp::Result<MpsModel> {
    parse_mps(text.as_bytes())
}

/// Optimal original objective of a fixture via vertex enumeration on its
/// standard form.
fn fixture_optimum(model: &MpsModel) -> (f64, Vec<f64>) {
    let conv = to_standard_form(model).unwrap();
    let (obj, x) = vertex_enumeration(&conv.lp).expect("fixture is feasible");
    let original = conv.map.recover(&x);
    let value = conv.map.original_objective(obj + conv.lp.objective_offset);
    assert!((value - model.objective_value(&original)).abs() <= 1e-9);
    (value, original)
}

#[test]
fn tiny_fixture_parses() {
    let m = fixture("tiny.mps");
    assert_eq!(m.name, "TINY");
    assert_eq!(m.rows.len(), 2);
    assert_eq!(m.rows[1].sense, RowSense::E);
    assert_eq!(m.columns.len(), 2);
    assert_eq!(m.rhs, vec![(1, 1.0)]);
    assert_eq!(m.sense, ObjectiveSense::Minimize);
}

#[test]
fn tiny_fixture_standard_form() {
    let conv = to_standard_form(&fixture("tiny.mps")).unwrap();
    let lp = &conv.lp;
    assert_eq!((lp.n(), lp.m()), (2, 1));
    assert_eq!(lp.a.to_dense(), vec![vec![1.0, 1.0]]);
    assert_eq!(lp.b, vec![1.0]);
    assert_eq!(lp.c, vec![1.0, 1.0]);
    assert_eq!(lp.domain, PrimalDomain::NonNegative);
    assert_eq!(lp.objective_offset, 0.0);
}

#[test]
fn free_fixture_is_split() {
    let m = fixture("free.mps");
    assert_eq!(m.bounds.len(), 1);
    assert_eq!(m.bounds[0].kind, BoundKind::Fr);
    assert_eq!(m.columns[m.bounds[0].column].name, "x2");
    let conv = to_standard_form(&m).unwrap();
    assert_eq!(conv.lp.n(), 3);
    assert_eq!(conv.lp.c, vec![2.0, 1.0, -1.0]);
    assert_eq!(conv.map.transforms[1], VarTransform::Split { pos: 1, neg: 2 });
}

#[test]
fn slack_for_greater_equal_row() {
    let m = parse(
        "NAME G\nROWS\n N obj\n G r\nCOLUMNS\n x obj 1 r 2\n y obj 1 r 3\nRHS\n rhs r 6\nENDATA\n",
    )
    .unwrap();
    let conv = to_standard_form(&m).unwrap();
    assert_eq!(conv.lp.a.to_dense(), vec![vec![2.0, 3.0, -1.0]]);
    assert_eq!(conv.lp.b, vec![6.0]);
    assert_eq!(conv.lp.c, vec![1.0, 1.0, 0.0]);
}

#[test]
fn fixture_optima_match_hand_values() {
    let (v, x) = fixture_optimum(&fixture("tiny.mps"));
    assert!((v - 1.0).abs() <= 1e-8);
    assert!((x[0] + x[1] - 1.0).abs() <= 1e-8);

    let (v, x) = fixture_optimum(&fixture("free.mps"));
    assert!((v - 1.5).abs() <= 1e-8);
    assert!((x[0] - 0.5).abs() <= 1e-8 && (x[1] - 0.5).abs() <= 1e-8);

    let model = fixture("bounds.mps");
    assert_eq!(model.sense, ObjectiveSense::Maximize);
    let (v, x) = fixture_optimum(&model);
    assert!((v - 13.0).abs() <= 1e-8, "{v}");
    for (got, want) in x.iter().zip([2.5, 0.5, 1.0, -3.5]) {
        assert!((got - want).abs() <= 1e-8, "{x:?}");
    }
}

#[test]
fn standard_form_points_map_to_feasible_originals() {
    let mut r = rng(4);
    for name in ["tiny.mps", "free.mps", "bounds.mps"] {
        let model = fixture(name);
        let conv = to_standard_form(&model).unwrap();
        let vertices = basic_feasible_solutions(&conv.lp);
        assert!(!vertices.is_empty());
        for _ in 0..50 {
            let w: Vec<f64> = vertices.iter().map(|_| r.random::<f64>()).collect();
            let total: f64 = w.iter().sum();
            let mut x = vec![0.0; conv.lp.n()];
            for (v, wk) in vertices.iter().zip(&w) {
                for (xi, vi) in x.iter_mut().zip(v) {
                    *xi += wk / total * vi;
                }
            }
            let original = conv.map.recover(&x);
            assert!(model.max_violation(&original).unwrap() <= 1e-12, "{name}");
            let std_obj: f64 = x.iter().zip(&conv.lp.c).map(|(a, b)| a * b).sum::<f64>()
                + conv.lp.objective_offset;
            let back = conv.map.original_objective(std_obj);
            assert!((back - model.objective_value(&original)).abs() <= 1e-12);
        }
    }
}

#[test]
fn empty_columns_section() {
    let m = parse("NAME E\nROWS\n N obj\nCOLUMNS\nRHS\nENDATA\n").unwrap();
    assert!(m.columns.is_empty());
    let conv = to_standard_form(&m).unwrap();
    assert_eq!((conv.lp.n(), conv.lp.m()), (0, 0));
}

#[test]
fn duplicate_entries_in_a_column_are_summed() {
    let m = parse("NAME D\nROWS\n N obj\n E r\nCOLUMNS\n x r 1 r 2\n x obj 1\nRHS\n rhs r 3\nENDATA\n")
        .unwrap();
    assert_eq!(m.columns[0].entries, vec![(1, 3.0), (0, 1.0)]);
}

#[test]
fn parse_errors() {
    let cases = [
        ("NAME S\nROWS\n N obj\nSOS\n S1 SOS\nENDATA\n", "unsupported"),
        ("NAME O\nCOLUMNS\n x obj 1\nROWS\n N obj\nENDATA\n", "ROWS"),
        ("NAME O\nROWS\n N obj\nRHS\nCOLUMNS\nENDATA\n", "out of order"),
        ("NAME B\nROWS\n N obj\nCOLUMNS\n x obj 1\nBOUNDS\n XX bnd x 1\nENDATA\n", "bound type"),
        ("NAME U\nROWS\n N obj\nCOLUMNS\n x r 1\nENDATA\n", "undeclared row"),
        ("NAME U\nROWS\n N obj\nCOLUMNS\n x obj 1\nBOUNDS\n UP bnd q 1\nENDATA\n", "undeclared column"),
        ("NAME R\nROWS\n N obj\n E r\nCOLUMNS\n x r 1\n y r 1\n x obj 1\nENDATA\n", "again"),
        ("NAME N\nROWS\n N obj\nCOLUMNS\n x obj abc\nENDATA\n", "invalid number"),
        ("NAME M\nROWS\n N obj\nCOLUMNS\n x obj 1\n", "ENDATA"),
        ("NAME M\nROWS\n E r\nCOLUMNS\n x r 1\nENDATA\n", "objective"),
    ];
    for (text, needle) in cases {
        match parse(text) {
            Err(Error::Parse { message, .. }) => {
                assert!(message.contains(needle), "`{message}` lacks `{needle}`")
            }
            other => panic!("expected a parse error for {text:?}, got {other:?}"),
        }
    }
}

#[test]
fn conversion_errors() {
    let ranged_objective =
        parse("NAME R\nROWS\n N obj\n E r\nCOLUMNS\n x obj 1 r 1\nRANGES\n rng obj 1\nENDATA\n")
            .unwrap();
    assert!(to_standard_form(&ranged_objective).is_err());
    let fx = parse(
        "NAME F\nROWS\n N obj\nCOLUMNS\n x obj 1\nBOUNDS\n FX bnd x 1\n FX bnd x 2\nENDATA\n",
    )
    .unwrap();
    assert!(matches!(to_standard_form(&fx), Err(Error::InfeasibleBounds { .. })));
    let crossed =
        parse("NAME C\nROWS\n N obj\nCOLUMNS\n x obj 1\nBOUNDS\n LO bnd x 2\n UP bnd x 1\nENDATA\n")
            .unwrap();
    assert!(to_standard_form(&crossed).is_err());
}

#[test]
fn generator_examples() {
    let d = generate(&GeneratorSpec::DiagonalBilinear {
        singular_values: vec![1.0],
    })
    .unwrap();
    assert_eq!(d.optimum.x, vec![0.0]);
    assert_eq!(d.optimum.y, vec![0.0]);
    assert_eq!(d.problem.domain, PrimalDomain::Free);
    assert_eq!(d.problem.a.to_dense(), vec![vec![-1.0]]);

    let toy = generate(&GeneratorSpec::TwoDimToy).unwrap();
    assert_eq!((toy.problem.n(), toy.problem.m()), (1, 1));
    assert_eq!(toy.problem.c, vec![0.0]);
    assert_eq!(toy.problem.b, vec![0.0]);

    let lp = generate(&GeneratorSpec::RandomLpKnownOptimum {
        m: 5,
        n: 10,
        density: 0.5,
        seed: 7,
    })
    .unwrap();
    assert!(kkt_error(&lp.problem, &lp.optimum).unwrap() <= 1e-12);
    assert_eq!(lp.optimum.x.iter().filter(|&&v| v > 0.0).count(), 3);

    assert!(generate(&GeneratorSpec::DiagonalBilinear {
        singular_values: vec![1.0, 0.0]
    })
    .is_err());
    assert!(generate(&GeneratorSpec::RandomLpKnownOptimum {
        m: 2,
        n: 2,
        density: 1.5,
        seed: 0
    })
    .is_err());
}

#[test]
fn generator_spec_strings() {
    assert_eq!("toy".parse::<GeneratorSpec>().unwrap(), GeneratorSpec::TwoDimToy);
    assert_eq!(
        "diag:0.5,1".parse::<GeneratorSpec>().unwrap(),
        GeneratorSpec::DiagonalBilinear {
            singular_values: vec![0.5, 1.0]
        }
    );
    assert_eq!(
        "random:m=3,n=4,density=0.5,seed=9".parse::<GeneratorSpec>().unwrap(),
        GeneratorSpec::RandomLpKnownOptimum {
            m: 3,
            n: 4,
            density: 0.5,
            seed: 9
        }
    );
    assert!("nonsense".parse::<GeneratorSpec>().is_err());
}

#[test]
fn planted_optimum_over_100_seeds() {
    for seed in 0..100 {
        let lp = generate(&GeneratorSpec::RandomLpKnownOptimum {
            m: 6,
            n: 12,
            density: 0.3,
            seed,
        })
        .unwrap();
        assert!(kkt_error(&lp.problem, &lp.optimum).unwrap() <= 1e-12, "seed {seed}");
        for i in 0..lp.problem.m() {
            assert!(lp.problem.a.to_dense()[i].iter().any(|&v| v != 0.0));
        }
    }
}

#[test]
fn planted_optimum_matches_vertex_enumeration() {
    for seed in 0..10 {
        let lp = generate(&GeneratorSpec::RandomLpKnownOptimum {
            m: 3,
            n: 7,
            density: 0.6,
            seed,
        })
        .unwrap();
        let (best, _) = vertex_enumeration(&lp.problem).unwrap();
        let planted: f64 = lp.problem.c.iter().zip(&lp.optimum.x).map(|(c, x)| c * x).sum();
        assert!((best - planted).abs() <= 1e-8 * (1.0 + planted.abs()), "seed {seed}");
    }
}
