use std::sync::Arc;

use proptest::prelude::*;
use sltwo::geometry::Tau;
use sltwo::plateau::{
    convergence_study, max_node_error, off_node_residual, solve, BoundaryData, GridProblem, Rect, SolveOptions,
};
use sltwo::surfaces::{Family, Sheet};
use sltwo::Error;

fn problem(boundary: BoundaryData, n: usize, tau: f64) -> GridProblem {
    GridProblem {
        domain: Rect { x0: -1.0, x1: 1.0, y0: 0.2, y1: 0.8 },
        nx: n,
        ny: n,
        tau: Tau::new(tau).unwrap(),
        boundary,
    }
}

fn slab() -> BoundaryData {
    BoundaryData::Family { family: Family::SlabBigraph { d: 1.0 }, sheet: Sheet::Plus }
}

fn perimeter_range(p: &GridProblem, f: &dyn Fn(f64, f64) -> f64) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for j in 0..p.ny {
        for i in 0..p.nx {
            if i == 0 || j == 0 || i == p.nx - 1 || j == p.ny - 1 {
                let v = f(p.x(i), p.y(j));
                lo = lo.min(v);
                hi = hi.max(v);
            }
        }
    }
    (lo, hi)
}

#[test]
fn tilted_converges_at_second_order() {
    let b = BoundaryData::Family { family: Family::Tilted { d: 1.0, l: 1.0 }, sheet: Sheet::Plus };
    let rows = convergence_study(&problem(b, 17, 0.5), 17, 3, &SolveOptions::default()).unwrap();
    for r in &rows[1..] {
        let o = r.observed_order.unwrap();
        assert!((1.8..=2.2).contains(&o), "{rows:?}");
    }
}

#[test]
fn constant_oracle_has_no_error() {
    let rows = convergence_study(&problem(BoundaryData::Constant { value: -0.7 }, 9, 1.0), 9, 3, &SolveOptions::default()).unwrap();
    assert!(rows.iter().all(|r| r.max_error < 1e-12), "{rows:?}");
}

#[test]
fn off_node_residual_small_for_linear_data() {
    let opts = SolveOptions::default();
    for b in [BoundaryData::Constant { value: 1.5 }, BoundaryData::Plane { slope: 0.8, offset: -0.2 }] {
        let sol = solve(&problem(b, 17, 0.5), &opts).unwrap();
        let r = off_node_residual(&sol, 200).unwrap();
        assert!(r < 100.0 * opts.tol, "{r:e}");
    }
}

#[test]
fn off_node_residual_decays_quadratically() {
    let opts = SolveOptions::default();
    let res: Vec<f64> = [17, 33, 65]
        .iter()
        .map(|&n| off_node_residual(&solve(&problem(slab(), n, 0.5), &opts).unwrap(), 200).unwrap())
        .collect();
    for w in res.windows(2) {
        assert!(w[0] / w[1] > 3.0, "{res:?}");
    }
}

#[test]
fn serial_runs_are_bit_identical_and_parallel_agrees() {
    let p = problem(slab(), 33, 0.5);
    let a = solve(&p, &SolveOptions::default()).unwrap();
    let b = solve(&p, &SolveOptions::default()).unwrap();
    assert!(a.values.iter().zip(&b.values).all(|(x, y)| x.to_bits() == y.to_bits()));
    let par = solve(&p, &SolveOptions { parallel: true, ..Default::default() }).unwrap();
    assert!(a.values.iter().zip(&par.values).all(|(x, y)| x.to_bits() == y.to_bits()));
    let (mut ca, mut cb) = (Vec::new(), Vec::new());
    a.write_csv(&mut ca).unwrap();
    par.write_csv(&mut cb).unwrap();
    assert_eq!(ca, cb);
}

#[test]
fn node_error_is_second_order_on_slab() {
    let opts = SolveOptions::default();
    let e: Vec<f64> = [17, 33]
        .iter()
        .map(|&n| {
            let p = problem(slab(), n, 0.5);
            max_node_error(&p, &solve(&p, &opts).unwrap()).unwrap()
        })
        .collect();
    assert!(e[0] / e[1] > 3.4 && e[0] / e[1] < 4.6, "{e:?}");
}

#[test]
fn contract_violations() {
    let p = problem(slab(), 17, 0.5);
    for tol in [1e-13, 1e-3] {
        assert!(matches!(solve(&p, &SolveOptions { tol, ..Default::default() }), Err(Error::BadParameter(_))));
    }
    let nan = problem(BoundaryData::Custom(Arc::new(|x, _| if x > 0.5 { f64::NAN } else { 0.0 })), 9, 0.0);
    assert!(matches!(solve(&nan, &SolveOptions::default()), Err(Error::BadBoundary { .. })));
    assert!(problem(slab(), 7, 0.5).validate().is_err());
    let mut low = problem(slab(), 9, 0.5);
    low.domain.y0 = 0.0;
    assert!(low.validate().is_err());
    // one Newton step cannot reach 1e-10 from the harmonic guess
    assert!(matches!(
        solve(&problem(slab(), 17, 0.5), &SolveOptions { max_iter: 1, ..Default::default() }),
        Err(Error::NewtonDiverged { .. })
    ));
}

#[test]
fn problem_files_parse() {
    let text = r#"
nx = 9
ny = 11
tau = 0.0

[domain]
x0 = 0.0
x1 = 2.0
y0 = 1.0
y1 = 3.0

[boundary]
kind = "plane"
slope = 2.0
offset = 1.0
"#;
    let p = GridProblem::from_toml_str(text).unwrap();
    let s = solve(&p, &SolveOptions::default()).unwrap();
    assert!(max_node_error(&p, &s).unwrap() < 1e-10);
    match GridProblem::from_toml_str("nx = 9\nny = \"x\"\n") {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
        other => panic!("{other:?}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn maximum_principle(a in -0.4f64..0.4, b in -0.4f64..0.4, c in -0.4f64..0.4, t in -1.0f64..1.0) {
        // smooth, non-minimal, moderate data: the top side is a horocycle
        // bounding the domain from the concave side, so steep data has no
        // solution at all
        let f = move |x: f64, y: f64| a * x * y + b * (3.0 * x).sin() + c * y * y;
        let p = problem(BoundaryData::Custom(Arc::new(f)), 17, t);
        let opts = SolveOptions::default();
        let s = solve(&p, &opts).unwrap();
        let (lo, hi) = perimeter_range(&p, &f);
        for v in &s.values {
            prop_assert!(*v >= lo - 10.0 * opts.tol && *v <= hi + 10.0 * opts.tol, "{} outside [{}, {}]", v, lo, hi);
        }
    }
}
