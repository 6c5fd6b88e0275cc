use proptest::prelude::*;
use sltwo::geometry::{Model, Tau};
use sltwo::jet::Jet2;
use sltwo::minimality::{
    mean_curvature_divform, graph_residual, residual_from_derivatives, verify_graph, verify_surface, VerifyOptions,
};
use sltwo::surfaces::{as_graph, ClosureGraph, Family, GraphFunction, InvariantSurface, Sheet};

fn tau(v: f64) -> Tau {
    Tau::new(v).unwrap()
}

fn families() -> Vec<Family> {
    vec![
        Family::SlabBigraph { d: 0.5 },
        Family::SlabBigraph { d: 1.0 },
        Family::SlabBigraph { d: 2.0 },
        Family::Tilted { d: 1.0, l: 0.0 },
        Family::Tilted { d: 0.7, l: 1.3 },
        Family::Tilted { d: 2.0, l: -0.8 },
        Family::Fan { c: 3.0 },
        Family::Fan { c: 1.0 },
        Family::Fan { c: 0.5 },
        Family::Catenoid { c: 4.0 },
        Family::Catenoid { c: 10.0 },
        Family::Catenoid { c: 50.0 },
        Family::UmbrellaLimit { lambda: 0.0 },
        Family::UmbrellaLimit { lambda: 1.0 },
        Family::UmbrellaLimit { lambda: 5.0 },
    ]
}

#[test]
fn every_family_is_minimal_in_both_operators() {
    for fam in families() {
        for t in [0.0, 0.5, 1.0] {
            for sheet in [Sheet::Plus, Sheet::Minus] {
                let s = InvariantSurface::new(fam, sheet, tau(t)).unwrap();
                let r = verify_surface(&s, 40, 1e-6).unwrap();
                assert!(r.pass, "{}: residual {:e}, H {:e}", s.label(), r.max_residual, r.max_h);
            }
        }
    }
}

#[test]
fn parallel_report_matches_serial() {
    let s = InvariantSurface::new(Family::Catenoid { c: 10.0 }, Sheet::Plus, tau(0.5)).unwrap();
    let g = as_graph(&s).unwrap();
    let a = verify_graph(&g, s.tau, 64, 1e-6, &VerifyOptions { parallel: false, ..Default::default() }).unwrap();
    let b = verify_graph(&g, s.tau, 64, 1e-6, &VerifyOptions { parallel: true, ..Default::default() }).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}

#[test]
fn report_json_shape() {
    let s = InvariantSurface::new(Family::SlabBigraph { d: 1.0 }, Sheet::Plus, tau(0.5)).unwrap();
    let v: serde_json::Value = serde_json::to_value(verify_surface(&s, 10, 1e-8).unwrap()).unwrap();
    for key in ["surface", "tau", "n_samples", "max_residual", "max_H", "pass", "worst_points"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["pass"], serde_json::Value::Bool(true));
}

#[test]
fn non_minimal_graph_fails() {
    let u = ClosureGraph::new("y^2", |_x: Jet2, y: Jet2| y * y, (-1.0, 1.0), (0.5, 1.5));
    let r = verify_graph(&u, Tau::ZERO, 20, 1e-6, &VerifyOptions::default()).unwrap();
    assert!(!r.pass);
    assert!(mean_curvature_divform(&u, (0.0, 1.0), Tau::ZERO, Model::HalfSpace, 1e-4).unwrap().abs() > 1e-2);
    assert!(graph_residual(&u, (0.0, 1.0), Tau::ZERO).unwrap().abs() > 1e-2);
}

proptest! {
    // u(x, y) = v(y) + lx
    #[test]
    fn reduces_for_translation_invariant_graphs(
        y in 0.01f64..5.0, l in -3.0f64..3.0, p in -5.0f64..5.0, q in -5.0f64..5.0, t in -2.0f64..2.0,
    ) {
        let full = residual_from_derivatives(y, [l, p, 0.0, 0.0, q], t);
        let reduced = y * p.powi(3) - (1.0 + (l * y - 2.0 * t).powi(2)) * q + l * (l * y - 2.0 * t) * p;
        prop_assert!((full - reduced).abs() < 1e-12 * (1.0 + reduced.abs().max(full.abs())));
    }

    // u(x, y) = w(x/y): the full operator is −1/y² times the reduced one
    #[test]
    fn reduces_for_fan_graphs(
        y in 0.05f64..5.0, s in -4.0f64..4.0, p in -5.0f64..5.0, q in -5.0f64..5.0, t in -2.0f64..2.0,
    ) {
        let x = s * y;
        let d = [
            p / y,
            -x / (y * y) * p,
            q / (y * y),
            -p / (y * y) - x / y.powi(3) * q,
            2.0 * x / y.powi(3) * p + x * x / y.powi(4) * q,
        ];
        let full = residual_from_derivatives(y, d, t);
        let k = 1.0 + 4.0 * t * t;
        let reduced = 2.0 * s * k * p - 6.0 * s * t * p * p + (s.powi(3) + s) * p.powi(3) + (1.0 + s * s * k) * q;
        let scale = 1.0 + reduced.abs() + (s.abs() + 1.0).powi(3) * (1.0 + p.abs()).powi(3) * k;
        prop_assert!((full * y * y + reduced).abs() < 1e-12 * scale, "{} vs {}", full * y * y, -reduced);
    }

    #[test]
    fn solutions_have_small_divergence_form_curvature(a in 0.05f64..0.95, b in 0.05f64..0.95, t in -1.0f64..1.0) {
        for fam in [Family::SlabBigraph { d: 1.0 }, Family::Fan { c: 2.0 }, Family::UmbrellaLimit { lambda: 0.5 }] {
            let s = InvariantSurface::new(fam, Sheet::Plus, tau(t)).unwrap();
            let g = as_graph(&s).unwrap();
            let (x, y) = g.sample(a, b).unwrap();
            prop_assert!(graph_residual(&g, (x, y), s.tau).unwrap().abs() < 1e-8);
            prop_assert!(mean_curvature_divform(&g, (x, y), s.tau, Model::HalfSpace, 1e-4).unwrap().abs() < 1e-6);
        }
    }
}
