use std::f64::consts::PI;

use sltwo::annulus::{
    angular_shift_v, angular_shift_v_prime, annulus_area, annulus_area_with, boundary_gap, catenoid_profile_u,
    disk_area, douglas_check, douglas_sweep, shift_audit, write_sweep_csv, AnnulusSpec, AreaOptions,
};
use sltwo::geometry::Tau;

fn tau(v: f64) -> Tau {
    Tau::new(v).unwrap()
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for k in 1..n {
        s += f(a + k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

/// ∬ √K / y² over {x² + y² + 1 < 2y cosh ρ}: the disk is centred at
/// (0, cosh ρ) with Euclidean radius sinh ρ. Outer variable y = cosh ρ +
/// sinh ρ·sin φ, inner over x by Simpson as well.
fn disk_area_oracle(rho: f64, t: f64) -> f64 {
    let (c, s) = (rho.cosh(), rho.sinh());
    let k = (1.0 + 4.0 * t * t).sqrt();
    simpson(
        |phi| {
            let y = c + s * phi.sin();
            let half = s * phi.cos();
            let inner = simpson(|_x| 1.0 / (y * y), -half, half, 8);
            k * inner * s * phi.cos()
        },
        -PI / 2.0,
        PI / 2.0,
        4000,
    )
}

#[test]
fn disk_area_matches_double_quadrature() {
    for rho in [0.3, 1.0, 2.5, 5.0] {
        for t in [0.0, 0.5, -1.0] {
            let a = disk_area(rho, tau(t)).unwrap();
            let b = disk_area_oracle(rho, t);
            assert!((a - b).abs() < 1e-6 * a, "rho {rho} tau {t}: {a} vs {b}");
        }
    }
    assert_eq!(disk_area(0.0, tau(0.5)).unwrap(), 0.0);
    assert!((disk_area(1.0, tau(0.5)).unwrap() - 4.8257).abs() < 1e-4);
}

#[test]
fn profile_behaviour() {
    let spec = AnnulusSpec::new(1.0, 3.0, tau(0.5)).unwrap();
    assert_eq!(catenoid_profile_u(1.0, &spec).unwrap(), 0.0);
    let vals: Vec<f64> = [1.1, 1.5, 2.0, 3.0, 6.0, f64::INFINITY].iter().map(|&r| catenoid_profile_u(r, &spec).unwrap()).collect();
    assert!(vals.windows(2).all(|w| w[1] > w[0]), "{vals:?}");
    assert!(vals[5] < PI / 2.0);
    let big = AnnulusSpec::new(8.0, 10.0, tau(0.5)).unwrap();
    assert!((catenoid_profile_u(f64::INFINITY, &big).unwrap() - PI / 2.0).abs() < 0.01);
}

#[test]
fn gap_against_large_neck_asymptotics() {
    // sinh ≈ exp/2 for large arguments turns the profile into
    // π/2 − arcsin(e^{−(r − ρ̄)}), up to O(e^{−2ρ̄})
    for (rb, rho) in [(8.0, 10.0), (10.0, 12.5), (12.0, 13.0)] {
        let spec = AnnulusSpec::new(rb, rho, tau(0.5)).unwrap();
        let want = 2.0 * 2f64.sqrt() * (PI / 2.0 - (rb - rho).exp().asin());
        let got = boundary_gap(&spec).unwrap();
        assert!((got - want).abs() < 1e-5, "{got} vs {want}");
    }
}

#[test]
fn gap_increases_towards_bound() {
    for t in [0.0f64, 0.5, 1.0] {
        let k = (1.0 + 4.0 * t * t).sqrt();
        let g: Vec<f64> = [1.2, 1.5, 2.0, 4.0, 8.0, 16.0]
            .iter()
            .map(|&rho| boundary_gap(&AnnulusSpec::new(1.0, rho, tau(t)).unwrap()).unwrap())
            .collect();
        assert!(g.windows(2).all(|w| w[1] > w[0]), "{g:?}");
        let sup = 2.0 * k * catenoid_profile_u(f64::INFINITY, &AnnulusSpec::new(1.0, 2.0, tau(t)).unwrap()).unwrap();
        assert!(g[5] < sup && sup < k * PI);
        // the tail beyond ρ is about 2√K·e^{−(ρ − ρ̄)}
        assert!(sup - g[5] < 1e-5, "{}", sup - g[5]);
    }
}

#[test]
fn untwisted_area_below_integral_bound() {
    for (rb, rho) in [(0.5, 0.8), (1.0, 2.0), (2.0, 2.5), (3.0, 6.0)] {
        let spec = AnnulusSpec::new(rb, rho, tau(0.0)).unwrap();
        let a = annulus_area(&spec).unwrap();
        // two graph sheets, each under 2π√(cosh²ρ − cosh²ρ̄)
        let bound = 2.0 * 2.0 * PI * (rho.cosh().powi(2) - rb.cosh().powi(2)).sqrt();
        assert!(a < bound, "({rb},{rho}): {a} vs {bound}");
    }
}

#[test]
fn thin_annulus_has_small_area() {
    let a: Vec<f64> = [1e-2, 1e-4, 1e-6]
        .iter()
        .map(|&e| annulus_area(&AnnulusSpec::new(1.0, 1.0 + e, tau(0.5)).unwrap()).unwrap())
        .collect();
    // the neck slope blows up like (r − ρ̄)^{−1/2}, so the area goes like √ε
    for w in a.windows(2) {
        assert!((w[0] / w[1] - 10.0).abs() < 0.5, "{a:?}");
    }
}

#[test]
fn douglas_examples() {
    let check = |rb: f64, t: f64| douglas_check(&AnnulusSpec::new(rb, 1.25 * rb, tau(t)).unwrap()).unwrap();
    assert!(!check(0.5, 0.5).holds);
    assert!(check(20.0, 0.5).holds);
    assert!(check(12.0, 0.0).holds);
    let d = check(2.0, 0.5);
    assert!((d.margin - (2.0 * d.area_disk - d.area_annulus)).abs() < 1e-12 * d.area_annulus);
    // the mirror space has the same areas
    let (p, m) = (check(2.0, 0.5), check(2.0, -0.5));
    assert!((p.area_annulus - m.area_annulus).abs() < 1e-12 * p.area_annulus);
}

#[test]
fn shift_function_facts() {
    for rho in [2.0, 5.0, 8.0] {
        let t = tau(0.5);
        assert_eq!(angular_shift_v(0.0, rho, t), 0.0);
        let v0 = angular_shift_v_prime(0.0, rho, t);
        assert!((v0 - (rho.exp() - 1.0)).abs() < 1e-12 * v0);
        assert!(angular_shift_v_prime(PI, rho, t) > -1.0);
        let r = shift_audit(&AnnulusSpec::new(0.8 * rho, rho, t).unwrap(), 2000).unwrap();
        assert!(r.all_hold, "{r:?}");
    }
}

#[test]
fn parallel_area_is_bit_identical() {
    let spec = AnnulusSpec::new(2.0, 2.5, tau(0.5)).unwrap();
    let a = annulus_area_with(&spec, &AreaOptions { parallel: false }).unwrap();
    let b = annulus_area_with(&spec, &AreaOptions { parallel: true }).unwrap();
    assert_eq!(a.to_bits(), b.to_bits());
}

#[test]
fn sweep_csv_layout() {
    let rows = douglas_sweep(&[0.5, 1.0], 1.25, tau(0.5), &AreaOptions::default()).unwrap();
    let mut buf = Vec::new();
    write_sweep_csv(&rows, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "rho_bar,rho,tau,area_disk,area_annulus,margin,gap");
    assert_eq!(lines.len(), 3);
    let margin: f64 = lines[1].split(',').nth(5).unwrap().parse().unwrap();
    assert_eq!(margin, rows[0].margin);
}
