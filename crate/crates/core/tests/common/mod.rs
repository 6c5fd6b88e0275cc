//! Oracles shared by the integration tests. Each is deliberately independent
//! of the library code it checks.
#![allow(dead_code)]

use std::f64::consts::PI;

use sltwo::geometry::{Model, MoebiusIsometry};
use sltwo::numerics::halton;

/// det-1 matrices from quasi-random angles: rotation · dilation · shear.
pub fn moebius_family(n: usize, model: Model) -> Vec<MoebiusIsometry> {
    (1..=n as u64)
        .map(|i| {
            let th = PI * halton(i, 2);
            let l = (2.0 * halton(i, 3) - 1.0).exp();
            let s = 4.0 * halton(i, 5) - 2.0;
            let (c, sn) = th.sin_cos();
            // [c −s; s c]·[l 0; 0 1/l]·[1 s; 0 1]
            let (a, b, cc, d) = (c * l, c * l * s - sn / l, sn * l, sn * l * s + c / l);
            MoebiusIsometry::new(a, b, cc, d, 0.3 * s, model).unwrap()
        })
        .collect()
}

pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for k in 1..n {
        s += f(a + k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

fn in_horodisk(z: (f64, f64), xi: f64, delta: f64) -> bool {
    let c = ((1.0 - delta / 2.0) * xi.cos(), (1.0 - delta / 2.0) * xi.sin());
    (z.0 - c.0).hypot(z.1 - c.1) < delta / 2.0
}

/// Length of the geodesic between e^{iθ₁}, e^{iθ₂} outside both horodisks,
/// by bisecting the exits and integrating arclength along the circle.
pub fn geodesic_length_outside(th1: f64, d1: f64, th2: f64, d2: f64) -> f64 {
    let a = 0.5 * (th2 - th1).abs();
    let m = 0.5 * (th1 + th2);
    let (cx, cy) = (m.cos() / a.cos(), m.sin() / a.cos());
    let r = a.tan();
    let z = |psi: f64| (cx + r * psi.cos(), cy + r * psi.sin());
    let beta = PI / 2.0 - a;
    let (lo, hi) = (m + PI - beta, m + PI + beta);
    // which end belongs to which ideal point
    let probe = z(lo + 1e-9);
    let near1 = (probe.0 - th1.cos()).hypot(probe.1 - th1.sin()) < (probe.0 - th2.cos()).hypot(probe.1 - th2.sin());
    let ((xa, da), (xb, db)) = if near1 { ((th1, d1), (th2, d2)) } else { ((th2, d2), (th1, d1)) };
    let exit = |from: f64, to: f64, xi: f64, d: f64| {
        // inside at `from`, outside at `to`
        let (mut a, mut b) = (from, to);
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if in_horodisk(z(mid), xi, d) { a = mid } else { b = mid }
        }
        0.5 * (a + b)
    };
    let s0 = exit(lo, m + PI, xa, da);
    let s1 = exit(hi, m + PI, xb, db);
    // ds_hyp = 2|dz|/(1 − |z|²), |dz| = r dψ
    simpson(
        |psi| {
            let (x, y) = z(psi);
            2.0 * r / (1.0 - x * x - y * y)
        },
        s0,
        s1,
        200_000,
    )
}

/// Radial length from the origin to a horocycle of Euclidean diameter δ.
pub fn radial_length(delta: f64) -> f64 {
    simpson(|r| 2.0 / (1.0 - r * r), 0.0, 1.0 - delta, 200_000)
}

/// First root of the catenoid neck polynomial −1 + ct − t² by plain bisection.
pub fn neck_root_bisection(c: f64) -> f64 {
    let q = |t: f64| -1.0 + c * t - t * t;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let m = 0.5 * (lo + hi);
        if q(m) < 0.0 { lo = m } else { hi = m }
    }
    lo
}
