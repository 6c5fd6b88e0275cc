//! Moving boundary curves between the half-space and cylinder models with
//! the boundary traces of the model-change isometries.
//!
//! Every edge is resampled with `resolution` pieces before mapping, since the
//! maps are not affine. The point at infinity of the half-space corresponds
//! to θ ≡ 0; cylinder edges through it are split there and re-joined by a
//! vertical segment in the fibre over ∞.

use std::f64::consts::{PI, TAU as TWO_PI};

use serde::{Deserialize, Serialize};

use super::curve::{Component, Edge, IdealBoundaryCurve};
use crate::error::{Error, Result};
use crate::geometry::{boundary_to_cylinder, boundary_to_half_space, Model, Tau};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    HalfToCyl,
    CylToHalf,
}

impl std::str::FromStr for Direction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "half2cyl" | "half-to-cyl" => Ok(Direction::HalfToCyl),
            "cyl2half" | "cyl-to-half" => Ok(Direction::CylToHalf),
            _ => Err(Error::BadParameter(format!("unknown direction '{s}' (expected half2cyl or cyl2half)"))),
        }
    }
}

pub fn transport_boundary(curve: &IdealBoundaryCurve, dir: Direction, tau: Tau, resolution: usize) -> Result<IdealBoundaryCurve> {
    let n = resolution.max(1);
    match (dir, curve.model) {
        (Direction::HalfToCyl, Model::HalfSpace) => half_to_cyl(curve, tau, n),
        (Direction::CylToHalf, Model::Cylinder) => cyl_to_half(curve, tau, n),
        (Direction::HalfToCyl, _) => Err(Error::WrongModel { expected: "half-space", found: "cylinder" }),
        (Direction::CylToHalf, _) => Err(Error::WrongModel { expected: "cylinder", found: "half-space" }),
    }
}

/// Image of an ideal half-space point; ±∞ go to θ = 2π resp. 0 with the
/// one-sided limit of the t-shift.
fn image_of(x: f64, t: f64, tau: Tau) -> (f64, f64) {
    if x == f64::INFINITY {
        (TWO_PI, t - 2.0 * PI * tau.value())
    } else if x == f64::NEG_INFINITY {
        (0.0, t + 2.0 * PI * tau.value())
    } else {
        boundary_to_cylinder(x, t, tau)
    }
}

fn half_to_cyl(curve: &IdealBoundaryCurve, tau: Tau, n: usize) -> Result<IdealBoundaryCurve> {
    let mut comps = Vec::new();
    for comp in &curve.components {
        let mut out: Vec<(f64, f64)> = Vec::new();
        // unwrapping offset: passing through ∞ from + to − advances θ by 2π
        let mut offset = 0.0;
        let verts = &comp.vertices;
        let m = verts.len();
        for i in 0..m {
            let a = verts[i];
            let b = verts[(i + 1) % m];
            let (th, t) = image_of(a.0, a.1, tau);
            out.push((th + offset, t));
            match super::curve::classify(a, b) {
                Edge::Linear { .. } => {
                    for k in 1..n {
                        let s = k as f64 / n as f64;
                        let (th, t) = boundary_to_cylinder(a.0 + s * (b.0 - a.0), a.1 + s * (b.1 - a.1), tau);
                        out.push((th + offset, t));
                    }
                }
                Edge::Ray { x0, t, right } => {
                    // sample uniformly in θ along the ray
                    let th0 = PI + 2.0 * x0.atan();
                    let th1 = if right { TWO_PI } else { 0.0 };
                    for k in 1..n {
                        let s = k as f64 / n as f64;
                        let th = th0 + s * (th1 - th0);
                        let x = -1.0 / (0.5 * th).tan();
                        let (th, tt) = boundary_to_cylinder(x, t, tau);
                        out.push((th + offset, tt));
                    }
                }
                Edge::AtInfinity => {
                    if a.0 > 0.0 && b.0 < 0.0 {
                        offset += TWO_PI;
                    } else if a.0 < 0.0 && b.0 > 0.0 {
                        offset -= TWO_PI;
                    }
                }
            }
        }
        let winding = (offset / TWO_PI).round() as i32;
        comps.push(Component::new(dedup(out), winding));
    }
    IdealBoundaryCurve::new(Model::Cylinder, comps)
}

fn dedup(v: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(v.len());
    for p in v {
        if out.last() != Some(&p) {
            out.push(p);
        }
    }
    out
}

fn at_pole(theta: f64) -> bool {
    theta.rem_euclid(TWO_PI) == 0.0
}

/// Image of a pole crossing at height t: arriving from below θ = 2πk gives
/// (+∞, t + 2πτ), from above (−∞, t − 2πτ).
fn pole_image(t: f64, from_below: bool, tau: Tau) -> (f64, f64) {
    if from_below {
        (f64::INFINITY, t + 2.0 * PI * tau.value())
    } else {
        (f64::NEG_INFINITY, t - 2.0 * PI * tau.value())
    }
}

fn cyl_to_half(curve: &IdealBoundaryCurve, tau: Tau, n: usize) -> Result<IdealBoundaryCurve> {
    let mut comps = Vec::new();
    for comp in &curve.components {
        // dense polyline in the cylinder, with explicit pole crossings
        let mut dense: Vec<(f64, f64)> = Vec::new();
        for (a, b) in comp.edges() {
            for k in 0..n {
                let s = k as f64 / n as f64;
                dense.push(if k == 0 { a } else { (a.0 + s * (b.0 - a.0), a.1 + s * (b.1 - a.1)) });
            }
        }
        let m = dense.len();
        let closing = (TWO_PI * comp.winding as f64, 0.0);
        let next_of = |i: usize| -> (f64, f64) {
            if i + 1 < m {
                dense[i + 1]
            } else {
                (dense[0].0 + closing.0, dense[0].1)
            }
        };
        let prev_of = |i: usize| -> (f64, f64) {
            if i > 0 {
                dense[i - 1]
            } else {
                (dense[m - 1].0 - closing.0, dense[m - 1].1)
            }
        };
        let mut out: Vec<(f64, f64)> = Vec::new();
        for i in 0..m {
            let a = dense[i];
            if at_pole(a.0) {
                // sides from the nearest neighbours off the pole
                let mut j = i;
                let mut before = prev_of(j);
                let mut guard = 0;
                while before.0 == a.0 && guard < m {
                    j = if j == 0 { m - 1 } else { j - 1 };
                    before = prev_of(j);
                    guard += 1;
                }
                let mut j = i;
                let mut after = next_of(j);
                let mut guard = 0;
                while after.0 == a.0 && guard < m {
                    j = (j + 1) % m;
                    after = next_of(j);
                    guard += 1;
                }
                if before.0 == a.0 {
                    return Err(Error::IdealPole { x: a.0 });
                }
                let arrive = pole_image(a.1, before.0 < a.0, tau);
                let leave = pole_image(a.1, after.0 < a.0, tau);
                out.push(arrive);
                if leave != arrive {
                    out.push(leave);
                }
            } else {
                out.push(boundary_to_half_space(a.0, a.1, tau)?);
            }
            // split the segment to the next point if it crosses a pole
            let b = next_of(i);
            let (lo, hi) = (a.0.min(b.0), a.0.max(b.0));
            let mut poles: Vec<f64> = Vec::new();
            let mut k = (lo / TWO_PI).floor() + 1.0;
            while k * TWO_PI < hi {
                if k * TWO_PI > lo {
                    poles.push(k * TWO_PI);
                }
                k += 1.0;
            }
            if b.0 < a.0 {
                poles.reverse();
            }
            for p in poles {
                let t = a.1 + (p - a.0) / (b.0 - a.0) * (b.1 - a.1);
                let up = b.0 > a.0;
                out.push(pole_image(t, up, tau));
                out.push(pole_image(t, !up, tau));
            }
        }
        comps.push(Component::new(rotate_to_finite(dedup(out)), 0));
    }
    IdealBoundaryCurve::new(Model::HalfSpace, comps)
}

/// Starts the vertex list at a finite vertex so the closing edge is never a
/// vertical segment split across the list ends.
fn rotate_to_finite(mut v: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    if let Some(k) = v.iter().position(|p| p.0.is_finite()) {
        v.rotate_left(k);
    }
    while v.len() > 1 && v.first() == v.last() {
        v.pop();
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::{height_infimum, is_tall};

    #[test]
    fn horizontal_line_jumps() {
        let tau = Tau::HALF;
        let line = IdealBoundaryCurve::new(
            Model::HalfSpace,
            vec![Component::new(vec![(f64::NEG_INFINITY, 0.0), (0.0, 0.0), (f64::INFINITY, 0.0)], 0)],
        )
        .unwrap();
        let img = transport_boundary(&line, Direction::HalfToCyl, tau, 16).unwrap();
        let c = &img.components[0];
        assert_eq!(c.winding, 1);
        let first = c.vertices[0];
        let last = *c.vertices.last().unwrap();
        assert!((first.1 - 2.0 * PI * tau.value()).abs() < 1e-12);
        assert!((last.1 + 2.0 * PI * tau.value()).abs() < 1e-12);
        // jump of 4πτ over θ ≡ 0
        assert!(((first.1 - last.1) - 4.0 * PI * tau.value()).abs() < 1e-12);
    }

    #[test]
    fn tau_zero_keeps_heights() {
        let c = IdealBoundaryCurve::new(
            Model::HalfSpace,
            vec![Component::new(vec![(-1.0, 0.5), (0.0, 0.0), (1.0, 0.5), (0.0, 1.0)], 0)],
        )
        .unwrap();
        let img = transport_boundary(&c, Direction::HalfToCyl, Tau::ZERO, 4).unwrap();
        let ts: Vec<f64> = img.components[0].vertices.iter().map(|v| v.1).collect();
        assert!(ts.iter().all(|t| (0.0..=1.0).contains(t)));
    }

    #[test]
    fn round_trip_circles() {
        let tau = Tau::new(0.7).unwrap();
        let c = IdealBoundaryCurve::horizontal_circles(&[0.0, 5.0], 24).unwrap();
        let h = transport_boundary(&c, Direction::CylToHalf, tau, 3).unwrap();
        let back = transport_boundary(&h, Direction::HalfToCyl, tau, 1).unwrap();
        for (orig, img) in c.components.iter().zip(&back.components) {
            for v in &orig.vertices {
                if at_pole(v.0) {
                    continue;
                }
                let hit = img.vertices.iter().any(|w| {
                    (w.0.rem_euclid(TWO_PI) - v.0.rem_euclid(TWO_PI)).abs() < 1e-10 && (w.1 - v.1).abs() < 1e-10
                });
                assert!(hit, "{v:?} lost");
            }
        }
        assert_eq!(is_tall(&c, tau), is_tall(&h, tau));
        assert!((height_infimum(&h).0 - 5.0).abs() < 1e-9);
    }
}
