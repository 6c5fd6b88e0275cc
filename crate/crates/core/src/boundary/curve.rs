//! Polyline curves in the vertical ideal boundary ∂∞ℍ² × ℝ.
//!
//! Cylinder model: vertices are (θ, t) with θ unwrapped; each component is
//! closed by a segment from the last vertex to the first vertex shifted by
//! 2π·winding.
//!
//! Half-space model: vertices are (x, t) with x in the extended reals. A
//! vertex with x = ±∞ stands for the ideal point ∞ approached from that side.
//! A segment between a finite vertex (x₀, t₀) and an infinite one is the
//! horizontal ray {t = t₀} from x₀ towards that side, closed up in the fibre
//! over ∞ by a vertical segment to the infinite vertex's own height;
//! consecutive infinite vertices also span a vertical segment there. Components are
//! closed by the segment from the last vertex to the first and have winding 0.

use std::f64::consts::TAU as TWO_PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Model;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Component {
    pub vertices: Vec<(f64, f64)>,
    #[serde(default)]
    pub winding: i32,
}

impl Component {
    pub fn new(vertices: Vec<(f64, f64)>, winding: i32) -> Self {
        Component { vertices, winding }
    }

    /// The closing vertex: the first one shifted by the winding.
    fn closing_vertex(&self) -> (f64, f64) {
        let (a, t) = self.vertices[0];
        (a + TWO_PI * self.winding as f64, t)
    }

    /// Edges including the closing one, as vertex pairs.
    pub fn edges(&self) -> impl Iterator<Item = ((f64, f64), (f64, f64))> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| {
            let a = self.vertices[i];
            let b = if i + 1 < n { self.vertices[i + 1] } else { self.closing_vertex() };
            (a, b)
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdealBoundaryCurve {
    pub model: Model,
    pub components: Vec<Component>,
}

/// One edge of a curve, classified for fibre intersection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Edge {
    Linear { a: (f64, f64), b: (f64, f64) },
    /// Horizontal ray {t} over [x₀, +∞) (`right`) or (−∞, x₀].
    Ray { x0: f64, t: f64, right: bool },
    /// Contained in the fibre over the half-space point ∞.
    AtInfinity,
}

impl IdealBoundaryCurve {
    pub fn new(model: Model, components: Vec<Component>) -> Result<Self> {
        let c = IdealBoundaryCurve { model, components };
        c.validate()?;
        Ok(c)
    }

    /// Horizontal circles {t = hᵢ} in the cylinder model.
    pub fn horizontal_circles(heights: &[f64], samples: usize) -> Result<Self> {
        let n = samples.max(1);
        let comps = heights
            .iter()
            .map(|&h| Component::new((0..n).map(|k| (TWO_PI * k as f64 / n as f64, h)).collect(), 1))
            .collect();
        IdealBoundaryCurve::new(Model::Cylinder, comps)
    }

    /// Cylinder component sampling a graph t = f(θ) over [0, 2π).
    pub fn circle_graph(f: impl Fn(f64) -> f64, samples: usize) -> Component {
        let n = samples.max(3);
        Component::new(
            (0..n)
                .map(|k| {
                    let th = TWO_PI * k as f64 / n as f64;
                    (th, f(th))
                })
                .collect(),
            1,
        )
    }

    pub fn edges(&self) -> Vec<(usize, Edge)> {
        let mut out = Vec::new();
        for (ci, comp) in self.components.iter().enumerate() {
            for (a, b) in comp.edges() {
                out.push((ci, classify(a, b)));
            }
        }
        out
    }

    pub fn vertex_count(&self) -> usize {
        self.components.iter().map(|c| c.vertices.len()).sum()
    }

    pub fn validate(&self) -> Result<()> {
        if self.components.is_empty() {
            return Err(Error::InvalidCurve("curve has no components".into()));
        }
        for (ci, comp) in self.components.iter().enumerate() {
            if comp.vertices.is_empty() {
                return Err(Error::InvalidCurve(format!("component {ci} is empty")));
            }
            for &(a, t) in &comp.vertices {
                let a_ok = match self.model {
                    Model::Cylinder => a.is_finite(),
                    Model::HalfSpace => !a.is_nan(),
                };
                if !a_ok || !t.is_finite() {
                    return Err(Error::InvalidCurve(format!("component {ci} has a non-finite vertex ({a}, {t})")));
                }
            }
            match self.model {
                Model::HalfSpace if comp.winding != 0 => {
                    return Err(Error::InvalidCurve(format!(
                        "component {ci}: half-space components pass through infinity explicitly and carry no winding"
                    )));
                }
                Model::Cylinder if comp.vertices.len() < 2 && comp.winding == 0 => {
                    return Err(Error::InvalidCurve(format!("component {ci} is a single point")));
                }
                _ => {}
            }
        }
        self.check_simple()
    }

    /// Rejects proper crossings between non-adjacent linear edges. Rays and
    /// edges at infinity are not tested.
    fn check_simple(&self) -> Result<()> {
        let mut segs: Vec<(usize, usize, (f64, f64), (f64, f64))> = Vec::new();
        for (ci, comp) in self.components.iter().enumerate() {
            for (ei, (a, b)) in comp.edges().enumerate() {
                if let Edge::Linear { a, b } = classify(a, b) {
                    segs.push((ci, ei, a, b));
                }
            }
        }
        let shifts: &[f64] = match self.model {
            Model::Cylinder => &[-TWO_PI, 0.0, TWO_PI],
            Model::HalfSpace => &[0.0],
        };
        for i in 0..segs.len() {
            for j in (i + 1)..segs.len() {
                let (ci, ei, a, b) = segs[i];
                let (cj, ej, c, d) = segs[j];
                if ci == cj {
                    let n = self.components[ci].vertices.len();
                    if ei.abs_diff(ej) <= 1 || ei.abs_diff(ej) == n - 1 {
                        continue;
                    }
                }
                for &s in shifts {
                    let c2 = (c.0 + s, c.1);
                    let d2 = (d.0 + s, d.1);
                    if segments_cross(a, b, c2, d2) {
                        return Err(Error::InvalidCurve(format!(
                            "edges {ei} of component {ci} and {ej} of component {cj} intersect"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

pub(crate) fn classify(a: (f64, f64), b: (f64, f64)) -> Edge {
    match (a.0.is_finite(), b.0.is_finite()) {
        (true, true) => Edge::Linear { a, b },
        (true, false) => Edge::Ray { x0: a.0, t: a.1, right: b.0 > 0.0 },
        (false, true) => Edge::Ray { x0: b.0, t: b.1, right: a.0 > 0.0 },
        (false, false) => Edge::AtInfinity,
    }
}

fn orient(p: (f64, f64), q: (f64, f64), r: (f64, f64)) -> f64 {
    (q.0 - p.0) * (r.1 - p.1) - (q.1 - p.1) * (r.0 - p.0)
}

/// Proper (transversal, interior) crossing of two closed segments.
fn segments_cross(a: (f64, f64), b: (f64, f64), c: (f64, f64), d: (f64, f64)) -> bool {
    let scale = [a, b, c, d].iter().fold(1.0f64, |m, p| m.max(p.0.abs()).max(p.1.abs()));
    let eps = 1e-12 * scale * scale;
    let d1 = orient(c, d, a);
    let d2 = orient(c, d, b);
    let d3 = orient(a, b, c);
    let d4 = orient(a, b, d);
    ((d1 > eps && d2 < -eps) || (d1 < -eps && d2 > eps)) && ((d3 > eps && d4 < -eps) || (d3 < -eps && d4 > eps))
}
