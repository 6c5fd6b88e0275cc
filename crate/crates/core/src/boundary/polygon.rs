//! Ideal polygons in the disk model with horocycles at their ideal vertices,
//! and the Jenkins–Serrin solvability conditions for the alternating ±∞
//! Dirichlet problem over them.
//!
//! A horocycle at ξ is described by its Euclidean diameter δ ∈ (0, 2); its
//! signed distance from the origin is d = ln((2 − δ)/δ). Normalising the two
//! ends of a geodesic to 0 and ∞ in the upper half-plane turns the horocycles
//! into a horizontal line and a circle tangent at 0; their separation is a
//! logarithm, which in disk terms reads
//!
//! ```text
//! |ξᵢξⱼ| = dᵢ + dⱼ + 2·ln sin(Δθ/2),
//! ```
//!
//! and a radial edge from the origin has truncated length dᵢ.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_VERTICES: usize = 16;
pub const BALANCE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdealPolygon {
    /// Ideal vertices θ₁ < θ₂ < … (radians, spanning less than 2π).
    pub thetas: Vec<f64>,
    /// Euclidean diameters of the horocycles, one per ideal vertex.
    pub horocycles: Vec<f64>,
    /// Whether the origin is a (finite) vertex between θ_last and θ₁.
    #[serde(default = "yes")]
    pub origin: bool,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Label {
    A,
    B,
}

/// Vertex of the polygon in cyclic order: `None` is the origin.
type Vertex = Option<usize>;

pub fn horocycle_distance(delta: f64) -> f64 {
    ((2.0 - delta) / delta).ln()
}

impl IdealPolygon {
    pub fn new(thetas: Vec<f64>, horocycles: Vec<f64>, origin: bool) -> Result<Self> {
        let p = IdealPolygon { thetas, horocycles, origin };
        p.validate()?;
        Ok(p)
    }

    pub fn vertex_count(&self) -> usize {
        self.thetas.len() + usize::from(self.origin)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.thetas.len();
        let v = self.vertex_count();
        if v > MAX_VERTICES {
            return Err(Error::TooManyVertices { count: v, max: MAX_VERTICES });
        }
        if self.horocycles.len() != n {
            return Err(Error::BadParameter(format!("{} horocycles for {n} ideal vertices", self.horocycles.len())));
        }
        if self.origin && (n < 3 || n % 2 == 0) {
            return Err(Error::BadParameter(format!("with the origin as a vertex, need an odd number >= 3 of ideal vertices, got {n}")));
        }
        if !self.origin && (n < 4 || n % 2 == 1) {
            return Err(Error::BadParameter(format!("without the origin, need an even number >= 4 of ideal vertices, got {n}")));
        }
        if self.thetas.iter().any(|t| !t.is_finite()) || self.thetas.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::BadParameter("ideal vertices must be finite and strictly increasing".into()));
        }
        if self.thetas[n - 1] - self.thetas[0] >= 2.0 * PI {
            return Err(Error::BadParameter("ideal vertices must span less than a full turn".into()));
        }
        for (i, &d) in self.horocycles.iter().enumerate() {
            if !(d > 0.0 && d < 2.0) {
                return Err(Error::BadParameter(format!("horocycle {i} diameter {d} outside (0, 2)")));
            }
            if self.origin && d >= 1.0 {
                // the horoball would contain the origin vertex
                return Err(Error::OverlappingHorocycles { i, j: n });
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if self.chord(i, j) <= 0.0 {
                    return Err(Error::OverlappingHorocycles { i, j });
                }
            }
        }
        Ok(())
    }

    fn d(&self, i: usize) -> f64 {
        horocycle_distance(self.horocycles[i])
    }

    /// Truncated length between ideal vertices i and j.
    pub fn chord(&self, i: usize, j: usize) -> f64 {
        let dt = (self.thetas[j] - self.thetas[i]).abs();
        self.d(i) + self.d(j) + 2.0 * (0.5 * dt).sin().ln()
    }

    fn cyclic(&self) -> Vec<Vertex> {
        let mut v: Vec<Vertex> = Vec::new();
        if self.origin {
            v.push(None);
        }
        v.extend((0..self.thetas.len()).map(Some));
        v
    }

    fn edge_length(&self, a: Vertex, b: Vertex) -> f64 {
        match (a, b) {
            (None, Some(i)) | (Some(i), None) => self.d(i),
            (Some(i), Some(j)) => self.chord(i, j),
            (None, None) => 0.0,
        }
    }

    /// Boundary edges in order with their labels: A₁ first, alternating.
    pub fn edges(&self) -> Vec<(Vertex, Vertex, Label)> {
        let v = self.cyclic();
        let m = v.len();
        (0..m).map(|k| (v[k], v[(k + 1) % m], if k % 2 == 0 { Label::A } else { Label::B })).collect()
    }

    /// (α, β, γ) of the polygon itself.
    pub fn alpha_beta_gamma(&self) -> (f64, f64, f64) {
        let mut a = 0.0;
        let mut b = 0.0;
        for (u, v, l) in self.edges() {
            let len = self.edge_length(u, v);
            match l {
                Label::A => a += len,
                Label::B => b += len,
            }
        }
        (a, b, a + b)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InscribedWitness {
    /// Vertex labels: "0" for the origin, "θk" (1-based) for ideal vertices.
    pub vertices: Vec<String>,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    /// min(γ − 2α, γ − 2β): positive when strict.
    pub margin: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct JsReport {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub balanced: bool,
    pub strict: bool,
    /// Number of proper inscribed polygons examined.
    pub inscribed_count: usize,
    pub worst_inscribed: Option<InscribedWitness>,
    /// γ(Ω) − 2α(Ω) = β − α: the polygon itself, reported separately.
    pub omega_margin: f64,
}

fn name(v: Vertex) -> String {
    match v {
        None => "0".into(),
        Some(i) => format!("θ{}", i + 1),
    }
}

impl IdealPolygon {
    /// Angular span of a chord as seen inside the polygon.
    fn span(&self, i: usize, j: usize) -> f64 {
        (self.thetas[j] - self.thetas[i]).abs()
    }

    /// Vertex subsets (in cyclic order) spanning a polygon inside Ω.
    fn admissible(&self, mask: u32) -> Option<Vec<Vertex>> {
        let all = self.cyclic();
        let chosen: Vec<Vertex> = all.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, v)| *v).collect();
        let ideals: Vec<usize> = chosen.iter().filter_map(|v| *v).collect();
        let has_origin = chosen.iter().any(|v| v.is_none());
        if has_origin {
            if ideals.len() < 2 {
                return None;
            }
            // chords between consecutive ideal vertices must stay on the
            // origin's side, i.e. span at most a half turn
            if ideals.windows(2).any(|w| self.span(w[0], w[1]) > PI) {
                return None;
            }
        } else {
            if ideals.len() < 3 {
                return None;
            }
            if self.origin && self.span(ideals[0], *ideals.last().unwrap()) > PI {
                return None;
            }
        }
        Some(chosen)
    }

    fn measure(&self, verts: &[Vertex]) -> (f64, f64, f64) {
        let edges = self.edges();
        let label_of = |u: Vertex, v: Vertex| edges.iter().find(|e| (e.0 == u && e.1 == v) || (e.0 == v && e.1 == u)).map(|e| e.2);
        let m = verts.len();
        let (mut a, mut b, mut g) = (0.0, 0.0, 0.0);
        for k in 0..m {
            let (u, v) = (verts[k], verts[(k + 1) % m]);
            let len = self.edge_length(u, v);
            g += len;
            match label_of(u, v) {
                Some(Label::A) => a += len,
                Some(Label::B) => b += len,
                None => {}
            }
        }
        (a, b, g)
    }
}

pub fn jenkins_serrin_check(p: &IdealPolygon) -> Result<JsReport> {
    jenkins_serrin_check_with(p, false)
}

pub fn jenkins_serrin_check_with(p: &IdealPolygon, parallel: bool) -> Result<JsReport> {
    p.validate()?;
    let (alpha, beta, gamma) = p.alpha_beta_gamma();
    let v = p.vertex_count();
    let full = (1u32 << v) - 1;
    let eval = |mask: u32| -> Option<(u32, f64, (f64, f64, f64), Vec<Vertex>)> {
        let verts = p.admissible(mask)?;
        let (a, b, g) = p.measure(&verts);
        Some((mask, (g - 2.0 * a).min(g - 2.0 * b), (a, b, g), verts))
    };
    let masks: Vec<u32> = (1..full).collect();
    let results: Vec<_> = if parallel {
        masks.par_iter().filter_map(|&m| eval(m)).collect()
    } else {
        masks.iter().filter_map(|&m| eval(m)).collect()
    };
    // ties broken by mask for order independence
    let worst = results.iter().min_by(|x, y| x.1.total_cmp(&y.1).then(x.0.cmp(&y.0)));
    let strict = results.iter().all(|r| r.1 > 0.0);
    Ok(JsReport {
        alpha,
        beta,
        gamma,
        balanced: (alpha - beta).abs() < BALANCE_TOL,
        strict,
        inscribed_count: results.len(),
        worst_inscribed: worst.map(|w| InscribedWitness {
            vertices: w.3.iter().map(|v| name(*v)).collect(),
            alpha: w.2 .0,
            beta: w.2 .1,
            gamma: w.2 .2,
            margin: w.1,
        }),
        omega_margin: gamma - 2.0 * alpha,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct VertexSensitivity {
    pub vertex: usize,
    /// d(α − β)/d ln δ by central differences.
    pub d_alpha_minus_beta: f64,
    pub d_alpha: f64,
    pub d_beta: f64,
}

/// How α − β responds to resizing each horocycle. Every ideal vertex borders
/// one A and one B edge, so the response should vanish.
pub fn sensitivity_audit(p: &IdealPolygon, rel_step: f64) -> Result<Vec<VertexSensitivity>> {
    p.validate()?;
    let mut out = Vec::new();
    for i in 0..p.thetas.len() {
        let at = |f: f64| -> Result<(f64, f64)> {
            let mut q = p.clone();
            q.horocycles[i] *= f;
            q.validate()?;
            let (a, b, _) = q.alpha_beta_gamma();
            Ok((a, b))
        };
        let (ap, bp) = at((rel_step).exp())?;
        let (am, bm) = at((-rel_step).exp())?;
        let h = 2.0 * rel_step;
        out.push(VertexSensitivity {
            vertex: i,
            d_alpha_minus_beta: ((ap - bp) - (am - bm)) / h,
            d_alpha: (ap - am) / h,
            d_beta: (bp - bm) / h,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepPoint {
    pub diameter: f64,
    pub report: Option<JsReport>,
    pub error: Option<String>,
}

/// Checks the conditions with every horocycle set to each diameter of the
/// grid. This explores assignments; it does not prove that none exists.
pub fn horocycle_sweep(thetas: &[f64], origin: bool, diameters: &[f64]) -> Vec<SweepPoint> {
    diameters
        .iter()
        .map(|&dia| {
            let poly = IdealPolygon { thetas: thetas.to_vec(), horocycles: vec![dia; thetas.len()], origin };
            match jenkins_serrin_check(&poly) {
                Ok(r) => SweepPoint { diameter: dia, report: Some(r), error: None },
                Err(e) => SweepPoint { diameter: dia, report: None, error: Some(e.to_string()) },
            }
        })
        .collect()
}
