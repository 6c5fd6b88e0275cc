//! The fibrewise gap functional of a boundary curve: for each point p of the
//! ideal circle, the length of the shortest bounded component of the fibre
//! {p}×ℝ minus the curve.
//!
//! Between consecutive vertex abscissae every edge meets the fibre at a
//! height that is affine in p, and a simple curve's edges keep their order,
//! so each gap is affine there. Infima are therefore exact: they are taken
//! over breakpoint values and one-sided limits.

use std::f64::consts::TAU as TWO_PI;

use serde::Serialize;

use super::curve::{Edge, IdealBoundaryCurve};
use crate::geometry::{Model, Tau};

/// Pieces closer than this (relative to the height scale) are merged.
const MERGE_RTOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FiberHeight {
    /// `f64::INFINITY` when the fibre meets the curve in at most one piece.
    pub height: f64,
    /// The fibre contains a vertical segment of the curve; it counts as part
    /// of the curve.
    pub degenerate: bool,
}

/// An interval of the fibre occupied by the curve.
#[derive(Debug, Clone, Copy)]
struct Piece {
    lo: f64,
    hi: f64,
}

fn same_point(model: Model, a: f64, p: f64) -> Option<f64> {
    // returns the shift k·2π with a == p + shift, if any
    match model {
        Model::HalfSpace => (a == p).then_some(0.0),
        Model::Cylinder => {
            let k = ((a - p) / TWO_PI).round();
            (a == p + k * TWO_PI || ((a - p) - k * TWO_PI).abs() <= 4.0 * f64::EPSILON * a.abs().max(1.0)).then_some(k * TWO_PI)
        }
    }
}

/// Lifts of the fibre abscissa `p` into [lo, hi].
fn lifts(model: Model, p: f64, lo: f64, hi: f64) -> Vec<f64> {
    match model {
        Model::HalfSpace => {
            if p >= lo && p <= hi {
                vec![p]
            } else {
                vec![]
            }
        }
        Model::Cylinder => {
            let k0 = ((lo - p) / TWO_PI).ceil() as i64;
            let k1 = ((hi - p) / TWO_PI).floor() as i64;
            (k0..=k1).map(|k| p + k as f64 * TWO_PI).filter(|q| *q >= lo && *q <= hi).collect()
        }
    }
}

fn pieces_on_fiber(curve: &IdealBoundaryCurve, p: f64) -> (Vec<Piece>, bool) {
    let mut out = Vec::new();
    let mut degenerate = false;
    let at_infinity = p.is_infinite();
    for (_, e) in curve.edges() {
        match e {
            Edge::Linear { a, b } => {
                if at_infinity {
                    continue;
                }
                if a.0 == b.0 {
                    if same_point(curve.model, a.0, p).is_some() {
                        out.push(Piece { lo: a.1.min(b.1), hi: a.1.max(b.1) });
                        degenerate |= a.1 != b.1;
                    }
                    continue;
                }
                let (l, r) = if a.0 < b.0 { (a, b) } else { (b, a) };
                for q in lifts(curve.model, p, l.0, r.0) {
                    let s = (q - l.0) / (r.0 - l.0);
                    let t = if s == 0.0 {
                        l.1
                    } else if s == 1.0 {
                        r.1
                    } else {
                        l.1 + s * (r.1 - l.1)
                    };
                    out.push(Piece { lo: t, hi: t });
                }
            }
            Edge::Ray { x0, t, right } => {
                if !at_infinity && ((right && p >= x0) || (!right && p <= x0)) {
                    out.push(Piece { lo: t, hi: t });
                }
            }
            Edge::AtInfinity => {}
        }
    }
    if at_infinity {
        // vertical segments in the fibre over ∞: between consecutive
        // infinite vertices, and between a ray's height and the height of
        // the infinite vertex it runs into
        for comp in &curve.components {
            for (a, b) in comp.edges() {
                if a.0.is_infinite() || b.0.is_infinite() {
                    out.push(Piece { lo: a.1.min(b.1), hi: a.1.max(b.1) });
                    degenerate |= a.1 != b.1;
                }
            }
        }
    }
    (out, degenerate)
}

fn merged(mut pieces: Vec<Piece>) -> Vec<Piece> {
    pieces.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    let scale = pieces.iter().fold(1.0f64, |m, p| m.max(p.lo.abs()).max(p.hi.abs()));
    let mut out: Vec<Piece> = Vec::with_capacity(pieces.len());
    for p in pieces {
        match out.last_mut() {
            Some(last) if p.lo <= last.hi + MERGE_RTOL * scale => last.hi = last.hi.max(p.hi),
            _ => out.push(p),
        }
    }
    out
}

/// h_Γ(p). `p` is an angle for cylinder curves and an abscissa for
/// half-space curves, where ±∞ selects the fibre over the point at infinity.
pub fn height_function(curve: &IdealBoundaryCurve, p: f64) -> FiberHeight {
    let (pieces, degenerate) = pieces_on_fiber(curve, p);
    let m = merged(pieces);
    let height = m.windows(2).map(|w| w[1].lo - w[0].hi).fold(f64::INFINITY, f64::min);
    FiberHeight { height, degenerate }
}

/// Sorted distinct breakpoints: vertex angles mod 2π, or finite vertex
/// abscissae.
fn breakpoints(curve: &IdealBoundaryCurve) -> Vec<f64> {
    let mut b: Vec<f64> = curve
        .components
        .iter()
        .flat_map(|c| c.vertices.iter().map(|v| v.0))
        .filter(|a| a.is_finite())
        .map(|a| if curve.model == Model::Cylinder { a.rem_euclid(TWO_PI) } else { a })
        .map(|a| if a == TWO_PI { 0.0 } else { a })
        .collect();
    b.sort_by(f64::total_cmp);
    b.dedup();
    b
}

/// Open intervals between breakpoints as (lo, hi); in the half-space the
/// two unbounded ones are included, in the cylinder the last one wraps.
fn open_intervals(curve: &IdealBoundaryCurve, b: &[f64]) -> Vec<(f64, f64)> {
    match curve.model {
        Model::Cylinder => {
            if b.is_empty() {
                return vec![(0.0, TWO_PI)];
            }
            let mut v: Vec<(f64, f64)> = b.windows(2).map(|w| (w[0], w[1])).collect();
            v.push((*b.last().unwrap(), b[0] + TWO_PI));
            v
        }
        Model::HalfSpace => {
            if b.is_empty() {
                return vec![(f64::NEG_INFINITY, f64::INFINITY)];
            }
            let mut v = vec![(f64::NEG_INFINITY, b[0])];
            v.extend(b.windows(2).map(|w| (w[0], w[1])));
            v.push((*b.last().unwrap(), f64::INFINITY));
            v
        }
    }
}

/// Edge heights over an open interval, as affine functions t(p) = c0 + c1·p,
/// sorted by height inside the interval.
fn affine_heights(curve: &IdealBoundaryCurve, lo: f64, hi: f64) -> Vec<(f64, f64)> {
    let mid = match (lo.is_finite(), hi.is_finite()) {
        (true, true) => 0.5 * (lo + hi),
        (false, true) => hi - 1.0,
        (true, false) => lo + 1.0,
        (false, false) => 0.0,
    };
    let mut out = Vec::new();
    for (_, e) in curve.edges() {
        match e {
            Edge::Linear { a, b } if a.0 != b.0 => {
                let (l, r) = if a.0 < b.0 { (a, b) } else { (b, a) };
                for q in lifts(curve.model, mid, l.0, r.0) {
                    let slope = (r.1 - l.1) / (r.0 - l.0);
                    let shift = q - mid;
                    // t(p) = l.t + slope·(p + shift − l.x)
                    out.push((l.1 + slope * (shift - l.0), slope));
                }
            }
            Edge::Ray { x0, t, right } if (right && mid > x0) || (!right && mid < x0) => out.push((t, 0.0)),
            _ => {}
        }
    }
    out.sort_by(|a, b| (a.0 + a.1 * mid).total_cmp(&(b.0 + b.1 * mid)));
    out
}

fn gap_limits(curve: &IdealBoundaryCurve, lo: f64, hi: f64) -> Vec<(f64, f64)> {
    // each consecutive gap is affine: (c0, c1)
    let h = affine_heights(curve, lo, hi);
    h.windows(2).map(|w| (w[1].0 - w[0].0, w[1].1 - w[0].1)).collect()
}

fn eval_affine(g: (f64, f64), p: f64) -> f64 {
    if g.1 == 0.0 {
        g.0
    } else {
        g.0 + g.1 * p
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TallnessReport {
    pub tall: bool,
    pub inf_height: f64,
    pub threshold: f64,
    /// Abscissae where the infimum is attained or approached.
    pub witnesses: Vec<f64>,
}

/// Exact infimum of h_Γ with the places where it is reached.
pub fn height_infimum(curve: &IdealBoundaryCurve) -> (f64, Vec<f64>) {
    let b = breakpoints(curve);
    let mut cands: Vec<(f64, f64)> = Vec::new();
    for &p in &b {
        cands.push((height_function(curve, p).height, p));
    }
    if curve.model == Model::HalfSpace {
        cands.push((height_function(curve, f64::INFINITY).height, f64::INFINITY));
    }
    for (lo, hi) in open_intervals(curve, &b) {
        for g in gap_limits(curve, lo, hi) {
            for end in [lo, hi] {
                let v = if end.is_finite() { eval_affine(g, end) } else if g.1 == 0.0 { g.0 } else { continue };
                let at = if curve.model == Model::Cylinder { end.rem_euclid(TWO_PI) } else { end };
                cands.push((v, at));
            }
        }
    }
    let inf = cands.iter().map(|c| c.0).fold(f64::INFINITY, f64::min);
    let scale = inf.abs().max(1.0);
    let mut at: Vec<f64> = cands.iter().filter(|c| c.0 <= inf + 1e-12 * scale && inf.is_finite()).map(|c| c.1).collect();
    at.sort_by(f64::total_cmp);
    at.dedup();
    (inf, at)
}

pub fn is_tall(curve: &IdealBoundaryCurve, tau: Tau) -> bool {
    tallness(curve, tau).tall
}

pub fn tallness(curve: &IdealBoundaryCurve, tau: Tau) -> TallnessReport {
    let (inf, witnesses) = height_infimum(curve);
    let threshold = tau.threshold();
    TallnessReport { tall: inf > threshold, inf_height: inf, threshold, witnesses }
}

#[derive(Debug, Clone, Serialize)]
pub struct ShortArcReport {
    pub holds: bool,
    pub threshold: f64,
    /// The longest maximal open interval on which h_Γ < threshold.
    pub witness_interval: Option<(f64, f64)>,
    /// All maximal open intervals, sorted; cylinder intervals may wrap past 2π.
    pub intervals: Vec<(f64, f64)>,
    pub full_circle: bool,
}

/// Maximal open intervals on which h_Γ stays below √(1+4τ²)π.
pub fn check_short_arc_hypothesis(curve: &IdealBoundaryCurve, tau: Tau) -> ShortArcReport {
    let thr = tau.threshold();
    let b = breakpoints(curve);
    let iv = open_intervals(curve, &b);
    // For each open interval: the sub-threshold part, which is a union of a
    // left piece (lo, r) and a right piece (l, hi) since each gap is affine.
    let mut pieces: Vec<(f64, f64)> = Vec::new();
    for &(lo, hi) in &iv {
        let mut left = lo; // (lo, left) is below threshold
        let mut right = hi; // (right, hi) is below threshold
        let mut whole = false;
        for g in gap_limits(curve, lo, hi) {
            if g.1 == 0.0 {
                if g.0 < thr {
                    whole = true;
                }
                continue;
            }
            let root = (thr - g.0) / g.1;
            if g.1 > 0.0 {
                // below threshold for p < root
                left = left.max(root.min(hi));
            } else {
                right = right.min(root.max(lo));
            }
        }
        if whole || left >= right {
            pieces.push((lo, hi));
        } else {
            if left > lo {
                pieces.push((lo, left));
            }
            if right < hi {
                pieces.push((right, hi));
            }
        }
    }
    let below_at = |p: f64| height_function(curve, p).height < thr;
    // glue pieces across breakpoints that are themselves below threshold
    let mut merged: Vec<(f64, f64)> = Vec::new();
    for (lo, hi) in pieces {
        match merged.last_mut() {
            Some(last) if last.1 == lo && lo.is_finite() && below_at(lo) => last.1 = hi,
            _ => merged.push((lo, hi)),
        }
    }
    let mut full_circle = false;
    match curve.model {
        Model::Cylinder if merged.len() > 1 => {
            let first = merged[0];
            let last = *merged.last().unwrap();
            if (last.1 - (first.0 + TWO_PI)).abs() < 1e-15 && below_at(first.0) {
                merged.pop();
                merged[0] = (last.0 - TWO_PI, first.1);
                if merged[0].0 < 0.0 {
                    merged[0] = (merged[0].0 + TWO_PI, merged[0].1 + TWO_PI);
                }
            }
        }
        Model::Cylinder if merged.len() == 1 => {
            let only = merged[0];
            full_circle = (only.1 - only.0 - TWO_PI).abs() < 1e-12 && below_at(only.0);
        }
        Model::HalfSpace if merged.len() > 1 => {
            // (−∞, a) and (b, +∞) meet through the fibre over ∞
            let first = merged[0];
            let last = *merged.last().unwrap();
            if first.0 == f64::NEG_INFINITY && last.1 == f64::INFINITY && height_function(curve, f64::INFINITY).height < thr {
                merged.pop();
                merged[0] = (last.0, first.1);
            }
        }
        Model::HalfSpace if merged.len() == 1 => {
            let only = merged[0];
            full_circle = only == (f64::NEG_INFINITY, f64::INFINITY) && height_function(curve, f64::INFINITY).height < thr;
        }
        _ => {}
    }
    let length = |iv: &(f64, f64)| -> f64 {
        match curve.model {
            Model::Cylinder => iv.1 - iv.0,
            // through ∞: measure on the circle via θ = π + 2·arctan x
            Model::HalfSpace => {
                let th = |x: f64| std::f64::consts::PI + 2.0 * x.atan();
                let l = th(iv.1) - th(iv.0);
                if l < 0.0 { l + TWO_PI } else { l }
            }
        }
    };
    let witness_interval = merged.iter().copied().max_by(|a, b| length(a).total_cmp(&length(b)));
    ShortArcReport { holds: !merged.is_empty(), threshold: thr, witness_interval, intervals: merged, full_circle }
}
