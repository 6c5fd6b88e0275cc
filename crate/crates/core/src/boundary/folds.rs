//! Search for folds of a half-space boundary curve against vertical lines:
//! a subarc that touches the line {x = x₀} from one side, with endpoints off
//! the line, inside a horizontal slab thinner than √(1+4τ²)π.
//!
//! A subarc touching L with endpoints off L and staying on one side must
//! contain a maximal run of consecutive vertices on L whose neighbours lie on
//! the same side; the thinnest such subarc is the run plus arbitrarily short
//! pieces of the two adjacent edges, so the run's t-range decides.

use serde::Serialize;

use super::curve::IdealBoundaryCurve;
use crate::error::{Error, Result};
use crate::geometry::{Model, Tau};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, Serialize)]
pub struct Fold {
    /// The vertical line; ±∞ for the fibre over the point at infinity.
    pub x0: f64,
    pub component: usize,
    /// Indices of the first and last vertex of the run on the line (cyclic).
    pub first_vertex: usize,
    pub last_vertex: usize,
    pub side: Side,
    pub t_min: f64,
    pub t_max: f64,
    /// Lower edge of a slab of height √(1+4τ²)π centred on the run; present
    /// only when the run fits strictly inside it.
    pub t0: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FoldReport {
    pub witness_found: bool,
    pub threshold: f64,
    /// Folds whose run fits in an open slab of the threshold height.
    pub witnesses: Vec<Fold>,
    /// Folds too tall to qualify.
    pub rejected: Vec<Fold>,
    /// Number of candidate lines examined (distinct vertex abscissae).
    pub candidates: usize,
}

fn side_of(x: f64, x0: f64) -> Option<Side> {
    // ±∞ vertices lie right/left of any finite line
    if x < x0 {
        Some(Side::Left)
    } else if x > x0 {
        Some(Side::Right)
    } else {
        None
    }
}

pub fn check_fold_hypotheses(curve: &IdealBoundaryCurve, tau: Tau) -> Result<FoldReport> {
    if curve.model != Model::HalfSpace {
        return Err(Error::WrongModel { expected: "half-space", found: "cylinder" });
    }
    let thr = tau.threshold();
    let mut witnesses = Vec::new();
    let mut rejected = Vec::new();
    let mut lines: Vec<f64> = Vec::new();
    for (ci, comp) in curve.components.iter().enumerate() {
        let v = &comp.vertices;
        let n = v.len();
        // "on the line" classes: equal finite x, or both infinite
        let key = |i: usize| -> f64 { if v[i].0.is_infinite() { f64::INFINITY } else { v[i].0 } };
        if n < 2 || (0..n).all(|i| key(i) == key(0)) {
            continue;
        }
        // start scanning right after a class change so runs are not split
        let start = (0..n).find(|&i| key(i) != key((i + n - 1) % n)).unwrap();
        let mut k = 0;
        while k < n {
            let first = (start + k) % n;
            let x0 = key(first);
            let mut len = 1;
            while len < n && key((first + len) % n) == x0 {
                len += 1;
            }
            let last = (first + len - 1) % n;
            k += len;
            lines.push(x0);
            let prev = v[(first + n - 1) % n].0;
            let next = v[(last + 1) % n].0;
            let sides = if x0.is_infinite() {
                // the run sits in the fibre over ∞; the side is the direction
                // from which the curve arrives and leaves
                let arrive = if v[first].0 > 0.0 { Side::Right } else { Side::Left };
                let leave = if v[last].0 > 0.0 { Side::Right } else { Side::Left };
                (Some(arrive), Some(leave))
            } else {
                (side_of(prev, x0), side_of(next, x0))
            };
            let (Some(a), Some(b)) = sides else { continue };
            if a != b {
                continue;
            }
            let run = (0..len).map(|j| v[(first + j) % n].1);
            let (t_min, t_max) = run.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), t| (lo.min(t), hi.max(t)));
            let fits = t_max - t_min < thr;
            let fold = Fold {
                x0: if x0.is_infinite() { v[first].0 } else { x0 },
                component: ci,
                first_vertex: first,
                last_vertex: last,
                side: a,
                t_min,
                t_max,
                t0: fits.then(|| 0.5 * (t_min + t_max) - 0.5 * thr),
            };
            if fits {
                witnesses.push(fold);
            } else {
                rejected.push(fold);
            }
        }
    }
    lines.sort_by(f64::total_cmp);
    lines.dedup();
    Ok(FoldReport { witness_found: !witnesses.is_empty(), threshold: thr, witnesses, rejected, candidates: lines.len() })
}
