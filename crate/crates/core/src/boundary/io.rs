//! Plain-text curve files.
//!
//! ```text
//! # two circles
//! model cyl
//! component 1
//! 0.0 0.0
//! 3.14159 0.0
//!
//! component 1
//! 0.0 4.0
//! 3.14159 4.0
//! ```
//!
//! `model` defaults to `cyl`. Components start at a `component [winding]`
//! line or after a blank line; the winding defaults to 1 in the cylinder and
//! 0 in the half-space. Rows are `theta t` (or `x t`; `inf`/`-inf` allowed
//! for x).

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::geometry::Model;

use super::{Component, IdealBoundaryCurve};

pub fn parse_curve(text: &str) -> Result<IdealBoundaryCurve> {
    let mut model = Model::Cylinder;
    let mut seen_rows = false;
    // (winding if given, vertices, first line)
    let mut blocks: Vec<(Option<i32>, Vec<(f64, f64)>)> = Vec::new();
    let mut open = false;
    let perr = |line: usize, message: String| Error::Parse { line, message };

    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            if !raw.trim_start().starts_with('#') {
                open = false;
            }
            continue;
        }
        let mut words = body.split_whitespace();
        let head = words.next().unwrap();
        match head {
            "model" => {
                if seen_rows {
                    return Err(perr(line, "model must come before any vertex".into()));
                }
                model = match words.next() {
                    Some("half") => Model::HalfSpace,
                    Some("cyl") => Model::Cylinder,
                    other => return Err(perr(line, format!("unknown model {other:?}, expected half or cyl"))),
                };
            }
            "component" => {
                let w = match words.next() {
                    Some(s) => Some(s.parse::<i32>().map_err(|e| perr(line, format!("bad winding {s:?}: {e}")))?),
                    None => None,
                };
                blocks.push((w, Vec::new()));
                open = true;
            }
            _ => {
                let a = parse_num(head).map_err(|m| perr(line, m))?;
                let t = words.next().ok_or_else(|| perr(line, "expected two columns".into()))?;
                let t = parse_num(t).map_err(|m| perr(line, m))?;
                if let Some(extra) = words.next() {
                    return Err(perr(line, format!("unexpected column {extra:?}")));
                }
                if !open {
                    blocks.push((None, Vec::new()));
                    open = true;
                }
                blocks.last_mut().unwrap().1.push((a, t));
                seen_rows = true;
            }
        }
    }
    let default_winding = if model == Model::Cylinder { 1 } else { 0 };
    let comps = blocks
        .into_iter()
        .filter(|(w, v)| !v.is_empty() || w.is_some())
        .map(|(w, v)| Component::new(v, w.unwrap_or(default_winding)))
        .collect();
    IdealBoundaryCurve::new(model, comps)
}

fn parse_num(s: &str) -> std::result::Result<f64, String> {
    s.parse::<f64>().map_err(|e| format!("bad number {s:?}: {e}"))
}

/// Inverse of [`parse_curve`]; floats in round-trip exponent form.
pub fn write_curve(curve: &IdealBoundaryCurve) -> String {
    let mut out = String::new();
    let m = match curve.model {
        Model::HalfSpace => "half",
        Model::Cylinder => "cyl",
    };
    let _ = writeln!(out, "model {m}");
    for (i, c) in curve.components.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let _ = writeln!(out, "component {}", c.winding);
        for &(a, t) in &c.vertices {
            let _ = writeln!(out, "{} {}", fmt(a), fmt(t));
        }
    }
    out
}

fn fmt(v: f64) -> String {
    if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:.16e}")
    }
}
