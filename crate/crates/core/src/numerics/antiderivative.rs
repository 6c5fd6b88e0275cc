//! Tabulated antiderivatives x ↦ ∫_{x₀}^{x} f for the quadrature-backed
//! surface families.
//!
//! The integral is taken in the substituted variable σ of a [`Substitution`],
//! where it is smooth even when f has inverse-square-root ends; it is stored
//! as piecewise Chebyshev–Lobatto interpolants, refined until the interpolant
//! agrees with direct quadrature at panel probe points.

use std::sync::Arc;

use super::quadrature::{adaptive, QuadratureOptions};
use super::substitution::{Abscissa, Substitution};
use crate::error::{Error, Result};

const DEGREE: usize = 16;
const MAX_PANELS: usize = 512;
const NODE_TOL: f64 = 1e-14;

pub type Integrand = Arc<dyn Fn(Abscissa) -> f64 + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalMode {
    /// Interpolate the eagerly built table.
    Cached,
    /// Run the adaptive quadrature on every call.
    Direct,
}

#[derive(Clone)]
struct Panel {
    lo: f64,
    hi: f64,
    // F at the Lobatto nodes, measured from σ = 0.
    values: [f64; DEGREE + 1],
}

#[derive(Clone)]
pub struct Antiderivative {
    map: Substitution,
    integrand: Integrand,
    origin: f64,
    offset: f64,
    panels: Vec<Panel>,
    mode: EvalMode,
}

impl std::fmt::Debug for Antiderivative {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Antiderivative")
            .field("map", &self.map)
            .field("origin", &self.origin)
            .field("panels", &self.panels.len())
            .field("mode", &self.mode)
            .finish()
    }
}

fn lobatto(k: usize) -> f64 {
    // nodes on [0, 1], increasing
    0.5 * (1.0 - (std::f64::consts::PI * k as f64 / DEGREE as f64).cos())
}

impl Antiderivative {
    /// `lower` is the base point x₀ (must lie in the closure of the range).
    pub fn new(map: Substitution, integrand: Integrand, lower: f64, mode: EvalMode) -> Result<Self> {
        let mut this = Antiderivative { map, integrand, origin: map.inverse(lower), offset: 0.0, panels: Vec::new(), mode };
        if mode == EvalMode::Cached {
            this.build()?;
        }
        this.offset = this.from_zero(this.origin)?;
        Ok(this)
    }

    pub fn mode(&self) -> EvalMode {
        self.mode
    }

    pub fn map(&self) -> Substitution {
        self.map
    }

    /// The integrand itself at `x` (with cancellation-free end distances).
    pub fn integrand(&self, x: f64) -> f64 {
        let s = self.map.inverse(x);
        let (mut ab, _) = self.map.forward(s);
        ab.x = x;
        let (a, b) = self.map.bounds();
        if a.is_finite() {
            ab.from_lo = x - a;
        }
        if b.is_finite() {
            ab.from_hi = b - x;
        }
        (self.integrand)(ab)
    }

    /// ∫_{x₀}^{x} f.
    pub fn eval(&self, x: f64) -> Result<f64> {
        Ok(self.from_zero(self.map.inverse(x))? - self.offset)
    }

    /// Same as [`eval`](Self::eval) at `a + from_lo`, where `a` is the lower end.
    pub fn eval_from_lo(&self, from_lo: f64) -> Result<f64> {
        Ok(self.from_zero(self.map.inverse_from_lo(from_lo))? - self.offset)
    }

    /// Total ∫ over the whole range, measured from x₀.
    pub fn at_upper_end(&self) -> Result<f64> {
        Ok(self.from_zero(1.0)? - self.offset)
    }

    pub fn at_lower_end(&self) -> Result<f64> {
        Ok(-self.offset)
    }

    fn g(&self, s: f64) -> f64 {
        let (ab, jac) = self.map.forward(s);
        (self.integrand)(ab) * jac
    }

    fn direct(&self, lo: f64, hi: f64) -> Result<f64> {
        if hi == lo {
            return Ok(0.0);
        }
        let (a, b, sign) = if lo < hi { (lo, hi, 1.0) } else { (hi, lo, -1.0) };
        let opts = QuadratureOptions { abs_floor: 1e-15, ..Default::default() };
        let g = |s: f64| self.g(s);
        let map = self.map;
        let r = adaptive(&g, a, b, NODE_TOL, &opts, |s| map.forward(s).0.x)?;
        Ok(sign * r.value)
    }

    fn from_zero(&self, s: f64) -> Result<f64> {
        let s = s.clamp(0.0, 1.0);
        match self.mode {
            EvalMode::Direct => self.direct(0.0, s),
            EvalMode::Cached => {
                let idx = self.panels.partition_point(|p| p.hi < s).min(self.panels.len() - 1);
                Ok(interpolate(&self.panels[idx], s))
            }
        }
    }

    fn build(&mut self) -> Result<()> {
        let mut pending: Vec<(f64, f64)> = (0..8).rev().map(|k| (k as f64 / 8.0, (k + 1) as f64 / 8.0)).collect();
        let mut start_value = 0.0;
        let mut panels = Vec::new();
        // Panels are finalized left to right so each starts from the
        // accumulated value of its predecessor.
        while let Some((lo, hi)) = pending.pop() {
            let panel = self.make_panel(lo, hi, start_value)?;
            if !self.panel_ok(&panel)? {
                if panels.len() + pending.len() + 2 > MAX_PANELS {
                    return Err(Error::NoConvergence { evaluations: 0, error_estimate: f64::NAN });
                }
                let mid = 0.5 * (lo + hi);
                pending.push((mid, hi));
                pending.push((lo, mid));
                continue;
            }
            start_value = panel.values[DEGREE];
            panels.push(panel);
        }
        self.panels = panels;
        Ok(())
    }

    fn make_panel(&self, lo: f64, hi: f64, start: f64) -> Result<Panel> {
        let mut values = [0.0; DEGREE + 1];
        values[0] = start;
        let w = hi - lo;
        for k in 1..=DEGREE {
            values[k] = values[k - 1] + self.direct(lo + w * lobatto(k - 1), lo + w * lobatto(k))?;
        }
        values[DEGREE] = start + self.direct(lo, hi)?;
        Ok(Panel { lo, hi, values })
    }

    fn panel_ok(&self, p: &Panel) -> Result<bool> {
        let w = p.hi - p.lo;
        let scale = p.values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        for k in [0usize, 3, 7, 11, 15] {
            let s = p.lo + w * 0.5 * (lobatto(k) + lobatto(k + 1));
            let exact = p.values[k] + self.direct(p.lo + w * lobatto(k), s)?;
            if (interpolate(p, s) - exact).abs() > 20.0 * NODE_TOL * scale {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Barycentric interpolation at the Lobatto nodes.
fn interpolate(p: &Panel, s: f64) -> f64 {
    let w = p.hi - p.lo;
    let t = (s - p.lo) / w;
    let mut num = 0.0;
    let mut den = 0.0;
    for k in 0..=DEGREE {
        let d = t - lobatto(k);
        if d == 0.0 {
            return p.values[k];
        }
        let mut wk = if k % 2 == 0 { 1.0 } else { -1.0 };
        if k == 0 || k == DEGREE {
            wk *= 0.5;
        }
        let c = wk / d;
        num += c * p.values[k];
        den += c;
    }
    num / den
}
