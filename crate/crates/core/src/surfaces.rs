//! The invariant minimal surface families, as vertical graphs over the
//! half-plane, with their height estimates and asymptotic boundaries.
//!
//! Bigraph families (slab, tilted, fan with c < 1, catenoid) are stored as
//! their two raw sheets ±; gluing happens in [`asymptotic_boundary`] and in
//! mesh export.

use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::boundary::{Component, IdealBoundaryCurve};
use crate::error::{Error, Result};
use crate::geometry::{to_cylinder, Model, Point3, Tau};
use crate::mesh::Mesh;
use crate::jet::Jet2;
use crate::numerics::{find_root, integrate, Abscissa, Antiderivative, EvalMode, SingularIntegral, Substitution};

/// Distance from a fold or singular edge below which evaluation is flagged.
pub const NEAR_SINGULAR: f64 = 1e-9;
/// Half-width of the x-window over which tilted boundary lines are sampled.
pub const TILTED_WINDOW: f64 = 10.0;
const HEIGHT_RTOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Family {
    /// ±√(1+4τ²)·arcsin(dy) on 0 < y < 1/d.
    SlabBigraph { d: f64 },
    /// lx ± ∫₀^y √(1+(lt−2τ)²)/√(d²−t²) dt on 0 < y < d.
    Tilted { d: f64, l: f64 },
    /// Functions of s = x/y.
    Fan { c: f64 },
    /// Rotational about (0, 1), functions of r = |z − i|²/|z + i|².
    Catenoid { c: f64 },
    /// 4τ·arctan(x/(y + λ)).
    UmbrellaLimit { lambda: f64 },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::SlabBigraph { .. } => "slab-bigraph",
            Family::Tilted { .. } => "tilted",
            Family::Fan { .. } => "fan",
            Family::Catenoid { .. } => "catenoid",
            Family::UmbrellaLimit { .. } => "umbrella-limit",
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::BadParameter(m));
        match *self {
            Family::SlabBigraph { d } | Family::Tilted { d, .. } if !(d > 0.0 && d.is_finite()) => {
                bad(format!("d must be positive, got {d}"))
            }
            Family::Tilted { l, .. } if !l.is_finite() => bad(format!("l must be finite, got {l}")),
            Family::Fan { c } if !(c > 0.0 && c.is_finite()) => bad(format!("c must be positive, got {c}")),
            Family::Catenoid { c } if !(c > 2.0 && c.is_finite()) => {
                bad(format!("catenoids need c > 2, got {c}"))
            }
            Family::UmbrellaLimit { lambda } if !(lambda >= 0.0) => {
                bad(format!("lambda must be non-negative, got {lambda}"))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sheet {
    Plus,
    Minus,
}

impl Sheet {
    pub fn sign(self) -> f64 {
        match self {
            Sheet::Plus => 1.0,
            Sheet::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Sheet {
        match self {
            Sheet::Plus => Sheet::Minus,
            Sheet::Minus => Sheet::Plus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InvariantSurface {
    #[serde(flatten)]
    pub family: Family,
    pub sheet: Sheet,
    pub tau: Tau,
}

impl InvariantSurface {
    pub fn new(family: Family, sheet: Sheet, tau: Tau) -> Result<Self> {
        family.validate()?;
        Ok(InvariantSurface { family, sheet, tau })
    }

    /// The image under t ↦ −t, which lives in the space with −τ.
    pub fn mirrored(&self) -> InvariantSurface {
        let family = match self.family {
            Family::Tilted { d, l } => Family::Tilted { d, l: -l },
            f => f,
        };
        InvariantSurface { family, sheet: self.sheet.flip(), tau: self.tau.mirrored() }
    }

    pub fn label(&self) -> String {
        let params = match self.family {
            Family::SlabBigraph { d } => format!("d={d}"),
            Family::Tilted { d, l } => format!("d={d}, l={l}"),
            Family::Fan { c } | Family::Catenoid { c } => format!("c={c}"),
            Family::UmbrellaLimit { lambda } => format!("lambda={lambda}"),
        };
        let sign = match self.sheet {
            Sheet::Plus => '+',
            Sheet::Minus => '-',
        };
        format!("{}({params}){sign}, tau={}", self.family.name(), self.tau.value())
    }
}

/// A vertical graph t = u(x, y) over a domain of the half-plane.
pub trait GraphFunction: Send + Sync {
    /// Value and first/second partials at an interior point of the domain.
    fn jet(&self, x: f64, y: f64) -> Result<Jet2>;

    fn contains(&self, x: f64, y: f64) -> bool;

    fn eval(&self, x: f64, y: f64) -> Result<f64> {
        Ok(self.jet(x, y)?.v)
    }

    fn grad(&self, x: f64, y: f64) -> Result<(f64, f64)> {
        Ok(self.jet(x, y)?.grad())
    }

    fn hess(&self, x: f64, y: f64) -> Result<(f64, f64, f64)> {
        Ok(self.jet(x, y)?.hess())
    }

    /// Maps (a, b) ∈ [0, 1]² to an interior point kept away from folds and
    /// singular edges, for sampling-based checks.
    fn sample(&self, _a: f64, _b: f64) -> Option<(f64, f64)> {
        None
    }

    fn label(&self) -> String {
        "graph".into()
    }
}

/// A graph given by a jet-level closure over a rectangle of the half-plane.
pub struct ClosureGraph<F> {
    pub f: F,
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    pub name: String,
    disk: bool,
}

impl<F: Fn(Jet2, Jet2) -> Jet2 + Send + Sync> ClosureGraph<F> {
    pub fn new(name: &str, f: F, x_range: (f64, f64), y_range: (f64, f64)) -> Self {
        ClosureGraph { f, x_range, y_range, name: name.into(), disk: false }
    }

    /// A graph over the open unit disk (cylinder-model coordinates).
    pub fn on_disk(name: &str, f: F) -> Self {
        ClosureGraph { f, x_range: (-1.0, 1.0), y_range: (-1.0, 1.0), name: name.into(), disk: true }
    }
}

impl<F: Fn(Jet2, Jet2) -> Jet2 + Send + Sync> GraphFunction for ClosureGraph<F> {
    fn jet(&self, x: f64, y: f64) -> Result<Jet2> {
        if !self.contains(x, y) {
            return Err(Error::BoundaryPoint { x, y });
        }
        Ok((self.f)(Jet2::var_x(x), Jet2::var_y(y)))
    }

    fn contains(&self, x: f64, y: f64) -> bool {
        if self.disk {
            return x * x + y * y < 1.0;
        }
        y > 0.0 && x >= self.x_range.0 && x <= self.x_range.1 && y >= self.y_range.0 && y <= self.y_range.1
    }

    fn sample(&self, a: f64, b: f64) -> Option<(f64, f64)> {
        let (x0, x1) = self.x_range;
        let (y0, y1) = self.y_range;
        Some((x0 + (x1 - x0) * (0.05 + 0.9 * a), y0 + (y1 - y0) * (0.05 + 0.9 * b)))
    }

    fn label(&self) -> String {
        self.name.clone()
    }
}

enum Kind {
    Slab,
    Tilted { anti: Antiderivative },
    FanAbove { anti: Antiderivative },
    FanCritical,
    FanBelow { anti: Antiderivative, c0: f64 },
    Catenoid { anti: Antiderivative, r0: f64 },
    Umbrella,
}

/// A family member evaluated as a graph. Quadrature-backed families build
/// their antiderivative table eagerly, so evaluation is read-only.
pub struct FamilyGraph {
    surface: InvariantSurface,
    kind: Kind,
}

pub fn as_graph(surface: &InvariantSurface) -> Result<FamilyGraph> {
    as_graph_with_mode(surface, EvalMode::Cached)
}

pub fn as_graph_with_mode(surface: &InvariantSurface, mode: EvalMode) -> Result<FamilyGraph> {
    surface.family.validate()?;
    let tau = surface.tau;
    let kind = match surface.family {
        Family::SlabBigraph { .. } => Kind::Slab,
        Family::Tilted { d, l } => Kind::Tilted {
            anti: Antiderivative::new(Substitution::HiSqrt { a: 0.0, b: d }, tilted_integrand(d, l, tau), 0.0, mode)?,
        },
        Family::Fan { c } if c > 1.0 => Kind::FanAbove {
            anti: Antiderivative::new(Substitution::FullLine, fan_integrand(c, tau, 0.0), 0.0, mode)?,
        },
        Family::Fan { c } if c == 1.0 => Kind::FanCritical,
        Family::Fan { c } => {
            let c0 = fan_lower_limit(c);
            let map = Substitution::HalfLine { a: c0, lo_singular: true };
            Kind::FanBelow { anti: Antiderivative::new(map, fan_integrand(c, tau, c0), c0, mode)?, c0 }
        }
        Family::Catenoid { c } => {
            let r0 = catenoid_root(c)?;
            let map = Substitution::LoSqrt { a: r0, b: 1.0 };
            Kind::Catenoid { anti: Antiderivative::new(map, catenoid_integrand(c, tau, r0), r0, mode)?, r0 }
        }
        Family::UmbrellaLimit { .. } => Kind::Umbrella,
    };
    Ok(FamilyGraph { surface: *surface, kind })
}

/// 1/√(d² − t²)·√(1 + (lt − 2τ)²), written with the distance to d.
fn tilted_integrand(d: f64, l: f64, tau: Tau) -> Arc<dyn Fn(Abscissa) -> f64 + Send + Sync> {
    let tau = tau.value();
    Arc::new(move |p: Abscissa| {
        let m = l * p.x - 2.0 * tau;
        (1.0 + m * m).sqrt() / (p.from_hi * (d + p.x)).sqrt()
    })
}

fn tilted_log_slope(d: f64, l: f64, tau: Tau, y: f64) -> f64 {
    let m = l * y - 2.0 * tau.value();
    l * m / (1.0 + m * m) + y / ((d - y) * (d + y))
}

/// √(1 + Kt²)/((t² + 1)√(c(t² + 1) − 1)); when c < 1 the last factor is
/// written as c(t − c₀)(t + c₀) with t − c₀ taken from the abscissa.
fn fan_integrand(c: f64, tau: Tau, c0: f64) -> Arc<dyn Fn(Abscissa) -> f64 + Send + Sync> {
    let k = tau.k();
    Arc::new(move |p: Abscissa| {
        let t = p.x;
        let inner = if c < 1.0 { c * p.from_lo * (t + c0) } else { c * (t * t + 1.0) - 1.0 };
        (1.0 + k * t * t).sqrt() / ((t * t + 1.0) * inner.sqrt())
    })
}

fn fan_log_slope(c: f64, tau: Tau, t: f64) -> f64 {
    let k = tau.k();
    k * t / (1.0 + k * t * t) - 2.0 * t / (t * t + 1.0) - c * t / (c * (t * t + 1.0) - 1.0)
}

/// Closed-form antiderivative for c = 1 in w = √(1 + Ks²).
fn fan_critical_primitive(s: f64, tau: Tau) -> f64 {
    let k = tau.k();
    let w = (1.0 + k * s * s).sqrt();
    let wm1 = k * s * s / (w + 1.0);
    let two_tau = 2.0 * tau.value();
    let arc = if two_tau == 0.0 { 0.0 } else { two_tau * (w / two_tau).atan() };
    0.5 * (wm1 / (w + 1.0)).ln() + arc
}

fn fan_critical_integrand(s: f64, tau: Tau) -> f64 {
    (1.0 + tau.k() * s * s).sqrt() / ((s * s + 1.0) * s)
}

/// √(1 + 4τ²t)/√(t·Q(t)) with Q(t) = −1 + ct − t² = (t − r₀)(1/r₀ − t).
fn catenoid_integrand(c: f64, tau: Tau, r0: f64) -> Arc<dyn Fn(Abscissa) -> f64 + Send + Sync> {
    let tau2 = tau.value() * tau.value();
    let r1 = 1.0 / r0;
    let _ = c;
    Arc::new(move |p: Abscissa| {
        let t = p.x;
        (1.0 + 4.0 * tau2 * t).sqrt() / (t * p.from_lo * (r1 - t)).sqrt()
    })
}

fn catenoid_log_slope(c: f64, tau: Tau, t: f64) -> f64 {
    let tau2 = tau.value() * tau.value();
    let q = -1.0 + c * t - t * t;
    2.0 * tau2 / (1.0 + 4.0 * tau2 * t) - 0.5 / t - 0.5 * (c - 2.0 * t) / q
}

/// Lower integration limit of the fan family: 0 (c > 1), 1 (c = 1),
/// √((1 − c)/c) (c < 1).
pub fn fan_lower_limit(c: f64) -> f64 {
    if c > 1.0 {
        0.0
    } else if c == 1.0 {
        1.0
    } else {
        ((1.0 - c) / c).sqrt()
    }
}

/// r = ((y − 1)² + x²)/(x² + (y + 1)²) = tanh²(dist((x, y), i)/2).
pub fn catenoid_radius(x: f64, y: f64) -> f64 {
    (x * x + (y - 1.0) * (y - 1.0)) / (x * x + (y + 1.0) * (y + 1.0))
}

fn radius_jet(x: Jet2, y: Jet2) -> Jet2 {
    let num = x * x + (y - 1.0) * (y - 1.0);
    let den = x * x + (y + 1.0) * (y + 1.0);
    num / den
}

/// Point at hyperbolic distance ρ from i in direction α.
pub fn hyperbolic_circle_point(rho: f64, alpha: f64) -> (f64, f64) {
    let (s, c) = alpha.sin_cos();
    (rho.sinh() * c, rho.cosh() + rho.sinh() * s)
}

impl FamilyGraph {
    pub fn surface(&self) -> &InvariantSurface {
        &self.surface
    }

    fn sign(&self) -> f64 {
        self.surface.sheet.sign()
    }

    /// Whether (x, y) is within [`NEAR_SINGULAR`] of a fold or singular edge.
    /// Evaluation there proceeds but derivatives are unreliable.
    pub fn near_singular(&self, x: f64, y: f64) -> bool {
        match (&self.kind, self.surface.family) {
            (Kind::Slab, Family::SlabBigraph { d }) => (y - 1.0 / d).abs() < NEAR_SINGULAR,
            (Kind::Tilted { .. }, Family::Tilted { d, .. }) => (y - d).abs() < NEAR_SINGULAR,
            (Kind::FanBelow { c0, .. }, _) => (x / y - c0).abs() < NEAR_SINGULAR,
            (Kind::FanCritical, _) => (x / y).abs() < NEAR_SINGULAR,
            (Kind::Catenoid { r0, .. }, _) => (catenoid_radius(x, y) - r0).abs() < NEAR_SINGULAR,
            _ => false,
        }
    }

    /// Value on the closure of the domain (fold included), without derivatives.
    pub fn value(&self, x: f64, y: f64) -> Result<f64> {
        let s = self.sign();
        let tau = self.surface.tau;
        match (&self.kind, self.surface.family) {
            (Kind::Slab, Family::SlabBigraph { d }) if y > 0.0 && d * y <= 1.0 => {
                Ok(s * tau.sqrt_k() * (d * y).min(1.0).asin())
            }
            (Kind::Tilted { anti }, Family::Tilted { d, l }) if y > 0.0 && y <= d => Ok(l * x + s * anti.eval(y)?),
            (Kind::FanBelow { anti, c0 }, _) if y > 0.0 && x / y >= *c0 => {
                let sv = x / y;
                Ok(2.0 * tau.value() * sv.atan() + s * anti.eval_from_lo(sv - c0)?)
            }
            (Kind::Catenoid { anti, r0 }, _) if y > 0.0 => {
                let r = catenoid_radius(x, y);
                // a neck point recomputed from (x, y) may undershoot r0 by rounding
                if r < *r0 * (1.0 - 1e-12) || r >= 1.0 {
                    return Err(Error::BoundaryPoint { x, y });
                }
                Ok(s * anti.eval_from_lo((r - r0).max(0.0))? + 4.0 * tau.value() * (x / (y + 1.0)).atan())
            }
            (Kind::Slab | Kind::Tilted { .. } | Kind::FanBelow { .. } | Kind::Catenoid { .. }, _) => {
                Err(Error::BoundaryPoint { x, y })
            }
            _ => self.eval(x, y),
        }
    }

    /// Raw sheet value in the limit y → 0⁺ along a ray of slope s = x/y
    /// (fan) or at the boundary point x (others). Used for boundary traces.
    fn fan_end(&self, positive: bool) -> Result<f64> {
        let s = self.sign();
        let tau = self.surface.tau.value();
        let arc = if positive { FRAC_PI_2 } else { -FRAC_PI_2 };
        match &self.kind {
            Kind::FanAbove { anti } => {
                let f = if positive { anti.at_upper_end()? } else { anti.at_lower_end()? };
                Ok(2.0 * tau * arc + s * f)
            }
            Kind::FanBelow { anti, .. } if positive => Ok(2.0 * tau * arc + s * anti.at_upper_end()?),
            Kind::FanCritical if positive => {
                let limit = -fan_critical_primitive(1.0, self.surface.tau) + PI * tau.abs();
                Ok(2.0 * tau * arc + s * limit)
            }
            _ => Err(Error::BadParameter("no boundary trace on this side".into())),
        }
    }
}

impl GraphFunction for FamilyGraph {
    fn jet(&self, x: f64, y: f64) -> Result<Jet2> {
        if !self.contains(x, y) {
            return Err(Error::BoundaryPoint { x, y });
        }
        let s = self.sign();
        let tau = self.surface.tau;
        let (jx, jy) = (Jet2::var_x(x), Jet2::var_y(y));
        let j = match (&self.kind, self.surface.family) {
            (Kind::Slab, Family::SlabBigraph { d }) => (jy * d).asin() * (s * tau.sqrt_k()),
            (Kind::Tilted { anti }, Family::Tilted { d, l }) => {
                let g = anti.integrand(y);
                let g1 = g * tilted_log_slope(d, l, tau, y);
                jx * l + jy.compose(anti.eval(y)?, g, g1) * s
            }
            (Kind::FanAbove { anti }, Family::Fan { c }) => {
                let sv = x / y;
                let f = anti.integrand(sv);
                let js = jx / jy;
                (js.atan() * (2.0 * tau.value())) + js.compose(anti.eval(sv)?, f, f * fan_log_slope(c, tau, sv)) * s
            }
            (Kind::FanCritical, _) => {
                let sv = x / y;
                let f = fan_critical_integrand(sv, tau);
                let f1 = f * fan_log_slope(1.0, tau, sv);
                let val = fan_critical_primitive(sv, tau) - fan_critical_primitive(1.0, tau);
                let js = jx / jy;
                js.atan() * (2.0 * tau.value()) + js.compose(val, f, f1) * s
            }
            (Kind::FanBelow { anti, c0 }, Family::Fan { c }) => {
                let sv = x / y;
                let f = anti.integrand(sv);
                let js = jx / jy;
                let val = anti.eval_from_lo(sv - c0)?;
                js.atan() * (2.0 * tau.value()) + js.compose(val, f, f * fan_log_slope(c, tau, sv)) * s
            }
            (Kind::Catenoid { anti, r0 }, Family::Catenoid { c }) => {
                let jr = radius_jet(jx, jy);
                let r = jr.v;
                let k = anti.integrand(r);
                let h = jr.compose(anti.eval_from_lo(r - r0)?, k, k * catenoid_log_slope(c, tau, r));
                h * s + (jx / (jy + 1.0)).atan() * (4.0 * tau.value())
            }
            (Kind::Umbrella, Family::UmbrellaLimit { lambda }) => (jx / (jy + lambda)).atan() * (4.0 * tau.value()),
            _ => unreachable!("kind always matches family"),
        };
        Ok(j)
    }

    fn contains(&self, x: f64, y: f64) -> bool {
        if !(y > 0.0) || !x.is_finite() || !y.is_finite() {
            return false;
        }
        match (&self.kind, self.surface.family) {
            (Kind::Slab, Family::SlabBigraph { d }) => d * y < 1.0,
            (Kind::Tilted { .. }, Family::Tilted { d, .. }) => y < d,
            (Kind::FanCritical, _) => x > 0.0,
            (Kind::FanBelow { c0, .. }, _) => x / y > *c0,
            (Kind::Catenoid { r0, .. }, _) => {
                let r = catenoid_radius(x, y);
                r > *r0 && r < 1.0
            }
            _ => true,
        }
    }

    fn eval(&self, x: f64, y: f64) -> Result<f64> {
        if !self.contains(x, y) {
            return Err(Error::BoundaryPoint { x, y });
        }
        match &self.kind {
            Kind::Umbrella | Kind::FanAbove { .. } | Kind::FanCritical => Ok(self.jet(x, y)?.v),
            _ => self.value(x, y),
        }
    }

    fn sample(&self, a: f64, b: f64) -> Option<(f64, f64)> {
        let m = 0.02;
        let a = m + (1.0 - 2.0 * m) * a;
        let b = m + (1.0 - 2.0 * m) * b;
        let x_span = |a: f64| -2.0 + 4.0 * a;
        Some(match (&self.kind, self.surface.family) {
            (Kind::Slab, Family::SlabBigraph { d }) => (x_span(a), b / d),
            (Kind::Tilted { .. }, Family::Tilted { d, .. }) => (x_span(a), b * d),
            (Kind::FanAbove { .. } | Kind::Umbrella, _) => (x_span(a), 0.05 + 2.95 * b),
            (Kind::FanCritical, _) => {
                let y = 0.1 + 2.9 * b;
                (y * (0.02 + 10.0 * a), y)
            }
            (Kind::FanBelow { c0, .. }, _) => {
                let y = 0.1 + 2.9 * b;
                (y * (c0 + 0.02 + 10.0 * a), y)
            }
            (Kind::Catenoid { r0, .. }, _) => {
                let r = r0 + (0.98 - r0) * a;
                let rho = 2.0 * r.sqrt().atanh();
                hyperbolic_circle_point(rho, 2.0 * PI * b)
            }
            _ => return None,
        })
    }

    fn label(&self) -> String {
        self.surface.label()
    }
}

/// v_d⁺(d) = ∫₀^d √(1 + (lt − 2τ)²)/√(d² − t²) dt; half the vertical gap
/// between the two boundary lines of the tilted bigraph.
pub fn tilted_height(d: f64, l: f64, tau: Tau) -> Result<f64> {
    Family::Tilted { d, l }.validate()?;
    let f = tilted_integrand(d, l, tau);
    let spec = SingularIntegral::new(|p: Abscissa| f(p), 0.0, d).singular_hi();
    Ok(integrate(&spec, HEIGHT_RTOL)?.value)
}

/// u_c⁺(+∞) − u_c⁻(+∞) for 0 < c < 1: the height of the tall rectangle.
pub fn fan_total_height(c: f64, tau: Tau) -> Result<f64> {
    if !(c > 0.0 && c < 1.0) {
        return Err(Error::BadParameter(format!("tall rectangles need 0 < c < 1, got {c}")));
    }
    let c0 = fan_lower_limit(c);
    let f = fan_integrand(c, tau, c0);
    let spec = SingularIntegral::new(|p: Abscissa| f(p), c0, f64::INFINITY).singular_lo();
    Ok(2.0 * integrate(&spec, HEIGHT_RTOL)?.value)
}

/// Neck parameter r₀(c) ∈ (0, 1): the root of −1 + ct − t² (requires c > 2).
pub fn catenoid_root(c: f64) -> Result<f64> {
    if !c.is_finite() {
        return Err(Error::BadParameter(format!("c must be finite, got {c}")));
    }
    find_root(|t| -1.0 + c * t - t * t, 0.0, 1.0, 1e-16)
}

/// h_c⁺(1) = ∫_{r₀}^1 √(1 + 4τ²t)/√(t(−1 + ct − t²)) dt.
pub fn catenoid_neck_height(c: f64, tau: Tau) -> Result<f64> {
    let r0 = catenoid_root(c)?;
    let f = catenoid_integrand(c, tau, r0);
    let spec = SingularIntegral::new(|p: Abscissa| f(p), r0, 1.0).singular_lo();
    Ok(integrate(&spec, HEIGHT_RTOL)?.value)
}

/// 4τ·arctan(x/(y + λ)); λ = ∞ gives the slice t = 0.
pub fn umbrella_limit(lambda: f64, p: (f64, f64), tau: Tau) -> Result<f64> {
    if !(lambda >= 0.0) {
        return Err(Error::BadParameter(format!("lambda must be non-negative, got {lambda}")));
    }
    if !(p.1 > 0.0) {
        return Err(Error::BoundaryPoint { x: p.0, y: p.1 });
    }
    if lambda == f64::INFINITY {
        return Ok(0.0);
    }
    Ok(4.0 * tau.value() * (p.0 / (p.1 + lambda)).atan())
}

/// Boundary points x = −cot(θ/2) for θ evenly spaced in (0, 2π).
fn boundary_samples(n: usize) -> Vec<f64> {
    (0..n).map(|k| -1.0 / (PI * (k as f64 + 0.5) / n as f64).tan()).collect()
}

fn through_infinity(points: Vec<(f64, f64)>) -> Component {
    let first_t = points.first().map_or(0.0, |p| p.1);
    let last_t = points.last().map_or(0.0, |p| p.1);
    let mut v = Vec::with_capacity(points.len() + 2);
    v.push((f64::NEG_INFINITY, first_t));
    v.extend(points);
    v.push((f64::INFINITY, last_t));
    Component::new(v, 0)
}

/// Trace of the complete surface on the vertical ideal boundary, in the
/// half-space model, sampled with `resolution` points per component.
///
/// Bigraphs are glued and centred: the slab and tilted sheets are shifted by
/// ∓H so their lines sit at ∓H. Fan surfaces with c ≥ 1 are single sheets;
/// for c = 1 the vertical ray of the boundary is truncated at s = 10⁻⁶.
/// Tilted lines are sampled on |x| ≤ [`TILTED_WINDOW`] and continued by
/// horizontal rays.
pub fn asymptotic_boundary(surface: &InvariantSurface, resolution: usize) -> Result<IdealBoundaryCurve> {
    let n = resolution.max(2);
    let tau = surface.tau;
    let graph = as_graph(surface)?;
    let comps = match surface.family {
        Family::SlabBigraph { .. } => {
            let h = tau.sqrt_k() * FRAC_PI_2;
            [-h, h]
                .iter()
                .map(|&t| through_infinity(boundary_samples(n).into_iter().map(|x| (x, t)).collect()))
                .collect()
        }
        Family::Tilted { d, l } => {
            let h = tilted_height(d, l, tau)?;
            [-h, h]
                .iter()
                .map(|&off| {
                    through_infinity(
                        (0..n)
                            .map(|k| {
                                let x = -TILTED_WINDOW + 2.0 * TILTED_WINDOW * k as f64 / (n - 1) as f64;
                                (x, l * x + off)
                            })
                            .collect(),
                    )
                })
                .collect()
        }
        Family::Fan { c } if c > 1.0 => {
            let (lo, hi) = (graph.fan_end(false)?, graph.fan_end(true)?);
            vec![Component::new(
                vec![(f64::NEG_INFINITY, lo), (0.0, lo), (0.0, hi), (f64::INFINITY, hi)],
                0,
            )]
        }
        Family::Fan { c } if c == 1.0 => {
            let top = graph.fan_end(true)?;
            let cut = graph.eval(1e-6, 1.0)?;
            vec![Component::new(vec![(0.0, cut), (0.0, top), (f64::INFINITY, top)], 0)]
        }
        Family::Fan { .. } => {
            let plus = as_graph(&InvariantSurface { sheet: Sheet::Plus, ..*surface })?.fan_end(true)?;
            let minus = as_graph(&InvariantSurface { sheet: Sheet::Minus, ..*surface })?.fan_end(true)?;
            vec![Component::new(
                vec![(0.0, minus), (f64::INFINITY, minus), (f64::INFINITY, plus), (0.0, plus)],
                0,
            )]
        }
        Family::Catenoid { c } => {
            let h = catenoid_neck_height(c, tau)?;
            [-h, h]
                .iter()
                .map(|&off| {
                    through_infinity(
                        boundary_samples(n).into_iter().map(|x| (x, 4.0 * tau.value() * x.atan() + off)).collect(),
                    )
                })
                .collect()
        }
        Family::UmbrellaLimit { lambda } => {
            let mut pts: Vec<(f64, f64)> = boundary_samples(n)
                .into_iter()
                .map(|x| {
                    let t = if lambda == 0.0 {
                        2.0 * PI * tau.value() * x.signum()
                    } else {
                        4.0 * tau.value() * (x / lambda).atan()
                    };
                    (x, t)
                })
                .collect();
            if lambda == 0.0 {
                // the step at x = 0 becomes a vertical segment
                let k = pts.partition_point(|p| p.0 < 0.0);
                let jump = 2.0 * PI * tau.value();
                pts.splice(k..k, [(0.0, -jump), (0.0, jump)]);
            }
            vec![through_infinity(pts)]
        }
    };
    IdealBoundaryCurve::new(Model::HalfSpace, comps)
}

/// Triangle mesh of a family member over a fixed window of its domain.
///
/// With `glue`, families that meet a fold (slab and tilted bigraphs, fans
/// with c < 1, catenoids) are meshed with both sheets sharing the fold row;
/// slab and tilted sheets are then shifted by ∓H so the fold sits at lx and
/// the boundary lines at ∓H. Otherwise only `surface.sheet` is meshed,
/// unshifted. `n` is the number of grid lines per sheet and direction.
pub fn surface_mesh(surface: &InvariantSurface, model: Model, n: usize, glue: bool) -> Result<Mesh> {
    if n < 2 {
        return Err(Error::BadParameter(format!("mesh resolution must be at least 2, got {n}")));
    }
    let tau = surface.tau;
    let plus = as_graph(&InvariantSurface { sheet: Sheet::Plus, ..*surface })?;
    let minus = as_graph(&InvariantSurface { sheet: Sheet::Minus, ..*surface })?;
    let folded = matches!(plus.kind, Kind::Slab | Kind::Tilted { .. } | Kind::FanBelow { .. } | Kind::Catenoid { .. });
    let glue = glue && folded;
    let shift = match surface.family {
        Family::SlabBigraph { .. } if glue => tau.sqrt_k() * FRAC_PI_2,
        Family::Tilted { d, l } if glue => tilted_height(d, l, tau)?,
        _ => 0.0,
    };
    let step = 1.0 / (n - 1) as f64;
    // (a, b) ∈ [0, 1]²; b = 1 is the fold for folded families
    let place = |i: usize, b: f64| -> (f64, f64) {
        // periodic families reuse column 0 exactly so the seam can be merged
        let a = i as f64 * step;
        let x_span = -2.0 + 4.0 * a;
        match (&plus.kind, surface.family) {
            (Kind::Slab, Family::SlabBigraph { d }) => (x_span, (0.001 + 0.999 * b) / d),
            (Kind::Tilted { .. }, Family::Tilted { d, .. }) => (x_span, (0.001 + 0.999 * b) * d),
            (Kind::FanBelow { c0, .. }, _) => {
                let y = 0.1 + 2.9 * a;
                (y * (c0 + 10.0 * (1.0 - b) * (1.0 - b)), y)
            }
            (Kind::FanCritical, _) => {
                let y = 0.1 + 2.9 * a;
                (y * (0.02 + 10.0 * b), y)
            }
            (Kind::Catenoid { r0, .. }, _) => {
                // uniform in the disk angle; r is the squared disk radius
                let r = r0 + (0.98 - r0) * (1.0 - b) * (1.0 - b);
                let (s, c) = (2.0 * PI * ((i % (n - 1)) as f64 * step)).sin_cos();
                let (u, v) = (r.sqrt() * c, r.sqrt() * s);
                let den = (1.0 - u) * (1.0 - u) + v * v;
                (-2.0 * v / den, (1.0 - u * u - v * v) / den)
            }
            _ => (x_span, 0.05 + 2.95 * b),
        }
    };
    let rows = if glue { 2 * n - 1 } else { n };
    let mesh = Mesh::grid(n, rows, |i, j| {
        let (graph, b, offset) = if !glue {
            (if surface.sheet == Sheet::Plus { &plus } else { &minus }, j as f64 * step, 0.0)
        } else if j < n {
            (&plus, j as f64 * step, -shift)
        } else {
            (&minus, (2 * n - 2 - j) as f64 * step, shift)
        };
        let (x, y) = place(i, b);
        let t = graph.value(x, y).ok()? + offset;
        let p = Point3::half(x, y, t);
        match model {
            Model::HalfSpace => Some(p.coords()),
            Model::Cylinder => to_cylinder(&p, tau).ok().map(|q| q.coords()),
        }
    });
    Ok(mesh.dedup_vertices())
}
