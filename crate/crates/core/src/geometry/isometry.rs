use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::model::{IdealPoint, Model, Point3, Tau};
use crate::error::{Error, Result};

pub const DET_TOL: f64 = 1e-12;

/// Half-space → cylinder: w = (z − i)/(z + i), t ↦ t − 4τ·arctan(x/(y + 1)).
pub fn to_cylinder(p: &Point3, tau: Tau) -> Result<Point3> {
    p.expect_model(Model::HalfSpace)?;
    p.check_interior()?;
    let (x, y) = (p.x, p.y);
    let den = x * x + (y + 1.0) * (y + 1.0);
    let u = (x * x + y * y - 1.0) / den;
    let v = -2.0 * x / den;
    let t = p.t - 4.0 * tau.value() * (x / (y + 1.0)).atan();
    Ok(Point3::cyl(u, v, t))
}

/// Cylinder → half-space: z = i(1 + w)/(1 − w), t ↦ t − 4τ·arctan(y/(1 − x)).
pub fn to_half_space(p: &Point3, tau: Tau) -> Result<Point3> {
    p.expect_model(Model::Cylinder)?;
    p.check_interior()?;
    let (x, y) = (p.x, p.y);
    let den = (1.0 - x) * (1.0 - x) + y * y;
    let u = -2.0 * y / den;
    let v = (1.0 - x * x - y * y) / den;
    let t = p.t - 4.0 * tau.value() * (y / (1.0 - x)).atan();
    Ok(Point3::half(u, v, t))
}

pub fn to_model(p: &Point3, model: Model, tau: Tau) -> Result<Point3> {
    match (p.model, model) {
        (a, b) if a == b => Ok(*p),
        (Model::HalfSpace, Model::Cylinder) => to_cylinder(p, tau),
        _ => to_half_space(p, tau),
    }
}

/// Boundary trace of the half-space → cylinder map on {y = 0}: returns the
/// angle θ ∈ [0, 2π] and the shifted height. ±∞ go to θ = 2π resp. 0.
pub fn boundary_to_cylinder(x: f64, t: f64, tau: Tau) -> (f64, f64) {
    let a = x.atan();
    (PI + 2.0 * a, t - 4.0 * tau.value() * a)
}

/// Boundary trace of the cylinder → half-space map. θ ≡ 0 (mod 2π) is the
/// preimage of the point at infinity.
pub fn boundary_to_half_space(theta: f64, t: f64, tau: Tau) -> Result<(f64, f64)> {
    let th = theta.rem_euclid(2.0 * PI);
    if th == 0.0 {
        return Err(Error::IdealPole { x: theta });
    }
    let x = -1.0 / (0.5 * th).tan();
    Ok((x, t - 2.0 * tau.value() * PI + 2.0 * tau.value() * th))
}

/// A lift of z ↦ (az + b)/(cz + d) composed with a vertical shift t₀.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MoebiusIsometry {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub t0: f64,
    pub model: Model,
}

impl MoebiusIsometry {
    pub fn new(a: f64, b: f64, c: f64, d: f64, t0: f64, model: Model) -> Result<Self> {
        let f = MoebiusIsometry { a, b, c, d, t0, model };
        f.check_det()?;
        Ok(f)
    }

    pub fn identity(model: Model) -> Self {
        MoebiusIsometry { a: 1.0, b: 0.0, c: 0.0, d: 1.0, t0: 0.0, model }
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    fn check_det(&self) -> Result<()> {
        let det = self.det();
        if (det - 1.0).abs() > DET_TOL || !det.is_finite() {
            Err(Error::DeterminantError { det })
        } else {
            Ok(())
        }
    }

    /// The underlying Möbius map on ℍ² (half-plane coordinates).
    pub fn project(&self, x: f64, y: f64) -> (f64, f64) {
        let (a, b, c, d) = (self.a, self.b, self.c, self.d);
        let cx = c * x + d;
        let den = cx * cx + c * c * y * y;
        (((a * x + b) * cx + a * c * y * y) / den, y / den)
    }

    pub fn apply(&self, p: &Point3, tau: Tau) -> Result<Point3> {
        self.check_det()?;
        p.expect_model(self.model)?;
        p.check_interior()?;
        match self.model {
            Model::HalfSpace => Ok(self.apply_half(p, tau)),
            Model::Cylinder => {
                let q = to_half_space(p, tau)?;
                to_cylinder(&self.apply_half(&q, tau), tau)
            }
        }
    }

    fn apply_half(&self, p: &Point3, tau: Tau) -> Point3 {
        let (x, y) = self.project(p.x, p.y);
        let t = if self.c == 0.0 {
            p.t + self.t0
        } else {
            p.t - 4.0 * tau.value() * ((self.c * p.x + self.d) / (self.c * p.y)).atan() + self.t0
        };
        Point3::half(x, y, t)
    }

    /// Extension to the vertical ideal boundary {y = 0}. The fibre over the
    /// pole x = −d/c is sent to the fibre over ∞ and is reported as
    /// [`Error::IdealPole`]; so is the fibre over ∞ when c ≠ 0, whose
    /// one-sided limits differ by 4τπ.
    pub fn apply_boundary(&self, q: (IdealPoint, f64), tau: Tau) -> Result<(IdealPoint, f64)> {
        self.check_det()?;
        if self.model != Model::HalfSpace {
            return Err(Error::WrongModel { expected: Model::HalfSpace.name(), found: self.model.name() });
        }
        let (a, b, c, d) = (self.a, self.b, self.c, self.d);
        let (xp, t) = q;
        let x = match xp {
            IdealPoint::Finite(x) => x,
            IdealPoint::Infinity if c == 0.0 => return Ok((IdealPoint::Infinity, t + self.t0)),
            IdealPoint::Infinity => return Err(Error::IdealPole { x: f64::INFINITY }),
        };
        if c == 0.0 {
            return Ok((IdealPoint::Finite((a * x + b) / d), t + self.t0));
        }
        let pole = -d / c;
        if x == pole {
            return Err(Error::IdealPole { x });
        }
        let jump = 2.0 * tau.value() * PI;
        let t = if x < pole { t + jump } else { t - jump };
        Ok((IdealPoint::Finite((a * x + b) / (c * x + d)), t + self.t0))
    }

    /// Action on ∂∞ℍ² alone.
    pub fn apply_ideal(&self, p: IdealPoint) -> IdealPoint {
        let (a, b, c, d) = (self.a, self.b, self.c, self.d);
        match p {
            IdealPoint::Infinity if c == 0.0 => IdealPoint::Infinity,
            IdealPoint::Infinity => IdealPoint::Finite(a / c),
            IdealPoint::Finite(x) if c * x + d == 0.0 => IdealPoint::Infinity,
            IdealPoint::Finite(x) => IdealPoint::Finite((a * x + b) / (c * x + d)),
        }
    }
}

/// Convenience over the boundary extension for finite boundary points.
pub fn apply_isometry_boundary(f: &MoebiusIsometry, q: (f64, f64), tau: Tau) -> Result<(f64, f64)> {
    match f.apply_boundary((IdealPoint::Finite(q.0), q.1), tau)? {
        (IdealPoint::Finite(x), t) => Ok((x, t)),
        (IdealPoint::Infinity, _) => Err(Error::IdealPole { x: q.0 }),
    }
}

pub fn apply_isometry(f: &MoebiusIsometry, p: &Point3, tau: Tau) -> Result<Point3> {
    f.apply(p, tau)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SpecialIsometry {
    VerticalTranslation { t0: f64 },
    /// (x, y, t) ↦ (c + λ(x − c), λy, t) along the geodesic {x = c}.
    HyperbolicTranslation { axis: f64, lambda: f64 },
    /// (x, y, t) ↦ (x + a, y, t)
    ParabolicTranslation { a: f64 },
    /// Euclidean rotation about the t-axis of the cylinder.
    Rotation { angle: f64 },
}

impl SpecialIsometry {
    pub fn apply(&self, p: &Point3) -> Result<Point3> {
        match *self {
            SpecialIsometry::VerticalTranslation { t0 } => Ok(Point3 { t: p.t + t0, ..*p }),
            SpecialIsometry::HyperbolicTranslation { axis, lambda } => {
                p.expect_model(Model::HalfSpace)?;
                if !(lambda > 0.0) {
                    return Err(Error::BadParameter(format!("dilation factor must be positive, got {lambda}")));
                }
                Ok(Point3::half(axis + lambda * (p.x - axis), lambda * p.y, p.t))
            }
            SpecialIsometry::ParabolicTranslation { a } => {
                p.expect_model(Model::HalfSpace)?;
                Ok(Point3::half(p.x + a, p.y, p.t))
            }
            SpecialIsometry::Rotation { angle } => {
                p.expect_model(Model::Cylinder)?;
                let (s, c) = angle.sin_cos();
                Ok(Point3::cyl(c * p.x - s * p.y, s * p.x + c * p.y, p.t))
            }
        }
    }
}

pub fn special_isometry(kind: SpecialIsometry, p: &Point3) -> Result<Point3> {
    kind.apply(p)
}
