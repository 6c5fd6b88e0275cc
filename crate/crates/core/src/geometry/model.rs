use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Interior-ness is decided on the conformal denominator (y, resp. 1 − x² − y²).
pub const BOUNDARY_EPS: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    /// y > 0, λ = 1/y
    HalfSpace,
    /// x² + y² < 1, λ = 2/(1 − x² − y²)
    Cylinder,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Model::HalfSpace => "half-space",
            Model::Cylinder => "cylinder",
        }
    }

    fn denominator(self, x: f64, y: f64) -> f64 {
        match self {
            Model::HalfSpace => y,
            Model::Cylinder => (1.0 - x * x) - y * y,
        }
    }

    pub fn is_interior(self, x: f64, y: f64) -> bool {
        let d = self.denominator(x, y);
        d.is_finite() && d > BOUNDARY_EPS && x.is_finite()
    }

    pub fn check_interior(self, x: f64, y: f64) -> Result<()> {
        if self.is_interior(x, y) {
            Ok(())
        } else {
            Err(Error::BoundaryPoint { x, y })
        }
    }

    /// The conformal factor λ of the hyperbolic metric λ²(dx² + dy²).
    pub fn lambda(self, x: f64, y: f64) -> f64 {
        match self {
            Model::HalfSpace => 1.0 / y,
            Model::Cylinder => 2.0 / self.denominator(x, y),
        }
    }

    /// (λ_x/λ, λ_y/λ), closed form.
    pub fn log_lambda_grad(self, x: f64, y: f64) -> (f64, f64) {
        match self {
            Model::HalfSpace => (0.0, -1.0 / y),
            Model::Cylinder => {
                let d = self.denominator(x, y);
                (2.0 * x / d, 2.0 * y / d)
            }
        }
    }

    /// Coefficients (a₁, a₂) of the connection form 2τ(λ_y/λ dx − λ_x/λ dy).
    pub fn connection(self, x: f64, y: f64, tau: f64) -> (f64, f64) {
        let (lx, ly) = self.log_lambda_grad(x, y);
        (2.0 * tau * ly, -2.0 * tau * lx)
    }
}

impl std::fmt::Display for Model {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "half" | "half-space" | "halfspace" => Ok(Model::HalfSpace),
            "cyl" | "cylinder" => Ok(Model::Cylinder),
            _ => Err(Error::BadParameter(format!("unknown model '{s}'"))),
        }
    }
}

/// Bundle curvature.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Tau(f64);

impl Tau {
    pub const ZERO: Tau = Tau(0.0);
    pub const HALF: Tau = Tau(0.5);

    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() {
            Ok(Tau(value))
        } else {
            Err(Error::BadParameter(format!("tau must be finite, got {value}")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// 1 + 4τ²
    pub fn k(self) -> f64 {
        1.0 + 4.0 * self.0 * self.0
    }

    pub fn sqrt_k(self) -> f64 {
        self.k().sqrt()
    }

    /// √(1 + 4τ²)·π, the critical height.
    pub fn threshold(self) -> f64 {
        self.sqrt_k() * std::f64::consts::PI
    }

    pub fn mirrored(self) -> Tau {
        Tau(-self.0)
    }
}

impl TryFrom<f64> for Tau {
    type Error = Error;

    fn try_from(v: f64) -> Result<Self> {
        Tau::new(v)
    }
}

impl From<Tau> for f64 {
    fn from(t: Tau) -> f64 {
        t.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub t: f64,
    pub model: Model,
}

impl Point3 {
    pub fn new(x: f64, y: f64, t: f64, model: Model) -> Self {
        Point3 { x, y, t, model }
    }

    pub fn half(x: f64, y: f64, t: f64) -> Self {
        Point3::new(x, y, t, Model::HalfSpace)
    }

    pub fn cyl(x: f64, y: f64, t: f64) -> Self {
        Point3::new(x, y, t, Model::Cylinder)
    }

    pub fn is_interior(&self) -> bool {
        self.model.is_interior(self.x, self.y) && self.t.is_finite()
    }

    pub fn check_interior(&self) -> Result<()> {
        if self.t.is_finite() {
            self.model.check_interior(self.x, self.y)
        } else {
            Err(Error::BoundaryPoint { x: self.x, y: self.y })
        }
    }

    pub fn expect_model(&self, model: Model) -> Result<()> {
        if self.model == model {
            Ok(())
        } else {
            Err(Error::WrongModel { expected: model.name(), found: self.model.name() })
        }
    }

    pub fn coords(&self) -> [f64; 3] {
        [self.x, self.y, self.t]
    }

    pub fn with_coords(model: Model, c: [f64; 3]) -> Self {
        Point3::new(c[0], c[1], c[2], model)
    }

    pub fn max_abs_diff(&self, other: &Point3) -> f64 {
        (self.x - other.x).abs().max((self.y - other.y).abs()).max((self.t - other.t).abs())
    }
}

/// A point of ∂∞ℍ² in the half-plane picture. The point at infinity is a
/// sentinel, never a large coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum IdealPoint {
    Finite(f64),
    Infinity,
}
