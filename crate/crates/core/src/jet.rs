//! Second-order forward-mode derivatives in two variables.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// A value with its gradient and Hessian in (x, y).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jet2 {
    pub v: f64,
    pub dx: f64,
    pub dy: f64,
    pub dxx: f64,
    pub dxy: f64,
    pub dyy: f64,
}

impl Jet2 {
    pub fn constant(v: f64) -> Self {
        Jet2 { v, ..Default::default() }
    }

    pub fn var_x(x: f64) -> Self {
        Jet2 { v: x, dx: 1.0, ..Default::default() }
    }

    pub fn var_y(y: f64) -> Self {
        Jet2 { v: y, dy: 1.0, ..Default::default() }
    }

    pub fn grad(&self) -> (f64, f64) {
        (self.dx, self.dy)
    }

    pub fn hess(&self) -> (f64, f64, f64) {
        (self.dxx, self.dxy, self.dyy)
    }

    /// [u_x, u_y, u_xx, u_xy, u_yy], the layout of `fd_derivatives`.
    pub fn derivatives(&self) -> [f64; 5] {
        [self.dx, self.dy, self.dxx, self.dxy, self.dyy]
    }

    /// f ∘ self, given f, f′, f″ at `self.v`.
    pub fn compose(self, f0: f64, f1: f64, f2: f64) -> Self {
        Jet2 {
            v: f0,
            dx: f1 * self.dx,
            dy: f1 * self.dy,
            dxx: f2 * self.dx * self.dx + f1 * self.dxx,
            dxy: f2 * self.dx * self.dy + f1 * self.dxy,
            dyy: f2 * self.dy * self.dy + f1 * self.dyy,
        }
    }

    /// g(a, b) where `outer` holds g and its partials in (a, b) at (a.v, b.v).
    pub fn compose2(outer: &Jet2, a: Jet2, b: Jet2) -> Self {
        let (ga, gb) = (outer.dx, outer.dy);
        let (gaa, gab, gbb) = (outer.dxx, outer.dxy, outer.dyy);
        Jet2 {
            v: outer.v,
            dx: ga * a.dx + gb * b.dx,
            dy: ga * a.dy + gb * b.dy,
            dxx: gaa * a.dx * a.dx + 2.0 * gab * a.dx * b.dx + gbb * b.dx * b.dx + ga * a.dxx + gb * b.dxx,
            dxy: gaa * a.dx * a.dy + gab * (a.dx * b.dy + a.dy * b.dx) + gbb * b.dx * b.dy + ga * a.dxy + gb * b.dxy,
            dyy: gaa * a.dy * a.dy + 2.0 * gab * a.dy * b.dy + gbb * b.dy * b.dy + ga * a.dyy + gb * b.dyy,
        }
    }

    pub fn atan(self) -> Self {
        let v = self.v;
        let d = 1.0 / (1.0 + v * v);
        self.compose(v.atan(), d, -2.0 * v * d * d)
    }

    pub fn asin(self) -> Self {
        let v = self.v;
        let w = 1.0 / (1.0 - v * v).sqrt();
        self.compose(v.asin(), w, v * w * w * w)
    }

    pub fn sqrt(self) -> Self {
        let s = self.v.sqrt();
        self.compose(s, 0.5 / s, -0.25 / (s * self.v))
    }

    pub fn recip(self) -> Self {
        let r = 1.0 / self.v;
        self.compose(r, -r * r, 2.0 * r * r * r)
    }

    pub fn scale(self, k: f64) -> Self {
        Jet2 {
            v: k * self.v,
            dx: k * self.dx,
            dy: k * self.dy,
            dxx: k * self.dxx,
            dxy: k * self.dxy,
            dyy: k * self.dyy,
        }
    }
}

impl Add for Jet2 {
    type Output = Jet2;
    fn add(self, o: Jet2) -> Jet2 {
        Jet2 {
            v: self.v + o.v,
            dx: self.dx + o.dx,
            dy: self.dy + o.dy,
            dxx: self.dxx + o.dxx,
            dxy: self.dxy + o.dxy,
            dyy: self.dyy + o.dyy,
        }
    }
}

impl Sub for Jet2 {
    type Output = Jet2;
    fn sub(self, o: Jet2) -> Jet2 {
        self + (-o)
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        self.scale(-1.0)
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    fn mul(self, o: Jet2) -> Jet2 {
        Jet2 {
            v: self.v * o.v,
            dx: self.dx * o.v + self.v * o.dx,
            dy: self.dy * o.v + self.v * o.dy,
            dxx: self.dxx * o.v + 2.0 * self.dx * o.dx + self.v * o.dxx,
            dxy: self.dxy * o.v + self.dx * o.dy + self.dy * o.dx + self.v * o.dxy,
            dyy: self.dyy * o.v + 2.0 * self.dy * o.dy + self.v * o.dyy,
        }
    }
}

impl Div for Jet2 {
    type Output = Jet2;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Jet2) -> Jet2 {
        self * o.recip()
    }
}

impl Add<f64> for Jet2 {
    type Output = Jet2;
    fn add(self, k: f64) -> Jet2 {
        Jet2 { v: self.v + k, ..self }
    }
}

impl Sub<f64> for Jet2 {
    type Output = Jet2;
    fn sub(self, k: f64) -> Jet2 {
        Jet2 { v: self.v - k, ..self }
    }
}

impl Mul<f64> for Jet2 {
    type Output = Jet2;
    fn mul(self, k: f64) -> Jet2 {
        self.scale(k)
    }
}
