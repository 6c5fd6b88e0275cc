//! Variable changes that map an integration range onto σ ∈ [0, 1] while
//! cancelling inverse-square-root endpoint behaviour.

use std::f64::consts::FRAC_PI_2;

/// A point of the original integration variable, together with its distances
/// to both ends computed without cancellation.
///
/// Integrands with factors like `1/√(d² − t²)` should use `from_hi` rather
/// than `d - x`: near the endpoint `x` has already been rounded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Abscissa {
    pub x: f64,
    pub from_lo: f64,
    pub from_hi: f64,
}

impl Abscissa {
    pub fn plain(x: f64) -> Self {
        Abscissa { x, from_lo: f64::NAN, from_hi: f64::NAN }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Substitution {
    /// x = a + (b − a)σ
    Linear { a: f64, b: f64 },
    /// x = a + (b − a)σ², removes a `(x − a)^(-1/2)` singularity.
    LoSqrt { a: f64, b: f64 },
    /// x = b − (b − a)(1 − σ)²
    HiSqrt { a: f64, b: f64 },
    /// x = a + (b − a)sin²(πσ/2), both ends singular.
    BothSqrt { a: f64, b: f64 },
    /// x = a + tan(πσ/2), or a + tan(πσ²/2) when `a` is singular.
    HalfLine { a: f64, lo_singular: bool },
    /// x = tan(π(σ − ½))
    FullLine,
}

impl Substitution {
    pub fn for_range(a: f64, b: f64, lo_singular: bool, hi_singular: bool) -> Self {
        if b == f64::INFINITY {
            return if a == f64::NEG_INFINITY {
                Substitution::FullLine
            } else {
                Substitution::HalfLine { a, lo_singular }
            };
        }
        match (lo_singular, hi_singular) {
            (false, false) => Substitution::Linear { a, b },
            (true, false) => Substitution::LoSqrt { a, b },
            (false, true) => Substitution::HiSqrt { a, b },
            (true, true) => Substitution::BothSqrt { a, b },
        }
    }

    /// Maps σ to the original variable, returning the abscissa and dx/dσ.
    pub fn forward(&self, s: f64) -> (Abscissa, f64) {
        match *self {
            Substitution::Linear { a, b } => {
                let w = b - a;
                (Abscissa { x: a + w * s, from_lo: w * s, from_hi: w * (1.0 - s) }, w)
            }
            Substitution::LoSqrt { a, b } => {
                let w = b - a;
                let lo = w * s * s;
                let hi = w * (1.0 - s) * (1.0 + s);
                (Abscissa { x: a + lo, from_lo: lo, from_hi: hi }, 2.0 * w * s)
            }
            Substitution::HiSqrt { a, b } => {
                let w = b - a;
                let r = 1.0 - s;
                let hi = w * r * r;
                let lo = w * s * (2.0 - s);
                (Abscissa { x: b - hi, from_lo: lo, from_hi: hi }, 2.0 * w * r)
            }
            Substitution::BothSqrt { a, b } => {
                let w = b - a;
                let (sn, cs) = (FRAC_PI_2 * s).sin_cos();
                let lo = w * sn * sn;
                let hi = w * cs * cs;
                let x = if lo <= hi { a + lo } else { b - hi };
                (Abscissa { x, from_lo: lo, from_hi: hi }, w * FRAC_PI_2 * 2.0 * sn * cs)
            }
            Substitution::HalfLine { a, lo_singular } => {
                let (phi, dphi) = if lo_singular {
                    (FRAC_PI_2 * s * s, std::f64::consts::PI * s)
                } else {
                    (FRAC_PI_2 * s, FRAC_PI_2)
                };
                let tn = phi.tan();
                let sec2 = 1.0 + tn * tn;
                (Abscissa { x: a + tn, from_lo: tn, from_hi: f64::INFINITY }, sec2 * dphi)
            }
            Substitution::FullLine => {
                let tn = (std::f64::consts::PI * (s - 0.5)).tan();
                (
                    Abscissa { x: tn, from_lo: f64::INFINITY, from_hi: f64::INFINITY },
                    std::f64::consts::PI * (1.0 + tn * tn),
                )
            }
        }
    }

    /// Inverse of [`forward`](Self::forward); clamps to [0, 1].
    pub fn inverse(&self, x: f64) -> f64 {
        let s = match *self {
            Substitution::Linear { a, b } => (x - a) / (b - a),
            Substitution::LoSqrt { a, b } => ((x - a) / (b - a)).max(0.0).sqrt(),
            Substitution::HiSqrt { a, b } => 1.0 - ((b - x) / (b - a)).max(0.0).sqrt(),
            Substitution::BothSqrt { a, b } => {
                ((x - a) / (b - a)).clamp(0.0, 1.0).sqrt().asin() / FRAC_PI_2
            }
            Substitution::HalfLine { a, lo_singular } => {
                let phi = (x - a).max(0.0).atan() / FRAC_PI_2;
                if lo_singular {
                    phi.sqrt()
                } else {
                    phi
                }
            }
            Substitution::FullLine => x.atan() / std::f64::consts::PI + 0.5,
        };
        s.clamp(0.0, 1.0)
    }

    /// Like [`inverse`](Self::inverse) but takes the distance to the lower
    /// end directly, which keeps full precision right next to a singular end.
    pub fn inverse_from_lo(&self, from_lo: f64) -> f64 {
        match *self {
            Substitution::LoSqrt { a, b } => (from_lo / (b - a)).max(0.0).sqrt().min(1.0),
            Substitution::BothSqrt { a, b } => {
                (from_lo / (b - a)).clamp(0.0, 1.0).sqrt().asin() / FRAC_PI_2
            }
            _ => self.inverse(self.bounds().0 + from_lo),
        }
    }

    pub fn bounds(&self) -> (f64, f64) {
        match *self {
            Substitution::Linear { a, b }
            | Substitution::LoSqrt { a, b }
            | Substitution::HiSqrt { a, b }
            | Substitution::BothSqrt { a, b } => (a, b),
            Substitution::HalfLine { a, .. } => (a, f64::INFINITY),
            Substitution::FullLine => (f64::NEG_INFINITY, f64::INFINITY),
        }
    }
}
