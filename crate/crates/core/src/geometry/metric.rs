use serde::Serialize;

use super::model::{Point3, Tau};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricTensor {
    pub g: [[f64; 3]; 3],
}

impl MetricTensor {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.g[i][j]
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        (0..3).all(|i| (0..3).all(|j| (self.g[i][j] - self.g[j][i]).abs() <= tol))
    }

    pub fn leading_minors(&self) -> [f64; 3] {
        let g = &self.g;
        let m1 = g[0][0];
        let m2 = g[0][0] * g[1][1] - g[0][1] * g[1][0];
        [m1, m2, self.det()]
    }

    pub fn det(&self) -> f64 {
        let g = &self.g;
        g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1]) - g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0])
            + g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0])
    }

    pub fn is_positive_definite(&self) -> bool {
        self.leading_minors().iter().all(|&m| m > 0.0)
    }

    pub fn max_abs_diff(&self, other: &MetricTensor) -> f64 {
        let mut m = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                m = m.max((self.g[i][j] - other.g[i][j]).abs());
            }
        }
        m
    }

    /// Jᵀ g J, with `jac[i][j] = ∂yᵢ/∂xⱼ`.
    pub fn pullback(&self, jac: &[[f64; 3]; 3]) -> MetricTensor {
        let mut out = [[0.0; 3]; 3];
        for a in 0..3 {
            for b in 0..3 {
                let mut s = 0.0;
                for i in 0..3 {
                    for j in 0..3 {
                        s += jac[i][a] * self.g[i][j] * jac[j][b];
                    }
                }
                out[a][b] = s;
            }
        }
        MetricTensor { g: out }
    }
}

/// g = λ²(dx² + dy²) + (a₁dx + a₂dy + dt)² with (a₁, a₂) the model's
/// connection coefficients.
pub fn metric_at(p: &Point3, tau: Tau) -> Result<MetricTensor> {
    p.check_interior()?;
    let m = p.model;
    let lam = m.lambda(p.x, p.y);
    let (a1, a2) = m.connection(p.x, p.y, tau.value());
    let l2 = lam * lam;
    Ok(MetricTensor {
        g: [
            [l2 + a1 * a1, a1 * a2, a1],
            [a1 * a2, l2 + a2 * a2, a2],
            [a1, a2, 1.0],
        ],
    })
}

/// Geodesic polar coordinates (r, θ, t) about the centre of the cylinder.
pub fn polar_metric_at(r: f64, _theta: f64, tau: Tau) -> Result<MetricTensor> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::NonpositiveRadius { r });
    }
    let tau = tau.value();
    let sh = r.sinh();
    let sh2 = (0.5 * r).sinh().powi(2);
    let c = -4.0 * tau * sh2;
    Ok(MetricTensor {
        g: [
            [1.0, 0.0, 0.0],
            [0.0, sh * sh + c * c, c],
            [0.0, c, 1.0],
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_space_unit_point() {
        let g = metric_at(&Point3::half(0.0, 1.0, 0.0), Tau::ZERO).unwrap();
        assert_eq!(g.g, [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);
        let g = metric_at(&Point3::half(0.0, 1.0, 0.0), Tau::HALF).unwrap();
        assert_eq!(g.g, [[2.0, 0.0, -1.0], [0.0, 1.0, 0.0], [-1.0, 0.0, 1.0]]);
    }

    #[test]
    fn cylinder_centre() {
        for tau in [0.0, 0.5, 3.0] {
            let g = metric_at(&Point3::cyl(0.0, 0.0, 5.0), Tau::new(tau).unwrap()).unwrap();
            assert_eq!(g.g, [[4.0, 0.0, 0.0], [0.0, 4.0, 0.0], [0.0, 0.0, 1.0]]);
        }
    }

    #[test]
    fn boundary_rejected() {
        assert!(matches!(metric_at(&Point3::half(0.0, 0.0, 0.0), Tau::HALF), Err(Error::BoundaryPoint { .. })));
        assert!(metric_at(&Point3::cyl(0.6, 0.8, 0.0), Tau::HALF).is_err());
    }

    #[test]
    fn polar_values() {
        let g = polar_metric_at(1.0, 0.3, Tau::ZERO).unwrap();
        assert_eq!(g.g[1][1], 1f64.sinh().powi(2));
        let g = polar_metric_at(1.0, 0.3, Tau::HALF).unwrap();
        let s = 0.5f64.sinh().powi(2);
        assert!((g.g[1][1] - (1f64.sinh().powi(2) + 4.0 * s * s)).abs() < 1e-15);
        assert!((g.g[1][2] + 2.0 * s).abs() < 1e-15);
        assert!(matches!(polar_metric_at(0.0, 0.0, Tau::HALF), Err(Error::NonpositiveRadius { .. })));
    }
}
