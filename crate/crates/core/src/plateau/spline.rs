//! Not-a-knot cubic splines on uniform grids and their tensor product, used
//! to evaluate a grid solution (with derivatives) between nodes.

use super::banded::BandedMatrix;
use crate::error::{Error, Result};
use crate::jet::Jet2;
use crate::surfaces::GraphFunction;

#[derive(Debug, Clone)]
pub struct Spline1 {
    x0: f64,
    h: f64,
    ys: Vec<f64>,
    /// second derivatives at the nodes
    ms: Vec<f64>,
}

impl Spline1 {
    pub fn new(x0: f64, h: f64, ys: Vec<f64>) -> Result<Self> {
        let n = ys.len();
        if n < 4 {
            return Err(Error::BadParameter(format!("spline needs at least 4 nodes, got {n}")));
        }
        let mut a = BandedMatrix::zeros(n, 2, 2);
        let mut rhs = vec![0.0; n];
        // continuity of the third derivative at the second and penultimate nodes
        for (row, base) in [(0, 0), (n - 1, n - 3)] {
            a.add(row, base, 1.0);
            a.add(row, base + 1, -2.0);
            a.add(row, base + 2, 1.0);
        }
        for i in 1..n - 1 {
            a.add(i, i - 1, 1.0);
            a.add(i, i, 4.0);
            a.add(i, i + 1, 1.0);
            rhs[i] = 6.0 * (ys[i + 1] - 2.0 * ys[i] + ys[i - 1]) / (h * h);
        }
        a.solve(&mut rhs)?;
        Ok(Spline1 { x0, h, ys, ms: rhs })
    }

    /// (s, s', s'') at x; extrapolates with the end pieces.
    pub fn eval(&self, x: f64) -> (f64, f64, f64) {
        let n = self.ys.len();
        let h = self.h;
        let k = (((x - self.x0) / h).floor().max(0.0) as usize).min(n - 2);
        let xl = self.x0 + k as f64 * h;
        let (a, b) = (xl + h - x, x - xl);
        let (ml, mr) = (self.ms[k], self.ms[k + 1]);
        let (yl, yr) = (self.ys[k], self.ys[k + 1]);
        let s = ml * a * a * a / (6.0 * h) + mr * b * b * b / (6.0 * h) + (yl / h - ml * h / 6.0) * a + (yr / h - mr * h / 6.0) * b;
        let ds = -ml * a * a / (2.0 * h) + mr * b * b / (2.0 * h) - (yl / h - ml * h / 6.0) + (yr / h - mr * h / 6.0);
        let dds = (ml * a + mr * b) / h;
        (s, ds, dds)
    }
}

/// Tensor-product spline through node values `values[j * nx + i]`.
#[derive(Debug, Clone)]
pub struct Bicubic {
    rows: Vec<Spline1>,
    y0: f64,
    hy: f64,
    bounds: (f64, f64, f64, f64),
    label: String,
}

impl Bicubic {
    pub fn new(bounds: (f64, f64, f64, f64), nx: usize, ny: usize, values: &[f64]) -> Result<Self> {
        let (x0, x1, y0, y1) = bounds;
        let hx = (x1 - x0) / (nx - 1) as f64;
        let hy = (y1 - y0) / (ny - 1) as f64;
        let rows = (0..ny).map(|j| Spline1::new(x0, hx, values[j * nx..(j + 1) * nx].to_vec())).collect::<Result<_>>()?;
        Ok(Bicubic { rows, y0, hy, bounds, label: "grid interpolant".into() })
    }
}

impl GraphFunction for Bicubic {
    fn jet(&self, x: f64, y: f64) -> Result<Jet2> {
        if !self.contains(x, y) {
            return Err(Error::BoundaryPoint { x, y });
        }
        let ny = self.rows.len();
        let (mut s0, mut s1, mut s2) = (Vec::with_capacity(ny), Vec::with_capacity(ny), Vec::with_capacity(ny));
        for r in &self.rows {
            let (a, b, c) = r.eval(x);
            s0.push(a);
            s1.push(b);
            s2.push(c);
        }
        let (v, dy, dyy) = Spline1::new(self.y0, self.hy, s0)?.eval(y);
        let (dx, dxy, _) = Spline1::new(self.y0, self.hy, s1)?.eval(y);
        let (dxx, _, _) = Spline1::new(self.y0, self.hy, s2)?.eval(y);
        Ok(Jet2 { v, dx, dy, dxx, dxy, dyy })
    }

    fn contains(&self, x: f64, y: f64) -> bool {
        let (x0, x1, y0, y1) = self.bounds;
        y > 0.0 && x >= x0 && x <= x1 && y >= y0 && y <= y1
    }

    fn sample(&self, a: f64, b: f64) -> Option<(f64, f64)> {
        let (x0, x1, y0, y1) = self.bounds;
        Some((x0 + (x1 - x0) * (0.05 + 0.9 * a), y0 + (y1 - y0) * (0.05 + 0.9 * b)))
    }

    fn label(&self) -> String {
        self.label.clone()
    }
}
