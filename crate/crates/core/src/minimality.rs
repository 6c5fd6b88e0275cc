//! The minimal graph operator: generalized gradient, divergence-form mean
//! curvature, the explicit half-space residual, and sampling verifiers.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{metric_at, Model, Point3, Tau};
use crate::jet::Jet2;
use crate::numerics::{fd_jacobian3_o4, halton};
use crate::surfaces::{as_graph, GraphFunction, InvariantSurface};

/// Default finite-difference step of the divergence-form operator.
pub const DIVFORM_STEP: f64 = 1e-4;
/// The divergence-form estimate is reported but only judged against
/// max(tol, this floor): its finite-difference error is ~1e-9 at best.
pub const DIVFORM_FLOOR: f64 = 1e-6;
const WORST_POINTS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeneralizedGradient {
    /// (u_x + a₁, u_y + a₂): the 1-form dual to Gu, with (a₁, a₂) the
    /// connection coefficients 2τ(λ_y/λ, −λ_x/λ).
    pub covector: (f64, f64),
    /// λ⁻²·covector: the vector field Gu in the coordinate frame (∂x, ∂y).
    pub vector: (f64, f64),
    /// ‖Gu‖ in the hyperbolic metric.
    pub norm: f64,
}

fn gradient_from(model: Model, x: f64, y: f64, ux: f64, uy: f64, tau: Tau) -> GeneralizedGradient {
    let (a1, a2) = model.connection(x, y, tau.value());
    let lam = model.lambda(x, y);
    let (p, q) = (ux + a1, uy + a2);
    let il2 = 1.0 / (lam * lam);
    GeneralizedGradient { covector: (p, q), vector: (p * il2, q * il2), norm: (p * p + q * q).sqrt() / lam }
}

/// Gu at `p`, for a graph written in the coordinates of `model`.
pub fn generalized_gradient(u: &dyn GraphFunction, p: (f64, f64), tau: Tau, model: Model) -> Result<GeneralizedGradient> {
    model.check_interior(p.0, p.1)?;
    let (ux, uy) = u.grad(p.0, p.1)?;
    Ok(gradient_from(model, p.0, p.1, ux, uy, tau))
}

/// The explicit half-space minimal graph equation as a function of the
/// derivatives [u_x, u_y, u_xx, u_xy, u_yy] at height y.
pub fn residual_from_derivatives(y: f64, d: [f64; 5], tau: f64) -> f64 {
    let [ux, uy, uxx, uxy, uyy] = d;
    let k = 1.0 + 4.0 * tau * tau;
    y * uy * uy * uy - (k + y * ux * (-4.0 * tau + y * ux)) * uyy + uy * (-2.0 * tau + y * ux) * (ux + 2.0 * y * uxy)
        - uxx
        - y * y * uy * uy * uxx
}

/// Partial derivatives of [`residual_from_derivatives`] with respect to
/// (u_x, u_y, u_xx, u_xy, u_yy).
pub fn residual_partials(y: f64, d: [f64; 5], tau: f64) -> [f64; 5] {
    let [ux, uy, uxx, uxy, uyy] = d;
    let k = 1.0 + 4.0 * tau * tau;
    let m = -2.0 * tau + y * ux;
    [
        (4.0 * tau * y - 2.0 * y * y * ux) * uyy + uy * (2.0 * y * ux + 2.0 * y * y * uxy - 2.0 * tau),
        3.0 * y * uy * uy + m * (ux + 2.0 * y * uxy) - 2.0 * y * y * uy * uxx,
        -1.0 - y * y * uy * uy,
        2.0 * y * uy * m,
        -(k + y * ux * (-4.0 * tau + y * ux)),
    ]
}

/// Left-hand side of the half-space minimal graph equation at `p`.
pub fn graph_residual(u: &dyn GraphFunction, p: (f64, f64), tau: Tau) -> Result<f64> {
    Model::HalfSpace.check_interior(p.0, p.1)?;
    let j = u.jet(p.0, p.1)?;
    Ok(residual_from_derivatives(p.1, j.derivatives(), tau.value()))
}

/// Mean curvature H from 2H = div(Gu/√(1 + ‖Gu‖²)), the divergence taken by
/// centred differences of step `h` and `h/2` combined by Richardson
/// extrapolation.
pub fn mean_curvature_divform(u: &dyn GraphFunction, p: (f64, f64), tau: Tau, model: Model, h: f64) -> Result<f64> {
    let (x, y) = p;
    model.check_interior(x, y)?;
    for (dx, dy) in [(h, 0.0), (-h, 0.0), (0.0, h), (0.0, -h)] {
        let (sx, sy) = (x + 2.0 * dx, y + 2.0 * dy);
        if !model.is_interior(sx, sy) || !u.contains(sx, sy) {
            return Err(Error::BoundaryPoint { x: sx, y: sy });
        }
    }
    let flux = |x: f64, y: f64| -> Result<(f64, f64)> {
        let (ux, uy) = u.grad(x, y)?;
        let g = gradient_from(model, x, y, ux, uy, tau);
        let w = (1.0 + g.norm * g.norm).sqrt();
        Ok((g.covector.0 / w, g.covector.1 / w))
    };
    let div = |h: f64| -> Result<f64> {
        let (px, _) = flux(x + h, y)?;
        let (mx, _) = flux(x - h, y)?;
        let (_, py) = flux(x, y + h)?;
        let (_, my) = flux(x, y - h)?;
        Ok((px - mx) / (2.0 * h) + (py - my) / (2.0 * h))
    };
    let (d1, d2) = (div(h)?, div(0.5 * h)?);
    let lam = model.lambda(x, y);
    Ok(0.5 * (4.0 * d2 - d1) / 3.0 / (lam * lam))
}

/// A cylinder-model graph seen in the half-space model through the
/// model-change isometry: u_h(x, y) = u_c(w(x, y)) + 4τ·arctan(x/(y + 1)).
pub struct HalfSpaceView<'a> {
    pub inner: &'a dyn GraphFunction,
    pub tau: Tau,
}

impl HalfSpaceView<'_> {
    fn disk_jets(x: f64, y: f64) -> (Jet2, Jet2) {
        let (jx, jy) = (Jet2::var_x(x), Jet2::var_y(y));
        let den = jx * jx + (jy + 1.0) * (jy + 1.0);
        let a = (jx * jx + jy * jy - 1.0) / den;
        let b = (jx * -2.0) / den;
        (a, b)
    }
}

impl GraphFunction for HalfSpaceView<'_> {
    fn jet(&self, x: f64, y: f64) -> Result<Jet2> {
        let (a, b) = Self::disk_jets(x, y);
        let outer = self.inner.jet(a.v, b.v)?;
        let shift = (Jet2::var_x(x) / (Jet2::var_y(y) + 1.0)).atan() * (4.0 * self.tau.value());
        Ok(Jet2::compose2(&outer, a, b) + shift)
    }

    fn contains(&self, x: f64, y: f64) -> bool {
        if !(y > 0.0) {
            return false;
        }
        let (a, b) = Self::disk_jets(x, y);
        self.inner.contains(a.v, b.v)
    }

    fn label(&self) -> String {
        format!("{} (via cylinder)", self.inner.label())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PointDiagnostic {
    pub x: f64,
    pub y: f64,
    pub residual: f64,
    pub mean_curvature: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub surface: String,
    pub tau: f64,
    pub n_samples: usize,
    pub max_residual: f64,
    #[serde(rename = "max_H")]
    pub max_h: f64,
    pub pass: bool,
    pub worst_points: Vec<PointDiagnostic>,
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub parallel: bool,
    pub step: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { parallel: false, step: DIVFORM_STEP }
    }
}

pub fn verify_surface(surface: &InvariantSurface, n_samples: usize, tol: f64) -> Result<VerificationReport> {
    let g = as_graph(surface)?;
    verify_graph(&g, surface.tau, n_samples, tol, &VerifyOptions::default())
}

/// Samples `n_samples` Halton points of the graph's sampling region and
/// checks both operators there. The report does not depend on evaluation
/// order.
pub fn verify_graph(
    u: &dyn GraphFunction,
    tau: Tau,
    n_samples: usize,
    tol: f64,
    opts: &VerifyOptions,
) -> Result<VerificationReport> {
    if n_samples == 0 {
        return Err(Error::BadParameter("n_samples must be at least 1".into()));
    }
    let probe = |i: usize| -> PointDiagnostic {
        let i = i as u64 + 1;
        let (x, y) = u.sample(halton(i, 2), halton(i, 3)).unwrap_or((f64::NAN, f64::NAN));
        let residual = graph_residual(u, (x, y), tau).map(f64::abs).unwrap_or(f64::INFINITY);
        let mean_curvature = mean_curvature_divform(u, (x, y), tau, Model::HalfSpace, opts.step)
            .map(f64::abs)
            .unwrap_or(f64::INFINITY);
        PointDiagnostic { x, y, residual, mean_curvature }
    };
    let mut diags: Vec<PointDiagnostic> = if opts.parallel {
        (0..n_samples).into_par_iter().map(probe).collect()
    } else {
        (0..n_samples).map(probe).collect()
    };
    let max_residual = diags.iter().fold(0.0f64, |m, d| m.max(d.residual));
    let max_h = diags.iter().fold(0.0f64, |m, d| m.max(d.mean_curvature));
    diags.sort_by(|a, b| b.residual.total_cmp(&a.residual).then(a.x.total_cmp(&b.x)).then(a.y.total_cmp(&b.y)));
    diags.truncate(WORST_POINTS);
    Ok(VerificationReport {
        surface: u.label(),
        tau: tau.value(),
        n_samples,
        max_residual,
        max_h,
        pass: max_residual < tol && max_h < tol.max(DIVFORM_FLOOR),
        worst_points: diags,
    })
}

/// Largest entry of Dfᵀ·g_target·Df − g_source over Halton samples of a
/// fixed region of the source model (|x| ≤ 2, 0.2 ≤ y ≤ 3 in the half-space;
/// radius ≤ 0.8 in the cylinder; |t| ≤ 3).
pub fn verify_isometry(map: impl Fn(&Point3) -> Result<Point3>, source: Model, tau: Tau, n_samples: usize) -> Result<f64> {
    let mut worst = 0.0f64;
    for i in 1..=n_samples as u64 {
        let (a, b, c) = (halton(i, 2), halton(i, 3), halton(i, 5));
        let p = match source {
            Model::HalfSpace => Point3::half(-2.0 + 4.0 * a, 0.2 + 2.8 * b, -3.0 + 6.0 * c),
            Model::Cylinder => {
                let r = 0.8 * a.sqrt();
                let th = 2.0 * std::f64::consts::PI * b;
                Point3::cyl(r * th.cos(), r * th.sin(), -3.0 + 6.0 * c)
            }
        };
        let image = map(&p)?;
        let h = 1e-3 * match source {
            Model::HalfSpace => p.y.min(1.0),
            Model::Cylinder => 1.0 - (p.x * p.x + p.y * p.y).sqrt(),
        };
        let jac = fd_jacobian3_o4(
            |c| map(&Point3::with_coords(source, c)).map(|q| q.coords()).unwrap_or([f64::NAN; 3]),
            p.coords(),
            h,
        );
        let pulled = metric_at(&image, tau)?.pullback(&jac);
        let dev = pulled.max_abs_diff(&metric_at(&p, tau)?);
        if dev.is_nan() {
            return Ok(f64::INFINITY);
        }
        worst = worst.max(dev);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::to_cylinder;
    use crate::surfaces::{ClosureGraph, Family, Sheet};

    fn closure(name: &str, f: impl Fn(Jet2, Jet2) -> Jet2 + Send + Sync + 'static) -> ClosureGraph<impl Fn(Jet2, Jet2) -> Jet2 + Send + Sync> {
        ClosureGraph::new(name, f, (-3.0, 3.0), (0.05, 5.0))
    }

    #[test]
    fn gradient_examples() {
        let u = closure("x^2+y", |x, y| x * x + y);
        let g = generalized_gradient(&u, (0.5, 2.0), Tau::ZERO, Model::HalfSpace).unwrap();
        assert_eq!(g.covector, (1.0, 1.0));
        let lin = closure("lx", |x, _| x * 2.5);
        let g = generalized_gradient(&lin, (0.1, 0.3), Tau::ZERO, Model::HalfSpace).unwrap();
        assert_eq!(g.covector, (2.5, 0.0));
        let c = ClosureGraph::new("const", |_, _| Jet2::constant(1.0), (-1.0, 1.0), (-1.0, 1.0));
        let g = generalized_gradient(&c, (0.3, 0.2), Tau::HALF, Model::Cylinder).unwrap();
        let lam = 2.0 / (1.0 - 0.13);
        assert!((g.vector.0 - 2.0 * 0.5 * 0.2 / lam).abs() < 1e-15);
        assert!((g.vector.1 + 2.0 * 0.5 * 0.3 / lam).abs() < 1e-15);
    }

    #[test]
    fn residual_basics() {
        let zero = closure("0", |_, _| Jet2::constant(0.0));
        let lin = closure("lx", |x, _| x * -1.7);
        for tau in [0.0, 0.5, 3.0] {
            let t = Tau::new(tau).unwrap();
            assert_eq!(graph_residual(&zero, (0.3, 0.9), t).unwrap(), 0.0);
            assert!(graph_residual(&lin, (0.3, 0.9), t).unwrap().abs() < 1e-14);
        }
        let s = InvariantSurface::new(Family::SlabBigraph { d: 1.0 }, Sheet::Plus, Tau::HALF).unwrap();
        let g = as_graph(&s).unwrap();
        assert!(graph_residual(&g, (0.5, 0.6), Tau::HALF).unwrap().abs() < 1e-10);
    }

    #[test]
    fn partials_match_differences() {
        let d0 = [0.3, -1.2, 0.7, 0.25, -0.4];
        let (y, tau) = (0.8, 0.6);
        let an = residual_partials(y, d0, tau);
        for k in 0..5 {
            let h = 1e-6;
            let mut p = d0;
            let mut m = d0;
            p[k] += h;
            m[k] -= h;
            let fd = (residual_from_derivatives(y, p, tau) - residual_from_derivatives(y, m, tau)) / (2.0 * h);
            assert!((fd - an[k]).abs() < 1e-7, "partial {k}: {fd} vs {}", an[k]);
        }
    }

    #[test]
    fn divform_examples() {
        let zero = closure("0", |_, _| Jet2::constant(0.0));
        assert!(mean_curvature_divform(&zero, (0.0, 1.0), Tau::HALF, Model::HalfSpace, 1e-4).unwrap().abs() < 1e-12);
        let s = InvariantSurface::new(Family::SlabBigraph { d: 1.0 }, Sheet::Plus, Tau::ZERO).unwrap();
        let g = as_graph(&s).unwrap();
        assert!(mean_curvature_divform(&g, (0.0, 0.5), Tau::ZERO, Model::HalfSpace, 1e-4).unwrap().abs() < 1e-6);
        let bowl = closure("y^2", |_, y| y * y);
        assert!(mean_curvature_divform(&bowl, (0.0, 1.0), Tau::ZERO, Model::HalfSpace, 1e-4).unwrap().abs() > 1e-2);
    }

    #[test]
    fn cylinder_graph_through_transport() {
        // The slice {t = 0} of the half-space, written in the cylinder.
        let tau = Tau::new(0.8).unwrap();
        let k = 4.0 * tau.value();
        let cyl = ClosureGraph::on_disk("slice image", move |x, y| (y / (x * -1.0 + 1.0)).atan() * k);
        for p in [(0.3, 0.7), (-0.5, 0.2)] {
            let q = to_cylinder(&Point3::half(p.0, p.1, 0.0), tau).unwrap();
            assert!((cyl.jet(q.x, q.y).unwrap().v - q.t).abs() < 1e-12);
        }
        let view = HalfSpaceView { inner: &cyl, tau };
        for p in [(0.3, 0.7), (-1.0, 2.0)] {
            let j = view.jet(p.0, p.1).unwrap();
            assert!(j.v.abs() < 1e-12 && j.dx.abs() < 1e-12 && j.dyy.abs() < 1e-11, "{j:?}");
        }
        // a graph with nonzero curvature survives the transport unchanged in H
        let bump = ClosureGraph::on_disk("bump", |x, y| x * x + y * 0.3);
        let v = HalfSpaceView { inner: &bump, tau };
        let p = (0.2, 1.3);
        let q = to_cylinder(&Point3::half(p.0, p.1, 0.0), tau).unwrap();
        let hh = mean_curvature_divform(&v, p, tau, Model::HalfSpace, 1e-4).unwrap();
        let hc = mean_curvature_divform(&bump, (q.x, q.y), tau, Model::Cylinder, 1e-4).unwrap();
        assert!((hh - hc).abs() < 1e-6, "{hh} vs {hc}");
    }

    #[test]
    fn non_solution_fails() {
        let bowl = closure("y^2", |_, y| y * y);
        let r = verify_graph(&bowl, Tau::ZERO, 20, 1e-8, &VerifyOptions::default()).unwrap();
        assert!(!r.pass);
    }

    #[test]
    fn isometry_controls() {
        let id = verify_isometry(|p| Ok(*p), Model::HalfSpace, Tau::HALF, 20).unwrap();
        assert!(id < 1e-9, "{id}");
        let stretch = verify_isometry(|p| Ok(Point3::half(2.0 * p.x, p.y, p.t)), Model::HalfSpace, Tau::HALF, 20).unwrap();
        assert!(stretch > 1e-1);
        let phi = verify_isometry(|p| to_cylinder(p, Tau::HALF), Model::HalfSpace, Tau::HALF, 50).unwrap();
        assert!(phi < 1e-7, "{phi}");
    }
}
