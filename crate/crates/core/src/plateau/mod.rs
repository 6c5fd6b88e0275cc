//! Dirichlet problem for the half-space minimal graph equation on a
//! rectangle: centred differences, damped Newton, banded direct solves.

mod banded;
mod spline;

use std::fmt;
use std::io::Write;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use banded::BandedMatrix;
pub use spline::{Bicubic, Spline1};

use crate::error::{Error, Result};
use crate::geometry::Tau;
use crate::minimality::{residual_from_derivatives, residual_partials};
use crate::surfaces::{as_graph, Family, GraphFunction, InvariantSurface, Sheet};

pub const MIN_NODES: usize = 8;
const MAX_HALVINGS: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

pub type BoundaryFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

#[derive(Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum BoundaryData {
    /// Trace of an invariant surface; also serves as the exact solution.
    Family {
        #[serde(flatten)]
        family: Family,
        sheet: Sheet,
    },
    /// t = slope·x + offset
    Plane { slope: f64, offset: f64 },
    Constant { value: f64 },
    /// Perimeter values counter-clockwise from (x0, y0): bottom row left to
    /// right, right column upwards, top row right to left, left column down.
    Tabulated { values: Vec<f64> },
    #[serde(skip)]
    Custom(BoundaryFn),
}

impl fmt::Debug for BoundaryData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundaryData::Family { family, sheet } => write!(f, "Family({family:?}, {sheet:?})"),
            BoundaryData::Plane { slope, offset } => write!(f, "Plane({slope}, {offset})"),
            BoundaryData::Constant { value } => write!(f, "Constant({value})"),
            BoundaryData::Tabulated { values } => write!(f, "Tabulated({} values)", values.len()),
            BoundaryData::Custom(_) => write!(f, "Custom"),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridProblem {
    pub domain: Rect,
    pub nx: usize,
    pub ny: usize,
    pub tau: Tau,
    pub boundary: BoundaryData,
}

impl GridProblem {
    pub fn validate(&self) -> Result<()> {
        let d = self.domain;
        if self.nx < MIN_NODES || self.ny < MIN_NODES {
            return Err(Error::BadParameter(format!("grid must be at least {MIN_NODES}x{MIN_NODES}, got {}x{}", self.nx, self.ny)));
        }
        if !(d.y0 > 0.0 && d.y1 > d.y0 && d.x1 > d.x0 && d.x1.is_finite() && d.x0.is_finite() && d.y1.is_finite()) {
            return Err(Error::BadParameter(format!("bad domain {d:?}; need x0 < x1 and 0 < y0 < y1")));
        }
        if let BoundaryData::Tabulated { values } = &self.boundary {
            let want = 2 * (self.nx + self.ny) - 4;
            if values.len() != want {
                return Err(Error::BadParameter(format!("tabulated boundary needs {want} values, got {}", values.len())));
            }
        }
        Ok(())
    }

    pub fn from_toml_str(s: &str) -> Result<Self> {
        let p: GridProblem = toml::from_str(s).map_err(|e| Error::Parse {
            line: e.span().map(|sp| s[..sp.start].lines().count().max(1)).unwrap_or(0),
            message: e.message().to_string(),
        })?;
        p.validate()?;
        Ok(p)
    }

    pub fn with_resolution(&self, nx: usize, ny: usize) -> Self {
        GridProblem { nx, ny, ..self.clone() }
    }

    pub fn hx(&self) -> f64 {
        (self.domain.x1 - self.domain.x0) / (self.nx - 1) as f64
    }

    pub fn hy(&self) -> f64 {
        (self.domain.y1 - self.domain.y0) / (self.ny - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        if i == self.nx - 1 {
            self.domain.x1
        } else {
            self.domain.x0 + i as f64 * self.hx()
        }
    }

    pub fn y(&self, j: usize) -> f64 {
        if j == self.ny - 1 {
            self.domain.y1
        } else {
            self.domain.y0 + j as f64 * self.hy()
        }
    }

    fn perimeter_index(&self, i: usize, j: usize) -> usize {
        let (nx, ny) = (self.nx, self.ny);
        if j == 0 {
            i
        } else if i == nx - 1 {
            nx - 1 + j
        } else if j == ny - 1 {
            nx - 1 + ny - 1 + (nx - 1 - i)
        } else {
            2 * (nx - 1) + ny - 1 + (ny - 1 - j)
        }
    }

    /// The exact solution when the boundary data come from one.
    pub fn exact(&self) -> Result<Option<Box<dyn Fn(f64, f64) -> Result<f64> + Send + Sync>>> {
        Ok(match &self.boundary {
            BoundaryData::Family { family, sheet } => {
                let g = as_graph(&InvariantSurface::new(*family, *sheet, self.tau)?)?;
                Some(Box::new(move |x, y| g.value(x, y)))
            }
            BoundaryData::Plane { slope, offset } => {
                let (l, k) = (*slope, *offset);
                Some(Box::new(move |x, _| Ok(l * x + k)))
            }
            BoundaryData::Constant { value } => {
                let v = *value;
                Some(Box::new(move |_, _| Ok(v)))
            }
            _ => None,
        })
    }

    /// Node values with the boundary filled in and zeros inside.
    fn boundary_grid(&self) -> Result<Vec<f64>> {
        let (nx, ny) = (self.nx, self.ny);
        let mut u = vec![0.0; nx * ny];
        let exact = self.exact()?;
        for j in 0..ny {
            for i in 0..nx {
                if !(i == 0 || j == 0 || i == nx - 1 || j == ny - 1) {
                    continue;
                }
                let (x, y) = (self.x(i), self.y(j));
                let v = match (&self.boundary, &exact) {
                    (BoundaryData::Tabulated { values }, _) => values[self.perimeter_index(i, j)],
                    (BoundaryData::Custom(f), _) => f(x, y),
                    (_, Some(e)) => e(x, y).map_err(|_| Error::BadBoundary { x, y })?,
                    _ => unreachable!(),
                };
                if !v.is_finite() {
                    return Err(Error::BadBoundary { x, y });
                }
                u[j * nx + i] = v;
            }
        }
        Ok(u)
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SolveOptions {
    pub tol: f64,
    pub max_iter: usize,
    #[serde(default)]
    pub parallel: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { tol: 1e-10, max_iter: 50, parallel: false }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GridSolution {
    pub domain: Rect,
    pub nx: usize,
    pub ny: usize,
    pub tau: f64,
    /// `values[j * nx + i]` at (x_i, y_j)
    pub values: Vec<f64>,
    pub iterations: usize,
    /// max-norm residual after each Newton step, starting with the initial guess
    pub residual_trace: Vec<f64>,
    pub max_residual: f64,
}

impl GridSolution {
    pub fn node(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.nx + i]
    }

    pub fn coords(&self, i: usize, j: usize) -> (f64, f64) {
        let d = self.domain;
        let x = if i == self.nx - 1 { d.x1 } else { d.x0 + i as f64 * (d.x1 - d.x0) / (self.nx - 1) as f64 };
        let y = if j == self.ny - 1 { d.y1 } else { d.y0 + j as f64 * (d.y1 - d.y0) / (self.ny - 1) as f64 };
        (x, y)
    }

    pub fn interpolant(&self) -> Result<Bicubic> {
        let d = self.domain;
        Bicubic::new((d.x0, d.x1, d.y0, d.y1), self.nx, self.ny, &self.values)
    }

    pub fn write_csv(&self, mut out: impl Write) -> Result<()> {
        writeln!(out, "x,y,u")?;
        for j in 0..self.ny {
            for i in 0..self.nx {
                let (x, y) = self.coords(i, j);
                writeln!(out, "{:.16e},{:.16e},{:.16e}", x, y, self.node(i, j))?;
            }
        }
        Ok(())
    }

    pub fn write_obj(&self, out: impl Write) -> Result<()> {
        let mesh = crate::mesh::Mesh::grid(self.nx, self.ny, |i, j| {
            let (x, y) = self.coords(i, j);
            Some([x, y, self.node(i, j)])
        });
        mesh.write_obj(out)
    }
}

struct Stencil {
    residual: f64,
    /// coefficients on the 3×3 neighbourhood, index (dj + 1) * 3 + (di + 1)
    coeffs: [f64; 9],
}

fn stencil_at(p: &GridProblem, u: &[f64], i: usize, j: usize) -> Stencil {
    let nx = p.nx;
    let (hx, hy) = (p.hx(), p.hy());
    let at = |di: isize, dj: isize| u[(j as isize + dj) as usize * nx + (i as isize + di) as usize];
    let d = [
        (at(1, 0) - at(-1, 0)) / (2.0 * hx),
        (at(0, 1) - at(0, -1)) / (2.0 * hy),
        (at(1, 0) - 2.0 * at(0, 0) + at(-1, 0)) / (hx * hx),
        (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4.0 * hx * hy),
        (at(0, 1) - 2.0 * at(0, 0) + at(0, -1)) / (hy * hy),
    ];
    let (y, tau) = (p.y(j), p.tau.value());
    let pd = residual_partials(y, d, tau);
    let mut c = [0.0; 9];
    let cross = pd[3] / (4.0 * hx * hy);
    c[3] = -pd[0] / (2.0 * hx) + pd[2] / (hx * hx);
    c[5] = pd[0] / (2.0 * hx) + pd[2] / (hx * hx);
    c[1] = -pd[1] / (2.0 * hy) + pd[4] / (hy * hy);
    c[7] = pd[1] / (2.0 * hy) + pd[4] / (hy * hy);
    c[4] = -2.0 * pd[2] / (hx * hx) - 2.0 * pd[4] / (hy * hy);
    c[8] = cross;
    c[0] = cross;
    c[2] = -cross;
    c[6] = -cross;
    Stencil { residual: residual_from_derivatives(y, d, tau), coeffs: c }
}

fn interior_nodes(p: &GridProblem) -> Vec<(usize, usize)> {
    (1..p.ny - 1).flat_map(|j| (1..p.nx - 1).map(move |i| (i, j))).collect()
}

fn stencils(p: &GridProblem, u: &[f64], parallel: bool) -> Vec<Stencil> {
    let nodes = interior_nodes(p);
    if parallel {
        nodes.par_iter().map(|&(i, j)| stencil_at(p, u, i, j)).collect()
    } else {
        nodes.iter().map(|&(i, j)| stencil_at(p, u, i, j)).collect()
    }
}

/// Residuals only (the Jacobian is skipped by reusing `stencils` would be
/// wasteful inside the line search).
fn residuals(p: &GridProblem, u: &[f64], parallel: bool) -> Vec<f64> {
    let f = |&(i, j): &(usize, usize)| {
        let nx = p.nx;
        let (hx, hy) = (p.hx(), p.hy());
        let at = |di: isize, dj: isize| u[(j as isize + dj) as usize * nx + (i as isize + di) as usize];
        let d = [
            (at(1, 0) - at(-1, 0)) / (2.0 * hx),
            (at(0, 1) - at(0, -1)) / (2.0 * hy),
            (at(1, 0) - 2.0 * at(0, 0) + at(-1, 0)) / (hx * hx),
            (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4.0 * hx * hy),
            (at(0, 1) - 2.0 * at(0, 0) + at(0, -1)) / (hy * hy),
        ];
        residual_from_derivatives(p.y(j), d, p.tau.value())
    };
    let nodes = interior_nodes(p);
    if parallel {
        nodes.par_iter().map(f).collect()
    } else {
        nodes.iter().map(f).collect()
    }
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Assembles the banded system for the interior unknowns from per-node
/// stencils; boundary neighbours are dropped (their values are fixed).
fn assemble(p: &GridProblem, st: &[Stencil]) -> BandedMatrix {
    let m = p.nx - 2;
    let n = m * (p.ny - 2);
    let mut a = BandedMatrix::zeros(n, m + 1, m + 1);
    for (row, s) in st.iter().enumerate() {
        let (ri, rj) = (row % m + 1, row / m + 1);
        for dj in -1isize..=1 {
            for di in -1isize..=1 {
                let (i, j) = ((ri as isize + di) as usize, (rj as isize + dj) as usize);
                if i == 0 || j == 0 || i == p.nx - 1 || j == p.ny - 1 {
                    continue;
                }
                let col = (j - 1) * m + (i - 1);
                a.add(row, col, s.coeffs[((dj + 1) * 3 + di + 1) as usize]);
            }
        }
    }
    a
}

/// Discrete Laplace solution with the problem's boundary data.
pub fn harmonic_initial_guess(p: &GridProblem) -> Result<Vec<f64>> {
    p.validate()?;
    let mut u = p.boundary_grid()?;
    let (nx, ny) = (p.nx, p.ny);
    let m = nx - 2;
    let n = m * (ny - 2);
    let (ax, ay) = (1.0 / (p.hx() * p.hx()), 1.0 / (p.hy() * p.hy()));
    let mut a = BandedMatrix::zeros(n, m, m);
    let mut b = vec![0.0; n];
    for (row, (i, j)) in interior_nodes(p).into_iter().enumerate() {
        a.add(row, row, -2.0 * (ax + ay));
        for (di, dj, w) in [(-1isize, 0isize, ax), (1, 0, ax), (0, -1, ay), (0, 1, ay)] {
            let (ii, jj) = ((i as isize + di) as usize, (j as isize + dj) as usize);
            if ii == 0 || jj == 0 || ii == nx - 1 || jj == ny - 1 {
                b[row] -= w * u[jj * nx + ii];
            } else {
                a.add(row, (jj - 1) * m + ii - 1, w);
            }
        }
    }
    a.solve(&mut b)?;
    for (row, (i, j)) in interior_nodes(p).into_iter().enumerate() {
        u[j * nx + i] = b[row];
    }
    Ok(u)
}

pub fn solve(p: &GridProblem, opts: &SolveOptions) -> Result<GridSolution> {
    if !(opts.tol > 1e-12 && opts.tol < 1e-4) {
        return Err(Error::BadParameter(format!("tol {} outside (1e-12, 1e-4)", opts.tol)));
    }
    let mut u = harmonic_initial_guess(p)?;
    let nx = p.nx;
    let m = nx - 2;
    let mut res = residuals(p, &u, opts.parallel);
    let mut trace = vec![max_abs(&res)];
    let mut iterations = 0;
    while max_abs(&res) >= opts.tol {
        if iterations == opts.max_iter {
            return Err(Error::NewtonDiverged { iterations, trace });
        }
        let st = stencils(p, &u, opts.parallel);
        let a = assemble(p, &st);
        let mut step: Vec<f64> = st.iter().map(|s| -s.residual).collect();
        a.solve(&mut step)?;
        let base = norm2(&res);
        let mut alpha = 1.0;
        let mut accepted = None;
        for _ in 0..=MAX_HALVINGS {
            let mut trial = u.clone();
            for (row, dv) in step.iter().enumerate() {
                trial[(row / m + 1) * nx + row % m + 1] += alpha * dv;
            }
            let r = residuals(p, &trial, opts.parallel);
            let n2 = norm2(&r);
            if n2.is_finite() && n2 < base {
                accepted = Some((trial, r));
                break;
            }
            alpha *= 0.5;
        }
        iterations += 1;
        match accepted {
            Some((trial, r)) => {
                u = trial;
                res = r;
                trace.push(max_abs(&res));
            }
            None => return Err(Error::NewtonDiverged { iterations, trace }),
        }
    }
    Ok(GridSolution {
        domain: p.domain,
        nx: p.nx,
        ny: p.ny,
        tau: p.tau.value(),
        max_residual: max_abs(&res),
        values: u,
        iterations,
        residual_trace: trace,
    })
}

/// Largest nodal deviation from the exact solution attached to the problem.
pub fn max_node_error(p: &GridProblem, sol: &GridSolution) -> Result<f64> {
    let exact = p.exact()?.ok_or_else(|| Error::BadParameter("problem has no exact solution attached".into()))?;
    let mut worst = 0.0f64;
    for j in 0..p.ny {
        for i in 0..p.nx {
            let (x, y) = sol.coords(i, j);
            worst = worst.max((sol.node(i, j) - exact(x, y)?).abs());
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub h: f64,
    pub max_error: f64,
    /// log₂ of the error ratio against the previous, coarser level
    pub observed_order: Option<f64>,
}

/// Solves on n = 16·2^k + 1 nodes per side starting from `n0`, halving the
/// mesh width `levels − 1` times.
pub fn convergence_study(template: &GridProblem, n0: usize, levels: usize, opts: &SolveOptions) -> Result<Vec<ConvergenceRow>> {
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(levels);
    let mut n = n0;
    for _ in 0..levels {
        let p = template.with_resolution(n, n);
        let sol = solve(&p, opts)?;
        let e = max_node_error(&p, &sol)?;
        let order = rows.last().map(|r: &ConvergenceRow| (r.max_error / e).log2());
        rows.push(ConvergenceRow { n, h: p.hx(), max_error: e, observed_order: order });
        n = 2 * n - 1;
    }
    Ok(rows)
}

/// max |Eq. residual| of the bicubic interpolant at Halton points strictly
/// between nodes.
pub fn off_node_residual(sol: &GridSolution, n_samples: usize) -> Result<f64> {
    let g = sol.interpolant()?;
    let tau = Tau::new(sol.tau)?;
    let mut worst = 0.0f64;
    for k in 1..=n_samples as u64 {
        let (x, y) = g.sample(crate::numerics::halton(k, 2), crate::numerics::halton(k, 3)).unwrap();
        worst = worst.max(crate::minimality::graph_residual(&g, (x, y), tau)?.abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(boundary: BoundaryData, n: usize, tau: f64) -> GridProblem {
        GridProblem {
            domain: Rect { x0: -1.0, x1: 1.0, y0: 0.2, y1: 0.8 },
            nx: n,
            ny: n,
            tau: Tau::new(tau).unwrap(),
            boundary,
        }
    }

    #[test]
    fn constant_and_plane_exact() {
        for b in [BoundaryData::Constant { value: 2.5 }, BoundaryData::Plane { slope: -1.3, offset: 0.4 }] {
            let p = unit(b, 17, 0.5);
            let s = solve(&p, &SolveOptions::default()).unwrap();
            assert!(max_node_error(&p, &s).unwrap() < 1e-10);
        }
    }

    #[test]
    fn slab_second_order() {
        let b = BoundaryData::Family { family: Family::SlabBigraph { d: 1.0 }, sheet: Sheet::Plus };
        let rows = convergence_study(&unit(b, 17, 0.5), 17, 3, &SolveOptions::default()).unwrap();
        for r in &rows[1..] {
            let o = r.observed_order.unwrap();
            assert!((1.8..=2.2).contains(&o), "{rows:?}");
        }
    }

    #[test]
    fn tabulated_matches_custom() {
        let f = |x: f64, y: f64| 0.3 * x + y * y;
        let p = unit(BoundaryData::Custom(Arc::new(f)), 9, 0.0);
        let u = p.boundary_grid().unwrap();
        let mut vals = vec![0.0; 2 * (9 + 9) - 4];
        for j in 0..9 {
            for i in 0..9 {
                if i == 0 || j == 0 || i == 8 || j == 8 {
                    vals[p.perimeter_index(i, j)] = u[j * 9 + i];
                }
            }
        }
        let q = unit(BoundaryData::Tabulated { values: vals }, 9, 0.0);
        assert_eq!(q.boundary_grid().unwrap(), u);
    }

    #[test]
    fn rejects_nonfinite_boundary() {
        let p = unit(BoundaryData::Custom(Arc::new(|x, _| if x > 0.9 { f64::NAN } else { 0.0 })), 9, 0.0);
        assert!(matches!(solve(&p, &SolveOptions::default()), Err(Error::BadBoundary { .. })));
        let p = unit(BoundaryData::Custom(Arc::new(|x, _| if x > 0.9 { f64::INFINITY } else { 0.0 })), 9, 0.0);
        assert!(matches!(solve(&p, &SolveOptions::default()), Err(Error::BadBoundary { .. })));
    }

    #[test]
    fn toml_roundtrip() {
        let text = r#"
nx = 17
ny = 17
tau = 0.5

[domain]
x0 = -1.0
x1 = 1.0
y0 = 0.2
y1 = 0.8

[boundary]
kind = "family"
family = "tilted"
d = 1.0
l = 1.0
sheet = "plus"
"#;
        let p = GridProblem::from_toml_str(text).unwrap();
        assert!(matches!(p.boundary, BoundaryData::Family { family: Family::Tilted { .. }, sheet: Sheet::Plus }));
        let back = toml::to_string(&p).unwrap();
        let q = GridProblem::from_toml_str(&back).unwrap();
        assert_eq!(format!("{:?}", q), format!("{:?}", p));
        assert!(GridProblem::from_toml_str("nx = 3").is_err());
    }
}
