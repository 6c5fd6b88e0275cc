//! Competitor annuli spanned by catenoid-like graphs between two horizontal
//! disks, and the area comparison that decides whether an area-minimizing
//! annulus exists (Douglas criterion).

use std::cell::RefCell;
use std::f64::consts::PI;
use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::Tau;
use crate::numerics::{bisect, compensated_sum, integrate, integrate_smooth, Abscissa, SingularIntegral};

const INNER_RTOL: f64 = 1e-11;
const OUTER_RTOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnnulusSpec {
    /// Neck radius.
    pub rho_bar: f64,
    /// Outer radius of the spanning disks.
    pub rho: f64,
    pub tau: Tau,
}

impl AnnulusSpec {
    pub fn new(rho_bar: f64, rho: f64, tau: Tau) -> Result<Self> {
        if !(rho_bar > 0.0 && rho > rho_bar && rho.is_finite()) {
            return Err(Error::BadParameter(format!("need 0 < rho_bar < rho, got rho_bar={rho_bar}, rho={rho}")));
        }
        Ok(AnnulusSpec { rho_bar, rho, tau })
    }
}

/// Area of the horizontal disk of hyperbolic radius `rho`.
pub fn disk_area(rho: f64, tau: Tau) -> Result<f64> {
    if !(rho >= 0.0) || !rho.is_finite() {
        return Err(Error::BadParameter(format!("disk radius must be finite and >= 0, got {rho}")));
    }
    // cosh ρ − 1 = 2 sinh²(ρ/2)
    let s = (0.5 * rho).sinh();
    Ok(4.0 * PI * tau.sqrt_k() * s * s)
}

fn slope_at(r_from_neck: f64, r: f64, rho_bar: f64) -> f64 {
    rho_bar.sinh() / (r_from_neck.sinh() * (r + rho_bar).sinh()).sqrt()
}

/// dU/dr: sinh ρ̄ / √(sinh²r − sinh²ρ̄).
pub fn catenoid_profile_slope(r: f64, rho_bar: f64) -> f64 {
    slope_at(r - rho_bar, r, rho_bar)
}

/// U(r) = ∫_{ρ̄}^{r} sinh ρ̄ / √(sinh²s − sinh²ρ̄) ds, the height of the
/// ℍ²×ℝ catenoid with neck radius ρ̄. `r = +∞` is allowed.
pub fn catenoid_profile_u(r: f64, spec: &AnnulusSpec) -> Result<f64> {
    let rb = spec.rho_bar;
    if r.is_nan() || r < rb {
        return Err(Error::BadParameter(format!("profile needs r >= rho_bar, got {r}")));
    }
    if r == rb {
        return Ok(0.0);
    }
    let f = |p: Abscissa| slope_at(p.from_lo, p.x, rb);
    Ok(integrate(&SingularIntegral::new(f, rb, r).singular_lo(), 1e-12)?.value)
}

/// v(θ) = 4τ·arctan(T sin θ / (1 − T cos θ)), T = tanh(ρ/2).
pub fn angular_shift_v(theta: f64, rho: f64, tau: Tau) -> f64 {
    let t = (0.5 * rho).tanh();
    let one_minus_t = 2.0 / (rho.exp() + 1.0);
    let s = (0.5 * theta).sin();
    4.0 * tau.value() * (t * theta.sin() / (one_minus_t + 2.0 * t * s * s)).atan()
}

pub fn angular_shift_v_prime(theta: f64, rho: f64, tau: Tau) -> f64 {
    let t = (0.5 * rho).tanh();
    let one_minus_t = 2.0 / (rho.exp() + 1.0);
    let s2 = (0.5 * theta).sin().powi(2);
    // cos θ − T = (1 − T) − 2 sin²(θ/2);  1 − 2T cos θ + T² = (1 − T)² + 4T sin²(θ/2)
    4.0 * tau.value() * t * (one_minus_t - 2.0 * s2) / (one_minus_t * one_minus_t + 4.0 * t * s2)
}

/// Radial integral of the area element W at fixed v'(θ).
fn radial_area(spec: &AnnulusSpec, v_prime: f64) -> Result<f64> {
    let (rb, tau) = (spec.rho_bar, spec.tau.value().abs());
    let sk = spec.tau.sqrt_k();
    let w = |p: Abscissa| {
        let sh = p.x.sinh();
        let up = sk * slope_at(p.from_lo, p.x, rb);
        let vert = v_prime - 4.0 * tau * (0.5 * p.x).sinh().powi(2);
        (sh * sh * (up * up + 1.0) + vert * vert).sqrt()
    };
    Ok(integrate(&SingularIntegral::new(w, rb, spec.rho).singular_lo(), INNER_RTOL)?.value)
}

/// Breakpoints of the θ-integrand on [0, π]: v' peaks in a window of width
/// ~(1 − T) around 0 and changes sign near 2e^{−ρ/2}.
fn theta_breaks(rho: f64) -> Vec<f64> {
    let one_minus_t = 2.0 / (rho.exp() + 1.0);
    let mut b = vec![0.0];
    for x in [0.25 * one_minus_t, one_minus_t, 4.0 * one_minus_t, 2.0 * (0.5 * one_minus_t).sqrt().asin()] {
        if x > *b.last().unwrap() && x < PI {
            b.push(x);
        }
    }
    b.push(PI);
    b
}

#[derive(Debug, Clone, Copy)]
pub struct AreaOptions {
    pub parallel: bool,
}

impl Default for AreaOptions {
    fn default() -> Self {
        AreaOptions { parallel: false }
    }
}

/// Area of the full annulus (both ± sheets over θ ∈ [0, 2π)).
pub fn annulus_area(spec: &AnnulusSpec) -> Result<f64> {
    annulus_area_with(spec, &AreaOptions::default())
}

pub fn annulus_area_with(spec: &AnnulusSpec, opts: &AreaOptions) -> Result<f64> {
    // τ < 0 is the mirror image; the area only sees |τ|.
    let tau = Tau::new(spec.tau.value().abs())?;
    let breaks = theta_breaks(spec.rho);
    let piece = |i: usize| -> Result<f64> {
        let inner_err = RefCell::new(None);
        let q = integrate_smooth(
            |th| match radial_area(spec, angular_shift_v_prime(th, spec.rho, tau)) {
                Ok(v) => v,
                Err(e) => {
                    inner_err.borrow_mut().get_or_insert(e);
                    f64::NAN
                }
            },
            breaks[i],
            breaks[i + 1],
            OUTER_RTOL,
        );
        if let Some(e) = inner_err.into_inner() {
            return Err(e);
        }
        Ok(q?.value)
    };
    let idx: Vec<usize> = (0..breaks.len() - 1).collect();
    let parts: Vec<Result<f64>> =
        if opts.parallel { idx.par_iter().map(|&i| piece(i)).collect() } else { idx.iter().map(|&i| piece(i)).collect() };
    let parts = parts.into_iter().collect::<Result<Vec<f64>>>()?;
    // v' is even about θ = 0 (mod 2π); two sheets.
    Ok(4.0 * compensated_sum(parts))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DouglasCheck {
    pub holds: bool,
    /// 2·Area(disk) − Area(annulus)
    pub margin: f64,
    pub area_disk: f64,
    pub area_annulus: f64,
}

pub fn douglas_check(spec: &AnnulusSpec) -> Result<DouglasCheck> {
    douglas_check_with(spec, &AreaOptions::default())
}

pub fn douglas_check_with(spec: &AnnulusSpec, opts: &AreaOptions) -> Result<DouglasCheck> {
    let area_disk = disk_area(spec.rho, spec.tau)?;
    let area_annulus = annulus_area_with(spec, opts)?;
    let margin = 2.0 * area_disk - area_annulus;
    Ok(DouglasCheck { holds: margin > 0.0, margin, area_disk, area_annulus })
}

/// Vertical distance 2√(1+4τ²)·U(ρ) between the two boundary circles.
pub fn boundary_gap(spec: &AnnulusSpec) -> Result<f64> {
    Ok(2.0 * spec.tau.sqrt_k() * catenoid_profile_u(spec.rho, spec)?)
}

#[derive(Debug, Clone, Serialize)]
pub struct ItemAudit {
    pub holds: bool,
    /// Smallest slack over the grid (positive when the item holds).
    pub worst_margin: f64,
    pub worst_theta: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ShiftAuditReport {
    pub spec: AnnulusSpec,
    pub n_theta: usize,
    /// Radial area integral against 2π√(cosh²ρ − cosh²ρ̄).
    pub integral_bound: ItemAudit,
    /// −2τ < v' ≤ 2τe^ρ − 2τ, with equality only at θ = 0.
    pub global_bounds: ItemAudit,
    /// −2τ < v' < 0 away from θ = 0.
    pub away_from_zero: ItemAudit,
    pub all_hold: bool,
}

/// Grid audit of the three properties of U and v used in the area estimate.
pub fn shift_audit(spec: &AnnulusSpec, n_theta: usize) -> Result<ShiftAuditReport> {
    let tau = spec.tau.value();
    if !(tau > 0.0) {
        return Err(Error::BadParameter("the audit assumes tau > 0".into()));
    }
    if n_theta < 2 {
        return Err(Error::BadParameter("n_theta must be at least 2".into()));
    }
    let (rho, rb) = (spec.rho, spec.rho_bar);

    let lhs = {
        let f = |p: Abscissa| {
            let s = slope_at(p.from_lo, p.x, rb);
            (1.0 + s * s).sqrt() * p.x.sinh()
        };
        2.0 * PI * integrate(&SingularIntegral::new(f, rb, rho).singular_lo(), 1e-12)?.value
    };
    let rhs = 2.0 * PI * ((rho - rb).sinh() * (rho + rb).sinh()).sqrt();
    let integral_bound = ItemAudit { holds: lhs <= rhs, worst_margin: rhs - lhs, worst_theta: None };

    let upper = 2.0 * tau * rho.exp_m1();
    let window = 2.0 * (-0.5 * rho).exp();
    let mut global = (f64::INFINITY, 0.0);
    let mut away = (f64::INFINITY, None);
    for i in 0..n_theta {
        let th = 2.0 * PI * i as f64 / n_theta as f64;
        let vp = angular_shift_v_prime(th, rho, spec.tau);
        let lower_slack = vp + 2.0 * tau;
        let upper_slack = if i == 0 { f64::INFINITY } else { upper - vp };
        let m = lower_slack.min(upper_slack);
        if m < global.0 {
            global = (m, th);
        }
        if th > window && th < 2.0 * PI - window {
            let m = lower_slack.min(-vp);
            if m < away.0 {
                away = (m, Some(th));
            }
        }
    }
    // equality at θ = 0 is part of the statement
    let at_zero = (angular_shift_v_prime(0.0, rho, spec.tau) - upper).abs() <= 1e-12 * upper.max(1.0);
    let global_bounds = ItemAudit { holds: global.0 > 0.0 && at_zero, worst_margin: global.0, worst_theta: Some(global.1) };
    let away_from_zero = ItemAudit { holds: away.0 > 0.0, worst_margin: away.0, worst_theta: away.1 };
    let all_hold = integral_bound.holds && global_bounds.holds && away_from_zero.holds;
    Ok(ShiftAuditReport { spec: *spec, n_theta, integral_bound, global_bounds, away_from_zero, all_hold })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub rho_bar: f64,
    pub rho: f64,
    pub tau: f64,
    pub area_disk: f64,
    pub area_annulus: f64,
    pub margin: f64,
    pub gap: f64,
}

pub fn sweep_row(spec: &AnnulusSpec, opts: &AreaOptions) -> Result<SweepRow> {
    let d = douglas_check_with(spec, opts)?;
    Ok(SweepRow {
        rho_bar: spec.rho_bar,
        rho: spec.rho,
        tau: spec.tau.value(),
        area_disk: d.area_disk,
        area_annulus: d.area_annulus,
        margin: d.margin,
        gap: boundary_gap(spec)?,
    })
}

/// Douglas margins along ρ = ratio·ρ̄.
pub fn douglas_sweep(rho_bars: &[f64], ratio: f64, tau: Tau, opts: &AreaOptions) -> Result<Vec<SweepRow>> {
    rho_bars.iter().map(|&rb| sweep_row(&AnnulusSpec::new(rb, ratio * rb, tau)?, opts)).collect()
}

/// The neck radius above which every swept margin is positive, refined by
/// bisection between the last failing and first passing sample. `None` if
/// the last sample fails or no sample fails.
pub fn douglas_threshold(rows: &[SweepRow], ratio: f64, tau: Tau, tol: f64) -> Result<Option<f64>> {
    let Some(last_bad) = rows.iter().rposition(|r| r.margin <= 0.0) else { return Ok(None) };
    if last_bad + 1 >= rows.len() {
        return Ok(None);
    }
    let (lo, hi) = (rows[last_bad].rho_bar, rows[last_bad + 1].rho_bar);
    let margin = |rb: f64| {
        AnnulusSpec::new(rb, ratio * rb, tau).and_then(|s| douglas_check(&s)).map(|d| d.margin).unwrap_or(f64::NAN)
    };
    Ok(Some(bisect(margin, lo, hi, tol)?))
}

pub fn write_sweep_csv(rows: &[SweepRow], mut out: impl Write) -> Result<()> {
    writeln!(out, "rho_bar,rho,tau,area_disk,area_annulus,margin,gap")?;
    for r in rows {
        writeln!(
            out,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            r.rho_bar, r.rho, r.tau, r.area_disk, r.area_annulus, r.margin, r.gap
        )?;
    }
    Ok(())
}
