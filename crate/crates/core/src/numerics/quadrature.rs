//! Globally adaptive 15-point Gauss–Kronrod quadrature on a substituted
//! variable. Inverse-square-root endpoint singularities are removed by the
//! substitution before any refinement happens.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::Serialize;

use super::substitution::{Abscissa, Substitution};
use crate::error::{Error, Result};

pub const DEFAULT_MAX_EVALS: usize = 1_000_000;
pub const ABS_FLOOR: f64 = 1e-12;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Which ends of the range carry an inverse-square-root singularity.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Endpoints {
    pub lo: bool,
    pub hi: bool,
}

/// An integral ∫ₐᵇ f, with `b` possibly `+∞`.
pub struct SingularIntegral<F> {
    pub integrand: F,
    pub a: f64,
    pub b: f64,
    pub singular_at: Endpoints,
    pub singularity_order: f64,
}

impl<F: Fn(Abscissa) -> f64> SingularIntegral<F> {
    pub fn new(integrand: F, a: f64, b: f64) -> Self {
        SingularIntegral { integrand, a, b, singular_at: Endpoints::default(), singularity_order: 0.5 }
    }

    pub fn singular_lo(mut self) -> Self {
        self.singular_at.lo = true;
        self
    }

    pub fn singular_hi(mut self) -> Self {
        self.singular_at.hi = true;
        self
    }

    pub fn with_order(mut self, order: f64) -> Self {
        self.singularity_order = order;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct QuadratureOptions {
    pub max_evals: usize,
    pub abs_floor: f64,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        QuadratureOptions { max_evals: DEFAULT_MAX_EVALS, abs_floor: ABS_FLOOR }
    }
}

pub fn integrate<F: Fn(Abscissa) -> f64>(spec: &SingularIntegral<F>, rel_tol: f64) -> Result<QuadratureResult> {
    integrate_with(spec, rel_tol, &QuadratureOptions::default())
}

pub fn integrate_with<F: Fn(Abscissa) -> f64>(
    spec: &SingularIntegral<F>,
    rel_tol: f64,
    opts: &QuadratureOptions,
) -> Result<QuadratureResult> {
    if spec.singularity_order != 0.5 {
        return Err(Error::UnsupportedSingularity { order: spec.singularity_order });
    }
    if !(rel_tol > 1e-14 && rel_tol < 1e-2) {
        return Err(Error::BadParameter(format!("rel_tol {rel_tol} outside (1e-14, 1e-2)")));
    }
    if !(spec.a < spec.b) || spec.a.is_nan() {
        return Err(Error::BadParameter(format!("empty range [{}, {}]", spec.a, spec.b)));
    }
    let map = Substitution::for_range(spec.a, spec.b, spec.singular_at.lo, spec.singular_at.hi);
    let g = |s: f64| {
        let (ab, jac) = map.forward(s);
        (spec.integrand)(ab) * jac
    };
    adaptive(&g, 0.0, 1.0, rel_tol, opts, |s| map.forward(s).0.x)
}

/// Convenience for smooth integrands on a finite range.
pub fn integrate_smooth(f: impl Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> Result<QuadratureResult> {
    integrate(&SingularIntegral::new(|p: Abscissa| f(p.x), a, b), rel_tol)
}

/// Adaptive integration of an already-regular function over [lo, hi].
/// `locate` maps a failing abscissa back to user coordinates for errors.
pub(crate) fn adaptive(
    g: &dyn Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    rel_tol: f64,
    opts: &QuadratureOptions,
    locate: impl Fn(f64) -> f64,
) -> Result<QuadratureResult> {
    let mut evals = 0usize;
    let first = gk15(g, lo, hi, &mut evals).map_err(|s| Error::NonFinite { at: locate(s) })?;
    let mut heap = BinaryHeap::new();
    let mut done: Vec<Segment> = Vec::new();
    let mut total = first.value;
    let mut total_err = first.error;
    heap.push(first);

    loop {
        let tol = (rel_tol * total.abs()).max(opts.abs_floor);
        if total_err <= tol {
            break;
        }
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        let too_narrow = !(mid > worst.a && mid < worst.b)
            || (worst.b - worst.a) < 64.0 * f64::EPSILON * worst.a.abs().max(worst.b.abs());
        if too_narrow || worst.at_roundoff {
            // Can't refine further in double precision.
            done.push(worst);
            continue;
        }
        if evals + 30 > opts.max_evals {
            return Err(Error::NoConvergence { evaluations: evals, error_estimate: total_err });
        }
        let left = gk15(g, worst.a, mid, &mut evals).map_err(|s| Error::NonFinite { at: locate(s) })?;
        let right = gk15(g, mid, worst.b, &mut evals).map_err(|s| Error::NonFinite { at: locate(s) })?;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }

    // Deterministic, compensated final sum in order of position.
    done.extend(heap.into_vec());
    done.sort_by(|p, q| p.a.total_cmp(&q.a));
    let mut sum = 0.0;
    let mut comp = 0.0;
    let mut err = 0.0;
    for seg in &done {
        let y = seg.value - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        err += seg.error;
    }
    Ok(QuadratureResult { value: sum, error_estimate: err, evaluations: evals })
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    at_roundoff: bool,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error).then_with(|| other.a.total_cmp(&self.a))
    }
}

/// One Gauss–Kronrod 7/15 panel with the QUADPACK error heuristic.
/// On a non-finite sample returns the offending abscissa.
fn gk15(g: &dyn Fn(f64) -> f64, a: f64, b: f64, evals: &mut usize) -> std::result::Result<Segment, f64> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let eval = |x: f64| {
        let v = g(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(x)
        }
    };
    let fc = eval(c)?;
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs_k = kron.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = h * XGK[j];
        let f1 = eval(c - dx)?;
        let f2 = eval(c + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        kron += WGK[j] * (f1 + f2);
        abs_k += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    *evals += 15;
    let mean = 0.5 * kron;
    let mut asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = kron * h;
    let abs_k = abs_k * h.abs();
    let asc = asc * h.abs();
    let mut error = ((kron - gauss) * h).abs();
    if asc != 0.0 && error != 0.0 {
        error = asc * (200.0 * error / asc).powf(1.5).min(1.0);
    }
    let floor = 50.0 * f64::EPSILON * abs_k;
    let mut at_roundoff = false;
    if abs_k > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) && error <= floor {
        error = floor;
        at_roundoff = true;
    }
    Ok(Segment { a, b, value, error, at_roundoff })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_is_exact() {
        // Kronrod-15 integrates degree 22 exactly.
        let r = integrate_smooth(|x| x.powi(10) - 3.0 * x.powi(3), 0.0, 2.0, 1e-12).unwrap();
        let exact = 2f64.powi(11) / 11.0 - 3.0 * 4.0;
        assert!((r.value - exact).abs() < 1e-12);
        assert_eq!(r.evaluations, 15);
    }

    #[test]
    fn arcsine_kernel_both_ends() {
        let spec = SingularIntegral::new(|p: Abscissa| 1.0 / (p.from_lo * p.from_hi).sqrt(), 0.0, 1.0)
            .singular_lo()
            .singular_hi();
        let r = integrate(&spec, 1e-12).unwrap();
        assert!((r.value - PI).abs() < 1e-12);
    }

    #[test]
    fn half_line_decay() {
        // ∫₀^∞ dx/(1+x²) = π/2
        let spec = SingularIntegral::new(|p: Abscissa| 1.0 / (1.0 + p.x * p.x), 0.0, f64::INFINITY);
        let r = integrate(&spec, 1e-12).unwrap();
        assert!((r.value - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_other_orders() {
        let spec = SingularIntegral::new(|p: Abscissa| p.x, 0.0, 1.0).with_order(0.25);
        assert!(matches!(integrate(&spec, 1e-8), Err(Error::UnsupportedSingularity { .. })));
    }

    #[test]
    fn reports_non_finite_interior() {
        let spec = SingularIntegral::new(|p: Abscissa| 1.0 / (p.x - 0.5), 0.0, 1.0);
        // The centre node of the first panel hits the pole.
        assert!(matches!(integrate(&spec, 1e-8), Err(Error::NonFinite { .. })));
    }

    #[test]
    fn cap_is_enforced() {
        let spec = SingularIntegral::new(|p: Abscissa| (1.0 / p.x).sin() / p.x, 1e-9, 1.0);
        let opts = QuadratureOptions { max_evals: 600, ..Default::default() };
        match integrate_with(&spec, 1e-12, &opts) {
            Err(Error::NoConvergence { evaluations, .. }) => assert!(evaluations <= 600),
            other => panic!("expected NoConvergence, got {other:?}"),
        }
    }
}
