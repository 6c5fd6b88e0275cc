//! Shared numerical kernel.

mod antiderivative;
mod diff;
mod quadrature;
mod roots;
mod substitution;

pub use antiderivative::{Antiderivative, EvalMode};
pub use diff::{fd_derivatives, fd_jacobian3, fd_jacobian3_o4};
pub use quadrature::{
    integrate, integrate_smooth, integrate_with, Endpoints, QuadratureOptions, QuadratureResult, SingularIntegral,
    ABS_FLOOR, DEFAULT_MAX_EVALS,
};
pub use roots::{bisect, find_root};
pub use substitution::{Abscissa, Substitution};

/// Neumaier-compensated sum, independent of how the caller chunked the work
/// as long as the terms arrive in the same order.
pub fn compensated_sum(terms: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for t in terms {
        let s = sum + t;
        if sum.abs() >= t.abs() {
            comp += (sum - s) + t;
        } else {
            comp += (t - s) + sum;
        }
        sum = s;
    }
    sum + comp
}

/// Radical-inverse (van der Corput) value of `index` in `base`; component of
/// the Halton sequence used for deterministic quasi-random sampling.
pub fn halton(mut index: u64, base: u64) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    let b = base as f64;
    while index > 0 {
        f /= b;
        r += f * (index % base) as f64;
        index /= base;
    }
    r
}
