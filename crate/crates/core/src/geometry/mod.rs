//! Models of the space, their metrics, the model-change isometries and
//! lifted Möbius isometries.

mod isometry;
mod metric;
mod model;

pub use isometry::{
    apply_isometry, apply_isometry_boundary, boundary_to_cylinder, boundary_to_half_space, special_isometry,
    to_cylinder, to_half_space, to_model, MoebiusIsometry, SpecialIsometry, DET_TOL,
};
pub use metric::{metric_at, polar_metric_at, MetricTensor};
pub use model::{IdealPoint, Model, Point3, Tau, BOUNDARY_EPS};

/// Default tolerance for closed-form equalities.
pub const DEFAULT_TOL: f64 = 1e-10;
