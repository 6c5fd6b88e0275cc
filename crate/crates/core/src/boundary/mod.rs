mod curve;
mod folds;
mod height;
mod io;
mod polygon;
mod transport;

pub use curve::{Component, Edge, IdealBoundaryCurve};
pub use height::{
    check_short_arc_hypothesis, height_function, height_infimum, is_tall, tallness, FiberHeight, ShortArcReport,
    TallnessReport,
};
pub use folds::{check_fold_hypotheses, Fold, FoldReport, Side};
pub use transport::{transport_boundary, Direction};
pub use polygon::{
    horocycle_distance, horocycle_sweep, jenkins_serrin_check, jenkins_serrin_check_with, sensitivity_audit, IdealPolygon,
    InscribedWitness, JsReport, Label, SweepPoint, VertexSensitivity, BALANCE_TOL, MAX_VERTICES,
};
pub use io::{parse_curve, write_curve};
