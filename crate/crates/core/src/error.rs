use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point ({x}, {y}) is not an interior point of the model")]
    BoundaryPoint { x: f64, y: f64 },

    #[error("point carries model {found}, expected {expected}")]
    WrongModel { expected: &'static str, found: &'static str },

    #[error("Moebius parameters violate ad - bc = 1 (ad - bc = {det})")]
    DeterminantError { det: f64 },

    #[error("boundary point x = {x} is the pole of the isometry and maps to infinity")]
    IdealPole { x: f64 },

    #[error("radius must be positive, got {r}")]
    NonpositiveRadius { r: f64 },

    #[error("quadrature did not converge within {evaluations} evaluations (error estimate {error_estimate:e})")]
    NoConvergence { evaluations: usize, error_estimate: f64 },

    #[error("integrand is not finite at {at}")]
    NonFinite { at: f64 },

    #[error("unsupported singularity order {order} (only 1/2 is supported)")]
    UnsupportedSingularity { order: f64 },

    #[error("no sign change on [{lo}, {hi}]")]
    NoBracket { lo: f64, hi: f64 },

    #[error("bad parameter: {0}")]
    BadParameter(String),

    #[error("Newton iteration diverged after {iterations} iterations (residual trace {trace:?})")]
    NewtonDiverged { iterations: usize, trace: Vec<f64> },

    #[error("singular Jacobian at row {row}")]
    SingularJacobian { row: usize },

    #[error("boundary data is not finite at ({x}, {y})")]
    BadBoundary { x: f64, y: f64 },

    #[error("polygon has {count} vertices, at most {max} supported")]
    TooManyVertices { count: usize, max: usize },

    #[error("horocycles at vertices {i} and {j} overlap")]
    OverlappingHorocycles { i: usize, j: usize },

    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Stable machine-readable identifier, used in CLI error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::BoundaryPoint { .. } => "BoundaryPoint",
            Error::WrongModel { .. } => "WrongModel",
            Error::DeterminantError { .. } => "DeterminantError",
            Error::IdealPole { .. } => "IdealPole",
            Error::NonpositiveRadius { .. } => "NonpositiveRadius",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::NonFinite { .. } => "NonFinite",
            Error::UnsupportedSingularity { .. } => "UnsupportedSingularity",
            Error::NoBracket { .. } => "NoBracket",
            Error::BadParameter(_) => "BadParameter",
            Error::NewtonDiverged { .. } => "NewtonDiverged",
            Error::SingularJacobian { .. } => "SingularJacobian",
            Error::BadBoundary { .. } => "BadBoundary",
            Error::TooManyVertices { .. } => "TooManyVertices",
            Error::OverlappingHorocycles { .. } => "OverlappingHorocycles",
            Error::InvalidCurve(_) => "InvalidCurve",
            Error::Parse { .. } => "Parse",
            Error::Io(_) => "Io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
