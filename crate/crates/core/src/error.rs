use thiserror::Error;

/// Errors raised by the library. Report-style operations (validation,
/// witness search, asymptotic checks) return reports instead.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("substitution or composition with nonzero constant term: {0}")]
    NonzeroConstant(String),
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("system failed validation: {}", .0.failures().join("; "))]
    Validation(Box<crate::odeforms::ValidationReport>),
    #[error("recursion blocked at order {order}: {reason}")]
    RecursionBlocked { order: usize, reason: String },
    #[error("too few coefficients: need {needed}, have {available}")]
    TooFewCoefficients { needed: usize, available: usize },
    #[error("{point} (distance {distance:e})")]
    NearPole { point: String, distance: f64 },
    #[error("quadrature did not converge: estimated error {error:e} after {subdivisions} subdivisions")]
    Quadrature { error: f64, subdivisions: usize },
    #[error("direction error: {0}")]
    Direction(String),
    #[error("degenerate fit: {0}")]
    DegenerateFit(String),
    #[error("parse error at {path}: {message}")]
    Parse { path: String, message: String },
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
