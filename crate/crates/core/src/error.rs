use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("raw components violate the required antisymmetry (violation {violation:.3e}, tolerance {tolerance:.3e})")]
    AntisymmetryViolation { violation: f64, tolerance: f64 },
    #[error("metric is degenerate (|det g| = {0:.3e})")]
    DegenerateMetric(f64),
    #[error("Jacobian is singular (|det T| = {0:.3e})")]
    SingularJacobian(f64),
    #[error("vectors spanning the plane are linearly dependent")]
    DependentVectors,
    #[error("form is identically zero")]
    ZeroForm,
    #[error("medium is not skewon-free")]
    NotSkewonFree,
    #[error("medium is not invertible")]
    SingularMedium,
    #[error("eigenvalue clustering is ambiguous: {0}")]
    IllConditioned(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("quartic is not invariant under rotations of the (xi1, xi2) plane")]
    NotRotationallySymmetric,
    #[error("grid resolution must be at least 2, got {0}")]
    InvalidResolution(usize),
    #[error("unknown verification suite `{0}`")]
    UnknownSuite(String),
    #[error("consistency check failed: {0}")]
    ConsistencyCheck(String),
    #[error("malformed input: {0}")]
    Format(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}
