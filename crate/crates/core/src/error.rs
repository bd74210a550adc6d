use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("zero quaternion has no inverse")]
    ZeroInverse,

    #[error("expected an imaginary unit (u² = −1), got {0}")]
    NotImaginaryUnit(String),

    #[error("point ({0}) lies outside the stem domain")]
    OutsideDomain(String),

    #[error("finite-difference stencil of half-width {h_step} leaves the stem domain")]
    StencilOutOfDomain { h_step: f64 },

    #[error("monomial ({h},{k}) exceeds the degree bound {degree}")]
    DegreeExceeded { h: u32, k: u32, degree: u32 },

    #[error("degree bounds differ: {0} vs {1}")]
    DegreeMismatch(u32, u32),

    #[error("invalid Hopf parameters: {0}")]
    InvalidParams(String),

    #[error("iterate index k must be nonzero")]
    ZeroIterate,

    #[error("the origin (0,0) is not in the punctured space")]
    OriginInput,

    #[error("degenerate annuli: need 0 < r1 < R1 and 0 < r2 < R2")]
    DegenerateAnnuli,

    #[error("nonlinear system: the direct method needs p = 1 (got p = {0}); use the linearized method")]
    NonlinearSystem(u32),

    #[error("underdetermined sampling: {rows} rows for {cols} unknowns")]
    Underdetermined { rows: usize, cols: usize },

    #[error("constraint violation: {0}")]
    ConstraintViolation(String),

    #[error("automorphism parameters are not invertible")]
    NotInvertible,

    #[error("invalid deformation family: {0}")]
    InvalidFamily(String),

    #[error("empty parameter list: {0}")]
    EmptyInput(&'static str),

    #[error("fixed set of dimension {0} is not realizable by a quaternionic rotation")]
    UnexpectedFixedDimension(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
