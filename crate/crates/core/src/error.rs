use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: expected {expected}, found {found}")]
    ShapeMismatch { expected: String, found: String },

    #[error("invalid space: {0}")]
    InvalidSpace(String),

    #[error("element has spectral norm {norm} and does not lie in the open unit ball")]
    OutsideDomain { norm: f64 },

    #[error("element is not a tripotent (residual {residual:e})")]
    NotTripotent { residual: f64 },

    #[error("tripotent is zero")]
    ZeroTripotent,

    #[error("tripotent is not minimal")]
    NotMinimal,

    #[error("tripotents are not mutually orthogonal")]
    NotOrthogonal,

    #[error("numerically inconsistent result: {0}")]
    Inconsistent(String),

    #[error("eigenvalue {value:e} is too negative to clamp")]
    Clamp { value: f64 },

    #[error("linear solve failed: residual {residual:e}, condition estimate {condition:e}")]
    LinearSolve { residual: f64, condition: f64 },

    #[error("cone point is singular")]
    SingularCone,

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("sample does not cover factor {0}")]
    InsufficientCoverage(usize),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn shape(expected: impl ToString, found: impl ToString) -> Self {
        Error::ShapeMismatch {
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }
}
