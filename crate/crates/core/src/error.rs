use thiserror::Error;

/// Errors raised anywhere in the bracket pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A jet with zero value part was inverted.
    #[error("cannot invert a jet whose value part is zero")]
    ZeroValuePart,

    #[error("{op} evaluated outside its real domain at {value}")]
    Domain { op: &'static str, value: f64 },

    #[error("value part of matrix is singular (pivot {pivot:e})")]
    SingularValuePart { pivot: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("space mismatch: expected `{expected}`, got `{got}`")]
    SpaceMismatch { expected: String, got: String },

    #[error("curve {index} leaves the subset at parameter {param}")]
    CurveEscapesSubset { index: usize, param: f64 },

    #[error("curve leaves `{space}` at parameter {param}")]
    CurveOutsideSpace { space: String, param: f64 },

    #[error("tangent vectors are based at different points")]
    BasePointMismatch,

    #[error("`{0}` is not a product space")]
    NotAProductSpace(String),

    #[error("point outside chart domain of `{0}`")]
    ChartDomain(String),

    #[error("`{0}` has no chart")]
    NoChart(String),

    #[error("map is not a homomorphism (deviation {deviation:e})")]
    NotAHomomorphism { deviation: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
