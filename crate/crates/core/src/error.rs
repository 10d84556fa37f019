use thiserror::Error;

/// Errors raised by the arithmetic, evaluation, topology and space layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("exponent {0} is not positive")]
    NonPositiveExponent(String),
    #[error("operands use different scalar backends (exact vs float)")]
    BackendMismatch,
    #[error("{0} is not invertible: its standard part is zero")]
    NotInvertible(String),
    #[error("variable `{0}` is not declared")]
    UndeclaredVariable(String),
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("{0} has no exact rational value; use the float backend")]
    InexactPrimitive(String),
    #[error("arity mismatch: expected {expected}, got {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("operation supports only dimension 1, got {0}")]
    UnsupportedDimension(usize),
    #[error("affine map is singular (zero scale)")]
    SingularMap,
    #[error("invalid point: {0}")]
    InvalidPoint(String),
    #[error("point is not standard: {0}")]
    NotStandard(String),
    #[error("unsupported presentation: {0}")]
    UnsupportedPresentation(String),
    #[error("invalid ideal: {0}")]
    InvalidIdeal(String),
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("t must be positive, got {0}")]
    NonPositiveT(f64),
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

impl Error {
    pub fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            pos,
            msg: msg.into(),
        }
    }

    /// Parse failures are reported separately from mathematical failures by the CLI.
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
