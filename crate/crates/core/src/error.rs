use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("context mismatch")]
    ContextMismatch,
    #[error("unknown variable '{0}'")]
    UnknownVariable(String),
    #[error("duplicate variable '{0}'")]
    DuplicateVariable(String),
    #[error("parity mismatch substituting '{0}'")]
    ParityMismatch(String),
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("argument contains antifields")]
    ContainsAntifields,
    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("arity {arity} exceeds cap {cap}")]
    ArityExceedsCap { arity: usize, cap: usize },
    #[error("form is not Berezinian (top component vanishes)")]
    NotBerezinian,
    #[error("form is not pure")]
    NotPure,
    #[error("even variable '{0}' in an odd space")]
    EvenVariable(String),
    #[error("odd variable '{0}' not allowed here")]
    OddVariable(String),
    #[error("shift {0} must be odd")]
    EvenShift(i64),
    #[error("no fiber variables declared")]
    NoFibers,
    #[error("matrix is not antisymmetric")]
    NotAntisymmetric,
    #[error("graded Jacobi fails on basis triple {witness:?}")]
    JacobiFails { witness: Vec<String> },
    #[error("not a Maurer-Cartan element: residual {residual}")]
    NotMaurerCartan { residual: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}
