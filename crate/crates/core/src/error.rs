use thiserror::Error;

/// Errors raised by the algebra, geometry and arithmetic layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("series with zero constant term is not a unit")]
    NotAUnit,
    #[error("characteristic {p} does not exceed truncation order {order}")]
    CharTooSmall { p: u64, order: usize },
    #[error("pole at basepoint")]
    PoleAtBasepoint,
    #[error("inner series has a nonzero constant term")]
    NonzeroConstantTerm,
    #[error("order mismatch: {0}")]
    OrderMismatch(String),
    #[error("connection is not flat: curvature entry ({l1},{l2}) row {row} col {col} is {value}")]
    NotFlat {
        l1: usize,
        l2: usize,
        row: usize,
        col: usize,
        value: String,
    },
    #[error("initial frame is singular")]
    SingularFrame,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("bilinear form is degenerate or neither symmetric nor alternating")]
    DegenerateForm,
    #[error("filtrations are not opposed")]
    NotOpposed,
    #[error("algebra is not graded by the cocharacter: graded pieces have total dimension {graded} but the algebra has dimension {total}")]
    NotGraded { graded: usize, total: usize },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("characteristic 2 is not supported here")]
    Char2,
    #[error("tangent routes disagree: graded image has dimension {graded}, linearization has dimension {linearized}")]
    TangentMismatch { graded: usize, linearized: usize },
    #[error("jet basepoint does not match the frame basepoint")]
    BasepointMismatch,
    #[error("coefficient {0} is not p-integral")]
    NonIntegralCoefficient(String),
    #[error("denominator vanishes modulo p at the basepoint")]
    DenominatorVanishesModP,
    #[error("precision p^{precision} too low for weight {weight}")]
    PrecisionTooLow { precision: u32, weight: u32 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
