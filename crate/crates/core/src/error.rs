use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cyclotomic orders {0} and {1} cannot be mixed with lifting disabled")]
    IncompatibleCyclotomicOrders(u32, u32),
    #[error("not a unit: {0}")]
    NotAUnit(String),
    #[error("composition requires inner series with zero constant term")]
    CompositionNotNilpotent,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("incompatible operator kinds: {0}")]
    KindIncompatible(String),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("gamma order undefined: {0}")]
    GammaUndefined(String),
    #[error("shift vector has a component with nonzero constant term")]
    NotNilpotentShift,
    #[error("singular matrix")]
    SingularMatrix,
    #[error("jacobian is not 1 modulo degree {0}")]
    JacobianNotOne(i64),
    #[error("perturbation has valuation below 2")]
    ValuationTooLow,
    #[error("operator is not monic: {0}")]
    NotMonic(String),
    #[error("gamma order has the wrong shape: {0}")]
    GammaShapeMismatch(String),
    #[error("operators do not commute: {0}")]
    NotCommuting(String),
    #[error("tuple is not quasi-elliptic: {0}")]
    NotQuasiElliptic(String),
    #[error("inconsistent linear system: {0}")]
    SystemInconsistent(String),
    #[error("hilbert function violated: {0}")]
    HilbertViolation(String),
    #[error("support is not all of F: {0}")]
    SupportNotFull(String),
    #[error("f does not stabilize W: {0}")]
    NotStabilizing(String),
    #[error("degree budget exhausted: {0}")]
    BudgetExhausted(String),
    #[error("operator is not regular: {0}")]
    NotRegular(String),
    #[error("order mismatch: {0}")]
    OrderMismatch(String),
    #[error("compatibility failure: {0}")]
    CompatibilityFailure(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Process exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::PrecisionExhausted(_) => 3,
            Error::Parse(_) => 4,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
