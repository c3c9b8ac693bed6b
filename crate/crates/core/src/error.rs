use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field of order {0} is too large (limit {limit})", limit = crate::ff::MAX_ORDER)]
    FieldTooLarge(u64),
    #[error("modulus is reducible over F_p")]
    ReducibleModulus,
    #[error("modulus must be monic of degree {expected} with coefficients in [0, p)")]
    WrongDegreeModulus { expected: u32 },
    #[error("operands belong to different fields")]
    SpecMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("element code {code} out of range for field of order {q}")]
    CodeOutOfRange { code: u64, q: u32 },
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("syntax error at byte {pos}: {msg}")]
    SyntaxError { pos: usize, msg: String },
    #[error("coefficient {value} out of range for field of order {q}")]
    CoefficientOutOfRange { value: u64, q: u32 },
    #[error("budget exceeded: {what} needs {needed}, cap is {cap}")]
    BudgetExceeded {
        what: &'static str,
        needed: u128,
        cap: u128,
    },
    #[error("interval too wide to round to {digits} digits")]
    NeedsMorePrecision { digits: u32 },
    #[error("interval multiplication requires non-negative operands")]
    NegativeOperand,
    #[error("zeta_q(s) diverges for s = {0}")]
    Divergent(i64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
