use thiserror::Error;

/// Failures raised by the scalar fields.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    /// The tower modulus splits over the cyclotomic base, so the quotient ring
    /// is not a field. `factor` is the non-trivial gcd that exposed it.
    #[error("zero divisor: tower modulus is reducible (gcd factor {factor})")]
    ZeroDivisor { factor: String },
    #[error("incompatible field descriptors: {0}")]
    Incompatible(String),
    #[error("target field too small: {0}")]
    TargetTooSmall(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("unsupported denominator: {0}")]
    UnsupportedDenominator(String),
    #[error("poles do not account for the denominator: {0}")]
    FactorMismatch(String),
    #[error("tree {0} is not in the Mahler support")]
    TreeNotInSupport(String),
    #[error("empty support")]
    EmptySupport,
    #[error("pole {0} has no address in its tree")]
    AddressFailure(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unsupported construct at byte {offset}: {message}")]
    UnsupportedConstruct { offset: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
