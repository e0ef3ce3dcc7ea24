use thiserror::Error;

/// Errors surfaced by the library. Variant names double as the machine-readable
/// error codes emitted by the CLI.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("input must be nonzero")]
    ZeroInput,
    #[error("{0} is not prime")]
    NotPrime(String),
    #[error("modulus {0} must be odd and positive")]
    EvenModulus(String),
    #[error("moduli {0} and {1} are not coprime")]
    NonCoprimeModuli(String, String),
    #[error("modulus {0} must be positive")]
    NonPositiveModulus(String),
    #[error("scale factor u must be nonzero")]
    ZeroScale,
    #[error("unsupported model shape: {0}")]
    BadShape(String),
    #[error("{0} is not squarefree")]
    NotSquarefree(String),
    #[error("twist by {0} is not integral for this model shape")]
    IntegralityFailure(String),
    #[error("model is not minimal at {0}")]
    NotMinimalAtPrime(String),
    #[error("model is not integral at {0}")]
    NonIntegralAtPrime(String),
    #[error("prime {0} exceeds the enumeration budget {1}")]
    BudgetExceeded(String, u64),
    #[error("sample prime {0} is even or of bad reduction")]
    BadSamplePrime(String),
    #[error("no sample primes given")]
    NoSamples,
    #[error("m = {0} is not one of the admissible family parameters")]
    DisallowedM(String),
    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(String),
    #[error("{0} must be positive")]
    NonPositive(String),
    #[error("curve has additive reduction at {0}")]
    NotSemistable(String),
    #[error("outside the supported range: {0}")]
    OutsidePerimeter(String),
    #[error("value {0} is too large for this operation")]
    TooLarge(String),
    #[error("oracle mismatch: {0}")]
    OracleMismatch(String),
    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    /// Stable identifier used in JSON error output.
    pub fn code(&self) -> &'static str {
        match self {
            Error::ZeroInput => "ZeroInput",
            Error::NotPrime(_) => "NotPrime",
            Error::EvenModulus(_) => "EvenModulus",
            Error::NonCoprimeModuli(..) => "NonCoprimeModuli",
            Error::NonPositiveModulus(_) => "NonPositiveModulus",
            Error::ZeroScale => "ZeroScale",
            Error::BadShape(_) => "BadShape",
            Error::NotSquarefree(_) => "NotSquarefree",
            Error::IntegralityFailure(_) => "IntegralityFailure",
            Error::NotMinimalAtPrime(_) => "NotMinimalAtPrime",
            Error::NonIntegralAtPrime(_) => "NonIntegralAtPrime",
            Error::BudgetExceeded(..) => "BudgetExceeded",
            Error::BadSamplePrime(_) => "BadSamplePrime",
            Error::NoSamples => "NoSamples",
            Error::DisallowedM(_) => "DisallowedM",
            Error::NotFundamental(_) => "NotFundamental",
            Error::NonPositive(_) => "NonPositive",
            Error::NotSemistable(_) => "NotSemistable",
            Error::OutsidePerimeter(_) => "OutsidePerimeter",
            Error::TooLarge(_) => "TooLarge",
            Error::OracleMismatch(_) => "OracleMismatch",
            Error::Config(_) => "Config",
        }
    }

    /// True for internal inconsistencies, as opposed to rejected inputs.
    pub fn is_mismatch(&self) -> bool {
        matches!(self, Error::OracleMismatch(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
