use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("value is not p-integral: {0}")]
    NotIntegral(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("pole bookkeeping unsupported")]
    PoleUnsupported,
    #[error("character is not primitive: {0}")]
    NotPrimitive(String),
    #[error("parity: {0}")]
    Parity(String),
    #[error("not p-ordinary: {0}")]
    NotOrdinary(String),
    #[error("ramified level unsupported: gcd({level}, {disc}) != 1")]
    RamifiedLevel { level: u64, disc: i64 },
    #[error("not a negative fundamental discriminant: {0}")]
    NonFundamental(i64),
    #[error("inseparable eigensystems: {0}")]
    Inseparable(String),
    #[error("missing oldform eigendata: {0}")]
    MissingOldforms(String),
    #[error("incomplete eigendata: {0}")]
    IncompleteEigendata(String),
    #[error("anticyclotomic μ obstruction: p divides g(T1, 0)")]
    AnticyclotomicMu,
    #[error("hypothesis (eqk) violated: {0}")]
    EqkViolated(String),
    #[error("regularization factor is not a unit for {0}")]
    NonInvertibleRegularizer(String),
    #[error("character order is not a power of p: {0}")]
    NotPPowerOrder(String),
    #[error("negative corank impossible: inputs inconsistent")]
    NegativeCorank,
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::InvalidInput(e.to_string())
    }
}
