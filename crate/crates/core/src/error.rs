use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),

    #[error("field size q={q} exceeds the configured limit {limit}")]
    FieldTooLarge { q: u64, limit: u64 },

    #[error("inversion of zero")]
    DivisionByZero,

    #[error("invalid group specification: {0}")]
    InvalidSpec(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("{what}: size {size} exceeds limit {limit}")]
    LimitExceeded { what: &'static str, size: String, limit: String },

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("parity violation: {0}")]
    Parity(String),

    #[error("operation not supported: {0}")]
    Unsupported(String),

    #[error("mismatched quadratic extensions: {0}")]
    ScalarMismatch(String),

    #[error("sampler gave up after {0} rejections")]
    SamplerCap(u64),

    #[error("internal identity check failed: {0}")]
    IdentityViolated(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
