use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("field size {0} exceeds the supported maximum of 2^20")]
    FieldTooLarge(u64),

    #[error("cannot invert zero in {0}")]
    ZeroInversion(String),

    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("polynomial is not irreducible: {0}")]
    NotIrreducible(String),

    #[error("polynomial is not monic: {0}")]
    NotMonic(String),

    #[error("the zero tuple does not define a projective point")]
    AllZero,

    #[error("stable rank {s} out of range for rank {r}")]
    RankOutOfRange { s: u32, r: u32 },

    #[error("repeated prime in condition list: {0}")]
    RepeatedPrime(String),

    #[error("requested enumeration needs about 2^{needed:.1} steps, above the bound 2^{bound:.1}")]
    WorkLimit { needed: f64, bound: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{0}")]
    Invalid(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}
