use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("field order {p}^{h} exceeds the ceiling {ceiling}")]
    FieldTooLarge { p: u64, h: u32, ceiling: u64 },
    #[error("zero has no multiplicative inverse")]
    InverseOfZero,
    #[error("Frobenius exponent {e} outside [0, {h})")]
    FrobeniusExponent { e: u32, h: u32 },
    #[error("enumeration of {count} subspaces exceeds the ceiling {ceiling}")]
    EnumerationCeiling { count: String, ceiling: u64 },
    #[error("work of {work} element-actions exceeds the ceiling {ceiling}")]
    WorkCeiling { work: String, ceiling: u64 },
    #[error("tolerance {tolerance:e} is below what {digits} digits of working precision certify")]
    ToleranceBelowPrecision { tolerance: f64, digits: u32 },
    #[error("support lattice mismatch: {0}")]
    LatticeMismatch(String),
    #[error("{0} is not in the support of the distribution")]
    NotInSupport(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    /// True for errors raised because a configured ceiling was hit.
    pub fn is_ceiling(&self) -> bool {
        matches!(self, Error::EnumerationCeiling { .. } | Error::WorkCeiling { .. })
    }
}
