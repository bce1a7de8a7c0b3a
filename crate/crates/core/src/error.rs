use thiserror::Error;

/// Errors raised by element arithmetic and group-level algorithms.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("incompatible elements: {0}")]
    Incompatible(String),
    #[error("{what} exceeded cap {cap}")]
    Overflow { what: String, cap: u64 },
    #[error("unsupported field: {0}")]
    UnsupportedField(String),
    #[error("invalid field modulus: {0}")]
    InvalidModulus(String),
    #[error("matrix is not invertible")]
    Singular,
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("unsupported parameters: {0}")]
    Unsupported(String),
    #[error("{0}")]
    Invalid(String),
}

impl GroupError {
    pub fn overflow(what: impl Into<String>, cap: u64) -> Self {
        GroupError::Overflow { what: what.into(), cap }
    }

    pub fn is_overflow(&self) -> bool {
        matches!(self, GroupError::Overflow { .. })
    }
}

pub type Result<T, E = GroupError> = std::result::Result<T, E>;
