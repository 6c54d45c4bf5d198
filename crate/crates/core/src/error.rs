use thiserror::Error;

use crate::polycore::Ring;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("ring mismatch: {0} vs {1}")]
    RingMismatch(Ring, Ring),

    #[error("invalid ring: {0}")]
    InvalidRing(String),

    #[error("operation needs a prime-field ring, got characteristic {0}")]
    NotPrimeField(u32),

    #[error("exponent or degree overflow")]
    Overflow,

    #[error("invalid substitution: {0}")]
    InvalidSubstitution(String),

    #[error("unsupported parameters: {0}")]
    Unsupported(String),

    #[error("generator {index} vanishes under the specialization")]
    GeneratorVanishes { index: usize },

    #[error("scale exceeded: {0}")]
    ScaleExceeded(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("consistency check failed: {0}")]
    Inconsistent(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn is_scale_exceeded(&self) -> bool {
        matches!(self, Error::ScaleExceeded(_))
    }
}
