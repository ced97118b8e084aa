use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or out-of-contract input (shapes, signs, symmetry).
    #[error("input error: {0}")]
    Input(String),
    /// A numerical consistency condition failed (kernel mismatch, residual
    /// above tolerance).
    #[error("consistency error: {0}")]
    Consistency(String),
    /// The request exceeds an enumeration or size limit.
    #[error("capacity exceeded: {0}")]
    Capacity(String),
}

pub type Result<T> = std::result::Result<T, Error>;
