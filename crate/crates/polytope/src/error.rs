use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolytopeError {
    #[error("polytope is unbounded")]
    Unbounded,
    #[error("half-space normal is zero")]
    ZeroNormal,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("lattice basis is singular")]
    SingularBasis,
    #[error("ambient dimension {0} is not supported")]
    UnsupportedDimension(usize),
}
