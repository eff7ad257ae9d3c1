use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("field spec schema violation: {0}")]
    Schema(String),
    #[error("discriminant mismatch: declared {declared}, trace form gives {computed}")]
    DiscriminantMismatch { declared: String, computed: String },
    #[error("invariant failed: {0}")]
    Invariant(String),
    #[error("element is zero")]
    ZeroElement,
    #[error("inverse of the zero module")]
    ZeroIdeal,
    #[error("ideal is not integral")]
    NotIntegral,
    #[error("cannot factor above {0}: prime divides the index of every tried generator")]
    IndexPrime(String),
    #[error("principality search exhausted its bound without a certificate for ideal of norm {0}")]
    PrincipalityInconclusive(String),
    #[error("narrow class of ideal could not be determined")]
    UnknownClass,
    #[error("polytope: {0}")]
    Polytope(#[from] cusp_polytope::PolytopeError),
}

pub type Result<T> = std::result::Result<T, FieldError>;
