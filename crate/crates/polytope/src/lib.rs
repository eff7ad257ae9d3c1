//! Exact rational polyhedral geometry in small dimension.
//!
//! Polytopes are intersections of half-spaces `<a, x> <= c` with rational
//! data. Everything here is exact: vertices, volumes, lattice points and the
//! volume of a union of polytopes are computed over `BigRational`.

mod error;
mod halfspace;
mod lattice;
pub mod linalg;
pub mod lp;
mod polytope;
mod union;

pub use error::PolytopeError;
pub use halfspace::HalfSpace;
pub use lattice::{integer_points, lattice_points, LatticeBasis, DIRECT_ENUMERATION_CUTOFF};
pub use polytope::RationalPolytope;
pub use union::{union_volume, UnionVolume};

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

/// Exact rational number used throughout the crate.
pub type Rat = BigRational;

pub type Result<T> = std::result::Result<T, PolytopeError>;

/// Build a rational from a numerator and denominator.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Build an integral rational.
pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}
