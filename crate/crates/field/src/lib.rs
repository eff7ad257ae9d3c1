//! Exact arithmetic in totally real number fields: elements, fractional
//! ideals, trace duals, prime factorization, unit signs and narrow classes.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::ToPrimitive;

mod element;
mod error;
mod field;
mod ideal;
pub mod interval;
pub mod poly;
mod primes;
mod principal;
pub mod region;
mod spec;
mod units;

pub use cusp_polytope::{BigInt, BigRational, Rat};
pub use element::FieldElement;
pub use error::{FieldError, Result};
pub use field::{DimTable, FieldData, LabeledIdeal, NumberField, BASE_BITS};
pub use ideal::{hnf_rows, FractionalIdeal};
pub use interval::Interval;
pub use primes::{factor_integer, PrimeIdeal};
pub use principal::{NarrowClassGroup, MAX_DOUBLINGS};
pub use region::{lattice_points_in_region, Region};
pub use spec::{load_field_spec, parse_field_spec, parse_rational};
pub use units::{SignVector, SignedUnits, UnitGroupData, UnitSubgroup};

#[derive(Default)]
pub(crate) struct Caches {
    pub codifferent: OnceLock<FractionalIdeal>,
    pub different: OnceLock<FractionalIdeal>,
    pub primes: Mutex<HashMap<u64, Arc<Vec<PrimeIdeal>>>>,
    pub prime_powers: Mutex<HashMap<FractionalIdeal, Vec<FractionalIdeal>>>,
    pub prime_class: Mutex<HashMap<FractionalIdeal, usize>>,
    pub narrow: OnceLock<NarrowClassGroup>,
}

/// Nearest `f64` to a rational (infinite if out of range).
pub fn rat_to_f64(r: &Rat) -> f64 {
    if let Some(f) = r.to_f64() {
        if f.is_finite() {
            return f;
        }
    }
    // fall back to scaling large numerators/denominators by a power of two
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    let shift = nb - db - 60;
    let scaled = if shift > 0 {
        Rat::new(r.numer().clone(), r.denom() << shift as usize)
    } else {
        Rat::new(r.numer() << (-shift) as usize, r.denom().clone())
    };
    scaled.to_integer().to_f64().unwrap_or(0.0) * 2f64.powi(shift as i32)
}
