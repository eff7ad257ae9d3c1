use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::Rat;

/// An element of K as rational coordinates over the integral basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    coords: Vec<Rat>,
}

impl FieldElement {
    pub fn new(coords: Vec<Rat>) -> Self {
        FieldElement { coords }
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        FieldElement { coords: coords.iter().map(|&c| Rat::from_integer(BigInt::from(c))).collect() }
    }

    pub fn from_bigints(coords: &[BigInt]) -> Self {
        FieldElement { coords: coords.iter().map(|c| Rat::from_integer(c.clone())).collect() }
    }

    pub fn zero(d: usize) -> Self {
        FieldElement { coords: vec![Rat::zero(); d] }
    }

    /// The rational `r` (requires the first basis element to be 1).
    pub fn rational(d: usize, r: Rat) -> Self {
        let mut coords = vec![Rat::zero(); d];
        coords[0] = r;
        FieldElement { coords }
    }

    pub fn one(d: usize) -> Self {
        Self::rational(d, Rat::one())
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Rat> {
        self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn is_integral_vector(&self) -> bool {
        self.coords.iter().all(|c| c.is_integer())
    }

    /// Integer coordinates, if all coordinates are integral.
    pub fn integer_coords(&self) -> Option<Vec<BigInt>> {
        self.coords.iter().map(|c| c.is_integer().then(|| c.to_integer())).collect()
    }

    pub fn scale(&self, r: &Rat) -> Self {
        FieldElement { coords: self.coords.iter().map(|c| c * r).collect() }
    }

    /// Rational part, when the element lies in Q (with basis 1 first).
    pub fn as_rational(&self) -> Option<Rat> {
        self.coords[1..].iter().all(|c| c.is_zero()).then(|| self.coords[0].clone())
    }
}

impl Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, o: &FieldElement) -> FieldElement {
        FieldElement { coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, o: &FieldElement) -> FieldElement {
        FieldElement { coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement { coords: self.coords.iter().map(|a| -a).collect() }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}
