use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::linalg::common_denominator;
use crate::{PolytopeError, Rat, Result};

/// The closed half-space `<normal, x> <= bound`.
///
/// Stored with integral, primitive coefficients: the rational input is scaled
/// by the common denominator and divided by the content of the whole row.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfSpace {
    normal: Vec<BigInt>,
    bound: BigInt,
}

impl HalfSpace {
    pub fn new(normal: Vec<Rat>, bound: Rat) -> Result<Self> {
        let mut all = normal.clone();
        all.push(bound);
        let den = common_denominator(&all);
        let mut ints: Vec<BigInt> = all.iter().map(|x| (x * &den).to_integer()).collect();
        let bound = ints.pop().unwrap();
        Self::from_integers(ints, bound)
    }

    pub fn from_integers(normal: Vec<BigInt>, bound: BigInt) -> Result<Self> {
        if normal.iter().all(|x| x.is_zero()) {
            return Err(PolytopeError::ZeroNormal);
        }
        let g = normal.iter().fold(bound.abs(), |acc, x| acc.gcd(x));
        let normal = normal.into_iter().map(|x| x / &g).collect();
        Ok(HalfSpace { normal, bound: bound / g })
    }

    /// Convenience constructor from machine integers.
    pub fn from_i64(normal: &[i64], bound: i64) -> Result<Self> {
        Self::from_integers(normal.iter().map(|&x| BigInt::from(x)).collect(), BigInt::from(bound))
    }

    /// `x_i >= lo`
    pub fn lower(dim: usize, i: usize, lo: Rat) -> Self {
        let mut n = vec![Rat::zero(); dim];
        n[i] = Rat::from_integer((-1).into());
        Self::new(n, -lo).expect("unit normal")
    }

    /// `x_i <= hi`
    pub fn upper(dim: usize, i: usize, hi: Rat) -> Self {
        let mut n = vec![Rat::zero(); dim];
        n[i] = Rat::from_integer(1.into());
        Self::new(n, hi).expect("unit normal")
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    pub fn normal(&self) -> &[BigInt] {
        &self.normal
    }

    pub fn bound(&self) -> &BigInt {
        &self.bound
    }

    pub fn normal_rat(&self) -> Vec<Rat> {
        self.normal.iter().map(|x| Rat::from_integer(x.clone())).collect()
    }

    pub fn bound_rat(&self) -> Rat {
        Rat::from_integer(self.bound.clone())
    }

    /// The opposite closed half-space `<normal, x> >= bound`.
    pub fn flipped(&self) -> Self {
        HalfSpace {
            normal: self.normal.iter().map(|x| -x).collect(),
            bound: -&self.bound,
        }
    }

    /// `<normal, x> - bound`, non-positive inside.
    pub fn slack(&self, x: &[Rat]) -> Rat {
        let mut s = -self.bound_rat();
        for (a, xi) in self.normal.iter().zip(x) {
            if !a.is_zero() {
                s += xi * a;
            }
        }
        s
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        !self.slack(x).is_positive()
    }

    /// Sign of `<normal, num> - bound * den` for a point `num / den` with `den > 0`.
    pub(crate) fn side_scaled(&self, num: &[BigInt], den: &BigInt) -> std::cmp::Ordering {
        let mut s = -(&self.bound * den);
        for (a, x) in self.normal.iter().zip(num) {
            if !a.is_zero() {
                s += a * x;
            }
        }
        s.cmp(&BigInt::zero())
    }

    /// The half-space after scaling the polytope by `q`: `<a, x> <= q c`.
    pub fn scaled(&self, q: &Rat) -> Self {
        Self::new(self.normal_rat(), self.bound_rat() * q).expect("nonzero normal")
    }
}

impl fmt::Display for HalfSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.normal.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}] . x <= {}", parts.join(", "), self.bound)
    }
}
