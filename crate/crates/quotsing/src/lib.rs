//! Cyclic quotient singularities `A^n / C_m` of type `(a_1, ..., a_n; m)`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use cusp_field::{FractionalIdeal, NumberField};
use cusp_polytope::{int, lattice_points, union_volume, HalfSpace, LatticeBasis, PolytopeError, RationalPolytope, Rat};

#[derive(Debug, Error)]
pub enum QuotSingError {
    #[error("order must be at least 2, got {0}")]
    Order(u64),
    #[error("weight {a} is not in 1..{m} or not coprime to {m}")]
    Weight { a: u64, m: u64 },
    #[error("{r} is not coprime to {m}")]
    Generator { r: u64, m: u64 },
    #[error("no weights")]
    Empty,
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    Field(#[from] cusp_field::FieldError),
}

pub type Result<T> = std::result::Result<T, QuotSingError>;

/// Type `(a_1, ..., a_n; m)`, weights kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuotSingType {
    m: u64,
    weights: Vec<u64>,
}

impl QuotSingType {
    pub fn new(weights: &[u64], m: u64) -> Result<Self> {
        if m < 2 {
            return Err(QuotSingError::Order(m));
        }
        if weights.is_empty() {
            return Err(QuotSingError::Empty);
        }
        for &a in weights {
            if a == 0 || a >= m || a.gcd(&m) != 1 {
                return Err(QuotSingError::Weight { a, m });
            }
        }
        let mut weights = weights.to_vec();
        weights.sort_unstable();
        Ok(QuotSingType { m, weights })
    }

    pub fn order(&self) -> u64 {
        self.m
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    /// `m P_k = (k a_j mod m)_j`.
    pub fn scaled_point(&self, k: u64) -> Vec<u64> {
        self.weights.iter().map(|a| k * a % self.m).collect()
    }

    /// The lattice `L = {x in Z^n : m | sum a_i x_i}`.
    pub fn lattice(&self) -> LatticeBasis {
        let n = self.dim();
        let m = self.m as i64;
        // pivot on the last weight: x_{n-1} = -a_{n-1}^{-1} sum_{i<n-1} a_i x_i mod m
        let inv = mod_inverse(self.weights[n - 1] as i64, m);
        let mut cols: Vec<Vec<Rat>> = Vec::with_capacity(n);
        for i in 0..n - 1 {
            let mut c = vec![0i64; n];
            c[i] = 1;
            c[n - 1] = (-(self.weights[i] as i64) * inv).rem_euclid(m);
            cols.push(c.into_iter().map(int).collect());
        }
        let mut c = vec![0i64; n];
        c[n - 1] = m;
        cols.push(c.into_iter().map(int).collect());
        // LatticeBasis takes the generators as columns
        let rows: Vec<Vec<Rat>> = (0..n).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
        LatticeBasis::new(rows, None).expect("basis of L is nondegenerate")
    }
}

fn mod_inverse(a: i64, m: i64) -> i64 {
    let e = a.extended_gcd(&m);
    debug_assert_eq!(e.gcd, 1);
    e.x.rem_euclid(m)
}

impl fmt::Display for QuotSingType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w: Vec<String> = self.weights.iter().map(|a| a.to_string()).collect();
        write!(f, "({};{})", w.join(","), self.m)
    }
}

/// `{x >= q, sum p_j x_j <= bound}` in `Z^n` coordinates.
fn simplex(p: &[u64], q: i64, bound: Rat) -> Result<RationalPolytope> {
    let n = p.len();
    let mut hs: Vec<HalfSpace> = (0..n).map(|i| HalfSpace::lower(n, i, int(q))).collect();
    hs.push(HalfSpace::new(p.iter().map(|&x| int(x as i64)).collect(), bound)?);
    Ok(RationalPolytope::new(n, hs)?)
}

/// Nonempty `T_k = {x >= 1, sum (P_k)_j x_j < 1}` for `k = 1..m-1`, as closed simplices.
pub fn defect_simplices(t: &QuotSingType) -> Result<Vec<(RationalPolytope, u64)>> {
    let m = t.m;
    let mut out = Vec::new();
    for k in 1..m {
        let p = t.scaled_point(k);
        if p.iter().sum::<u64>() >= m {
            continue;
        }
        out.push((simplex(&p, 1, int(m as i64))?, k));
    }
    Ok(out)
}

/// `delta(q) = #(L n qT)` for `q = 1..=q_max`.
pub fn quot_defect_sequence(t: &QuotSingType, q_max: u32) -> Result<Vec<u64>> {
    let lattice = t.lattice();
    let m = t.m as i64;
    let ks: Vec<Vec<u64>> = (1..t.m).map(|k| t.scaled_point(k)).filter(|p| p.iter().sum::<u64>() < t.m).collect();
    let mut out = Vec::with_capacity(q_max as usize);
    for q in 1..=q_max as i64 {
        let mut pts: BTreeSet<Vec<Rat>> = BTreeSet::new();
        for p in &ks {
            // strict sum p_j x_j < q m on integer points
            let poly = simplex(p, q, int(q * m - 1))?;
            pts.extend(lattice_points(&poly, &lattice)?);
        }
        out.push(pts.len() as u64);
    }
    Ok(out)
}

/// `vol(T) / m`.
pub fn quot_asymptotic_constant(t: &QuotSingType) -> Result<Rat> {
    let ps: Vec<RationalPolytope> = defect_simplices(t)?.into_iter().map(|(p, _)| p).collect();
    if ps.is_empty() {
        return Ok(Rat::zero());
    }
    Ok(union_volume(&ps)?.volume / int(t.m as i64))
}

/// The same singularity presented with generator `g^r`.
pub fn generator_change_equivalence(t: &QuotSingType, r: u64) -> Result<QuotSingType> {
    if r.gcd(&t.m) != 1 {
        return Err(QuotSingError::Generator { r, m: t.m });
    }
    let w: Vec<u64> = t.weights.iter().map(|a| r % t.m * a % t.m).collect();
    QuotSingType::new(&w, t.m)
}

/// Which of the two cubic fields with special elliptic points `K` is, by discriminant.
fn special_modulus(k: &NumberField) -> Option<(u64, u64, u64)> {
    if k.degree() != 3 {
        return None;
    }
    // (ramified prime, modulus for c_p, c_K)
    match k.disc().to_u64() {
        Some(49) => Some((7, 7, 84)),
        Some(81) => Some((3, 3, 18)),
        _ => None,
    }
}

/// `c_p` for a prime of `K`: `2, 1, 0` as `N(p) = 1, 0, -1` modulo 7 (resp. 3).
pub fn elliptic_prime_weight(k: &NumberField, p: &cusp_field::PrimeIdeal) -> u64 {
    let Some((_, modulus, _)) = special_modulus(k) else {
        return 0;
    };
    match p.norm() % modulus {
        1 => 2,
        0 => 1,
        r if r == modulus - 1 => 0,
        _ => unreachable!("norms in these fields are 0 or +-1 modulo the conductor"),
    }
}

/// The constant `e_I` weighting elliptic points at level `I`.
pub fn elliptic_constant_e_i(k: &NumberField, level: &FractionalIdeal) -> Result<Rat> {
    let Some((ramified, _, ck)) = special_modulus(k) else {
        return Ok(Rat::zero());
    };
    let mut prod = BigInt::one();
    for (p, e) in k.factor_ideal(level)? {
        if p.p == ramified && e >= 2 {
            return Ok(Rat::zero());
        }
        prod *= BigInt::from(elliptic_prime_weight(k, &p));
    }
    Ok(Rat::new(prod, BigInt::from(ck)))
}
