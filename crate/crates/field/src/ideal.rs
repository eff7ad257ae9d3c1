use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use cusp_polytope::linalg::{common_denominator, inverse};

use crate::{FieldElement, FieldError, NumberField, Rat, Result};

/// Lower-triangular row Hermite form of the integer span of `rows` in `Z^d`.
///
/// Row `i` has zeros right of column `i`, a positive pivot at `i`, and entries
/// left of the pivot reduced into `[0, pivot_j)`. Returns `None` if the span
/// has rank below `d`.
pub fn hnf_rows(rows: Vec<Vec<BigInt>>, d: usize) -> Option<Vec<Vec<BigInt>>> {
    let mut work: Vec<Vec<BigInt>> = rows.into_iter().filter(|r| r.iter().any(|x| !x.is_zero())).collect();
    let mut out: Vec<Vec<BigInt>> = vec![Vec::new(); d];
    for col in (0..d).rev() {
        // gcd-combine all rows on `col` into a single pivot row
        let mut pivot: Option<Vec<BigInt>> = None;
        let mut rest = Vec::with_capacity(work.len());
        for r in work {
            if r[col].is_zero() {
                rest.push(r);
                continue;
            }
            match pivot.take() {
                None => pivot = Some(r),
                Some(p) => {
                    let g = p[col].extended_gcd(&r[col]);
                    let (a, b) = (&p[col] / &g.gcd, &r[col] / &g.gcd);
                    let new_p: Vec<BigInt> = p.iter().zip(&r).map(|(x, y)| &g.x * x + &g.y * y).collect();
                    let other: Vec<BigInt> = p.iter().zip(&r).map(|(x, y)| &b * x - &a * y).collect();
                    debug_assert!(other[col].is_zero());
                    if other.iter().any(|x| !x.is_zero()) {
                        rest.push(other);
                    }
                    pivot = Some(new_p);
                }
            }
        }
        let mut p = pivot?;
        if p[col].is_negative() {
            p.iter_mut().for_each(|x| *x = -&*x);
        }
        out[col] = p;
        work = rest;
    }
    for i in 0..d {
        for j in (0..i).rev() {
            let q = out[i][j].div_floor(&out[j][j]);
            if !q.is_zero() {
                let (head, tail) = out.split_at_mut(i);
                let rj = &head[j];
                for k in 0..=j {
                    tail[0][k] -= &q * &rj[k];
                }
            }
        }
    }
    Some(out)
}

/// A nonzero fractional ideal (or full-rank Z-lattice) in K.
///
/// Elements are `(1/denom) * (Z-span of the rows of basis)` in integral-basis
/// coordinates; the representation is canonical.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FractionalIdeal {
    basis: Vec<Vec<BigInt>>,
    denom: BigInt,
}

impl FractionalIdeal {
    /// Canonical form from an integer matrix and denominator.
    pub fn from_integer_rows(rows: Vec<Vec<BigInt>>, denom: BigInt, d: usize) -> Result<Self> {
        if denom.is_zero() {
            return Err(FieldError::Invariant("zero denominator".into()));
        }
        let mut basis = hnf_rows(rows, d).ok_or(FieldError::ZeroIdeal)?;
        let mut denom = denom;
        if denom.is_negative() {
            denom = -denom;
        }
        let g = basis.iter().flatten().fold(denom.clone(), |g, x| g.gcd(x));
        if !g.is_one() {
            basis.iter_mut().flatten().for_each(|x| *x = &*x / &g);
            denom /= &g;
        }
        Ok(FractionalIdeal { basis, denom })
    }

    /// The Z-lattice spanned by `gens` (must have full rank).
    pub fn from_z_basis(k: &NumberField, gens: &[FieldElement]) -> Result<Self> {
        Self::from_z_span(k.degree(), gens)
    }

    pub(crate) fn from_z_span(d: usize, gens: &[FieldElement]) -> Result<Self> {
        let all: Vec<Rat> = gens.iter().flat_map(|g| g.coords().iter().cloned()).collect();
        let den = common_denominator(&all);
        let rows = gens.iter().map(|g| g.coords().iter().map(|c| (c * &den).to_integer()).collect()).collect();
        Self::from_integer_rows(rows, den, d)
    }

    /// The ideal generated over O_K by `gens`.
    pub fn from_generators(k: &NumberField, gens: &[FieldElement]) -> Result<Self> {
        let mut z = Vec::with_capacity(gens.len() * k.degree());
        for g in gens {
            for i in 0..k.degree() {
                z.push(k.mul(g, &k.basis_element(i)));
            }
        }
        Self::from_z_span(k.degree(), &z)
    }

    pub fn principal(k: &NumberField, x: &FieldElement) -> Result<Self> {
        if x.is_zero() {
            return Err(FieldError::ZeroIdeal);
        }
        Self::from_generators(k, std::slice::from_ref(x))
    }

    /// The unit ideal O_K.
    pub fn unit(d: usize) -> Self {
        let basis = (0..d).map(|i| (0..d).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect();
        FractionalIdeal { basis, denom: BigInt::one() }
    }

    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    pub fn denom(&self) -> &BigInt {
        &self.denom
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Z-basis as field elements.
    pub fn z_basis(&self) -> Vec<FieldElement> {
        self.basis
            .iter()
            .map(|r| FieldElement::new(r.iter().map(|x| Rat::new(x.clone(), self.denom.clone())).collect()))
            .collect()
    }

    /// Basis rows as a rational matrix.
    pub fn rational_rows(&self) -> Vec<Vec<Rat>> {
        self.z_basis().into_iter().map(|e| e.into_coords()).collect()
    }

    pub fn is_integral(&self) -> bool {
        self.denom.is_one()
    }

    pub fn is_unit(&self) -> bool {
        self.denom.is_one() && self.basis.iter().enumerate().all(|(i, r)| r[i].is_one())
    }

    /// Coordinates of `x` in the Z-basis, if rational.
    fn solve_coords(&self, x: &FieldElement) -> Vec<Rat> {
        let d = self.dim();
        let v: Vec<Rat> = x.coords().iter().map(|c| c * Rat::from_integer(self.denom.clone())).collect();
        let mut y = vec![Rat::zero(); d];
        let mut rem = v;
        for i in (0..d).rev() {
            let yi = &rem[i] / Rat::from_integer(self.basis[i][i].clone());
            for j in 0..=i {
                rem[j] -= &yi * Rat::from_integer(self.basis[i][j].clone());
            }
            y[i] = yi;
        }
        y
    }

    pub fn contains(&self, x: &FieldElement) -> bool {
        self.solve_coords(x).iter().all(|c| c.is_integer())
    }

    /// Integer coordinates of a member `x` in the Z-basis.
    pub fn coords_of(&self, x: &FieldElement) -> Option<Vec<BigInt>> {
        let y = self.solve_coords(x);
        if y.iter().all(|c| c.is_integer()) {
            Some(y.into_iter().map(|c| c.to_integer()).collect())
        } else {
            None
        }
    }

    /// `other` is a subset of `self`.
    pub fn contains_ideal(&self, other: &FractionalIdeal) -> bool {
        other.z_basis().iter().all(|x| self.contains(x))
    }

    /// `self | other` for ideals, i.e. `other ⊆ self`.
    pub fn divides(&self, other: &FractionalIdeal) -> bool {
        self.contains_ideal(other)
    }

    /// Closed under multiplication by O_K.
    pub fn is_ideal(&self, k: &NumberField) -> bool {
        let zb = self.z_basis();
        zb.iter().all(|x| (1..k.degree()).all(|i| self.contains(&k.mul(x, &k.basis_element(i)))))
    }

    /// Norm, the covolume relative to O_K.
    pub fn norm(&self) -> Rat {
        let d = self.dim();
        let num = (0..d).fold(BigInt::one(), |p, i| p * &self.basis[i][i]);
        Rat::new(num, num_traits::pow(self.denom.clone(), d))
    }

    /// `min(Q+ ∩ I)`.
    pub fn minimum(&self) -> Rat {
        Rat::new(self.basis[0][0].clone(), self.denom.clone())
    }

    pub fn scale(&self, r: &Rat) -> Result<Self> {
        if r.is_zero() {
            return Err(FieldError::ZeroIdeal);
        }
        let rows = self.basis.iter().map(|row| row.iter().map(|x| x * r.numer()).collect()).collect();
        Self::from_integer_rows(rows, &self.denom * r.denom(), self.dim())
    }

    pub fn mul(&self, k: &NumberField, other: &FractionalIdeal) -> Self {
        let d = self.dim();
        let a = self.basis.iter().map(|r| FieldElement::from_bigints(r)).collect::<Vec<_>>();
        let b = other.basis.iter().map(|r| FieldElement::from_bigints(r)).collect::<Vec<_>>();
        let mut rows = Vec::with_capacity(d * d);
        for x in &a {
            for y in &b {
                rows.push(k.mul(x, y).into_coords().into_iter().map(|c| c.to_integer()).collect());
            }
        }
        Self::from_integer_rows(rows, &self.denom * &other.denom, d).expect("product of nonzero ideals")
    }

    pub fn mul_element(&self, k: &NumberField, x: &FieldElement) -> Result<Self> {
        if x.is_zero() {
            return Err(FieldError::ZeroIdeal);
        }
        let gens: Vec<FieldElement> = self.z_basis().iter().map(|b| k.mul(b, x)).collect();
        Self::from_z_span(self.dim(), &gens)
    }

    pub fn sum(&self, other: &FractionalIdeal) -> Self {
        let mut gens = self.z_basis();
        gens.extend(other.z_basis());
        Self::from_z_span(self.dim(), &gens).expect("sum of nonzero lattices")
    }

    pub fn pow(&self, k: &NumberField, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inverse(k)? } else { self.clone() };
        let mut acc = Self::unit(self.dim());
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(k, &base);
        }
        Ok(acc)
    }

    /// Trace dual `{x : Tr(x m) ∈ Z for all m}`.
    pub fn trace_dual(&self, k: &NumberField) -> Self {
        let d = self.dim();
        let t = k.trace_form();
        // (B T)^{-1}, then transpose, times denom
        let b = self.rational_rows();
        let bt: Vec<Vec<Rat>> = (0..d)
            .map(|i| (0..d).map(|j| (0..d).fold(Rat::zero(), |s, l| s + &b[i][l] * Rat::from_integer(t[l][j].clone()))).collect())
            .collect();
        let inv = inverse(&bt).expect("nondegenerate trace form");
        let gens: Vec<FieldElement> = (0..d).map(|j| FieldElement::new((0..d).map(|i| inv[i][j].clone()).collect())).collect();
        Self::from_z_span(d, &gens).expect("dual has full rank")
    }

    pub fn inverse(&self, k: &NumberField) -> Result<Self> {
        let codiff = Self::codifferent(k);
        Ok(self.mul(k, &codiff).trace_dual(k))
    }

    /// `self * other^{-1}`.
    pub fn div(&self, k: &NumberField, other: &FractionalIdeal) -> Result<Self> {
        Ok(self.mul(k, &other.inverse(k)?))
    }

    /// The inverse different `𝔡^{-1}`, the trace dual of O_K.
    pub fn codifferent(k: &NumberField) -> Self {
        if let Some(c) = k.caches.codifferent.get() {
            return c.clone();
        }
        let c = Self::unit(k.degree()).trace_dual(k);
        let _ = k.caches.codifferent.set(c.clone());
        c
    }

    pub fn different(k: &NumberField) -> Self {
        if let Some(c) = k.caches.different.get() {
            return c.clone();
        }
        let c = Self::codifferent(k).inverse(k).expect("codifferent is nonzero");
        let _ = k.caches.different.set(c.clone());
        c
    }
}

impl fmt::Display for FractionalIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, r) in self.basis.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            let s: Vec<String> = r.iter().map(|x| x.to_string()).collect();
            write!(f, "{}", s.join(" "))?;
        }
        write!(f, "]")?;
        if !self.denom.is_one() {
            write!(f, "/{}", self.denom)?;
        }
        Ok(())
    }
}
