use num_bigint::BigInt;
use num_traits::Signed;

use crate::region::{lattice_points_in_region, Region};
use crate::{FieldElement, FieldError, FractionalIdeal, NumberField, Rat, Result};

/// Extra doublings of the search box before giving up.
pub const MAX_DOUBLINGS: u32 = 8;

/// The narrow class group presented by its representatives.
#[derive(Clone, Debug)]
pub struct NarrowClassGroup {
    pub reps: Vec<FractionalIdeal>,
    /// `table[a][b]` is the class of `R_a R_b`.
    pub table: Vec<Vec<usize>>,
    rep_inverses: Vec<FractionalIdeal>,
}

impl NarrowClassGroup {
    pub fn order(&self) -> usize {
        self.reps.len()
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn neg(&self, a: usize) -> usize {
        (0..self.order()).find(|&b| self.table[a][b] == 0).expect("group")
    }
}

impl NumberField {
    /// A totally positive generator of `j`, or `None` if `j` is not narrowly principal.
    pub fn narrowly_principal(&self, j: &FractionalIdeal) -> Result<Option<FieldElement>> {
        if j.is_unit() {
            return Ok(Some(self.one()));
        }
        let d = self.degree();
        let n = j.norm();
        // rescale so the search runs on an integral ideal of small content
        let root = crate::rat_to_f64(&n).powf(1.0 / d as f64);
        let units = self.fundamental_units();
        let logs: Vec<Vec<f64>> = units
            .iter()
            .map(|u| self.embed_f64(u).iter().map(|x| x.abs().ln()).collect())
            .collect();
        let lambda: Vec<f64> = (0..d).map(|i| 0.5 * logs.iter().map(|l| l[i].abs()).sum::<f64>()).collect();
        let full: Vec<f64> = lambda.iter().map(|l| root * (l * (1.0 + 1e-9) + 1e-9).exp() * (1.0 + 1e-9)).collect();
        let mut scale = 1.0 / 8.0;
        for _ in 0..=MAX_DOUBLINGS {
            if let Some(g) = self.principal_search(j, &n, &full, scale)? {
                return Ok(self.sign_adjust(&g));
            }
            if scale >= 1.0 {
                // the full box contains a generator of every principal ideal
                return Ok(None);
            }
            scale *= 2.0;
        }
        Err(FieldError::PrincipalityInconclusive(n.to_string()))
    }

    fn principal_search(&self, j: &FractionalIdeal, n: &Rat, full: &[f64], scale: f64) -> Result<Option<FieldElement>> {
        let radii: Vec<Rat> = full.iter().map(|r| Rat::from_float(r * scale).unwrap()).collect();
        let region = Region::embedding_box(&radii);
        let mut pts = lattice_points_in_region(self, j, &region)?;
        pts.sort();
        Ok(pts.into_iter().find(|x| !x.is_zero() && &self.norm(x).abs() == n))
    }

    /// Multiply a generator by a unit (or -1) to make it totally positive, if possible.
    fn sign_adjust(&self, g: &FieldElement) -> Option<FieldElement> {
        let data = self.totally_positive_units();
        let d = self.degree();
        let target: Vec<u8> = self.signs(g).expect("nonzero").0.iter().map(|p| u8::from(!*p)).collect();
        let rows = &data.sign_matrix;
        for mask in 0u32..(1 << rows.len()) {
            let mut acc = vec![0u8; d];
            for (k, row) in rows.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    for i in 0..d {
                        acc[i] ^= row[i];
                    }
                }
            }
            if acc == target {
                let mut x = g.clone();
                if mask & 1 == 1 {
                    x = -&x;
                }
                for (k, u) in data.fundamental_units.iter().enumerate() {
                    if mask >> (k + 1) & 1 == 1 {
                        x = self.mul(&x, u);
                    }
                }
                debug_assert!(self.is_totally_positive(&x));
                return Some(x);
            }
        }
        None
    }

    /// `a` and `b` are in the same narrow ideal class.
    pub fn narrowly_equivalent(&self, a: &FractionalIdeal, b: &FractionalIdeal) -> Result<bool> {
        Ok(self.narrowly_principal(&a.div(self, b)?)?.is_some())
    }

    pub fn narrow_class_group(&self) -> Result<&NarrowClassGroup> {
        if let Some(g) = self.caches.narrow.get() {
            return Ok(g);
        }
        let reps: Vec<FractionalIdeal> = self.narrow_class_reps().iter().map(|r| r.ideal.clone()).collect();
        let rep_inverses = reps.iter().map(|r| r.inverse(self)).collect::<Result<Vec<_>>>()?;
        let mut g = NarrowClassGroup { reps: reps.clone(), table: Vec::new(), rep_inverses };
        if reps.len() > 1 {
            for a in 0..reps.len() {
                if self.class_in(&g, &reps[a])? != a {
                    return Err(FieldError::Invariant("narrow class representatives are not distinct".into()));
                }
            }
        }
        let mut table = vec![vec![0; reps.len()]; reps.len()];
        for a in 0..reps.len() {
            for b in 0..reps.len() {
                table[a][b] = if reps.len() == 1 { 0 } else { self.class_in(&g, &reps[a].mul(self, &reps[b]))? };
            }
        }
        g.table = table;
        let _ = self.caches.narrow.set(g);
        Ok(self.caches.narrow.get().unwrap())
    }

    fn class_in(&self, g: &NarrowClassGroup, j: &FractionalIdeal) -> Result<usize> {
        if g.reps.len() == 1 {
            return Ok(0);
        }
        for (k, inv) in g.rep_inverses.iter().enumerate() {
            if self.narrowly_principal(&j.mul(self, inv))?.is_some() {
                return Ok(k);
            }
        }
        Err(FieldError::UnknownClass)
    }

    /// Index of the narrow class of `j` among the representatives.
    pub fn narrow_class(&self, j: &FractionalIdeal) -> Result<usize> {
        let g = self.narrow_class_group()?;
        self.class_in(g, j)
    }

    /// Narrow class of a prime ideal, cached.
    pub fn prime_narrow_class(&self, p: &crate::PrimeIdeal) -> Result<usize> {
        let g = self.narrow_class_group()?;
        if g.order() == 1 {
            return Ok(0);
        }
        if let Some(x) = self.caches.prime_class.lock().unwrap().get(&p.ideal).copied() {
            return Ok(x);
        }
        let x = self.class_in(g, &p.ideal)?;
        self.caches.prime_class.lock().unwrap().insert(p.ideal.clone(), x);
        Ok(x)
    }

    /// Index of the narrow class of `j` via its prime factorization, caching prime classes.
    pub fn narrow_class_by_primes(&self, j: &FractionalIdeal) -> Result<usize> {
        let g = self.narrow_class_group()?;
        if g.order() == 1 {
            return Ok(0);
        }
        let mut c = 0usize;
        // rescaling by a positive rational does not change the narrow class
        let content = Rat::new(j.denom().clone(), BigInt::from(1));
        let j = j.scale(&content)?;
        for (p, v) in self.factor_ideal(&j)? {
            let pc = self.prime_narrow_class(&p)?;
            let step = if v < 0 { g.neg(pc) } else { pc };
            for _ in 0..v.unsigned_abs() {
                c = g.add(c, step);
            }
        }
        Ok(c)
    }
}
