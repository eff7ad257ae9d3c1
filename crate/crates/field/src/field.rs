use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use cusp_polytope::linalg::{common_denominator, det, inverse, solve};

use crate::ideal::FractionalIdeal;
use crate::interval::Interval;
use crate::poly;
use crate::{FieldElement, FieldError, Rat, Result, SignVector};

/// Precision (bits) of the stored root enclosures.
pub const BASE_BITS: u32 = 100;

/// An ideal with a human-readable label, e.g. a genus representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledIdeal {
    pub label: String,
    pub ideal: FractionalIdeal,
}

/// Ingested dimensions of spaces of modular forms, weight -> dim.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimTable {
    pub level: String,
    pub genus: String,
    pub group: Option<String>,
    pub source: String,
    pub dims: Vec<(u32, u64)>,
}

/// Everything needed to build a [`NumberField`]; validated by [`NumberField::new`].
#[derive(Clone, Debug, Default)]
pub struct FieldData {
    pub label: String,
    pub degree: usize,
    pub min_poly: Vec<BigInt>,
    pub integral_basis: Vec<Vec<Rat>>,
    pub disc: BigInt,
    pub fundamental_units: Vec<Vec<Rat>>,
    pub class_number: u64,
    pub narrow_class_number: u64,
    pub genus_reps: Vec<(String, Vec<Vec<BigInt>>, BigInt)>,
    pub class_reps: Vec<(String, Vec<Vec<BigInt>>, BigInt)>,
    pub narrow_class_reps: Vec<(String, Vec<Vec<BigInt>>, BigInt)>,
    pub zeta_minus1: Option<Rat>,
    pub zeta2: Option<(Rat, Rat)>,
    pub regulator: Option<(Rat, Rat)>,
    pub dim_tables: Vec<DimTable>,
}

/// A totally real number field with a chosen integral basis.
pub struct NumberField {
    label: String,
    degree: usize,
    min_poly: Vec<BigInt>,
    min_poly_rat: Vec<Rat>,
    basis: Vec<Vec<Rat>>,
    basis_inv: Vec<Vec<Rat>>,
    mult: Vec<Vec<Vec<BigInt>>>,
    trace_form: Vec<Vec<BigInt>>,
    traces: Vec<BigInt>,
    disc: BigInt,
    fundamental_units: Vec<FieldElement>,
    class_number: u64,
    narrow_class_number: u64,
    genus_reps: Vec<LabeledIdeal>,
    class_reps: Vec<LabeledIdeal>,
    narrow_class_reps: Vec<LabeledIdeal>,
    zeta_minus1: Option<Rat>,
    zeta2: Option<Interval>,
    regulator: Option<Interval>,
    dim_tables: Vec<DimTable>,
    roots: Vec<Interval>,
    basis_f64: Vec<Vec<f64>>,
    embed_cache: Mutex<HashMap<u32, Arc<Vec<Vec<Interval>>>>>,
    pub(crate) caches: crate::Caches,
    pub(crate) units: OnceLock<crate::UnitGroupData>,
}

impl std::fmt::Debug for NumberField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("NumberField").field("label", &self.label).field("disc", &self.disc).finish()
    }
}

fn poly_mul_mod(a: &[Rat], b: &[Rat], m: &[Rat]) -> Vec<Rat> {
    let mut p = poly::rem(&poly::mul(a, b), m);
    p.resize(m.len() - 1, Rat::zero());
    p
}

impl NumberField {
    pub fn new(data: FieldData) -> Result<Self> {
        let d = data.degree;
        if d == 0 {
            return Err(FieldError::Schema("degree must be positive".into()));
        }
        if data.min_poly.len() != d + 1 || !data.min_poly[d].is_one() {
            return Err(FieldError::Schema(format!("min_poly must be monic of degree {d}")));
        }
        let mp: Vec<Rat> = data.min_poly.iter().map(|c| Rat::from_integer(c.clone())).collect();
        if data.integral_basis.len() != d || data.integral_basis.iter().any(|r| r.len() != d) {
            return Err(FieldError::Schema(format!("integral_basis must be {d}x{d}")));
        }
        let basis = data.integral_basis.clone();
        let mut one = vec![Rat::zero(); d];
        one[0] = Rat::one();
        if basis[0] != one {
            return Err(FieldError::Invariant("first integral basis element must be 1".into()));
        }
        let basis_inv = inverse(&basis).ok_or_else(|| FieldError::Invariant("integral basis is singular".into()))?;
        let to_basis = |p: &[Rat]| -> Vec<Rat> {
            (0..d).map(|j| (0..d).fold(Rat::zero(), |s, k| s + &p[k] * &basis_inv[k][j])).collect()
        };
        let mut mult = vec![vec![Vec::new(); d]; d];
        for i in 0..d {
            for j in 0..d {
                let c = to_basis(&poly_mul_mod(&basis[i], &basis[j], &mp));
                if c.iter().any(|x| !x.is_integer()) {
                    return Err(FieldError::Invariant(format!(
                        "integral basis is not closed under multiplication (b{i} * b{j})"
                    )));
                }
                mult[i][j] = c.into_iter().map(|x| x.to_integer()).collect();
            }
        }
        let power_trace = |p: &[Rat]| -> Rat {
            // trace of multiplication by p in the power basis
            let mut m = vec![vec![Rat::zero(); d]; d];
            for i in 0..d {
                let mut e = vec![Rat::zero(); d];
                e[i] = Rat::one();
                m[i] = poly_mul_mod(p, &e, &mp);
            }
            (0..d).fold(Rat::zero(), |s, i| s + &m[i][i])
        };
        let traces_rat: Vec<Rat> = basis.iter().map(|b| power_trace(b)).collect();
        let traces: Vec<BigInt> = traces_rat
            .iter()
            .map(|t| {
                if t.is_integer() {
                    Ok(t.to_integer())
                } else {
                    Err(FieldError::Invariant("trace of a basis element is not integral".into()))
                }
            })
            .collect::<Result<_>>()?;
        let trace_form: Vec<Vec<BigInt>> = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| mult[i][j].iter().zip(&traces).fold(BigInt::zero(), |s, (c, t)| s + c * t))
                    .collect()
            })
            .collect();
        let tf_rat: Vec<Vec<Rat>> =
            trace_form.iter().map(|r| r.iter().map(|x| Rat::from_integer(x.clone())).collect()).collect();
        let computed = det(&tf_rat).to_integer();
        if computed != data.disc {
            return Err(FieldError::DiscriminantMismatch { declared: data.disc.to_string(), computed: computed.to_string() });
        }
        let disc_poly = poly::discriminant(&mp);
        if disc_poly.is_zero() {
            return Err(FieldError::Invariant("min_poly is not squarefree".into()));
        }
        let roots = poly::isolate_real_roots(&mp, BASE_BITS);
        if roots.len() != d {
            return Err(FieldError::Invariant(format!("min_poly has {} real roots, expected {d}", roots.len())));
        }
        let basis_f64: Vec<Vec<f64>> = roots
            .iter()
            .map(|r| basis.iter().map(|b| crate::rat_to_f64(&poly::eval_interval(b, r).mid())).collect())
            .collect();
        let mut k = NumberField {
            label: data.label.clone(),
            degree: d,
            min_poly: data.min_poly.clone(),
            min_poly_rat: mp,
            basis,
            basis_inv,
            mult,
            trace_form,
            traces,
            disc: data.disc.clone(),
            fundamental_units: Vec::new(),
            class_number: data.class_number,
            narrow_class_number: data.narrow_class_number,
            genus_reps: Vec::new(),
            class_reps: Vec::new(),
            narrow_class_reps: Vec::new(),
            zeta_minus1: data.zeta_minus1.clone(),
            zeta2: data.zeta2.clone().map(|(a, b)| Interval::new(a, b)),
            regulator: data.regulator.clone().map(|(a, b)| Interval::new(a, b)),
            dim_tables: data.dim_tables.clone(),
            roots,
            basis_f64,
            embed_cache: Mutex::new(HashMap::new()),
            caches: crate::Caches::default(),
            units: OnceLock::new(),
        };
        if data.fundamental_units.len() + 1 != d {
            return Err(FieldError::Schema(format!("expected {} fundamental units", d - 1)));
        }
        for (i, u) in data.fundamental_units.iter().enumerate() {
            if u.len() != d {
                return Err(FieldError::Schema(format!("fundamental unit {i} has wrong length")));
            }
            let u = FieldElement::new(u.clone());
            if !u.is_integral_vector() {
                return Err(FieldError::Invariant(format!("fundamental unit {i} is not integral")));
            }
            let n = k.norm(&u);
            if n.abs() != Rat::one() {
                return Err(FieldError::Invariant(format!("fundamental unit {i} has norm {n}")));
            }
            k.fundamental_units.push(u);
        }
        let mk = |k: &NumberField, list: &[(String, Vec<Vec<BigInt>>, BigInt)]| -> Result<Vec<LabeledIdeal>> {
            list.iter()
                .map(|(label, rows, den)| {
                    let gens: Vec<FieldElement> = rows
                        .iter()
                        .map(|r| FieldElement::new(r.iter().map(|x| Rat::new(x.clone(), den.clone())).collect()))
                        .collect();
                    let ideal = FractionalIdeal::from_z_basis(k, &gens)?;
                    if !ideal.is_ideal(k) {
                        return Err(FieldError::Invariant(format!("representative {label} is not an O_K-module")));
                    }
                    Ok(LabeledIdeal { label: label.clone(), ideal })
                })
                .collect()
        };
        k.genus_reps = mk(&k, &data.genus_reps)?;
        k.class_reps = mk(&k, &data.class_reps)?;
        k.narrow_class_reps = mk(&k, &data.narrow_class_reps)?;
        if k.genus_reps.is_empty() {
            k.genus_reps.push(LabeledIdeal { label: "principal".into(), ideal: FractionalIdeal::unit(d) });
        }
        if k.class_reps.is_empty() {
            if k.class_number == 1 {
                k.class_reps.push(LabeledIdeal { label: "trivial".into(), ideal: FractionalIdeal::unit(d) });
            } else {
                return Err(FieldError::Schema("class_reps required when class_number > 1".into()));
            }
        }
        if k.narrow_class_reps.is_empty() {
            if k.narrow_class_number == 1 {
                k.narrow_class_reps.push(LabeledIdeal { label: "trivial".into(), ideal: FractionalIdeal::unit(d) });
            } else if k.narrow_class_number == k.class_number && k.class_reps.len() as u64 == k.class_number {
                k.narrow_class_reps = k.class_reps.clone();
            } else if k.genus_reps.len() as u64 == k.narrow_class_number {
                k.narrow_class_reps = k.genus_reps.clone();
            } else {
                return Err(FieldError::Schema("narrow_class_reps required for this narrow class group".into()));
            }
        }
        if k.class_reps.len() as u64 != k.class_number {
            return Err(FieldError::Schema("class_reps count differs from class_number".into()));
        }
        if k.narrow_class_reps.len() as u64 != k.narrow_class_number {
            return Err(FieldError::Schema("narrow class representative count differs from narrow_class_number".into()));
        }
        Ok(k)
    }

    pub fn label(&self) -> &str {
        &self.label
    }
    pub fn degree(&self) -> usize {
        self.degree
    }
    pub fn min_poly(&self) -> &[BigInt] {
        &self.min_poly
    }
    pub fn integral_basis(&self) -> &[Vec<Rat>] {
        &self.basis
    }
    pub fn disc(&self) -> &BigInt {
        &self.disc
    }
    pub fn fundamental_units(&self) -> &[FieldElement] {
        &self.fundamental_units
    }
    pub fn class_number(&self) -> u64 {
        self.class_number
    }
    pub fn narrow_class_number(&self) -> u64 {
        self.narrow_class_number
    }
    pub fn genus_reps(&self) -> &[LabeledIdeal] {
        &self.genus_reps
    }
    pub fn class_reps(&self) -> &[LabeledIdeal] {
        &self.class_reps
    }
    pub fn narrow_class_reps(&self) -> &[LabeledIdeal] {
        &self.narrow_class_reps
    }
    pub fn zeta_minus1(&self) -> Option<&Rat> {
        self.zeta_minus1.as_ref()
    }
    pub fn zeta2(&self) -> Option<&Interval> {
        self.zeta2.as_ref()
    }
    pub fn regulator(&self) -> Option<&Interval> {
        self.regulator.as_ref()
    }
    pub fn dim_tables(&self) -> &[DimTable] {
        &self.dim_tables
    }
    pub fn trace_form(&self) -> &[Vec<BigInt>] {
        &self.trace_form
    }
    pub fn root_enclosures(&self) -> &[Interval] {
        &self.roots
    }

    // ---- elements ----

    pub fn zero(&self) -> FieldElement {
        FieldElement::zero(self.degree)
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::one(self.degree)
    }

    pub fn rational(&self, r: Rat) -> FieldElement {
        FieldElement::rational(self.degree, r)
    }

    /// The basis element `b_k`.
    pub fn basis_element(&self, k: usize) -> FieldElement {
        let mut c = vec![Rat::zero(); self.degree];
        c[k] = Rat::one();
        FieldElement::new(c)
    }

    /// The element with the given coefficients in powers of the root.
    pub fn from_poly(&self, p: &[Rat]) -> FieldElement {
        let mut q = poly::rem(p, &self.min_poly_rat);
        q.resize(self.degree, Rat::zero());
        let d = self.degree;
        FieldElement::new((0..d).map(|j| (0..d).fold(Rat::zero(), |s, k| s + &q[k] * &self.basis_inv[k][j])).collect())
    }

    /// The root of the defining polynomial.
    pub fn theta(&self) -> FieldElement {
        self.from_poly(&[Rat::zero(), Rat::one()])
    }

    /// Coefficients in powers of the root.
    pub fn to_poly(&self, x: &FieldElement) -> Vec<Rat> {
        let d = self.degree;
        (0..d).map(|j| (0..d).fold(Rat::zero(), |s, k| s + &x.coords()[k] * &self.basis[k][j])).collect()
    }

    pub fn mul(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        let d = self.degree;
        let mut out = vec![Rat::zero(); d];
        for (i, a) in x.coords().iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.coords().iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a * b;
                for (k, c) in self.mult[i][j].iter().enumerate() {
                    if !c.is_zero() {
                        out[k] += &ab * c;
                    }
                }
            }
        }
        FieldElement::new(out)
    }

    /// Matrix of multiplication by `x`: row `i` holds the coordinates of `x b_i`.
    pub fn mult_matrix(&self, x: &FieldElement) -> Vec<Vec<Rat>> {
        (0..self.degree).map(|i| self.mul(x, &self.basis_element(i)).into_coords()).collect()
    }

    pub fn trace(&self, x: &FieldElement) -> Rat {
        x.coords().iter().zip(&self.traces).fold(Rat::zero(), |s, (c, t)| s + c * t)
    }

    /// Coefficient vector `v` with `Tr(x y) = v . coords(y)`.
    pub fn trace_pairing_row(&self, x: &FieldElement) -> Vec<Rat> {
        let d = self.degree;
        (0..d)
            .map(|j| (0..d).fold(Rat::zero(), |s, i| s + &x.coords()[i] * Rat::from_integer(self.trace_form[i][j].clone())))
            .collect()
    }

    pub fn norm(&self, x: &FieldElement) -> Rat {
        det(&self.mult_matrix(x))
    }

    pub fn inverse(&self, x: &FieldElement) -> Result<FieldElement> {
        if x.is_zero() {
            return Err(FieldError::ZeroElement);
        }
        // solve y * M_x = e_0 where rows of M_x are x b_i
        let m = self.mult_matrix(x);
        let mt: Vec<Vec<Rat>> = (0..self.degree).map(|j| (0..self.degree).map(|i| m[i][j].clone()).collect()).collect();
        let y = solve(&mt, self.one().coords()).ok_or(FieldError::ZeroElement)?;
        Ok(FieldElement::new(y))
    }

    pub fn div(&self, x: &FieldElement, y: &FieldElement) -> Result<FieldElement> {
        Ok(self.mul(x, &self.inverse(y)?))
    }

    pub fn pow(&self, x: &FieldElement, e: i64) -> Result<FieldElement> {
        let base = if e < 0 { self.inverse(x)? } else { x.clone() };
        let mut n = e.unsigned_abs();
        let mut acc = self.one();
        let mut b = base;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            n >>= 1;
            if n > 0 {
                b = self.mul(&b, &b);
            }
        }
        Ok(acc)
    }

    /// Characteristic polynomial of `x`, monic, constant term first.
    pub fn charpoly(&self, x: &FieldElement) -> Vec<Rat> {
        poly::charpoly(&self.mult_matrix(x))
    }

    pub fn is_integral(&self, x: &FieldElement) -> bool {
        x.is_integral_vector()
    }

    /// Clear denominators: the smallest positive integer `n` with `n x` integral.
    pub fn denominator(&self, x: &FieldElement) -> BigInt {
        common_denominator(x.coords())
    }

    // ---- real embeddings ----

    /// Root enclosures refined to at least `bits` bits.
    pub fn roots_at(&self, bits: u32) -> Vec<Interval> {
        if bits <= BASE_BITS {
            return self.roots.clone();
        }
        self.roots.iter().map(|r| poly::refine_root(&self.min_poly_rat, r, bits)).collect()
    }

    /// Enclosures of `sigma_i(b_k)` indexed `[place][k]`.
    pub fn basis_embeddings(&self, bits: u32) -> Arc<Vec<Vec<Interval>>> {
        let bits = bits.max(BASE_BITS);
        if let Some(v) = self.embed_cache.lock().unwrap().get(&bits) {
            return v.clone();
        }
        let roots = self.roots_at(bits);
        let v: Vec<Vec<Interval>> =
            roots.iter().map(|r| self.basis.iter().map(|b| poly::eval_interval(b, r)).collect()).collect();
        let v = Arc::new(v);
        self.embed_cache.lock().unwrap().insert(bits, v.clone());
        v
    }

    /// Enclosure of the `place`-th embedding of `x`.
    pub fn embed(&self, x: &FieldElement, place: usize, bits: u32) -> Interval {
        let be = self.basis_embeddings(bits);
        x.coords()
            .iter()
            .zip(&be[place])
            .filter(|(c, _)| !c.is_zero())
            .fold(Interval::zero(), |s, (c, b)| &s + &b.scale(c))
    }

    pub fn embed_all(&self, x: &FieldElement, bits: u32) -> Vec<Interval> {
        (0..self.degree).map(|i| self.embed(x, i, bits)).collect()
    }

    /// Floating-point embeddings (for heuristics only, never for decisions).
    pub fn embed_f64(&self, x: &FieldElement) -> Vec<f64> {
        let c: Vec<f64> = x.coords().iter().map(crate::rat_to_f64).collect();
        self.basis_f64.iter().map(|row| row.iter().zip(&c).map(|(b, a)| a * b).sum()).collect()
    }

    /// Exact sign of one embedding of a nonzero element.
    pub fn sign_at(&self, x: &FieldElement, place: usize) -> Result<i8> {
        if x.is_zero() {
            return Err(FieldError::ZeroElement);
        }
        let den = self.denominator(x);
        let ints: Vec<BigInt> = x.coords().iter().map(|c| (c * &den).to_integer()).collect();
        // fast path: floating evaluation with a rigorous error bound
        if ints.iter().all(|c| c.bits() < 50) {
            let row = &self.basis_f64[place];
            let mut s = 0.0f64;
            let mut mag = 0.0f64;
            for (c, b) in ints.iter().zip(row) {
                let cf = c.to_f64().unwrap();
                s += cf * b;
                mag += cf.abs() * (b.abs() + 1.0);
            }
            let err = mag * (self.degree as f64 + 4.0) * f64::EPSILON * 4.0 + 1e-300;
            if s.abs() > err {
                return Ok(if s > 0.0 { 1 } else { -1 });
            }
        }
        let mut bits = BASE_BITS;
        loop {
            if let Some(s) = self.embed(x, place, bits).sign() {
                return Ok(s);
            }
            bits *= 2;
        }
    }

    pub fn signs(&self, x: &FieldElement) -> Result<SignVector> {
        let v = (0..self.degree).map(|i| self.sign_at(x, i).map(|s| s > 0)).collect::<Result<Vec<_>>>()?;
        Ok(SignVector(v))
    }

    pub fn is_totally_positive(&self, x: &FieldElement) -> bool {
        !x.is_zero() && (0..self.degree).all(|i| self.sign_at(x, i) == Ok(1))
    }

    /// Exact comparison of `sigma_place(x)` with the rational `r`: -1, 0 or 1.
    pub fn compare_embedding(&self, x: &FieldElement, place: usize, r: &Rat) -> i8 {
        let diff = &*x - &self.rational(r.clone());
        if diff.is_zero() {
            return 0;
        }
        self.sign_at(&diff, place).expect("nonzero")
    }
}
