//! Certificates for the Kodaira dimension of Hilbert modular varieties,
//! comparing dimensions of spaces of modular forms against cusp and
//! elliptic-point defects.

use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use cusp_cone::{trace_minimal_cone, TraceMinCone};
use cusp_defects::{defect_polyhedra, CuspType, DefectError};
use cusp_field::{FieldElement, FieldError, FractionalIdeal, Interval, NumberField, Rat, UnitSubgroup};
use cusp_quotsing::{elliptic_constant_e_i, QuotSingError};

#[derive(Debug, Error)]
pub enum CertifyError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Defects(#[from] DefectError),
    #[error(transparent)]
    Cone(#[from] cusp_cone::ConeError),
    #[error(transparent)]
    QuotSing(#[from] QuotSingError),
    #[error("field {0} has no zeta_K(-1) value")]
    MissingZeta(String),
    #[error("level {0} needs an explicit cusp list")]
    UnsupportedLevel(String),
    #[error("prime-level certificates need class number 1, got {0}")]
    ClassNumber(u64),
    #[error("no genus representative {0}")]
    Genus(String),
    #[error("level ideal must be integral")]
    NotIntegral,
    #[error("declared unit index {declared} for modulus {modulus} but computed {computed}")]
    UnitIndex { modulus: String, declared: u64, computed: u64 },
    #[error("weights of dimensions and defects do not match")]
    WeightMismatch,
}

pub type Result<T> = std::result::Result<T, CertifyError>;

/// `pi^6` enclosed to width `10^-30`.
pub fn pi6_enclosure() -> Interval {
    let den = BigInt::from(10u32).pow(30);
    let lo: BigInt = "961389193575304437030219443652419".parse().unwrap();
    Interval::new(Rat::new(lo.clone(), den.clone()), Rat::new(lo + 1, den))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Verdict {
    Inconclusive,
    KappaAtLeastZero,
    KappaAtLeastOne,
    GeneralType,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::GeneralType => "general-type",
            Verdict::KappaAtLeastOne => "kappa>=1",
            Verdict::KappaAtLeastZero => "kappa>=0",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// How `lhs` and `rhs` are compared.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Criterion {
    /// `lhs = [PSL_2 : Gamma_0(I)] (-1)^d 2 zeta_K(-1)`, `rhs = sum of cusp constants + e_I`;
    /// general type iff `lhs > rhs`.
    Asymptotic,
    /// `lhs = dim M_{2q}`, `rhs = sum of defects` at one weight `2q`.
    Weight { weight: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub field: String,
    pub genus: String,
    pub level: String,
    pub criterion: Criterion,
    pub verdict: Verdict,
    pub lhs: Rat,
    pub rhs: Rat,
    /// Named exact inputs, each with where it came from.
    pub inputs: Vec<CertificateInput>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateInput {
    pub name: String,
    pub value: Rat,
    pub source: String,
}

impl CertificateInput {
    fn new(name: impl Into<String>, value: Rat, source: impl Into<String>) -> Self {
        CertificateInput { name: name.into(), value, source: source.into() }
    }
}

fn weight_verdict(bound: &Rat) -> Verdict {
    if *bound >= Rat::from_integer(BigInt::from(2)) {
        Verdict::KappaAtLeastOne
    } else if *bound >= Rat::one() {
        Verdict::KappaAtLeastZero
    } else {
        Verdict::Inconclusive
    }
}

impl Certificate {
    /// Re-derive both sides from the inlined inputs, then the verdict.
    pub fn recheck(&self) -> bool {
        let expected = match self.criterion {
            Criterion::Asymptotic => {
                let (Some(z), Some(index)) = (self.input("z"), self.input("level_index")) else {
                    return false;
                };
                let mut lhs = z * index;
                if let Some(s) = self.input("squares_index") {
                    lhs /= s;
                }
                let mut rhs = self.input("e_I").cloned().unwrap_or_else(Rat::zero);
                for i in 0.. {
                    let Some(c) = self.input(&format!("c[{i}]")) else { break };
                    rhs += c * self.input(&format!("unit_index[{i}]")).cloned().unwrap_or_else(Rat::one);
                }
                if lhs != self.lhs || rhs != self.rhs {
                    return false;
                }
                if self.lhs > self.rhs {
                    Verdict::GeneralType
                } else {
                    Verdict::Inconclusive
                }
            }
            Criterion::Weight { .. } => weight_verdict(&(&self.lhs - &self.rhs)),
        };
        expected == self.verdict
    }

    pub fn input(&self, name: &str) -> Option<&Rat> {
        self.inputs.iter().find(|i| i.name == name).map(|i| &i.value)
    }
}

/// A level `I` with a display label.
#[derive(Clone, Debug)]
pub struct Level {
    pub label: String,
    pub ideal: FractionalIdeal,
}

impl Level {
    pub fn one(k: &NumberField) -> Self {
        Level { label: "(1)".into(), ideal: FractionalIdeal::unit(k.degree()) }
    }
}

/// A cusp of `H_{K,I;A}` and the index of its unit group in `O_+`.
#[derive(Clone, Debug)]
pub struct LevelCusp {
    pub cusp: CuspType,
    pub unit_index: u64,
}

/// One cusp in a hand-specified structure: its unit group is `{u in O_+ : u = 1 mod modulus}`.
#[derive(Clone, Debug)]
pub struct ExplicitCusp {
    pub modulus: FractionalIdeal,
    pub declared_index: Option<u64>,
}

/// `[PSL_2(O_K) : Gamma_0(I)] = N(I) prod_{p | I} (1 + 1/N(p))`.
pub fn level_index(k: &NumberField, level: &FractionalIdeal) -> Result<BigInt> {
    if !level.is_integral() {
        return Err(CertifyError::NotIntegral);
    }
    let mut out = BigInt::one();
    for (p, e) in k.factor_ideal(level)? {
        let n = BigInt::from(p.norm());
        out *= n.pow(e as u32 - 1) * (&n + 1);
    }
    Ok(out)
}

fn reduce_mod(m: &FractionalIdeal, x: &[BigInt]) -> Vec<BigInt> {
    // lower-triangular rows: row i has its pivot in column i
    let mut x = x.to_vec();
    let b = m.basis();
    for i in (0..x.len()).rev() {
        let q = x[i].div_floor(&b[i][i]);
        if !q.is_zero() {
            for (xj, bj) in x.iter_mut().zip(&b[i]) {
                *xj -= &q * bj;
            }
        }
    }
    x
}

fn integer_coords(x: &FieldElement) -> Vec<BigInt> {
    x.coords().iter().map(|c| {
        debug_assert!(c.is_integer());
        c.to_integer()
    }).collect()
}

/// `{u in O_+ : u = 1 mod m}`.
pub fn congruence_subgroup(k: &NumberField, m: &FractionalIdeal) -> Result<UnitSubgroup> {
    if !m.is_integral() {
        return Err(CertifyError::NotIntegral);
    }
    let full = UnitSubgroup::full(k);
    if m.is_unit() {
        return Ok(full);
    }
    let gens = &k.totally_positive_units().tp_generators;
    let r = gens.len();
    let one = reduce_mod(m, &integer_coords(&k.one()));
    let mul_mod = |a: &[BigInt], b: &FieldElement| -> Vec<BigInt> {
        let a = FieldElement::from_bigints(a);
        reduce_mod(m, &integer_coords(&k.mul(&a, b)))
    };
    // residues of g_i^e for e < ord_i
    let mut powers: Vec<Vec<Vec<BigInt>>> = Vec::with_capacity(r);
    for g in gens {
        let mut list = vec![one.clone()];
        loop {
            let next = mul_mod(list.last().unwrap(), g);
            if next == one {
                break;
            }
            list.push(next);
        }
        powers.push(list);
    }
    let ords: Vec<usize> = powers.iter().map(|p| p.len()).collect();
    let mut rows: Vec<Vec<i64>> = (0..r)
        .map(|i| {
            let mut e = vec![0i64; r];
            e[i] = ords[i] as i64;
            e
        })
        .collect();
    let mut z = vec![0usize; r];
    loop {
        let mut i = 0;
        while i < r {
            z[i] += 1;
            if z[i] < ords[i] {
                break;
            }
            z[i] = 0;
            i += 1;
        }
        if i == r {
            break;
        }
        let mut acc = one.clone();
        for (j, &e) in z.iter().enumerate() {
            if e > 0 {
                acc = mul_mod(&acc, &FieldElement::from_bigints(&powers[j][e]));
            }
        }
        if acc == one {
            rows.push(z.iter().map(|&e| e as i64).collect());
        }
    }
    Ok(UnitSubgroup::from_exponents(k, rows)?)
}

/// `[O_+ : {u = 1 mod m}]`.
pub fn unit_congruence_index(k: &NumberField, m: &FractionalIdeal) -> Result<u64> {
    Ok(congruence_subgroup(k, m)?.index())
}

fn genus_rep<'a>(k: &'a NumberField, genus: &str) -> Result<&'a cusp_field::LabeledIdeal> {
    if let Ok(i) = genus.parse::<usize>() {
        return k.genus_reps().get(i).ok_or_else(|| CertifyError::Genus(genus.into()));
    }
    k.genus_reps().iter().find(|g| g.label == genus).ok_or_else(|| CertifyError::Genus(genus.into()))
}

/// Which modular group the threefold is a quotient by.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ModularGroup {
    /// Cusp unit groups are `O_+`.
    #[default]
    Gl2Plus,
    /// Cusp unit groups are the squares of units.
    Sl2,
}

impl ModularGroup {
    fn cusp_units(self, k: &NumberField) -> UnitSubgroup {
        match self {
            ModularGroup::Gl2Plus => UnitSubgroup::full(k),
            ModularGroup::Sl2 => UnitSubgroup::squares(k),
        }
    }
}

/// Cusps of `H_{K,I;A}` for `I = (1)` or prime `I` (when `h = 1`).
pub fn cusp_structure(k: &NumberField, genus: &str, level: &FractionalIdeal) -> Result<Vec<LevelCusp>> {
    cusp_structure_for(k, genus, level, ModularGroup::Gl2Plus)
}

pub fn cusp_structure_for(
    k: &NumberField,
    genus: &str,
    level: &FractionalIdeal,
    group: ModularGroup,
) -> Result<Vec<LevelCusp>> {
    let a = &genus_rep(k, genus)?.ideal;
    let v = group.cusp_units(k);
    let unit_index = v.index();
    if level.is_unit() {
        let mut out = Vec::new();
        for j in k.class_reps() {
            let m = j.ideal.mul(k, &j.ideal).mul(k, a);
            out.push(LevelCusp { cusp: CuspType::new(m, v.clone()), unit_index });
        }
        return Ok(out);
    }
    let factors = k.factor_ideal(level)?;
    if factors.len() == 1 && factors[0].1 == 1 && k.class_number() == 1 {
        let c = LevelCusp { cusp: CuspType::new(a.clone(), v), unit_index };
        return Ok(vec![c.clone(), c]);
    }
    Err(CertifyError::UnsupportedLevel(level.to_string()))
}

/// A hand-specified cusp list for class number one, with unit indices recomputed.
pub fn explicit_cusp_structure(k: &NumberField, genus: &str, cusps: &[ExplicitCusp]) -> Result<Vec<LevelCusp>> {
    let a = &genus_rep(k, genus)?.ideal;
    let mut out = Vec::with_capacity(cusps.len());
    for c in cusps {
        let v = congruence_subgroup(k, &c.modulus)?;
        let computed = v.index();
        if let Some(declared) = c.declared_index {
            if declared != computed {
                return Err(CertifyError::UnitIndex { modulus: c.modulus.to_string(), declared, computed });
            }
        }
        out.push(LevelCusp { cusp: CuspType::new(a.clone(), v), unit_index: computed });
    }
    Ok(out)
}

/// Caches the trace-minimal cone and `c_{M,O_+}` per narrow class.
pub struct Certifier<'a> {
    k: &'a NumberField,
    cone: Mutex<Option<TraceMinCone>>,
    constants: Mutex<HashMap<usize, Rat>>,
}

impl<'a> Certifier<'a> {
    pub fn new(k: &'a NumberField) -> Self {
        Certifier { k, cone: Mutex::new(None), constants: Mutex::new(HashMap::new()) }
    }

    /// Reuse an `O_+`-trace-minimal cone computed elsewhere.
    pub fn with_cone(k: &'a NumberField, cone: TraceMinCone) -> Self {
        Certifier { k, cone: Mutex::new(Some(cone)), constants: Mutex::new(HashMap::new()) }
    }

    /// Record a `c_{M,O_+}` computed elsewhere.
    pub fn seed_constant(&self, m: &FractionalIdeal, c: Rat) -> Result<()> {
        let class = self.k.narrow_class(m)?;
        self.constants.lock().unwrap().insert(class, c);
        Ok(())
    }

    pub fn field(&self) -> &NumberField {
        self.k
    }

    pub fn cone(&self) -> Result<TraceMinCone> {
        let mut g = self.cone.lock().unwrap();
        if g.is_none() {
            *g = Some(trace_minimal_cone(self.k, &UnitSubgroup::full(self.k))?);
        }
        Ok(g.clone().unwrap())
    }

    /// `c_{M,O_+}`, shared across a narrow class.
    pub fn full_constant(&self, m: &FractionalIdeal) -> Result<Rat> {
        let class = self.k.narrow_class(m)?;
        if let Some(c) = self.constants.lock().unwrap().get(&class) {
            return Ok(c.clone());
        }
        let cone = self.cone()?;
        let red = cusp_cone::reducers(self.k, &cone, m)?;
        let c = defect_polyhedra(self.k, &cone, &red)?.union.volume;
        self.constants.lock().unwrap().insert(class, c.clone());
        Ok(c)
    }

    /// `c_{M,V} = [O_+ : V] c_{M,O_+}`.
    pub fn constant(&self, cusp: &CuspType) -> Result<Rat> {
        Ok(self.full_constant(&cusp.m)? * Rat::from_integer(BigInt::from(cusp.index())))
    }

    fn z(&self) -> Result<Rat> {
        let zeta = self.k.zeta_minus1().ok_or_else(|| CertifyError::MissingZeta(self.k.label().into()))?;
        let sign = if self.k.degree() % 2 == 0 { Rat::one() } else { -Rat::one() };
        Ok(sign * Rat::from_integer(BigInt::from(2)) * zeta)
    }

    /// `[PSL_2 : Gamma_0(I)] z` against the cusp constants plus `e_I`, for `PGL_2^+`.
    pub fn asymptotic_certificate(&self, genus: &str, level: &Level, cusps: &[LevelCusp]) -> Result<Certificate> {
        self.asymptotic_certificate_for(genus, level, cusps, ModularGroup::Gl2Plus)
    }

    /// For `PGL_2^+` the volume term is `z / [O_+ : O^{x2}]`; unit indices in
    /// `cusps` are always relative to `O_+`.
    pub fn asymptotic_certificate_for(
        &self,
        genus: &str,
        level: &Level,
        cusps: &[LevelCusp],
        group: ModularGroup,
    ) -> Result<Certificate> {
        let k = self.k;
        let z = self.z()?;
        let index = level_index(k, &level.ideal)?;
        let e = elliptic_constant_e_i(k, &level.ideal)?;
        let mut inputs = vec![
            CertificateInput::new("z", z.clone(), "(-1)^d 2 zeta_K(-1) from the field spec"),
            CertificateInput::new("level_index", Rat::from_integer(index.clone()), "N(I) prod (1 + 1/N(p))"),
        ];
        let mut volume = Rat::from_integer(index) * z;
        if group == ModularGroup::Gl2Plus {
            let s = UnitSubgroup::squares(k).index();
            if s != 1 {
                let s = Rat::from_integer(BigInt::from(s));
                inputs.push(CertificateInput::new("squares_index", s.clone(), "[O_+ : O^x2], volume ratio PSL_2 / PGL_2^+"));
                volume /= s;
            }
        }
        let mut rhs = Rat::zero();
        for (i, c) in cusps.iter().enumerate() {
            let v = self.full_constant(&c.cusp.m)?;
            let idx = Rat::from_integer(BigInt::from(c.unit_index));
            inputs.push(CertificateInput::new(format!("c[{i}]"), v.clone(), "union volume of defect polyhedra"));
            if c.unit_index != 1 {
                inputs.push(CertificateInput::new(format!("unit_index[{i}]"), idx.clone(), "congruence subgroup of O_+"));
            }
            rhs += v * idx;
        }
        if !e.is_zero() {
            inputs.push(CertificateInput::new("e_I", e.clone(), "elliptic points of order 7 or 9"));
        }
        rhs += e;
        let lhs = volume;
        let verdict = if lhs > rhs { Verdict::GeneralType } else { Verdict::Inconclusive };
        Ok(Certificate {
            field: k.label().into(),
            genus: genus.into(),
            level: level.label.clone(),
            criterion: Criterion::Asymptotic,
            verdict,
            lhs,
            rhs,
            inputs,
        })
    }

    /// Level one: `(-1)^d 2 zeta_K(-1) > sum_i c_i`.
    pub fn general_type_certificate(&self, genus: &str) -> Result<Certificate> {
        self.general_type_certificate_for(genus, ModularGroup::Gl2Plus)
    }

    pub fn general_type_certificate_for(&self, genus: &str, group: ModularGroup) -> Result<Certificate> {
        let level = Level::one(self.k);
        let cusps = cusp_structure_for(self.k, genus, &level.ideal, group)?;
        self.asymptotic_certificate_for(genus, &level, &cusps, group)
    }

    /// Prime level, class number one: `(N(p) + 1) z > 2 v + e_p`.
    pub fn prime_level_certificate(&self, genus: &str, level: &Level) -> Result<Certificate> {
        if self.k.class_number() != 1 {
            return Err(CertifyError::ClassNumber(self.k.class_number()));
        }
        let cusps = cusp_structure(self.k, genus, &level.ideal)?;
        if cusps.len() != 2 {
            return Err(CertifyError::UnsupportedLevel(level.label.clone()));
        }
        self.asymptotic_certificate(genus, level, &cusps)
    }
}

pub fn general_type_certificate(k: &NumberField, genus: &str) -> Result<Certificate> {
    Certifier::new(k).general_type_certificate(genus)
}

pub fn prime_level_certificate(k: &NumberField, genus: &str, level: &Level) -> Result<Certificate> {
    Certifier::new(k).prime_level_certificate(genus, level)
}

/// `h^0(qK) >= dim M_{2q} - sum_P delta_P(q)`, at the best of the given weights.
///
/// `dims` and `defects` are `(weight, value)` pairs over the same weights.
pub fn kodaira_lower_bound(
    field: &str,
    genus: &str,
    level: &str,
    dims: &[(u32, u64)],
    defects: &[(u32, u64)],
    source: &str,
) -> Result<Certificate> {
    if dims.len() != defects.len() || dims.iter().zip(defects).any(|(a, b)| a.0 != b.0) || dims.is_empty() {
        return Err(CertifyError::WeightMismatch);
    }
    let (best, _) = dims
        .iter()
        .zip(defects)
        .map(|(d, s)| (d.0, d.1 as i64 - s.1 as i64))
        .enumerate()
        .max_by_key(|(i, (_, b))| (*b, std::cmp::Reverse(*i)))
        .unwrap();
    let (w, dim) = dims[best];
    let total = defects[best].1;
    let lhs = Rat::from_integer(BigInt::from(dim));
    let rhs = Rat::from_integer(BigInt::from(total));
    let verdict = weight_verdict(&(&lhs - &rhs));
    Ok(Certificate {
        field: field.into(),
        genus: genus.into(),
        level: level.into(),
        criterion: Criterion::Weight { weight: w },
        verdict,
        inputs: vec![
            CertificateInput::new(format!("dim M_{w}"), lhs.clone(), format!("ingested dimension ({source})")),
            CertificateInput::new(format!("defect({w})"), rhs.clone(), "sum of defects at this weight"),
        ],
        lhs,
        rhs,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TgOutcome {
    Passes,
    Fails,
    Undecidable,
}

/// `disc zeta_K(2) / (h R) >= 16 pi^6 / 27`, decided on enclosures.
pub fn tsuyumine_grundman_check(disc: &BigInt, zeta2: &Interval, h: u64, regulator: &Interval) -> TgOutcome {
    if !regulator.lo.is_positive() {
        return TgOutcome::Undecidable;
    }
    let lhs = &zeta2.scale_int(disc).scale(&Rat::new(BigInt::one(), BigInt::from(h))) * &regulator.recip();
    let rhs = pi6_enclosure().scale(&Rat::new(BigInt::from(16), BigInt::from(27)));
    if lhs.lo >= rhs.hi {
        TgOutcome::Passes
    } else if lhs.hi < rhs.lo {
        TgOutcome::Fails
    } else {
        TgOutcome::Undecidable
    }
}

/// [`tsuyumine_grundman_check`] on the data of a field spec.
pub fn tsuyumine_grundman_for_field(k: &NumberField) -> Option<TgOutcome> {
    Some(tsuyumine_grundman_check(k.disc(), k.zeta2()?, k.class_number(), k.regulator()?))
}
