//! Defects `delta_{M,V}(q)` of cusp singularities and their asymptotic
//! constants `c_{M,V}`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use cusp_cone::{reducers, trace_minimal_cone, ConeError, ReducerSet, TraceMinCone};
use cusp_field::{FieldElement, FieldError, FractionalIdeal, NumberField, PrimeIdeal, Rat, UnitSubgroup};
use cusp_polytope::{lattice_points, union_volume, HalfSpace, LatticeBasis, PolytopeError, RationalPolytope, UnionVolume};

#[derive(Debug, Error)]
pub enum DefectError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error("defect of the full unit group must be positive for q >= 1")]
    ZeroDefect,
    #[error("normalizations disagree: {0}")]
    Normalization(String),
}

pub type Result<T> = std::result::Result<T, DefectError>;

/// A cusp of type `(M, V)`.
#[derive(Clone, Debug)]
pub struct CuspType {
    pub m: FractionalIdeal,
    pub v: UnitSubgroup,
}

impl CuspType {
    pub fn new(m: FractionalIdeal, v: UnitSubgroup) -> Self {
        CuspType { m, v }
    }

    /// `(M, O_+)`.
    pub fn full(k: &NumberField, m: FractionalIdeal) -> Self {
        CuspType { m, v: UnitSubgroup::full(k) }
    }

    /// `[O_+ : V]`.
    pub fn index(&self) -> u64 {
        self.v.index()
    }
}

/// The polytopes `T_{M,V,r}(1)` for `r` in `R'_M`, in coordinates over a basis of `M^`.
#[derive(Clone, Debug)]
pub struct DefectPolyhedra {
    pub generators: Vec<FieldElement>,
    pub polytopes: Vec<RationalPolytope>,
    pub union: UnionVolume,
    /// Union volume in integral-basis coordinates.
    pub volume_integral_basis: Rat,
    pub dual_norm: Rat,
}

impl DefectPolyhedra {
    pub fn count(&self) -> usize {
        self.polytopes.len()
    }

    pub fn nonredundant(&self) -> usize {
        self.polytopes.len() - self.union.redundant.len()
    }
}

/// Everything computed on the way to `c_{M,V}`.
#[derive(Clone, Debug)]
pub struct AsymptoticResult {
    pub cone: TraceMinCone,
    pub reducers: ReducerSet,
    pub polyhedra: DefectPolyhedra,
    pub index: u64,
    pub c: Rat,
}

fn change_to_basis(p: &RationalPolytope, basis: &[FieldElement]) -> Result<RationalPolytope> {
    let hs = p
        .halfspaces()
        .iter()
        .map(|h| {
            let a = h.normal_rat();
            let normal = basis.iter().map(|w| w.coords().iter().zip(&a).fold(Rat::zero(), |s, (x, y)| s + x * y)).collect();
            HalfSpace::new(normal, h.bound_rat())
        })
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(RationalPolytope::new(p.dim(), hs)?)
}

/// `T_{M,V,r}(1) = cone ∩ {Tr(r x) <= 1}` for `r` in `R'_M`, in `M^` coordinates.
pub fn defect_polyhedra(k: &NumberField, cone: &TraceMinCone, red: &ReducerSet) -> Result<DefectPolyhedra> {
    let dual = red.ideal.trace_dual(k);
    let basis = dual.z_basis();
    let generators = red.with_min(k);
    let mut in_ok = Vec::with_capacity(generators.len());
    let mut polytopes = Vec::with_capacity(generators.len());
    for r in &generators {
        let p = cone.truncated(k, r, &Rat::one())?;
        polytopes.push(change_to_basis(&p, &basis)?);
        in_ok.push(p);
    }
    let union = union_volume(&polytopes)?;
    let check = union_volume(&in_ok)?;
    let dual_norm = dual.norm();
    if &check.volume / &dual_norm != union.volume {
        return Err(DefectError::Normalization(format!(
            "{} / {} != {}",
            check.volume, dual_norm, union.volume
        )));
    }
    Ok(DefectPolyhedra { generators, polytopes, union, volume_integral_basis: check.volume, dual_norm })
}

/// `c_{M,V}` with `delta_{M,V}(q) ~ c q^d`.
pub fn asymptotic_constant(k: &NumberField, cusp: &CuspType) -> Result<AsymptoticResult> {
    let full = UnitSubgroup::full(k);
    let cone = trace_minimal_cone(k, &full)?;
    let red = reducers(k, &cone, &cusp.m)?;
    let polyhedra = defect_polyhedra(k, &cone, &red)?;
    let index = cusp.index();
    let c = &polyhedra.union.volume * Rat::from_integer(BigInt::from(index));
    Ok(AsymptoticResult { cone, reducers: red, polyhedra, index, c })
}

/// `index * (delta_full - 1) + 1`.
pub fn subgroup_rescale(delta_full: u64, index: u64) -> Result<u64> {
    if delta_full == 0 {
        return Err(DefectError::ZeroDefect);
    }
    Ok(index * (delta_full - 1) + 1)
}

type Divisor = Vec<(usize, u32)>;

/// `delta_{M,V}(q)` for `q = 1..=q_max`.
///
/// Enumerates trace-minimal `t >> 0` in the inverse different with
/// `Tr t < q_max`, collects the divisors `J` of `(t) d` whose class makes
/// `d^{-1} M^{-1} J` narrowly principal, and counts them by the smallest
/// trace at which they appear.
pub fn defect_sequence(k: &NumberField, cusp: &CuspType, q_max: u32) -> Result<Vec<u64>> {
    if q_max == 0 {
        return Ok(Vec::new());
    }
    let full = UnitSubgroup::full(k);
    let cone = trace_minimal_cone(k, &full)?;
    defect_sequence_with_cone(k, &cone, cusp, q_max)
}

/// As [`defect_sequence`], reusing a computed `O_+`-trace-minimal cone.
pub fn defect_sequence_with_cone(k: &NumberField, cone: &TraceMinCone, cusp: &CuspType, q_max: u32) -> Result<Vec<u64>> {
    let d = k.degree();
    let codiff = FractionalIdeal::codifferent(k);
    let different = FractionalIdeal::different(k);
    let tmax = Rat::from_integer(BigInt::from(q_max as i64 - 1));
    let mut seq = vec![1u64; q_max as usize];
    if q_max == 1 {
        return Ok(seq);
    }
    let group = k.narrow_class_group()?;
    let target = k.narrow_class(&different.mul(k, &cusp.m))?;
    let p = cone.truncated(k, &k.one(), &tmax)?;
    let cols: Vec<Vec<Rat>> = {
        let rows = codiff.rational_rows();
        (0..d).map(|i| (0..d).map(|j| rows[j][i].clone()).collect()).collect()
    };
    let lattice = LatticeBasis::new(cols, None)?;
    let mut primes: Vec<PrimeIdeal> = Vec::new();
    let mut prime_index: BTreeMap<PrimeIdeal, usize> = BTreeMap::new();
    let mut ideals: BTreeMap<Divisor, BigInt> = BTreeMap::new();
    for pt in lattice_points(&p, &lattice)? {
        let t = FieldElement::new(pt);
        if t.is_zero() {
            continue;
        }
        let tr = k.trace(&t);
        debug_assert!(tr.is_integer());
        let i = different.mul_element(k, &t)?;
        let mut key: Divisor = Vec::new();
        for (pr, e) in k.factor_ideal(&i)? {
            let idx = *prime_index.entry(pr.clone()).or_insert_with(|| {
                primes.push(pr.clone());
                primes.len() - 1
            });
            key.push((idx, e as u32));
        }
        key.sort();
        let tr = tr.to_integer();
        ideals.entry(key).and_modify(|x| *x = x.clone().min(tr.clone())).or_insert(tr);
    }
    let classes = primes.iter().map(|p| k.prime_narrow_class(p)).collect::<cusp_field::Result<Vec<_>>>()?;
    let mut divisors: BTreeMap<Divisor, BigInt> = BTreeMap::new();
    for (key, tr) in &ideals {
        let mut exps = vec![0u32; key.len()];
        loop {
            let mut c = 0;
            for (slot, (pi, _)) in exps.iter().zip(key) {
                for _ in 0..*slot {
                    c = group.add(c, classes[*pi]);
                }
            }
            if c == target {
                let dkey: Divisor = key.iter().zip(&exps).filter(|(_, e)| **e > 0).map(|((pi, _), e)| (*pi, *e)).collect();
                divisors.entry(dkey).and_modify(|x| *x = x.clone().min(tr.clone())).or_insert_with(|| tr.clone());
            }
            let mut j = 0;
            loop {
                if j == exps.len() {
                    break;
                }
                if exps[j] < key[j].1 {
                    exps[j] += 1;
                    break;
                }
                exps[j] = 0;
                j += 1;
            }
            if j == exps.len() {
                break;
            }
        }
    }
    let index = cusp.index();
    for (q, slot) in seq.iter_mut().enumerate() {
        let bound = BigInt::from(q as i64 + 1);
        let n = divisors.values().filter(|t| **t < bound).count() as u64;
        *slot = index * n + 1;
    }
    Ok(seq)
}

/// `(1-x)^2 (1-x^2) (1-x^3)`, constant term first.
pub const GF_DENOMINATOR: [i64; 8] = [1, -2, 0, 1, 1, 0, -2, 1];

/// Exact numerator `N` of degree at most 6 with `sum seq[i] x^i = N / ((1-x)^2(1-x^2)(1-x^3))`,
/// if one reproduces every given term.
pub fn gf_fit(seq: &[i64]) -> Option<Vec<BigInt>> {
    if seq.len() < 13 {
        return None;
    }
    let prod: Vec<BigInt> = (0..seq.len())
        .map(|n| {
            (0..=n.min(7)).fold(BigInt::zero(), |s, j| s + BigInt::from(GF_DENOMINATOR[j]) * BigInt::from(seq[n - j]))
        })
        .collect();
    if prod[7..].iter().any(|c| !c.is_zero()) {
        return None;
    }
    let mut num = prod[..7].to_vec();
    while num.len() > 1 && num.last().map_or(false, |c| c.is_zero()) {
        num.pop();
    }
    Some(num)
}
