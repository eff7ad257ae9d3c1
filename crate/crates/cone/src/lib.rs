//! The (V-)trace-minimal cone of a totally real field and the reducers of a
//! fractional ideal relative to it.

use num_traits::{One, Zero};
use thiserror::Error;

use cusp_field::{FieldElement, FieldError, FractionalIdeal, NumberField, Rat, Region, SignedUnits, UnitSubgroup};
use cusp_polytope::linalg::primitive_integer_vector;
use cusp_polytope::{HalfSpace, PolytopeError, RationalPolytope};

#[derive(Debug, Error)]
pub enum ConeError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error("cone check failed: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, ConeError>;

/// The cone `{x : Tr(ux) >= Tr(x) for all u in V}` in integral-basis coordinates.
#[derive(Clone, Debug)]
pub struct TraceMinCone {
    /// Irredundant half-spaces `Tr((1-u)x) <= 0`.
    pub halfspaces: Vec<HalfSpace>,
    /// The unit defining each half-space.
    pub units: Vec<FieldElement>,
    /// Primitive integral totally positive generators of the extremal rays, sorted.
    pub rays: Vec<FieldElement>,
    pub subgroup: UnitSubgroup,
    pub signed: SignedUnits,
    /// Every unit tried (the set `S'`).
    pub candidate_units: Vec<FieldElement>,
}

/// A rational upper bound for `b_K` relative to `V`.
pub fn balanced_bound(k: &NumberField, v: &UnitSubgroup) -> Result<Rat> {
    Ok(k.find_signed_units(v)?.b_bar)
}

/// The finite unit set `S'` whose half-spaces cut out the trace-minimal cone.
pub fn reducing_unit_set(k: &NumberField, v: &UnitSubgroup) -> Result<Vec<FieldElement>> {
    Ok(k.find_signed_units(v)?.s_prime())
}

fn unit_halfspace(k: &NumberField, u: &FieldElement) -> Result<Option<HalfSpace>> {
    let w = &k.one() - u;
    if w.is_zero() {
        return Ok(None);
    }
    Ok(Some(HalfSpace::new(k.trace_pairing_row(&w), Rat::zero())?))
}

fn trace_slab(k: &NumberField, c: Rat) -> Result<HalfSpace> {
    Ok(HalfSpace::new(k.trace_pairing_row(&k.one()), c)?)
}

/// Compute the `V`-trace-minimal cone.
pub fn trace_minimal_cone(k: &NumberField, v: &UnitSubgroup) -> Result<TraceMinCone> {
    let signed = k.find_signed_units(v)?;
    let candidates = signed.s_prime();
    let mut hs: Vec<HalfSpace> = Vec::new();
    let mut us: Vec<FieldElement> = Vec::new();
    for u in &candidates {
        if let Some(h) = unit_halfspace(k, u)? {
            if !hs.contains(&h) {
                hs.push(h);
                us.push(u.clone());
            }
        }
    }
    let mut all = hs.clone();
    let slab = trace_slab(k, Rat::one())?;
    all.push(slab.clone());
    let p = RationalPolytope::new(k.degree(), all)?;
    if !p.is_bounded() {
        return Err(ConeError::Invariant("cone meets Tr x <= 1 in an unbounded set".into()));
    }
    let facets = p.facet_indices();
    let mut halfspaces = Vec::new();
    let mut units = Vec::new();
    for i in facets {
        if i < hs.len() {
            halfspaces.push(hs[i].clone());
            units.push(us[i].clone());
        }
    }
    let reduced = RationalPolytope::new(k.degree(), halfspaces.iter().cloned().chain([slab]).collect())?;
    let mut rays = Vec::new();
    for vert in reduced.vertices()? {
        if vert.iter().all(|x| x.is_zero()) {
            continue;
        }
        let mut r = FieldElement::from_bigints(&primitive_integer_vector(&vert));
        if !k.is_totally_positive(&r) {
            r = -&r;
            if !k.is_totally_positive(&r) {
                return Err(ConeError::Invariant(format!("ray {r} is not totally positive")));
            }
        }
        rays.push(r);
    }
    rays.sort();
    rays.dedup();
    Ok(TraceMinCone { halfspaces, units, rays, subgroup: v.clone(), signed, candidate_units: candidates })
}

impl TraceMinCone {
    pub fn dim(&self) -> usize {
        self.halfspaces.first().map_or(0, |h| h.dim())
    }

    /// Exact membership test.
    pub fn is_trace_minimal(&self, x: &FieldElement) -> bool {
        self.halfspaces.iter().all(|h| h.contains(x.coords()))
    }

    /// `cone ∩ {Tr(r x) <= c}` in integral-basis coordinates.
    pub fn truncated(&self, k: &NumberField, r: &FieldElement, c: &Rat) -> Result<RationalPolytope> {
        let mut hs = self.halfspaces.clone();
        hs.push(HalfSpace::new(k.trace_pairing_row(r), c.clone())?);
        Ok(RationalPolytope::new(k.degree(), hs)?)
    }

    /// Units among the generators with `Tr(u r) = Tr(r)` for a ray `r`.
    pub fn tight_units(&self, k: &NumberField, ray: &FieldElement) -> Vec<FieldElement> {
        let t = k.trace(ray);
        self.units.iter().filter(|u| k.trace(&k.mul(u, ray)) == t).cloned().collect()
    }
}

/// The reducers of a fractional ideal `M` relative to a cone.
#[derive(Clone, Debug)]
pub struct ReducerSet {
    pub ideal: FractionalIdeal,
    pub min: Rat,
    /// Sorted, deduplicated.
    pub reducers: Vec<FieldElement>,
}

impl ReducerSet {
    /// `R'_M = R_M ∪ {min M}`.
    pub fn with_min(&self, k: &NumberField) -> Vec<FieldElement> {
        let mut v = self.reducers.clone();
        v.push(k.rational(self.min.clone()));
        v
    }

    pub fn len(&self) -> usize {
        self.reducers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reducers.is_empty()
    }
}

/// Totally positive `x in M` with `Tr(x v) < min M * Tr(v)` for one ray `v`.
pub fn ray_reducers(k: &NumberField, m: &FractionalIdeal, v: &FieldElement) -> Result<Vec<FieldElement>> {
    let c = m.minimum() * k.trace(v);
    let region = Region::trace_simplex(k, v, &c);
    let mut out = Vec::new();
    for x in cusp_field::lattice_points_in_region(k, m, &region)? {
        if !x.is_zero() && k.trace(&k.mul(&x, v)) < c {
            out.push(x);
        }
    }
    Ok(out)
}

/// Compute the `M`-reducers.
pub fn reducers(k: &NumberField, cone: &TraceMinCone, m: &FractionalIdeal) -> Result<ReducerSet> {
    let mut all = Vec::new();
    for v in &cone.rays {
        all.extend(ray_reducers(k, m, v)?);
    }
    all.sort();
    all.dedup();
    Ok(ReducerSet { ideal: m.clone(), min: m.minimum(), reducers: all })
}

/// `x` is an `M`-reducer: totally positive, in `M`, and beats `min M` on some ray.
pub fn is_reducer(k: &NumberField, cone: &TraceMinCone, m: &FractionalIdeal, x: &FieldElement) -> bool {
    if x.is_zero() || !m.contains(x) || !k.is_totally_positive(x) {
        return false;
    }
    let mm = m.minimum();
    cone.rays.iter().any(|v| k.trace(&k.mul(x, v)) < &mm * k.trace(v))
}
