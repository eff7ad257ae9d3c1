use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::linalg::{abs_sum, det_int, rank};
use crate::lp::{Lp, LpResult};
use crate::{HalfSpace, PolytopeError, Rat, Result};

/// An intersection of finitely many closed half-spaces in `R^d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalPolytope {
    dim: usize,
    halfspaces: Vec<HalfSpace>,
}

/// A vertex `num / den` with `den > 0` and the indices of the tight half-spaces.
#[derive(Clone, Debug)]
struct Vertex {
    num: Vec<BigInt>,
    den: BigInt,
    tight: Vec<usize>,
}

impl Vertex {
    fn to_rat(&self) -> Vec<Rat> {
        self.num.iter().map(|x| Rat::new(x.clone(), self.den.clone())).collect()
    }
}

fn combinations(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let Some(i) = (0..k).rev().find(|&i| idx[i] < n - k + i) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

impl RationalPolytope {
    pub fn new(dim: usize, halfspaces: Vec<HalfSpace>) -> Result<Self> {
        if dim == 0 || dim > 6 {
            return Err(PolytopeError::UnsupportedDimension(dim));
        }
        for h in &halfspaces {
            if h.dim() != dim {
                return Err(PolytopeError::DimensionMismatch { expected: dim, got: h.dim() });
            }
        }
        let mut seen = BTreeSet::new();
        let halfspaces = halfspaces.into_iter().filter(|h| seen.insert(h.clone())).collect();
        Ok(RationalPolytope { dim, halfspaces })
    }

    /// Build from rational rows `(a, c)` meaning `a . x <= c`.
    pub fn from_rows(dim: usize, rows: Vec<(Vec<Rat>, Rat)>) -> Result<Self> {
        let hs = rows.into_iter().map(|(a, c)| HalfSpace::new(a, c)).collect::<Result<Vec<_>>>()?;
        Self::new(dim, hs)
    }

    /// The box `lo <= x_i <= hi` for every coordinate.
    pub fn cube(dim: usize, lo: Rat, hi: Rat) -> Self {
        let mut hs = Vec::new();
        for i in 0..dim {
            hs.push(HalfSpace::lower(dim, i, lo.clone()));
            hs.push(HalfSpace::upper(dim, i, hi.clone()));
        }
        RationalPolytope { dim, halfspaces: hs }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn halfspaces(&self) -> &[HalfSpace] {
        &self.halfspaces
    }

    pub fn rows(&self) -> Vec<(Vec<Rat>, Rat)> {
        self.halfspaces.iter().map(|h| (h.normal_rat(), h.bound_rat())).collect()
    }

    pub fn with(&self, h: HalfSpace) -> Self {
        let mut hs = self.halfspaces.clone();
        if !hs.contains(&h) {
            hs.push(h);
        }
        RationalPolytope { dim: self.dim, halfspaces: hs }
    }

    /// Intersection, by concatenating the half-space lists.
    pub fn intersect(&self, other: &RationalPolytope) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let mut hs = self.halfspaces.clone();
        for h in &other.halfspaces {
            if !hs.contains(h) {
                hs.push(h.clone());
            }
        }
        RationalPolytope { dim: self.dim, halfspaces: hs }
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        self.halfspaces.iter().all(|h| h.contains(x))
    }

    pub fn contains_integer(&self, x: &[BigInt]) -> bool {
        let one = BigInt::one();
        self.halfspaces.iter().all(|h| h.side_scaled(x, &one) != std::cmp::Ordering::Greater)
    }

    /// `q P`, for `q > 0`.
    pub fn scale(&self, q: &Rat) -> Self {
        assert!(q.is_positive(), "scale factor must be positive");
        RationalPolytope { dim: self.dim, halfspaces: self.halfspaces.iter().map(|h| h.scaled(q)).collect() }
    }

    /// The image under `x -> m x + t` for an invertible rational matrix `m`.
    pub fn affine_image(&self, m: &[Vec<Rat>], t: &[Rat]) -> Result<Self> {
        let inv = crate::linalg::inverse(m).ok_or(PolytopeError::SingularBasis)?;
        // a . x <= c with x = inv (y - t)  <=>  (a inv) . y <= c + (a inv) . t
        let rows = self
            .halfspaces
            .iter()
            .map(|h| {
                let a = h.normal_rat();
                let ai: Vec<Rat> = (0..self.dim)
                    .map(|j| (0..self.dim).fold(Rat::zero(), |s, k| s + &a[k] * &inv[k][j]))
                    .collect();
                let c = h.bound_rat() + crate::linalg::dot(&ai, t);
                (ai, c)
            })
            .collect();
        Self::from_rows(self.dim, rows)
    }

    pub(crate) fn lp(&self) -> Lp {
        Lp::new(self.dim, &self.rows())
    }

    pub fn is_empty(&self) -> bool {
        !self.lp().is_feasible()
    }

    /// Whether the polytope is bounded (empty counts as bounded).
    pub fn is_bounded(&self) -> bool {
        let lp = self.lp();
        if !lp.is_feasible() {
            return true;
        }
        // The feasible region is bounded iff every coordinate is bounded above
        // and below; equivalently the recession cone {A x <= 0} is trivial.
        let rec = Lp::new(
            self.dim,
            &self.halfspaces.iter().map(|h| (h.normal_rat(), Rat::zero())).collect::<Vec<_>>(),
        );
        (0..self.dim).all(|i| {
            let mut e = vec![Rat::zero(); self.dim];
            e[i] = Rat::one();
            let up = rec.maximize(&e);
            let down = rec.minimize(&e);
            matches!(up, LpResult::Optimal { .. }) && matches!(down, LpResult::Optimal { .. })
        })
    }

    fn ensure_bounded(&self) -> Result<()> {
        if self.is_bounded() {
            Ok(())
        } else {
            Err(PolytopeError::Unbounded)
        }
    }

    /// Exact bounds `[min x_i, max x_i]` for each coordinate, or `None` if empty.
    pub fn coordinate_bounds(&self) -> Result<Option<Vec<(Rat, Rat)>>> {
        let lp = self.lp();
        if !lp.is_feasible() {
            return Ok(None);
        }
        let mut out = Vec::with_capacity(self.dim);
        for i in 0..self.dim {
            let mut e = vec![Rat::zero(); self.dim];
            e[i] = Rat::one();
            let (LpResult::Optimal { value: hi, .. }, LpResult::Optimal { value: lo, .. }) =
                (lp.maximize(&e), lp.minimize(&e))
            else {
                return Err(PolytopeError::Unbounded);
            };
            out.push((lo, hi));
        }
        Ok(Some(out))
    }

    /// Whether the polytope has an interior point, i.e. positive volume.
    pub fn has_interior(&self) -> bool {
        // max t subject to a . x + t |a|_1 <= c, t <= 1
        let d = self.dim;
        let mut rows: Vec<(Vec<Rat>, Rat)> = self
            .halfspaces
            .iter()
            .map(|h| {
                let mut a = h.normal_rat();
                a.push(Rat::from_integer(abs_sum(h.normal())));
                (a, h.bound_rat())
            })
            .collect();
        let mut t = vec![Rat::zero(); d + 1];
        t[d] = Rat::one();
        rows.push((t.clone(), Rat::one()));
        match Lp::new(d + 1, &rows).maximize(&t) {
            LpResult::Optimal { value, .. } => value.is_positive(),
            LpResult::Unbounded => true,
            LpResult::Infeasible => false,
        }
    }

    fn raw_vertices(&self) -> Vec<Vertex> {
        let d = self.dim;
        let m = self.halfspaces.len();
        let mut found: HashMap<(Vec<BigInt>, BigInt), ()> = HashMap::new();
        let mut out = Vec::new();
        combinations(m, d, |idx| {
            let a: Vec<Vec<BigInt>> = idx.iter().map(|&i| self.halfspaces[i].normal().to_vec()).collect();
            let mut den = det_int(&a);
            if den.is_zero() {
                return;
            }
            let mut num: Vec<BigInt> = (0..d)
                .map(|j| {
                    let mut aj = a.clone();
                    for (r, &i) in idx.iter().enumerate() {
                        aj[r][j] = self.halfspaces[i].bound().clone();
                    }
                    det_int(&aj)
                })
                .collect();
            if den.is_negative() {
                den = -den;
                for x in num.iter_mut() {
                    *x = -&*x;
                }
            }
            let g = num.iter().fold(den.clone(), |acc, x| acc.gcd(x));
            if !g.is_one() {
                den /= &g;
                for x in num.iter_mut() {
                    *x /= &g;
                }
            }
            let key = (num, den);
            if found.contains_key(&key) {
                return;
            }
            let mut tight = Vec::new();
            for (k, h) in self.halfspaces.iter().enumerate() {
                match h.side_scaled(&key.0, &key.1) {
                    std::cmp::Ordering::Greater => return,
                    std::cmp::Ordering::Equal => tight.push(k),
                    std::cmp::Ordering::Less => {}
                }
            }
            out.push(Vertex { num: key.0.clone(), den: key.1.clone(), tight });
            found.insert(key, ());
        });
        out
    }

    /// Exact vertex set. Errors if the polytope is unbounded.
    pub fn vertices(&self) -> Result<Vec<Vec<Rat>>> {
        self.ensure_bounded()?;
        let mut v: Vec<Vec<Rat>> = self.raw_vertices().iter().map(Vertex::to_rat).collect();
        v.sort();
        Ok(v)
    }

    /// Indices of half-spaces that define facets (irredundant, non-implicit).
    /// Requires a bounded full-dimensional polytope; returns all indices otherwise.
    pub fn facet_indices(&self) -> Vec<usize> {
        let verts = self.raw_vertices();
        let pts: Vec<Vec<Rat>> = verts.iter().map(Vertex::to_rat).collect();
        if affine_rank(&pts, &(0..pts.len()).collect::<Vec<_>>()) < self.dim {
            return (0..self.halfspaces.len()).collect();
        }
        let mut by_set: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut out = Vec::new();
        for k in 0..self.halfspaces.len() {
            let s: Vec<usize> = (0..verts.len()).filter(|&i| verts[i].tight.contains(&k)).collect();
            if s.len() < self.dim || affine_rank(&pts, &s) != self.dim - 1 {
                continue;
            }
            if by_set.insert(s) {
                out.push(k);
            }
        }
        out
    }

    /// The same polytope with redundant half-spaces removed.
    pub fn reduced(&self) -> Result<Self> {
        self.ensure_bounded()?;
        if !self.has_interior() {
            return Ok(self.clone());
        }
        let keep = self.facet_indices();
        Ok(RationalPolytope { dim: self.dim, halfspaces: keep.into_iter().map(|k| self.halfspaces[k].clone()).collect() })
    }

    /// Exact Lebesgue measure. Errors if unbounded.
    pub fn volume(&self) -> Result<Rat> {
        self.ensure_bounded()?;
        let verts = self.raw_vertices();
        Ok(volume_of(self.dim, &verts))
    }

    /// `vol(P n Q) = vol(P)`, decided by vertex containment for full-dimensional `P`.
    pub fn is_subset(&self, other: &RationalPolytope) -> Result<bool> {
        Ok(other.contains_vertex_set(&self.subset_witness()?))
    }

    /// Vertices of a bounded polytope, or `None` if it has measure zero.
    pub(crate) fn subset_witness(&self) -> Result<Option<Vec<(Vec<BigInt>, BigInt)>>> {
        self.ensure_bounded()?;
        let verts = self.raw_vertices();
        let pts: Vec<Vec<Rat>> = verts.iter().map(Vertex::to_rat).collect();
        if affine_rank(&pts, &(0..pts.len()).collect::<Vec<_>>()) < self.dim {
            return Ok(None);
        }
        Ok(Some(verts.into_iter().map(|v| (v.num, v.den)).collect()))
    }

    pub(crate) fn contains_vertex_set(&self, w: &Option<Vec<(Vec<BigInt>, BigInt)>>) -> bool {
        let Some(verts) = w else {
            return true;
        };
        verts
            .iter()
            .all(|(num, den)| self.halfspaces.iter().all(|h| h.side_scaled(num, den) != std::cmp::Ordering::Greater))
    }

    /// Min and max of `h.normal . x` over the vertices, or `None` if empty.
    pub(crate) fn linear_range(&self, h: &HalfSpace) -> Option<(Rat, Rat)> {
        let verts = self.raw_vertices();
        let a = h.normal_rat();
        let vals: Vec<Rat> = verts.iter().map(|v| crate::linalg::dot(&a, &v.to_rat())).collect();
        let lo = vals.iter().min()?.clone();
        let hi = vals.iter().max()?.clone();
        Some((lo, hi))
    }
}

fn affine_rank(pts: &[Vec<Rat>], idx: &[usize]) -> usize {
    if idx.is_empty() {
        return 0;
    }
    let base = &pts[idx[0]];
    let rows: Vec<Vec<Rat>> = idx[1..].iter().map(|&i| pts[i].iter().zip(base).map(|(a, b)| a - b).collect()).collect();
    rank(&rows)
}

/// Volume by recursive fan triangulation over the face lattice.
fn volume_of(d: usize, verts: &[Vertex]) -> Rat {
    let pts: Vec<Vec<Rat>> = verts.iter().map(Vertex::to_rat).collect();
    let all: Vec<usize> = (0..pts.len()).collect();
    if affine_rank(&pts, &all) < d {
        return Rat::zero();
    }
    let m = verts.iter().flat_map(|v| v.tight.iter().copied()).max().map_or(0, |x| x + 1);
    let mut incid: Vec<Vec<bool>> = vec![vec![false; m]; verts.len()];
    for (i, v) in verts.iter().enumerate() {
        for &k in &v.tight {
            incid[i][k] = true;
        }
    }
    let mut memo: HashMap<Vec<usize>, Vec<Vec<usize>>> = HashMap::new();
    let simplices = triangulate(&pts, &incid, m, all, d, &mut memo);
    let mut total = Rat::zero();
    for s in &simplices {
        let rows: Vec<Vec<Rat>> = s[1..].iter().map(|&i| pts[i].iter().zip(&pts[s[0]]).map(|(a, b)| a - b).collect()).collect();
        total += crate::linalg::det(&rows).abs();
    }
    let fact: u64 = (1..=d as u64).product();
    total / Rat::from_integer(BigInt::from(fact))
}

fn triangulate(
    pts: &[Vec<Rat>],
    incid: &[Vec<bool>],
    m: usize,
    face: Vec<usize>,
    k: usize,
    memo: &mut HashMap<Vec<usize>, Vec<Vec<usize>>>,
) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![face[0]]];
    }
    if let Some(s) = memo.get(&face) {
        return s.clone();
    }
    let apex = face[0];
    let mut facets: BTreeSet<Vec<usize>> = BTreeSet::new();
    for h in 0..m {
        let s: Vec<usize> = face.iter().copied().filter(|&i| incid[i][h]).collect();
        if s.len() < k || s.len() == face.len() || s.contains(&apex) {
            continue;
        }
        if facets.contains(&s) {
            continue;
        }
        if affine_rank(pts, &s) == k - 1 {
            facets.insert(s);
        }
    }
    let mut out = Vec::new();
    for f in facets {
        for mut simplex in triangulate(pts, incid, m, f, k - 1, memo) {
            simplex.insert(0, apex);
            out.push(simplex);
        }
    }
    memo.insert(face, out.clone());
    out
}

impl fmt::Display for RationalPolytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for h in &self.halfspaces {
            writeln!(f, "{h}")?;
        }
        Ok(())
    }
}
