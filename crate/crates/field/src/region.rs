use num_traits::{Signed, Zero};

use cusp_polytope::linalg::inverse;
use cusp_polytope::{lattice_points, HalfSpace, LatticeBasis, RationalPolytope};

use crate::interval::Interval;
use crate::{FieldElement, FractionalIdeal, NumberField, Rat, Result};

/// A bounded region of `K ⊗ R`, described in embedding space.
///
/// `vertices` are points of `R^d` (as enclosures) whose convex hull contains
/// the set sought; `constraints` are exact rational inequalities
/// `a · coords(x) <= c` over the integral basis.
#[derive(Clone, Debug, Default)]
pub struct Region {
    pub vertices: Vec<Vec<Interval>>,
    pub positive: bool,
    pub constraints: Vec<(Vec<Rat>, Rat)>,
}

impl Region {
    /// `{x >> 0 : Tr(x v) <= c}` for totally positive `v`.
    pub fn trace_simplex(k: &NumberField, v: &FieldElement, c: &Rat) -> Region {
        let d = k.degree();
        let emb = k.embed_all(v, 120);
        let mut vertices = vec![vec![Interval::zero(); d]];
        for i in 0..d {
            let mut p = vec![Interval::zero(); d];
            p[i] = Interval::point(c.clone()).mul_div(&emb[i]);
            vertices.push(p);
        }
        Region { vertices, positive: true, constraints: vec![(k.trace_pairing_row(v), c.clone())] }
    }

    /// `{x : |sigma_i(x)| <= r_i}`.
    pub fn embedding_box(radii: &[Rat]) -> Region {
        let d = radii.len();
        let mut vertices = Vec::with_capacity(1 << d);
        for mask in 0u32..(1 << d) {
            vertices.push(
                (0..d)
                    .map(|i| Interval::point(if mask >> i & 1 == 1 { -radii[i].clone() } else { radii[i].clone() }))
                    .collect(),
            );
        }
        Region { vertices, positive: false, constraints: Vec::new() }
    }
}

impl Interval {
    /// `self / o` for `o` strictly positive.
    pub(crate) fn mul_div(&self, o: &Interval) -> Interval {
        self * &o.recip()
    }
}

/// Trace-dual basis of a Z-basis: `Tr(w_j w*_k) = delta_jk`.
pub fn dual_basis(k: &NumberField, w: &[FieldElement]) -> Vec<FieldElement> {
    let d = k.degree();
    let rows: Vec<Vec<Rat>> = w.iter().map(|x| k.trace_pairing_row(x)).collect();
    // rows[j] . coords(w*_k) = delta_jk, so coords(w*_k) is column k of rows^{-1}
    let inv = inverse(&rows).expect("basis is nondegenerate");
    (0..d).map(|c| FieldElement::new((0..d).map(|r| inv[r][c].clone()).collect())).collect()
}

/// All points of the lattice inside the region (before any exact filtering by the caller,
/// except positivity which is checked exactly when requested).
pub fn lattice_points_in_region(k: &NumberField, lattice: &FractionalIdeal, region: &Region) -> Result<Vec<FieldElement>> {
    let d = k.degree();
    let w = lattice.z_basis();
    let wd = dual_basis(k, &w);
    let bits = 120;
    let wd_emb: Vec<Vec<Interval>> = wd.iter().map(|x| k.embed_all(x, bits)).collect();
    let mut rows: Vec<HalfSpace> = Vec::new();
    let mut ymax = vec![Rat::zero(); d];
    for kk in 0..d {
        let mut lo: Option<Rat> = None;
        let mut hi: Option<Rat> = None;
        for v in &region.vertices {
            let y = v.iter().zip(&wd_emb[kk]).fold(Interval::zero(), |s, (a, b)| &s + &(a * b));
            lo = Some(match lo {
                None => y.lo.clone(),
                Some(l) => l.min(y.lo.clone()),
            });
            hi = Some(match hi {
                None => y.hi.clone(),
                Some(h) => h.max(y.hi.clone()),
            });
        }
        let lo = lo.unwrap_or_else(Rat::zero).floor();
        let hi = hi.unwrap_or_else(Rat::zero).ceil();
        ymax[kk] = lo.abs().max(hi.abs());
        rows.push(HalfSpace::lower(d, kk, lo));
        rows.push(HalfSpace::upper(d, kk, hi));
    }
    if region.positive {
        // sigma_i(x) = sum_k y_k sigma_i(w_k) >= 0, relaxed by the enclosure error
        let w_emb: Vec<Vec<Interval>> = w.iter().map(|x| k.embed_all(x, bits)).collect();
        for i in 0..d {
            let mut normal = Vec::with_capacity(d);
            let mut err = Rat::zero();
            for kk in 0..d {
                let e = w_emb[kk][i].round_out(60);
                normal.push(-e.mid());
                err += e.width() * &ymax[kk];
            }
            if normal.iter().all(|x| x.is_zero()) {
                continue;
            }
            rows.push(HalfSpace::new(normal, err)?);
        }
    }
    for (a, c) in &region.constraints {
        let normal: Vec<Rat> =
            w.iter().map(|x| x.coords().iter().zip(a).fold(Rat::zero(), |s, (p, q)| s + p * q)).collect();
        if normal.iter().all(|x| x.is_zero()) {
            if c.is_negative() {
                return Ok(Vec::new());
            }
            continue;
        }
        rows.push(HalfSpace::new(normal, c.clone())?);
    }
    let p = RationalPolytope::new(d, rows)?;
    let pts = lattice_points(&p, &LatticeBasis::standard(d))?;
    let mut out = Vec::with_capacity(pts.len());
    for y in pts {
        let mut x = k.zero();
        for (yk, wk) in y.iter().zip(&w) {
            if !yk.is_zero() {
                x = &x + &wk.scale(yk);
            }
        }
        if region.positive && !(x.is_zero() || k.is_totally_positive(&x)) {
            continue;
        }
        out.push(x);
    }
    Ok(out)
}
