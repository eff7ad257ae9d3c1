use std::collections::BTreeSet;

use num_traits::Zero;

use crate::{RationalPolytope, Rat, Result};

/// Result of [`union_volume`].
#[derive(Clone, Debug)]
pub struct UnionVolume {
    pub volume: Rat,
    /// Passes through the main splitting loop.
    pub passes: usize,
    /// Final pairwise almost-disjoint pieces.
    pub pieces: Vec<RationalPolytope>,
    /// Input indices that survived the initial containment pruning.
    pub kept: Vec<usize>,
    /// Input indices contained in another input (or of measure zero).
    pub redundant: Vec<usize>,
}

struct Piece {
    poly: RationalPolytope,
    vol: Rat,
}

fn overlaps(a: &RationalPolytope, b: &RationalPolytope) -> bool {
    a.intersect(b).has_interior()
}

/// Exact volume of `P_1 u ... u P_k`.
///
/// Pieces are sorted by volume, those contained in a later piece dropped, and
/// overlapping pairs resolved by slicing the later piece along a facet of the
/// earlier one until all remaining pieces are almost disjoint.
pub fn union_volume(ps: &[RationalPolytope]) -> Result<UnionVolume> {
    let mut vols = Vec::with_capacity(ps.len());
    for p in ps {
        vols.push(p.volume()?);
    }
    let mut order: Vec<usize> = (0..ps.len()).filter(|&i| !vols[i].is_zero()).collect();
    order.sort_by(|&a, &b| vols[a].cmp(&vols[b]).then(a.cmp(&b)));
    let mut redundant: Vec<usize> = (0..ps.len()).filter(|&i| vols[i].is_zero()).collect();
    let mut kept = Vec::new();
    // containers are usually among the largest inputs, and repeat
    let mut last: Option<usize> = None;
    let mut rank = vec![usize::MAX; ps.len()];
    for (pos, &i) in order.iter().enumerate() {
        rank[i] = pos;
    }
    for (pos, &i) in order.iter().enumerate() {
        let w = ps[i].subset_witness()?;
        let later = &order[pos + 1..];
        let hit = last
            .filter(|&l| rank[l] > pos && ps[l].contains_vertex_set(&w))
            .or_else(|| later.iter().rev().copied().find(|&j| ps[j].contains_vertex_set(&w)));
        if hit.is_some() {
            last = hit;
            redundant.push(i);
        } else {
            kept.push(i);
        }
    }
    redundant.sort();

    let mut pieces: Vec<Option<Piece>> = Vec::new();
    for &i in &kept {
        pieces.push(Some(Piece { poly: ps[i].reduced()?, vol: vols[i].clone() }));
    }
    let mut pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
    for a in 0..pieces.len() {
        for b in a + 1..pieces.len() {
            if overlaps(&pieces[a].as_ref().unwrap().poly, &pieces[b].as_ref().unwrap().poly) {
                pairs.insert((a, b));
            }
        }
    }

    let mut passes = 0;
    while let Some(&(a, b)) = pairs.iter().next() {
        passes += 1;
        let pa = pieces[a].as_ref().unwrap().poly.clone();
        let pb = pieces[b].as_ref().unwrap().poly.clone();
        // facet of pa whose hyperplane meets the interior of pb, most even split
        let mut best: Option<(Rat, RationalPolytope, RationalPolytope, Rat, Rat)> = None;
        for h in pa.halfspaces() {
            let Some((lo, hi)) = pb.linear_range(h) else { continue };
            let c = h.bound_rat();
            if !(lo < c && c < hi) {
                continue;
            }
            let minus = pb.with(h.clone()).reduced()?;
            let plus = pb.with(h.flipped()).reduced()?;
            let vm = minus.volume()?;
            let vp = plus.volume()?;
            let score = vm.clone().min(vp.clone());
            if best.as_ref().map_or(true, |bst| score > bst.0) {
                best = Some((score, plus, minus, vp, vm));
            }
        }
        pieces[b] = None;
        pairs.retain(|&(x, y)| x != b && y != b);
        let Some((_, plus, minus, vp, vm)) = best else {
            // pb lies inside pa
            continue;
        };
        for (half, vol) in [(plus, vp), (minus, vm)] {
            if vol.is_zero() {
                continue;
            }
            let mut contained = false;
            for q in pieces.iter().flatten() {
                if half.is_subset(&q.poly)? {
                    contained = true;
                    break;
                }
            }
            if contained {
                continue;
            }
            let id = pieces.len();
            for (c, q) in pieces.iter().enumerate() {
                if let Some(q) = q {
                    if overlaps(&q.poly, &half) {
                        pairs.insert((c, id));
                    }
                }
            }
            pieces.push(Some(Piece { poly: half, vol }));
        }
    }

    let finals: Vec<Piece> = pieces.into_iter().flatten().collect();
    let volume = finals.iter().fold(Rat::zero(), |s, p| s + &p.vol);
    Ok(UnionVolume { volume, passes, pieces: finals.into_iter().map(|p| p.poly).collect(), kept, redundant })
}
