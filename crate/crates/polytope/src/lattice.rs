use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::linalg::{dot, inverse};
use crate::lp::{Lp, LpResult};
use crate::{PolytopeError, RationalPolytope, Rat, Result};

/// Below this many candidate box points the enumerator stops splitting and
/// scans the box directly.
pub const DIRECT_ENUMERATION_CUTOFF: u64 = 10_000;

/// The lattice `origin + B Z^d`, `B` given by columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeBasis {
    /// `matrix[r][c]` is coordinate `r` of generator `c`.
    matrix: Vec<Vec<Rat>>,
    origin: Vec<Rat>,
}

impl LatticeBasis {
    pub fn new(matrix: Vec<Vec<Rat>>, origin: Option<Vec<Rat>>) -> Result<Self> {
        let d = matrix.len();
        if matrix.iter().any(|r| r.len() != d) {
            return Err(PolytopeError::DimensionMismatch { expected: d, got: matrix.iter().map(Vec::len).max().unwrap_or(0) });
        }
        if inverse(&matrix).is_none() {
            return Err(PolytopeError::SingularBasis);
        }
        let origin = origin.unwrap_or_else(|| vec![Rat::zero(); d]);
        if origin.len() != d {
            return Err(PolytopeError::DimensionMismatch { expected: d, got: origin.len() });
        }
        Ok(LatticeBasis { matrix, origin })
    }

    /// Build from generator vectors (each one becomes a column).
    pub fn from_generators(gens: &[Vec<Rat>]) -> Result<Self> {
        let d = gens.len();
        let matrix = (0..d).map(|r| gens.iter().map(|g| g[r].clone()).collect()).collect();
        Self::new(matrix, None)
    }

    pub fn standard(d: usize) -> Self {
        let matrix = (0..d)
            .map(|r| (0..d).map(|c| if r == c { Rat::one() } else { Rat::zero() }).collect())
            .collect();
        LatticeBasis { matrix, origin: vec![Rat::zero(); d] }
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &[Vec<Rat>] {
        &self.matrix
    }

    pub fn origin(&self) -> &[Rat] {
        &self.origin
    }

    /// `origin + B y`
    pub fn point(&self, y: &[BigInt]) -> Vec<Rat> {
        (0..self.dim())
            .map(|r| {
                let mut s = self.origin[r].clone();
                for (c, yc) in y.iter().enumerate() {
                    if !yc.is_zero() {
                        s += &self.matrix[r][c] * yc;
                    }
                }
                s
            })
            .collect()
    }

    /// Covolume `|det B|`.
    pub fn covolume(&self) -> Rat {
        crate::linalg::det(&self.matrix).abs()
    }

    /// The polytope `{ y : origin + B y in P }`.
    pub fn pull_back(&self, p: &RationalPolytope) -> Result<RationalPolytope> {
        let d = self.dim();
        if p.dim() != d {
            return Err(PolytopeError::DimensionMismatch { expected: d, got: p.dim() });
        }
        let rows = p
            .halfspaces()
            .iter()
            .map(|h| {
                let a = h.normal_rat();
                let ab: Vec<Rat> = (0..d).map(|c| (0..d).fold(Rat::zero(), |s, r| s + &a[r] * &self.matrix[r][c])).collect();
                (ab, h.bound_rat() - dot(&a, &self.origin))
            })
            .collect();
        RationalPolytope::from_rows(d, rows)
    }
}

/// All points of the lattice `L` inside `P`, in ambient coordinates, sorted
/// by lattice coordinates.
pub fn lattice_points(p: &RationalPolytope, l: &LatticeBasis) -> Result<Vec<Vec<Rat>>> {
    let q = l.pull_back(p)?;
    Ok(integer_points(&q)?.iter().map(|y| l.point(y)).collect())
}

#[derive(Clone)]
struct Row {
    a: Vec<BigInt>,
    b: BigInt,
}

/// All integer points of `P`, sorted lexicographically.
pub fn integer_points(p: &RationalPolytope) -> Result<Vec<Vec<BigInt>>> {
    let d = p.dim();
    let rows: Vec<Row> = p
        .halfspaces()
        .iter()
        .map(|h| Row { a: h.normal().to_vec(), b: h.bound().clone() })
        .collect();
    let mut out = Vec::new();
    let mut assignment = vec![BigInt::zero(); d];
    recurse(rows, (0..d).collect(), &mut assignment, &mut out)?;
    out.sort();
    out.dedup();
    Ok(out)
}

fn lp_of(rows: &[Row], k: usize) -> Lp {
    let cons: Vec<(Vec<Rat>, Rat)> = rows
        .iter()
        .map(|r| (r.a.iter().map(|x| Rat::from_integer(x.clone())).collect(), Rat::from_integer(r.b.clone())))
        .collect();
    Lp::new(k, &cons)
}

/// Substitute `x_col = v` and drop that column; `None` if a row becomes infeasible.
fn fix(rows: &[Row], col: usize, v: &BigInt) -> Option<Vec<Row>> {
    let mut out = Vec::with_capacity(rows.len());
    for r in rows {
        let mut a = r.a.clone();
        let c = a.remove(col);
        let b = &r.b - c * v;
        if a.iter().all(|x| x.is_zero()) {
            if b.is_negative() {
                return None;
            }
            continue;
        }
        let g = a.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        // a . y <= b has the same integer solutions as (a/g) . y <= floor(b/g)
        let b = b.div_floor(&g);
        let a = a.into_iter().map(|x| x / &g).collect();
        out.push(Row { a, b });
    }
    Some(out)
}

fn recurse(rows: Vec<Row>, free: Vec<usize>, assignment: &mut Vec<BigInt>, out: &mut Vec<Vec<BigInt>>) -> Result<()> {
    let k = free.len();
    if k == 0 {
        if rows.iter().all(|r| !r.b.is_negative()) {
            out.push(assignment.clone());
        }
        return Ok(());
    }
    let lp = lp_of(&rows, k);
    if !lp.is_feasible() {
        return Ok(());
    }
    let mut ranges = Vec::with_capacity(k);
    for i in 0..k {
        let mut e = vec![Rat::zero(); k];
        e[i] = Rat::one();
        let (LpResult::Optimal { value: hi, .. }, LpResult::Optimal { value: lo, .. }) = (lp.maximize(&e), lp.minimize(&e)) else {
            return Err(PolytopeError::Unbounded);
        };
        let (lo, hi) = (lo.ceil().to_integer(), hi.floor().to_integer());
        if lo > hi {
            return Ok(());
        }
        ranges.push((lo, hi));
    }
    if k == 1 {
        let (lo, hi) = &ranges[0];
        let mut v = lo.clone();
        while &v <= hi {
            assignment[free[0]] = v.clone();
            out.push(assignment.clone());
            v += 1;
        }
        return Ok(());
    }
    let widths: Vec<BigInt> = ranges.iter().map(|(lo, hi)| hi - lo + 1).collect();
    let boxsize: BigInt = widths.iter().product();
    if boxsize <= BigInt::from(DIRECT_ENUMERATION_CUTOFF) {
        direct(&rows, &free, &ranges, assignment, out);
        return Ok(());
    }
    if let Some(i) = (0..k).find(|&i| ranges[i].0 == ranges[i].1) {
        let v = ranges[i].0.clone();
        if let Some(sub) = fix(&rows, i, &v) {
            assignment[free[i]] = v;
            let mut f = free.clone();
            f.remove(i);
            recurse(sub, f, assignment, out)?;
        }
        return Ok(());
    }
    let i = (0..k).max_by(|&x, &y| widths[x].cmp(&widths[y]).then(y.cmp(&x))).unwrap();
    let (lo, hi) = &ranges[i];
    // split point: midpoint rounded to a half-integer, never integral
    let sum = lo + hi;
    let cut_floor = sum.div_floor(&BigInt::from(2));
    let cut_floor = cut_floor.clamp(lo.clone(), hi - 1);
    let mut left = rows.clone();
    let mut e = vec![BigInt::zero(); k];
    e[i] = BigInt::one();
    left.push(Row { a: e.clone(), b: cut_floor.clone() });
    let mut right = rows;
    e[i] = -BigInt::one();
    right.push(Row { a: e, b: -(cut_floor + BigInt::one()) });
    recurse(left, free.clone(), assignment, out)?;
    recurse(right, free, assignment, out)
}

fn direct(rows: &[Row], free: &[usize], ranges: &[(BigInt, BigInt)], assignment: &mut [BigInt], out: &mut Vec<Vec<BigInt>>) {
    let k = free.len();
    let last = k - 1;
    // machine-word fast path when every quantity comfortably fits
    let small = rows.iter().all(|r| r.a.iter().all(|x| x.bits() < 40) && r.b.bits() < 60)
        && ranges.iter().all(|(lo, hi)| lo.bits() < 20 && hi.bits() < 20);
    if small {
        let a: Vec<Vec<i128>> = rows.iter().map(|r| r.a.iter().map(|x| x.to_i128().unwrap()).collect()).collect();
        let b: Vec<i128> = rows.iter().map(|r| r.b.to_i128().unwrap()).collect();
        let lo: Vec<i128> = ranges.iter().map(|r| r.0.to_i128().unwrap()).collect();
        let hi: Vec<i128> = ranges.iter().map(|r| r.1.to_i128().unwrap()).collect();
        let mut y = lo.clone();
        loop {
            let (mut l, mut h) = (lo[last], hi[last]);
            let mut ok = true;
            for (ar, br) in a.iter().zip(&b) {
                let rem = br - (0..last).map(|j| ar[j] * y[j]).sum::<i128>();
                let c = ar[last];
                if c > 0 {
                    h = h.min(rem.div_euclid(c));
                } else if c < 0 {
                    l = l.max(-(rem.div_euclid(-c)));
                } else if rem < 0 {
                    ok = false;
                    break;
                }
            }
            if ok {
                for v in l..=h {
                    for j in 0..last {
                        assignment[free[j]] = BigInt::from(y[j]);
                    }
                    assignment[free[last]] = BigInt::from(v);
                    out.push(assignment.to_vec());
                }
            }
            let mut j = last;
            loop {
                if j == 0 {
                    return;
                }
                j -= 1;
                if y[j] < hi[j] {
                    y[j] += 1;
                    break;
                }
                y[j] = lo[j];
            }
        }
    }
    let mut y: Vec<BigInt> = ranges.iter().map(|r| r.0.clone()).collect();
    loop {
        let (mut l, mut h) = ranges[last].clone();
        let mut ok = true;
        for r in rows {
            let mut rem = r.b.clone();
            for j in 0..last {
                rem -= &r.a[j] * &y[j];
            }
            let c = &r.a[last];
            if c.is_positive() {
                h = h.min(rem.div_floor(c));
            } else if c.is_negative() {
                l = l.max(-(rem.div_floor(&-c)));
            } else if rem.is_negative() {
                ok = false;
                break;
            }
        }
        if ok {
            let mut v = l;
            while v <= h {
                for j in 0..last {
                    assignment[free[j]] = y[j].clone();
                }
                assignment[free[last]] = v.clone();
                out.push(assignment.to_vec());
                v += 1;
            }
        }
        let mut j = last;
        loop {
            if j == 0 {
                return;
            }
            j -= 1;
            if y[j] < ranges[j].1 {
                y[j] += 1;
                break;
            }
            y[j] = ranges[j].0.clone();
        }
    }
}
