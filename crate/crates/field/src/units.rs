use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use cusp_polytope::{integer_points, HalfSpace, RationalPolytope};

use crate::ideal::hnf_rows;
use crate::{FieldElement, FieldError, NumberField, Rat, Result};

/// Signs of the real embeddings; `true` is `+`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignVector(pub Vec<bool>);

impl SignVector {
    pub fn all_positive(&self) -> bool {
        self.0.iter().all(|s| *s)
    }

    pub fn mul(&self, o: &SignVector) -> SignVector {
        SignVector(self.0.iter().zip(&o.0).map(|(a, b)| a == b).collect())
    }

    /// Places with a negative sign, as a bitmask.
    pub fn negative_mask(&self) -> u32 {
        self.0.iter().enumerate().filter(|(_, s)| !**s).fold(0, |m, (i, _)| m | (1 << i))
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<&str> = self.0.iter().map(|p| if *p { "+" } else { "-" }).collect();
        write!(f, "({})", s.join(","))
    }
}

/// Sign data of the unit group and generators of the totally positive units.
#[derive(Clone, Debug)]
pub struct UnitGroupData {
    pub fundamental_units: Vec<FieldElement>,
    /// Row 0 is `-1`, row `k+1` is the `k`-th fundamental unit; entry 1 marks a negative embedding.
    pub sign_matrix: Vec<Vec<u8>>,
    pub tp_generators: Vec<FieldElement>,
    /// Exponents of each tp generator over the fundamental units (up to sign).
    pub tp_exponents: Vec<Vec<i64>>,
    /// `[O_+ : (O^x)^2]`.
    pub tp_index_sq: u64,
    /// `log|sigma_i(g)|` per tp generator, floating point.
    pub tp_logs: Vec<Vec<f64>>,
}

fn log_embeddings(k: &NumberField, x: &FieldElement) -> Vec<f64> {
    (0..k.degree())
        .map(|i| {
            let f = k.embed_f64(x)[i].abs();
            if f.is_finite() && f > 1e-200 && f < 1e200 {
                f.ln()
            } else {
                let iv = k.embed(x, i, 200);
                let m = iv.abs_max();
                let (n, d) = (m.numer().bits() as f64, m.denom().bits() as f64);
                (n - d) * std::f64::consts::LN_2
            }
        })
        .collect()
}

impl NumberField {
    /// Sign matrix and totally positive unit generators, computed once.
    pub fn totally_positive_units(&self) -> &UnitGroupData {
        self.units.get_or_init(|| self.compute_unit_data())
    }

    fn compute_unit_data(&self) -> UnitGroupData {
        let d = self.degree();
        let r = d - 1;
        let us = self.fundamental_units().to_vec();
        let sv = |x: &FieldElement| -> Vec<u8> {
            self.signs(x).expect("units are nonzero").0.iter().map(|p| u8::from(!*p)).collect()
        };
        let mut sign_matrix = vec![vec![1u8; d]];
        for u in &us {
            sign_matrix.push(sv(u));
        }
        // kernel of n -> sum n_k s_k in F_2^d / <(1,...,1)>
        let mut kernel: Vec<Vec<i64>> = Vec::new();
        let mut kernel_size = 0u64;
        for mask in 0u32..(1 << r) {
            let mut acc = vec![0u8; d];
            for k in 0..r {
                if mask >> k & 1 == 1 {
                    for i in 0..d {
                        acc[i] ^= sign_matrix[k + 1][i];
                    }
                }
            }
            if acc.iter().all(|x| *x == 0) || acc.iter().all(|x| *x == 1) {
                kernel_size += 1;
                kernel.push((0..r).map(|k| (mask >> k & 1) as i64).collect());
            }
        }
        let mut rows: Vec<Vec<BigInt>> = kernel.iter().map(|v| v.iter().map(|x| BigInt::from(*x)).collect()).collect();
        for k in 0..r {
            rows.push((0..r).map(|j| BigInt::from(if j == k { 2 } else { 0 })).collect());
        }
        let h = if r == 0 { Vec::new() } else { hnf_rows(rows, r).expect("contains 2Z^r") };
        let tp_exponents: Vec<Vec<i64>> = h.iter().map(|row| row.iter().map(|x| x.to_i64().unwrap()).collect()).collect();
        let tp_generators: Vec<FieldElement> = tp_exponents
            .iter()
            .map(|n| {
                let mut u = self.one();
                for (k, e) in n.iter().enumerate() {
                    u = self.mul(&u, &self.pow(&us[k], *e).expect("unit"));
                }
                if !self.signs(&u).unwrap().all_positive() {
                    u = -&u;
                }
                debug_assert!(self.is_totally_positive(&u));
                u
            })
            .collect();
        let tp_logs = tp_generators.iter().map(|g| log_embeddings(self, g)).collect();
        UnitGroupData {
            fundamental_units: us,
            sign_matrix,
            tp_generators,
            tp_exponents,
            tp_index_sq: kernel_size,
            tp_logs,
        }
    }
}

/// A finite-index subgroup `V` of the totally positive units.
#[derive(Clone, Debug)]
pub struct UnitSubgroup {
    /// Rows: exponents of the generators of `V` over the tp generators.
    pub exponents: Vec<Vec<i64>>,
    pub generators: Vec<FieldElement>,
    pub index: u64,
    logs: Vec<Vec<f64>>,
}

impl UnitSubgroup {
    /// `V` generated by the given exponent rows over the tp generators.
    pub fn from_exponents(k: &NumberField, rows: Vec<Vec<i64>>) -> Result<Self> {
        let data = k.totally_positive_units();
        let r = data.tp_generators.len();
        if rows.iter().any(|row| row.len() != r) {
            return Err(FieldError::Invariant("unit subgroup exponent rows have wrong length".into()));
        }
        let big: Vec<Vec<BigInt>> = rows.iter().map(|row| row.iter().map(|x| BigInt::from(*x)).collect()).collect();
        let h = if r == 0 {
            Vec::new()
        } else {
            hnf_rows(big, r).ok_or_else(|| FieldError::Invariant("unit subgroup does not have finite index".into()))?
        };
        let index = h.iter().enumerate().fold(BigInt::one(), |p, (i, row)| p * &row[i]);
        let exponents: Vec<Vec<i64>> = h.iter().map(|row| row.iter().map(|x| x.to_i64().unwrap()).collect()).collect();
        let generators: Vec<FieldElement> = exponents
            .iter()
            .map(|n| {
                n.iter().enumerate().fold(k.one(), |acc, (j, e)| k.mul(&acc, &k.pow(&data.tp_generators[j], *e).unwrap()))
            })
            .collect();
        let logs = exponents
            .iter()
            .map(|n| {
                (0..k.degree())
                    .map(|i| n.iter().enumerate().map(|(j, e)| *e as f64 * data.tp_logs[j][i]).sum())
                    .collect()
            })
            .collect();
        Ok(UnitSubgroup { exponents, generators, index: index.to_u64().unwrap(), logs })
    }

    /// All totally positive units.
    pub fn full(k: &NumberField) -> Self {
        let r = k.degree() - 1;
        Self::from_exponents(k, (0..r).map(|i| (0..r).map(|j| i64::from(i == j)).collect()).collect()).unwrap()
    }

    /// The subgroup of squares of units.
    pub fn squares(k: &NumberField) -> Self {
        let data = k.totally_positive_units();
        let r = k.degree() - 1;
        // 2 e_i over fundamental units, rewritten over the tp basis (lower triangular)
        let h = &data.tp_exponents;
        let rows = (0..r)
            .map(|i| {
                let mut v: Vec<Rat> = (0..r).map(|j| Rat::from_integer(BigInt::from(if i == j { 2 } else { 0 }))).collect();
                let mut y = vec![0i64; r];
                for c in (0..r).rev() {
                    let q = &v[c] / Rat::from_integer(BigInt::from(h[c][c]));
                    let qi = q.to_integer().to_i64().unwrap();
                    for t in 0..=c {
                        v[t] -= &q * Rat::from_integer(BigInt::from(h[c][t]));
                    }
                    y[c] = qi;
                }
                y
            })
            .collect();
        Self::from_exponents(k, rows).unwrap()
    }

    /// `[O_+ : V]`.
    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    /// `prod g_j^{z_j}`.
    pub fn element(&self, k: &NumberField, z: &[i64]) -> FieldElement {
        z.iter().enumerate().fold(k.one(), |acc, (j, e)| k.mul(&acc, &k.pow(&self.generators[j], *e).unwrap()))
    }

    /// Floating log embedding of `prod g_j^{z_j}`.
    pub fn log_of(&self, z: &[i64]) -> Vec<f64> {
        let d = self.logs.first().map_or(1, |l| l.len());
        (0..d).map(|i| z.iter().enumerate().map(|(j, e)| *e as f64 * self.logs[j][i]).sum()).collect()
    }

    pub fn generator_logs(&self) -> &[Vec<f64>] {
        &self.logs
    }
}

/// Units with prescribed size patterns, and the finite set cutting out the trace-minimal cone.
#[derive(Clone, Debug)]
pub struct SignedUnits {
    /// `(R as bitmask, u_R)`: `u_R > 1` exactly at the places in `R`.
    pub s_pm: Vec<(u32, FieldElement)>,
    /// `iu[i]`: greater than 1 only at place `i`.
    pub iu: Vec<FieldElement>,
    /// `v_i > d` at place `i`.
    pub s_d: Vec<FieldElement>,
    /// Rational upper bound for `max (iu_i - 1)/(1 - iu_j)`.
    pub b_bar: Rat,
    /// Units of `V`, other than 1, with every embedding at most `d * b_bar`.
    pub s_small: Vec<FieldElement>,
}

impl SignedUnits {
    /// `S_small ∪ {iu}`: the half-space generators of the trace-minimal cone.
    pub fn cone_units(&self) -> Vec<FieldElement> {
        let mut v = self.s_small.clone();
        for u in &self.iu {
            if !v.contains(u) {
                v.push(u.clone());
            }
        }
        v
    }

    /// `S' = S_small ∪ S_± ∪ S_d`.
    pub fn s_prime(&self) -> Vec<FieldElement> {
        let mut v = self.s_small.clone();
        for u in self.s_pm.iter().map(|(_, u)| u).chain(&self.s_d) {
            if !v.contains(u) {
                v.push(u.clone());
            }
        }
        v
    }
}

fn odometer(r: usize, radius: i64, mut f: impl FnMut(&[i64])) {
    if r == 0 {
        return;
    }
    let mut z = vec![-radius; r];
    loop {
        f(&z);
        let mut k = 0;
        loop {
            if k == r {
                return;
            }
            if z[k] < radius {
                z[k] += 1;
                break;
            }
            z[k] = -radius;
            k += 1;
        }
    }
}

const LOG_MARGIN: f64 = 1e-9;

impl NumberField {
    /// `u_R` for proper nonempty subsets `R`, `S_d`, `b_bar` and the finite unit set `S'`.
    pub fn find_signed_units(&self, v: &UnitSubgroup) -> Result<SignedUnits> {
        let d = self.degree();
        let r = v.rank();
        if d == 1 {
            return Ok(SignedUnits { s_pm: vec![], iu: vec![], s_d: vec![], b_bar: Rat::one(), s_small: vec![] });
        }
        let last = 1u32 << (d - 1);
        let masks: Vec<u32> = (1..last).collect(); // subsets avoiding the last place
        let one = Rat::one();
        let mut best: Vec<Option<(f64, Vec<i64>)>> = vec![None; masks.len()];
        let mut radius = 1;
        while best.iter().any(|b| b.is_none()) {
            if radius > 512 {
                return Err(FieldError::Invariant("signed unit search did not terminate".into()));
            }
            odometer(r, radius, |z| {
                let lg = v.log_of(z);
                if lg.iter().any(|x| x.abs() < LOG_MARGIN) {
                    return;
                }
                let m = lg.iter().enumerate().filter(|(_, x)| **x > 0.0).fold(0u32, |m, (i, _)| m | (1 << i));
                if m == 0 || m & last != 0 {
                    return;
                }
                let size = lg.iter().fold(0.0f64, |a, x| a.max(x.abs()));
                let slot = &mut best[(m - 1) as usize];
                let better = match slot {
                    None => true,
                    Some((s, zz)) => size < *s - 1e-12 || ((size - *s).abs() <= 1e-12 && z < zz.as_slice()),
                };
                if better {
                    *slot = Some((size, z.to_vec()));
                }
            });
            radius *= 2;
        }
        let mut s_pm = Vec::new();
        for (idx, b) in best.iter().enumerate() {
            let m = masks[idx];
            let z = &b.as_ref().unwrap().1;
            let u = v.element(self, z);
            for i in 0..d {
                let want = if m >> i & 1 == 1 { 1 } else { -1 };
                if self.compare_embedding(&u, i, &one) != want {
                    return Err(FieldError::Invariant("signed unit failed exact verification".into()));
                }
            }
            let comp = (last << 1) - 1 - m;
            s_pm.push((m, u.clone()));
            s_pm.push((comp, self.inverse(&u)?));
        }
        s_pm.sort_by_key(|(m, _)| *m);
        let iu: Vec<FieldElement> =
            (0..d).map(|i| s_pm.iter().find(|(m, _)| *m == 1 << i).unwrap().1.clone()).collect();
        let dr = Rat::from_integer(BigInt::from(d as u64));
        let mut s_d = Vec::new();
        for (i, u) in iu.iter().enumerate() {
            let mut p = u.clone();
            while self.compare_embedding(&p, i, &dr) <= 0 {
                p = self.mul(&p, u);
            }
            s_d.push(p);
        }
        // b_bar
        let scale = Rat::from_integer(BigInt::from(1u64 << 20));
        let mut bmax = Rat::zero();
        for (i, u) in iu.iter().enumerate() {
            let emb = self.embed_all(u, 120);
            for j in 0..d {
                if j == i {
                    continue;
                }
                let num = &emb[i].hi - &one;
                let den = &one - &emb[j].hi;
                if !den.is_positive() {
                    return Err(FieldError::Invariant("iu enclosure too coarse".into()));
                }
                let q = num / den;
                if q > bmax {
                    bmax = q;
                }
            }
        }
        let b_bar = Rat::new((&bmax * &scale).ceil().to_integer(), scale.to_integer());
        let s_small = self.small_units(v, &(&dr * &b_bar))?;
        Ok(SignedUnits { s_pm, iu, s_d, b_bar, s_small })
    }

    /// Units of `V` other than 1 whose embeddings are all at most `bound`.
    pub fn small_units(&self, v: &UnitSubgroup, bound: &Rat) -> Result<Vec<FieldElement>> {
        let d = self.degree();
        let r = v.rank();
        let lb = crate::rat_to_f64(bound).ln();
        // box on exponents: the log vector lies in [-(d-1) lb, lb]^d; pull back through a left inverse
        let lg = v.generator_logs();
        let m: Vec<Vec<Rat>> = (0..r)
            .map(|j| (0..r).map(|i| Rat::from_float(lg[j][i]).unwrap()).collect())
            .collect();
        let inv = cusp_polytope::linalg::inverse(&m)
            .ok_or_else(|| FieldError::Invariant("unit logs are degenerate".into()))?;
        let xmax = (d as f64 - 1.0) * lb.abs() + 1.0;
        let mut rows: Vec<HalfSpace> = Vec::new();
        for k in 0..r {
            let zk: f64 = (0..r).map(|i| crate::rat_to_f64(&inv[i][k]).abs()).sum::<f64>() * xmax + 2.0;
            let b = zk.ceil() as i64;
            rows.push(HalfSpace::lower(r, k, Rat::from_integer((-b).into())));
            rows.push(HalfSpace::upper(r, k, Rat::from_integer(b.into())));
        }
        let zbound: f64 = rows.iter().map(|h| crate::rat_to_f64(&h.bound_rat()).abs()).fold(0.0, f64::max);
        let slack = LOG_MARGIN * (1.0 + zbound * r as f64 * lg.iter().flatten().fold(0.0f64, |a, x| a.max(x.abs())));
        for i in 0..d {
            let normal: Vec<Rat> = (0..r).map(|j| Rat::from_float(lg[j][i]).unwrap()).collect();
            if normal.iter().all(|x| x.is_zero()) {
                continue;
            }
            rows.push(HalfSpace::new(normal, Rat::from_float(lb + slack).unwrap())?);
        }
        let p = RationalPolytope::new(r, rows)?;
        let mut out = Vec::new();
        for z in integer_points(&p)? {
            if z.iter().all(|x| x.is_zero()) {
                continue;
            }
            let zi: Vec<i64> = z.iter().map(|x| x.to_i64().unwrap()).collect();
            let u = v.element(self, &zi);
            if (0..d).all(|i| self.compare_embedding(&u, i, bound) <= 0) {
                out.push(u);
            }
        }
        Ok(out)
    }
}
