//! Dense univariate polynomials over the rationals, constant term first.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::interval::Interval;
use crate::Rat;

pub fn trim(p: &mut Vec<Rat>) {
    while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

pub fn degree(p: &[Rat]) -> usize {
    p.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
}

pub fn eval(p: &[Rat], x: &Rat) -> Rat {
    p.iter().rev().fold(Rat::zero(), |acc, c| acc * x + c)
}

pub fn eval_interval(p: &[Rat], x: &Interval) -> Interval {
    p.iter().rev().fold(Interval::zero(), |acc, c| &(&acc * x) + &Interval::point(c.clone()))
}

pub fn derivative(p: &[Rat]) -> Vec<Rat> {
    if p.len() <= 1 {
        return vec![Rat::zero()];
    }
    p.iter().enumerate().skip(1).map(|(i, c)| c * Rat::from_integer(BigInt::from(i))).collect()
}

/// Remainder of `a` modulo `b` (b nonzero).
pub fn rem(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let db = degree(b);
    assert!(!b[db].is_zero(), "division by zero polynomial");
    if db == 0 {
        return vec![Rat::zero()];
    }
    let mut r: Vec<Rat> = a.to_vec();
    trim(&mut r);
    while !is_zero_poly(&r) && degree(&r) >= db {
        let dr = degree(&r);
        let f = &r[dr] / &b[db];
        for i in 0..=db {
            let v = &f * &b[i];
            r[dr - db + i] -= v;
        }
        trim(&mut r);
    }
    r
}

pub fn mul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn is_zero_poly(p: &[Rat]) -> bool {
    p.iter().all(|c| c.is_zero())
}

/// Sturm sequence of a squarefree polynomial.
pub fn sturm_sequence(p: &[Rat]) -> Vec<Vec<Rat>> {
    let mut seq = vec![p.to_vec(), derivative(p)];
    loop {
        let n = seq.len();
        if degree(&seq[n - 1]) == 0 {
            break;
        }
        let r = rem(&seq[n - 2], &seq[n - 1]);
        if is_zero_poly(&r) {
            break;
        }
        seq.push(r.into_iter().map(|c| -c).collect());
    }
    seq
}

fn sign_changes(seq: &[Vec<Rat>], x: &Rat) -> usize {
    let signs: Vec<i8> = seq
        .iter()
        .map(|p| eval(p, x))
        .filter(|v| !v.is_zero())
        .map(|v| if v.is_positive() { 1 } else { -1 })
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Sorted isolating intervals for the real roots of a squarefree polynomial
/// with no rational roots, each refined to width at most `2^-bits`.
pub fn isolate_real_roots(p: &[Rat], bits: u32) -> Vec<Interval> {
    let d = degree(p);
    let lead = p[d].abs();
    let bound = p[..d].iter().map(|c| c.abs() / &lead).max().unwrap_or_else(Rat::zero) + Rat::one();
    let seq = sturm_sequence(p);
    let mut stack = vec![(-bound.clone(), bound)];
    let mut found = Vec::new();
    while let Some((a, b)) = stack.pop() {
        let n = sign_changes(&seq, &a) - sign_changes(&seq, &b);
        if n == 0 {
            continue;
        }
        if n == 1 {
            found.push(Interval::new(a, b));
            continue;
        }
        let m = (&a + &b) / Rat::from_integer(2.into());
        stack.push((a, m.clone()));
        stack.push((m, b));
    }
    found.sort_by(|x, y| x.lo.cmp(&y.lo));
    found.into_iter().map(|iv| refine_root(p, &iv, bits)).collect()
}

/// Bisect an interval containing exactly one simple root whose endpoints are
/// not roots, until the width is at most `2^-bits`.
pub fn refine_root(p: &[Rat], iv: &Interval, bits: u32) -> Interval {
    let target = Rat::new(BigInt::one(), BigInt::one() << bits);
    let (mut a, mut b) = (iv.lo.clone(), iv.hi.clone());
    let mut sa = eval(p, &a).is_positive();
    if eval(p, &b).is_zero() {
        // nudge inward never needed for irreducible inputs; keep the point
        return Interval::point(b);
    }
    while &b - &a > target {
        let m = (&a + &b) / Rat::from_integer(2.into());
        let v = eval(p, &m);
        if v.is_zero() {
            return Interval::point(m);
        }
        if v.is_positive() == sa {
            a = m;
            sa = v.is_positive();
        } else {
            b = m;
        }
    }
    Interval::new(a, b)
}

/// Characteristic polynomial of a square rational matrix (Faddeev-LeVerrier),
/// monic, constant term first.
pub fn charpoly(m: &[Vec<Rat>]) -> Vec<Rat> {
    let n = m.len();
    let mut coeffs = vec![Rat::zero(); n + 1];
    coeffs[n] = Rat::one();
    let mut mk: Vec<Vec<Rat>> = vec![vec![Rat::zero(); n]; n];
    for k in 1..=n {
        // mk = m * (mk_prev + c_{n-k+1} I)
        let mut prev = mk.clone();
        for (i, row) in prev.iter_mut().enumerate() {
            row[i] += &coeffs[n - k + 1];
        }
        mk = cusp_polytope::linalg::mat_mul(m, &prev);
        let tr: Rat = (0..n).fold(Rat::zero(), |s, i| s + &mk[i][i]);
        coeffs[n - k] = -tr / Rat::from_integer(BigInt::from(k));
    }
    coeffs
}

/// Resultant via the Sylvester matrix.
pub fn resultant(a: &[Rat], b: &[Rat]) -> Rat {
    let (m, n) = (degree(a), degree(b));
    let size = m + n;
    if size == 0 {
        return Rat::one();
    }
    let mut s = vec![vec![Rat::zero(); size]; size];
    for i in 0..n {
        for j in 0..=m {
            s[i][i + j] = a[m - j].clone();
        }
    }
    for i in 0..m {
        for j in 0..=n {
            s[n + i][i + j] = b[n - j].clone();
        }
    }
    cusp_polytope::linalg::det(&s)
}

/// Discriminant of a polynomial of degree `n >= 1`.
pub fn discriminant(p: &[Rat]) -> Rat {
    let n = degree(p);
    let r = resultant(p, &derivative(p));
    let sign = if (n * (n - 1) / 2) % 2 == 0 { Rat::one() } else { -Rat::one() };
    sign * r / &p[n]
}
