use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{poly, FieldElement, FieldError, FractionalIdeal, NumberField, Rat, Result};

/// A prime ideal of O_K together with its local invariants.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeIdeal {
    pub p: u64,
    pub residue_degree: u32,
    pub ramification: u32,
    pub ideal: FractionalIdeal,
}

impl PrimeIdeal {
    pub fn norm(&self) -> u64 {
        self.p.pow(self.residue_degree)
    }
}

// ---- polynomials over F_p, constant term first ----

type Fp = Vec<u64>;

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    powmod(a, p - 2, p)
}

fn fp_trim(mut a: Fp) -> Fp {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn fp_sub(a: &Fp, b: &Fp, p: u64) -> Fp {
    let n = a.len().max(b.len());
    let r = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    fp_trim(r)
}

fn fp_mul(a: &Fp, b: &Fp, p: u64) -> Fp {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = vec![0u64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            r[i + j] = (r[i + j] + mulmod(*x, *y, p)) % p;
        }
    }
    fp_trim(r)
}

/// Quotient and remainder; `b` nonzero.
fn fp_divrem(a: &Fp, b: &Fp, p: u64) -> (Fp, Fp) {
    let mut r = a.clone();
    let db = b.len() - 1;
    let lead_inv = inv_mod(*b.last().unwrap(), p);
    if r.len() <= db {
        return (Vec::new(), fp_trim(r));
    }
    let mut q = vec![0u64; r.len() - db];
    for i in (db..r.len()).rev() {
        let c = mulmod(r[i], lead_inv, p);
        if c == 0 {
            continue;
        }
        q[i - db] = c;
        for j in 0..=db {
            r[i - db + j] = (r[i - db + j] + p - mulmod(c, b[j], p)) % p;
        }
    }
    r.truncate(db);
    (fp_trim(q), fp_trim(r))
}

fn fp_monic(a: Fp, p: u64) -> Fp {
    match a.last() {
        None => a,
        Some(&l) => {
            let li = inv_mod(l, p);
            a.iter().map(|x| mulmod(*x, li, p)).collect()
        }
    }
}

fn fp_gcd(a: &Fp, b: &Fp, p: u64) -> Fp {
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_empty() {
        let r = fp_divrem(&x, &y, p).1;
        x = y;
        y = r;
    }
    fp_monic(x, p)
}

fn fp_powmod(base: &Fp, mut e: u128, m: &Fp, p: u64) -> Fp {
    let mut r: Fp = vec![1];
    let mut b = fp_divrem(base, m, p).1;
    while e > 0 {
        if e & 1 == 1 {
            r = fp_divrem(&fp_mul(&r, &b, p), m, p).1;
        }
        b = fp_divrem(&fp_mul(&b, &b, p), m, p).1;
        e >>= 1;
    }
    r
}

fn fp_derivative(a: &Fp, p: u64) -> Fp {
    fp_trim(a.iter().enumerate().skip(1).map(|(i, c)| mulmod(*c, i as u64 % p, p)).collect())
}

/// Equal-degree splitting of a squarefree product of degree-`k` irreducibles (odd p).
fn fp_equal_degree(f: &Fp, k: usize, p: u64, out: &mut Vec<Fp>) {
    let n = f.len() - 1;
    if n == k {
        out.push(f.clone());
        return;
    }
    let e = ((p as u128).pow(k as u32) - 1) / 2;
    for shift in 0u64.. {
        // deterministic sequence of trial elements x + c, then x^2 + x + c
        let a: Fp = if shift < p { vec![shift % p, 1] } else { vec![shift % p, 1, 1] };
        let h = fp_sub(&fp_powmod(&a, e, f, p), &vec![1], p);
        let g = fp_gcd(&h, f, p);
        if g.len() > 1 && g.len() < f.len() {
            let q = fp_monic(fp_divrem(f, &g, p).0, p);
            fp_equal_degree(&g, k, p, out);
            fp_equal_degree(&q, k, p, out);
            return;
        }
    }
}

/// Monic irreducible factors with multiplicity of a monic `f` over F_p.
pub(crate) fn factor_mod_p(f: &Fp, p: u64) -> Vec<(Fp, u32)> {
    let n = f.len() - 1;
    let mut distinct: Vec<Fp> = Vec::new();
    let brute = (p as f64).powi((n / 2) as i32) <= 1e5 || p == 2;
    if brute {
        let mut rest = f.clone();
        let mut k = 1;
        while 2 * k <= rest.len() - 1 {
            let count = p.pow(k as u32);
            for idx in 0..count {
                let mut g = Vec::with_capacity(k + 1);
                let mut t = idx;
                for _ in 0..k {
                    g.push(t % p);
                    t /= p;
                }
                g.push(1);
                if fp_divrem(&rest, &g, p).1.is_empty() {
                    while fp_divrem(&rest, &g, p).1.is_empty() {
                        rest = fp_divrem(&rest, &g, p).0;
                    }
                    distinct.push(g);
                }
                if 2 * k > rest.len() - 1 {
                    break;
                }
            }
            k += 1;
        }
        if rest.len() > 1 {
            distinct.push(rest);
        }
    } else {
        let g = fp_gcd(f, &fp_derivative(f, p), p);
        let mut sf = fp_monic(fp_divrem(f, &g, p).0, p);
        let x: Fp = vec![0, 1];
        let mut h = x.clone();
        let mut k = 0;
        while sf.len() > 1 {
            k += 1;
            if 2 * k > sf.len() - 1 {
                distinct.push(sf.clone());
                break;
            }
            h = fp_powmod(&h, p as u128, &sf, p);
            let g = fp_gcd(&fp_sub(&h, &x, p), &sf, p);
            if g.len() > 1 {
                fp_equal_degree(&g, k, p, &mut distinct);
                sf = fp_monic(fp_divrem(&sf, &g, p).0, p);
                h = fp_divrem(&h, &sf, p).1;
            }
        }
    }
    distinct.sort();
    distinct
        .into_iter()
        .map(|g| {
            let mut e = 0u32;
            let mut rest = f.clone();
            loop {
                let (q, r) = fp_divrem(&rest, &g, p);
                if !r.is_empty() {
                    break;
                }
                e += 1;
                rest = q;
            }
            (g, e)
        })
        .collect()
}

/// Prime factorization of a positive integer by trial division.
pub fn factor_integer(n: &BigInt) -> Result<Vec<(u64, u32)>> {
    let mut n = n.abs().to_u128().ok_or_else(|| FieldError::Invariant(format!("integer {n} too large to factor")))?;
    let mut out = Vec::new();
    let mut p: u128 = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p as u64, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        let p = u64::try_from(n).map_err(|_| FieldError::Invariant("prime factor too large".into()))?;
        out.push((p, 1));
    }
    Ok(out)
}

fn isqrt_exact(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &(&r * &r) == n {
        Some(r)
    } else {
        None
    }
}

impl NumberField {
    /// A generator `α` of an order whose index in O_K is prime to `p`, with its characteristic polynomial.
    fn kummer_generator(&self, p: u64) -> Result<(FieldElement, Vec<BigInt>)> {
        let d = self.degree();
        let pb = BigInt::from(p);
        let mut candidates = vec![self.theta()];
        let radius: i64 = 2;
        let span = (2 * radius + 1) as usize;
        let total = span.pow((d - 1) as u32);
        for idx in 0..total {
            let mut t = idx;
            let mut c = vec![0i64; d];
            for k in 1..d {
                c[k] = (t % span) as i64 - radius;
                t /= span;
            }
            if c.iter().all(|x| *x == 0) {
                continue;
            }
            candidates.push(FieldElement::from_ints(&c));
        }
        for a in candidates {
            let cp = self.charpoly(&a);
            let cd = poly::discriminant(&cp);
            if cd.is_zero() {
                continue;
            }
            let ratio = cd / Rat::from_integer(self.disc().clone());
            if !ratio.is_integer() {
                continue;
            }
            let Some(index) = isqrt_exact(&ratio.to_integer().abs()) else { continue };
            if (&index % &pb).is_zero() {
                continue;
            }
            let cpi: Vec<BigInt> = cp.into_iter().map(|c| c.to_integer()).collect();
            return Ok((a, cpi));
        }
        Err(FieldError::IndexPrime(p.to_string()))
    }

    fn eval_at(&self, g: &[u64], a: &FieldElement) -> FieldElement {
        let mut acc = self.zero();
        for c in g.iter().rev() {
            acc = &self.mul(&acc, a) + &self.rational(Rat::from_integer(BigInt::from(*c)));
        }
        acc
    }

    /// The prime ideals above the rational prime `p`, sorted.
    pub fn primes_above(&self, p: u64) -> Result<Arc<Vec<PrimeIdeal>>> {
        if let Some(v) = self.caches.primes.lock().unwrap().get(&p) {
            return Ok(v.clone());
        }
        let (alpha, cp) = self.kummer_generator(p)?;
        let pb = BigInt::from(p);
        let fp: Fp = cp.iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect();
        let pe = self.rational(Rat::from_integer(pb.clone()));
        let mut out = Vec::new();
        let mut total = 0u32;
        for (g, e) in factor_mod_p(&fp, p) {
            let ga = self.eval_at(&g, &alpha);
            let ideal = FractionalIdeal::from_generators(self, &[pe.clone(), ga])?;
            let f = (g.len() - 1) as u32;
            total += f * e;
            debug_assert_eq!(ideal.norm(), Rat::from_integer(num_traits::pow(pb.clone(), f as usize)));
            out.push(PrimeIdeal { p, residue_degree: f, ramification: e, ideal });
        }
        if total as usize != self.degree() {
            return Err(FieldError::Invariant(format!("splitting of {p} does not account for the degree")));
        }
        out.sort();
        let out = Arc::new(out);
        self.caches.primes.lock().unwrap().insert(p, out.clone());
        Ok(out)
    }

    fn prime_power(&self, pr: &PrimeIdeal, k: u32) -> FractionalIdeal {
        let mut cache = self.caches.prime_powers.lock().unwrap();
        let powers = cache.entry(pr.ideal.clone()).or_insert_with(|| vec![FractionalIdeal::unit(self.degree())]);
        while powers.len() <= k as usize {
            let next = powers.last().unwrap().mul(self, &pr.ideal);
            powers.push(next);
        }
        powers[k as usize].clone()
    }

    /// `v_𝔭(I)` for a fractional ideal `I`.
    pub fn valuation(&self, pr: &PrimeIdeal, i: &FractionalIdeal) -> i64 {
        // clear the denominator with a rational integer of known valuation
        let den = i.denom().clone();
        let integral = if den.is_one() { i.clone() } else { i.scale(&Rat::from_integer(den.clone())).expect("nonzero") };
        let mut vden = 0i64;
        let mut t = den;
        let pb = BigInt::from(pr.p);
        while (&t % &pb).is_zero() {
            t /= &pb;
            vden += 1;
        }
        let n = integral.norm().to_integer();
        let mut cap = 0u32;
        let mut t = n;
        while !t.is_zero() && (&t % &pb).is_zero() {
            t /= &pb;
            cap += 1;
        }
        let cap = cap / pr.residue_degree;
        let mut v = 0u32;
        while v < cap && self.prime_power(pr, v + 1).contains_ideal(&integral) {
            v += 1;
        }
        v as i64 - vden * pr.ramification as i64
    }

    /// Prime factorization of a fractional ideal.
    pub fn factor_ideal(&self, i: &FractionalIdeal) -> Result<Vec<(PrimeIdeal, i64)>> {
        let n = i.norm();
        let mut ps: Vec<u64> = factor_integer(n.numer())?.into_iter().map(|(p, _)| p).collect();
        ps.extend(factor_integer(n.denom())?.into_iter().map(|(p, _)| p));
        ps.extend(factor_integer(i.denom())?.into_iter().map(|(p, _)| p));
        ps.sort_unstable();
        ps.dedup();
        let mut out = Vec::new();
        for p in ps {
            for pr in self.primes_above(p)?.iter() {
                let v = self.valuation(pr, i);
                if v != 0 {
                    out.push((pr.clone(), v));
                }
            }
        }
        let check = out.iter().fold(Rat::one(), |acc, (pr, v)| {
            let np = Rat::from_integer(BigInt::from(pr.norm()));
            if *v >= 0 {
                acc * num_traits::pow(np, *v as usize)
            } else {
                acc / num_traits::pow(np, (-*v) as usize)
            }
        });
        if check != n {
            return Err(FieldError::Invariant(format!("factorization of ideal of norm {n} is incomplete")));
        }
        Ok(out)
    }

    /// All integral divisors of an integral ideal, sorted by norm then form.
    pub fn divisors(&self, i: &FractionalIdeal) -> Result<Vec<FractionalIdeal>> {
        if !i.is_integral() {
            return Err(FieldError::NotIntegral);
        }
        let fac = self.factor_ideal(i)?;
        let mut out = vec![FractionalIdeal::unit(self.degree())];
        for (pr, v) in &fac {
            let mut next = Vec::with_capacity(out.len() * (*v as usize + 1));
            for j in &out {
                for e in 0..=*v as u32 {
                    next.push(if e == 0 { j.clone() } else { j.mul(self, &self.prime_power(pr, e)) });
                }
            }
            out = next;
        }
        let mut keyed: BTreeMap<(Rat, FractionalIdeal), ()> = BTreeMap::new();
        for j in out {
            keyed.insert((j.norm(), j), ());
        }
        Ok(keyed.into_keys().map(|(_, j)| j).collect())
    }
}
