//! Ideal notation for levels and cusp moduli.
//!
//! A term is an integer `n` (the ideal `(n)`), or `p<N>` for a prime of norm
//! `N`, with `p<N>.<i>` picking the `i`-th such prime when there are several.
//! Terms take an optional `^e` and are joined by `*`. `(1)` and `1` are the
//! unit ideal; parentheses around the whole or a term are ignored.

use anyhow::{anyhow, bail, Context, Result};
use cusp_certify::Level;
use cusp_field::{FractionalIdeal, NumberField, Rat};
use num_bigint::BigInt;

pub fn parse_ideal(k: &NumberField, s: &str) -> Result<FractionalIdeal> {
    let s = s.trim().trim_start_matches('(').trim_end_matches(')').trim();
    if s.is_empty() {
        bail!("empty ideal");
    }
    let mut out = FractionalIdeal::unit(k.degree());
    for term in s.split('*') {
        let term = term.trim().trim_start_matches('(').trim_end_matches(')').trim();
        let (base, exp) = match term.split_once('^') {
            Some((b, e)) => (b.trim(), e.trim().parse::<i64>().with_context(|| format!("exponent in {term:?}"))?),
            None => (term, 1),
        };
        let ideal = if let Some(rest) = base.strip_prefix('p') {
            let (norm, which) = match rest.split_once('.') {
                Some((n, i)) => (n, i.parse::<usize>().with_context(|| format!("prime index in {term:?}"))?),
                None => (rest, 0),
            };
            let norm: u64 = norm.parse().with_context(|| format!("prime norm in {term:?}"))?;
            prime_of_norm(k, norm, which)?
        } else {
            let n: i64 = base.parse().with_context(|| format!("not an ideal term: {term:?}"))?;
            if n == 0 {
                bail!("the zero ideal is not a level");
            }
            FractionalIdeal::principal(k, &k.rational(Rat::from_integer(BigInt::from(n))))?
        };
        out = out.mul(k, &ideal.pow(k, exp)?);
    }
    Ok(out)
}

fn prime_of_norm(k: &NumberField, norm: u64, which: usize) -> Result<FractionalIdeal> {
    let p = (2..=norm).find(|d| norm % d == 0).ok_or_else(|| anyhow!("norm {norm} is not a prime power"))?;
    let mut n = norm;
    while n % p == 0 {
        n /= p;
    }
    if n != 1 {
        bail!("norm {norm} is not a prime power");
    }
    let primes = k.primes_above(p)?;
    let matching: Vec<_> = primes.iter().filter(|q| q.norm() == norm).collect();
    matching
        .get(which)
        .map(|q| q.ideal.clone())
        .ok_or_else(|| anyhow!("{} primes of norm {norm}, asked for index {which}", matching.len()))
}

pub fn parse_level(k: &NumberField, s: &str) -> Result<Level> {
    let ideal = parse_ideal(k, s)?;
    let label = if ideal.is_unit() { "(1)".to_string() } else { s.trim().to_string() };
    Ok(Level { label, ideal })
}
