//! Factorization in F_q[x].
//!
//! Pipeline: squarefree decomposition (with p-th roots when the derivative
//! vanishes), distinct-degree splitting via `x^(q^d) mod f`, then
//! Cantor–Zassenhaus equal-degree splitting. The random splitter is seeded from
//! `(q, f)` unless a seed is supplied, so output is reproducible.

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ff::{FieldElem, FieldSpec};
use crate::polyring::{enumerate_monic, Poly};

/// `unit * prod(prime^exp)` with primes monic, irreducible, distinct and sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub unit: FieldElem,
    pub parts: Vec<(Poly, u64)>,
}

impl Factorization {
    /// Multiplies the factorization back out.
    pub fn expand(&self) -> Poly {
        self.parts
            .iter()
            .fold(Poly::constant(&self.unit), |acc, (prime, e)| {
                acc.mul_unchecked(&prime.pow(*e))
            })
    }

    pub fn exponents(&self) -> impl Iterator<Item = u64> + '_ {
        self.parts.iter().map(|(_, e)| *e)
    }

    pub fn to_json(&self) -> FactorizationJson {
        FactorizationJson {
            unit: self.unit.to_string(),
            parts: self
                .parts
                .iter()
                .map(|(prime, exp)| PartJson {
                    prime: prime.to_string(),
                    exp: *exp,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FactorizationJson {
    pub unit: String,
    pub parts: Vec<PartJson>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PartJson {
    pub prime: String,
    pub exp: u64,
}

fn x_poly(field: &FieldSpec) -> Poly {
    Poly::x(field)
}

/// `x^(q^times) mod f`, by repeated q-th powering.
fn frobenius_iterate(start: &Poly, f: &Poly, times: usize) -> Result<Poly> {
    let q = BigUint::from(f.field().q());
    let mut h = start.clone();
    for _ in 0..times {
        h = h.pow_mod(&q, f)?;
    }
    Ok(h)
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Whether the monic associate of `f` is irreducible. Constants are not.
pub fn is_irreducible(f: &Poly) -> Result<bool> {
    let n = f.degree().ok_or(Error::ZeroPolynomial)?;
    if n == 0 {
        return Ok(false);
    }
    if n == 1 {
        return Ok(true);
    }
    let f = f.monic_associate()?;
    let x = x_poly(f.field());
    if frobenius_iterate(&x, &f, n)? != x {
        return Ok(false);
    }
    for l in prime_divisors(n) {
        let h = frobenius_iterate(&x, &f, n / l)?;
        if !h.sub(&x)?.gcd(&f)?.is_one() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Factorizes with the default deterministic seed.
pub fn factorize(f: &Poly) -> Result<Factorization> {
    factorize_with_seed(f, None)
}

/// Default splitter seed: FNV-1a over `q` and the coefficient codes.
pub fn default_seed(f: &Poly) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let mut feed = |v: u64| {
        for b in v.to_le_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    };
    feed(f.field().q() as u64);
    for &c in f.codes() {
        feed(c as u64);
    }
    h
}

pub fn factorize_with_seed(f: &Poly, seed: Option<u64>) -> Result<Factorization> {
    let (unit, monic) = f.make_monic()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed.unwrap_or_else(|| default_seed(f)));
    let mut parts: Vec<(Poly, u64)> = Vec::new();
    for (square_free, mult) in squarefree_decomposition(&monic)? {
        for (block, d) in distinct_degree(&square_free)? {
            for prime in equal_degree(&block, d, &mut rng)? {
                parts.push((prime, mult));
            }
        }
    }
    parts.sort_by(|a, b| a.0.cmp(&b.0));
    // squarefree pieces are coprime, so this only guards the distinctness invariant
    let mut merged: Vec<(Poly, u64)> = Vec::with_capacity(parts.len());
    for (prime, e) in parts {
        match merged.last_mut() {
            Some((last, acc)) if *last == prime => *acc += e,
            _ => merged.push((prime, e)),
        }
    }
    Ok(Factorization {
        unit,
        parts: merged,
    })
}

/// Monic squarefree pieces `(g, m)` with `f = prod g^m`, pieces pairwise coprime.
pub fn squarefree_decomposition(f: &Poly) -> Result<Vec<(Poly, u64)>> {
    let mut out = Vec::new();
    if f.degree().ok_or(Error::ZeroPolynomial)? == 0 {
        return Ok(out);
    }
    let p = f.field().p() as u64;
    let f = f.monic_associate()?;
    let df = f.derivative();
    let mut c = if df.is_zero() { f.clone() } else { f.gcd(&df)? };
    let mut w = f.divmod(&c)?.0;
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c)?;
        let z = w.divmod(&y)?.0;
        if !z.is_one() {
            out.push((z, i));
        }
        i += 1;
        w = y;
        c = c.divmod(&w)?.0;
    }
    if !c.is_one() {
        // c is a p-th power now
        for (g, m) in squarefree_decomposition(&c.pth_root())? {
            out.push((g, m * p));
        }
    }
    Ok(out)
}

/// Splits a monic squarefree `f` into `(product of all degree-d primes, d)`.
pub fn distinct_degree(f: &Poly) -> Result<Vec<(Poly, usize)>> {
    let mut out = Vec::new();
    let mut rest = f.clone();
    let x = x_poly(f.field());
    let q = BigUint::from(f.field().q());
    let mut h = x.clone();
    let mut d = 0;
    loop {
        let n = match rest.degree() {
            Some(n) if n > 0 => n,
            _ => break,
        };
        d += 1;
        if 2 * d > n {
            out.push((rest.clone(), n));
            break;
        }
        h = h.pow_mod(&q, &rest)?;
        let g = h.sub(&x)?.gcd(&rest)?;
        if !g.is_one() {
            rest = rest.divmod(&g)?.0;
            h = h.rem(&rest)?;
            out.push((g, d));
        }
    }
    Ok(out)
}

/// Cantor–Zassenhaus: splits a product of distinct degree-`d` monic primes.
pub fn equal_degree(f: &Poly, d: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Poly>> {
    let n = f.degree().ok_or(Error::ZeroPolynomial)?;
    if n == d {
        return Ok(vec![f.clone()]);
    }
    let field = f.field();
    let q = field.q();
    loop {
        let a = Poly::from_codes(field, (0..n).map(|_| rng.gen_range(0..q)).collect())?;
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let b = if q % 2 == 1 {
            let e = (BigUint::from(q).pow(d as u32) - 1u32) / 2u32;
            a.pow_mod(&e, f)?.sub(&Poly::one(field))?
        } else {
            // absolute trace map F_{q^d} -> F_2
            let bits = (field.k() as usize) * d;
            let mut term = a.rem(f)?;
            let mut acc = term.clone();
            let two = BigUint::from(2u32);
            for _ in 1..bits {
                term = term.pow_mod(&two, f)?;
                acc = acc.add(&term)?;
            }
            acc
        };
        if b.is_zero() {
            continue;
        }
        let g = b.gcd(f)?;
        let gd = g.degree().unwrap_or(0);
        if gd == 0 || gd == n {
            continue;
        }
        let other = f.divmod(&g)?.0;
        let mut out = equal_degree(&g, d, rng)?;
        out.extend(equal_degree(&other, d, rng)?);
        return Ok(out);
    }
}

fn mobius(mut n: u64) -> i32 {
    let mut result = 1;
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            n /= d;
            if n.is_multiple_of(d) {
                return 0;
            }
            result = -result;
        }
        d += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// m(n, q): number of monic irreducibles of degree `n`, from
/// `sum_{d | n} d m(d, q) = q^n` by Möbius inversion.
pub fn count_irreducibles(q: u64, n: u64) -> BigUint {
    assert!(n >= 1, "degree must be positive");
    let mut total = BigInt::zero();
    for d in (1..=n).filter(|d| n.is_multiple_of(*d)) {
        let mu = mobius(d);
        if mu != 0 {
            total += BigInt::from(mu) * BigInt::from(q).pow((n / d) as u32);
        }
    }
    let (quot, rem) = (total.clone() / BigInt::from(n), total % BigInt::from(n));
    debug_assert!(rem.is_zero());
    quot.to_biguint().expect("count is non-negative")
}

/// `sum_{d | n} d m(d, q)`, which must equal `q^n`.
pub fn necklace_sum(q: u64, n: u64) -> BigUint {
    (1..=n)
        .filter(|d| n.is_multiple_of(*d))
        .map(|d| count_irreducibles(q, d) * BigUint::from(d))
        .fold(BigUint::zero(), |a, b| a + b)
}

/// Monic irreducibles of the given degree, canonical order.
pub fn enumerate_irreducibles(field: &FieldSpec, degree: usize) -> impl Iterator<Item = Poly> {
    assert!(degree >= 1, "degree must be positive");
    enumerate_monic(field, degree).filter(|f| is_irreducible(f).expect("nonzero"))
}

/// Factorization by trial division with the enumerated irreducibles. Slow;
/// used as an oracle.
pub fn factorize_trial_division(f: &Poly) -> Result<Factorization> {
    let (unit, mut rest) = f.make_monic()?;
    let field = f.field().clone();
    let mut parts = Vec::new();
    let mut d = 1;
    while rest.degree().unwrap_or(0) > 0 {
        if 2 * d > rest.degree().unwrap() {
            parts.push((rest.clone(), 1));
            break;
        }
        for prime in enumerate_irreducibles(&field, d) {
            let mut e = 0;
            while let Some(quot) = rest.checked_div(&prime)? {
                rest = quot;
                e += 1;
            }
            if e > 0 {
                parts.push((prime, e));
            }
        }
        d += 1;
    }
    parts.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(Factorization { unit, parts })
}
