//! Finite fields GF(p^k).
//!
//! An element is stored as its integer code in `[0, q)`: the base-p encoding
//! of its coordinates in the power basis `1, g, g^2, ...` where `g` is a root
//! of the field modulus. Multiplication goes through discrete log tables built
//! once per field; addition is digit-wise mod p.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::factor;
use crate::polyring::Poly;

/// Largest field order supported.
pub const MAX_ORDER: u64 = 1 << 20;

struct Inner {
    p: u32,
    k: u32,
    q: u32,
    modulus: Vec<u32>,
    /// `exp[i] = w^i` for a fixed primitive element `w`, doubled to skip a reduction.
    exp: Vec<u32>,
    /// `log[a]` for `a != 0`; `log[0]` unused.
    log: Vec<u32>,
}

/// A finite field together with its defining modulus. Cheap to clone.
#[derive(Clone)]
pub struct FieldSpec {
    inner: Arc<Inner>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p
                && self.inner.k == other.inner.k
                && self.inner.modulus == other.inner.modulus)
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.inner.p)
            .field("k", &self.inner.k)
            .field("modulus", &self.inner.modulus)
            .finish()
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` into `(p, k)` with `q = p^k`, or fails if `q` is not a prime power.
pub fn prime_power(q: u64) -> Result<(u64, u32)> {
    if q < 2 {
        return Err(Error::NotPrimePower(q));
    }
    let mut p = 2;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        p = q;
    }
    let mut rest = q;
    let mut k = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        k += 1;
    }
    if rest == 1 {
        Ok((p, k))
    } else {
        Err(Error::NotPrimePower(q))
    }
}

/// Is `q` a prime power (q >= 2)?
pub fn is_prime_power(q: u64) -> bool {
    prime_power(q).is_ok()
}

fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
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

/// Builds GF(p^k). Without an explicit modulus, the first monic irreducible of
/// degree k in canonical polynomial order is used.
pub fn make_field(p: u64, k: u32, modulus: Option<&[u32]>) -> Result<FieldSpec> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if k == 0 {
        return Err(Error::ZeroDegree);
    }
    let q = (p as u128).pow(k);
    if q > MAX_ORDER as u128 {
        return Err(Error::FieldTooLarge(q.min(u64::MAX as u128) as u64));
    }
    let (p, q) = (p as u32, q as u32);
    let modulus = match modulus {
        Some(m) => {
            if m.len() != k as usize + 1 || m[k as usize] != 1 || m.iter().any(|&c| c >= p) {
                return Err(Error::WrongDegreeModulus { expected: k });
            }
            if k > 1 {
                let prime = prime_field(p)?;
                let f = Poly::from_codes(&prime, m.to_vec())?;
                if !factor::is_irreducible(&f)? {
                    return Err(Error::ReducibleModulus);
                }
            }
            m.to_vec()
        }
        None if k == 1 => vec![0, 1],
        None => default_modulus(p, k)?,
    };
    Ok(build(p, k, q, modulus))
}

/// GF(q) from the order alone, using the default modulus.
pub fn field_of_order(q: u64) -> Result<FieldSpec> {
    let (p, k) = prime_power(q)?;
    make_field(p, k, None)
}

fn prime_field(p: u32) -> Result<FieldSpec> {
    make_field(p as u64, 1, None)
}

fn default_modulus(p: u32, k: u32) -> Result<Vec<u32>> {
    let prime = prime_field(p)?;
    let lower = (p as u64).pow(k);
    // canonical polynomial order: c0 is the least significant digit
    for idx in 0..lower {
        let mut coeffs = vec![0u32; k as usize + 1];
        let mut rest = idx;
        for slot in coeffs.iter_mut().take(k as usize) {
            *slot = (rest % p as u64) as u32;
            rest /= p as u64;
        }
        coeffs[k as usize] = 1;
        let f = Poly::from_codes(&prime, coeffs.clone())?;
        if factor::is_irreducible(&f)? {
            return Ok(coeffs);
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn build(p: u32, k: u32, q: u32, modulus: Vec<u32>) -> FieldSpec {
    let slow_mul = |a: u32, b: u32| -> u32 {
        if k == 1 {
            return ((a as u64 * b as u64) % p as u64) as u32;
        }
        let da = to_digits(a, p, k);
        let db = to_digits(b, p, k);
        let mut prod = vec![0u64; 2 * k as usize - 1];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
            }
        }
        for top in (k as usize..prod.len()).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            prod[top] = 0;
            for (i, &m) in modulus[..k as usize].iter().enumerate() {
                let slot = top - k as usize + i;
                prod[slot] = (prod[slot] + (p as u64 - m as u64) * c) % p as u64;
            }
        }
        from_digits(prod[..k as usize].iter().map(|&d| d as u32), p)
    };
    let slow_pow = |mut base: u32, mut e: u64| -> u32 {
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = slow_mul(acc, base);
            }
            base = slow_mul(base, base);
            e >>= 1;
        }
        acc
    };
    let order = (q - 1) as u64;
    let primes = distinct_prime_factors(order);
    let generator = (1..q)
        .find(|&g| primes.iter().all(|&l| slow_pow(g, order / l) != 1))
        .expect("multiplicative group is cyclic");
    let mut exp = vec![0u32; 2 * (q as usize - 1).max(1)];
    let mut log = vec![0u32; q as usize];
    let mut cur = 1u32;
    for (i, slot) in exp.iter_mut().take((q - 1) as usize).enumerate() {
        *slot = cur;
        log[cur as usize] = i as u32;
        cur = slow_mul(cur, generator);
    }
    for i in (q - 1) as usize..exp.len() {
        exp[i] = exp[i - (q - 1) as usize];
    }
    FieldSpec {
        inner: Arc::new(Inner {
            p,
            k,
            q,
            modulus,
            exp,
            log,
        }),
    }
}

fn to_digits(mut code: u32, p: u32, k: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(k as usize);
    for _ in 0..k {
        out.push(code % p);
        code /= p;
    }
    out
}

fn from_digits(digits: impl DoubleEndedIterator<Item = u32>, p: u32) -> u32 {
    digits.rev().fold(0, |acc, d| acc * p + d)
}

impl FieldSpec {
    pub fn p(&self) -> u32 {
        self.inner.p
    }

    pub fn k(&self) -> u32 {
        self.inner.k
    }

    pub fn q(&self) -> u32 {
        self.inner.q
    }

    /// Defining modulus over F_p, constant-first.
    pub fn modulus(&self) -> &[u32] {
        &self.inner.modulus
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem {
            field: self.clone(),
            code: 0,
        }
    }

    pub fn one(&self) -> FieldElem {
        FieldElem {
            field: self.clone(),
            code: 1,
        }
    }

    pub fn element_from_code(&self, code: u64) -> Result<FieldElem> {
        if code >= self.q() as u64 {
            return Err(Error::CodeOutOfRange { code, q: self.q() });
        }
        Ok(FieldElem {
            field: self.clone(),
            code: code as u32,
        })
    }

    /// Iterates all elements in code order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.q()).map(move |code| FieldElem {
            field: self.clone(),
            code,
        })
    }

    // Raw code arithmetic. Callers guarantee codes are < q.

    pub fn add_codes(&self, a: u32, b: u32) -> u32 {
        let p = self.inner.p;
        if p == 2 {
            return a ^ b;
        }
        if self.inner.k == 1 {
            let s = a + b;
            return if s >= p { s - p } else { s };
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.inner.k {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out
    }

    pub fn neg_code(&self, a: u32) -> u32 {
        let p = self.inner.p;
        if p == 2 {
            return a;
        }
        if self.inner.k == 1 {
            return if a == 0 { 0 } else { p - a };
        }
        let mut a = a;
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.inner.k {
            out += ((p - a % p) % p) * place;
            a /= p;
            place *= p;
        }
        out
    }

    pub fn sub_codes(&self, a: u32, b: u32) -> u32 {
        self.add_codes(a, self.neg_code(b))
    }

    pub fn mul_codes(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let inner = &*self.inner;
        inner.exp[(inner.log[a as usize] + inner.log[b as usize]) as usize]
    }

    pub fn inv_code(&self, a: u32) -> Result<u32> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        let inner = &*self.inner;
        let l = inner.log[a as usize];
        Ok(inner.exp[((inner.q - 1 - l) % (inner.q - 1)) as usize])
    }

    pub fn pow_code(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let inner = &*self.inner;
        let order = (inner.q - 1) as u64;
        let l = (inner.log[a as usize] as u64 * (e % order)) % order;
        inner.exp[l as usize]
    }

    /// Inverse of the Frobenius map `a -> a^p`.
    pub fn pth_root_code(&self, a: u32) -> u32 {
        self.pow_code(a, (self.q() / self.p()) as u64)
    }

    /// The integer `n` reduced into the prime subfield.
    pub fn from_int(&self, n: u64) -> u32 {
        (n % self.p() as u64) as u32
    }
}

/// A field element; carries its field so mixed-field arithmetic is caught.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElem {
    field: FieldSpec,
    code: u32,
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldElem({} in GF({}))", self.code, self.field.q())
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.k() == 1 {
            write!(f, "{}", self.code)
        } else {
            write!(f, "[{}]", self.code)
        }
    }
}

impl FieldElem {
    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn code(&self) -> u32 {
        self.code
    }

    /// Coordinates in the power basis, constant-first.
    pub fn digits(&self) -> Vec<u32> {
        to_digits(self.code, self.field.p(), self.field.k())
    }

    pub fn from_digits(field: &FieldSpec, digits: &[u32]) -> Result<FieldElem> {
        if digits.len() != field.k() as usize || digits.iter().any(|&d| d >= field.p()) {
            return Err(Error::InvalidArgument(format!(
                "expected {} digits below {}",
                field.k(),
                field.p()
            )));
        }
        Ok(FieldElem {
            field: field.clone(),
            code: from_digits(digits.iter().copied(), field.p()),
        })
    }

    pub fn is_zero(&self) -> bool {
        self.code == 0
    }

    fn same_field(&self, other: &FieldElem) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::SpecMismatch)
        }
    }

    pub fn try_add(&self, other: &FieldElem) -> Result<FieldElem> {
        self.same_field(other)?;
        Ok(self.with_code(self.field.add_codes(self.code, other.code)))
    }

    pub fn try_sub(&self, other: &FieldElem) -> Result<FieldElem> {
        self.same_field(other)?;
        Ok(self.with_code(self.field.sub_codes(self.code, other.code)))
    }

    pub fn try_mul(&self, other: &FieldElem) -> Result<FieldElem> {
        self.same_field(other)?;
        Ok(self.with_code(self.field.mul_codes(self.code, other.code)))
    }

    pub fn neg(&self) -> FieldElem {
        self.with_code(self.field.neg_code(self.code))
    }

    pub fn inv(&self) -> Result<FieldElem> {
        Ok(self.with_code(self.field.inv_code(self.code)?))
    }

    pub fn pow(&self, e: u64) -> FieldElem {
        self.with_code(self.field.pow_code(self.code, e))
    }

    fn with_code(&self, code: u32) -> FieldElem {
        FieldElem {
            field: self.field.clone(),
            code,
        }
    }
}
