//! The polynomial ring F_q[x].
//!
//! Coefficients are stored constant-first as field element codes, with no
//! trailing zeros; the zero polynomial is the empty vector.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::ff::{FieldElem, FieldSpec};

#[derive(Clone)]
pub struct Poly {
    field: FieldSpec,
    coeffs: Vec<u32>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && self.field == other.field
    }
}

impl Eq for Poly {}

impl Hash for Poly {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

/// Canonical order: by degree (zero first), then by the integer
/// `sum c_i q^i` of the coefficient codes, so `x^3+x+1 < x^3+x^2+1`.
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

/// The norm `q^deg f`, with a flagged zero for the zero polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NormValue {
    pub q: u32,
    /// `None` for N(0).
    pub exponent: Option<u64>,
}

impl NormValue {
    pub fn is_zero(&self) -> bool {
        self.exponent.is_none()
    }

    pub fn value(&self) -> BigUint {
        match self.exponent {
            Some(e) => BigUint::from(self.q).pow(e as u32),
            None => BigUint::zero(),
        }
    }

    /// Norm of a product.
    pub fn combine(&self, other: &NormValue) -> NormValue {
        NormValue {
            q: self.q,
            exponent: self.exponent.zip(other.exponent).map(|(a, b)| a + b),
        }
    }
}

fn trim(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

impl Poly {
    pub fn zero(field: &FieldSpec) -> Poly {
        Poly {
            field: field.clone(),
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: &FieldSpec) -> Poly {
        Poly::constant_code(field, 1)
    }

    /// The indeterminate `x`.
    pub fn x(field: &FieldSpec) -> Poly {
        Poly {
            field: field.clone(),
            coeffs: vec![0, 1],
        }
    }

    pub fn constant(c: &FieldElem) -> Poly {
        Poly::constant_code(c.field(), c.code())
    }

    fn constant_code(field: &FieldSpec, code: u32) -> Poly {
        let mut coeffs = vec![code];
        trim(&mut coeffs);
        Poly {
            field: field.clone(),
            coeffs,
        }
    }

    /// Builds from constant-first codes, trimming trailing zeros.
    pub fn from_codes(field: &FieldSpec, mut coeffs: Vec<u32>) -> Result<Poly> {
        if let Some(&bad) = coeffs.iter().find(|&&c| c >= field.q()) {
            return Err(Error::CoefficientOutOfRange {
                value: bad as u64,
                q: field.q(),
            });
        }
        trim(&mut coeffs);
        Ok(Poly {
            field: field.clone(),
            coeffs,
        })
    }

    pub fn from_elems(field: &FieldSpec, elems: &[FieldElem]) -> Result<Poly> {
        if elems.iter().any(|e| e.field() != field) {
            return Err(Error::SpecMismatch);
        }
        Poly::from_codes(field, elems.iter().map(FieldElem::code).collect())
    }

    pub(crate) fn from_raw(field: &FieldSpec, mut coeffs: Vec<u32>) -> Poly {
        trim(&mut coeffs);
        Poly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    /// Constant-first coefficient codes.
    pub fn codes(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElem {
        let code = self.coeffs.get(i).copied().unwrap_or(0);
        self.field
            .element_from_code(code as u64)
            .expect("stored codes are in range")
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    /// Nonzero constants are exactly the units of F_q[x].
    pub fn is_unit(&self) -> bool {
        self.coeffs.len() == 1
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    pub fn leading_code(&self) -> Option<u32> {
        self.coeffs.last().copied()
    }

    pub fn norm(&self) -> NormValue {
        NormValue {
            q: self.field.q(),
            exponent: self.degree().map(|d| d as u64),
        }
    }

    fn check(&self, other: &Poly) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::SpecMismatch)
        }
    }

    pub fn add(&self, other: &Poly) -> Result<Poly> {
        self.check(other)?;
        Ok(self.add_unchecked(other))
    }

    pub(crate) fn add_unchecked(&self, other: &Poly) -> Poly {
        let f = &self.field;
        let (long, short) = if self.coeffs.len() >= other.coeffs.len() {
            (&self.coeffs, &other.coeffs)
        } else {
            (&other.coeffs, &self.coeffs)
        };
        let mut out = long.clone();
        for (slot, &c) in out.iter_mut().zip(short.iter()) {
            *slot = f.add_codes(*slot, c);
        }
        Poly::from_raw(f, out)
    }

    pub fn neg(&self) -> Poly {
        let f = &self.field;
        Poly::from_raw(f, self.coeffs.iter().map(|&c| f.neg_code(c)).collect())
    }

    pub fn sub(&self, other: &Poly) -> Result<Poly> {
        self.check(other)?;
        Ok(self.add_unchecked(&other.neg()))
    }

    pub fn mul(&self, other: &Poly) -> Result<Poly> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.field);
        }
        let f = &self.field;
        let mut out = vec![0u32; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add_codes(out[i + j], f.mul_codes(a, b));
            }
        }
        Poly::from_raw(f, out)
    }

    /// Multiplies every coefficient by the element with code `c`.
    pub fn scale_code(&self, c: u32) -> Poly {
        let f = &self.field;
        Poly::from_raw(f, self.coeffs.iter().map(|&a| f.mul_codes(a, c)).collect())
    }

    pub fn scale(&self, c: &FieldElem) -> Result<Poly> {
        if c.field() != &self.field {
            return Err(Error::SpecMismatch);
        }
        Ok(self.scale_code(c.code()))
    }

    /// Multiplies by `x^n`.
    pub fn shift(&self, n: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![0; n];
        coeffs.extend_from_slice(&self.coeffs);
        Poly {
            field: self.field.clone(),
            coeffs,
        }
    }

    /// Euclidean division: `self = quot * divisor + rem` with `deg rem < deg divisor`.
    pub fn divmod(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        self.check(divisor)?;
        self.divmod_unchecked(divisor)
    }

    pub(crate) fn divmod_unchecked(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        let f = &self.field;
        let dlen = divisor.coeffs.len();
        if dlen == 0 {
            return Err(Error::DivisionByZero);
        }
        if self.coeffs.len() < dlen {
            return Ok((Poly::zero(f), self.clone()));
        }
        let lead_inv = f.inv_code(divisor.coeffs[dlen - 1])?;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u32; rem.len() - dlen + 1];
        for top in (dlen - 1..rem.len()).rev() {
            let c = rem[top];
            if c == 0 {
                continue;
            }
            let factor = f.mul_codes(c, lead_inv);
            let shift = top + 1 - dlen;
            quot[shift] = factor;
            for (i, &d) in divisor.coeffs.iter().enumerate() {
                rem[shift + i] = f.sub_codes(rem[shift + i], f.mul_codes(factor, d));
            }
        }
        Ok((Poly::from_raw(f, quot), Poly::from_raw(f, rem)))
    }

    pub fn rem(&self, divisor: &Poly) -> Result<Poly> {
        Ok(self.divmod(divisor)?.1)
    }

    /// Exact quotient if `divisor` divides `self`.
    pub fn checked_div(&self, divisor: &Poly) -> Result<Option<Poly>> {
        let (quot, rem) = self.divmod(divisor)?;
        Ok(rem.is_zero().then_some(quot))
    }

    /// Monic greatest common divisor. `gcd(0, 0)` is an error.
    pub fn gcd(&self, other: &Poly) -> Result<Poly> {
        self.check(other)?;
        if self.is_zero() && other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.divmod_unchecked(&b)?.1;
            a = b;
            b = r;
        }
        Ok(a.make_monic()?.1)
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Poly {
        let f = &self.field;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| f.mul_codes(c, f.from_int(i as u64)))
            .collect();
        Poly::from_raw(f, coeffs)
    }

    /// Splits `self = unit * monic`.
    pub fn make_monic(&self) -> Result<(FieldElem, Poly)> {
        let lead = self.leading_code().ok_or(Error::ZeroPolynomial)?;
        let inv = self.field.inv_code(lead)?;
        let unit = self.field.element_from_code(lead as u64)?;
        Ok((unit, self.scale_code(inv)))
    }

    pub fn monic_associate(&self) -> Result<Poly> {
        Ok(self.make_monic()?.1)
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        acc
    }

    /// `self^e mod modulus`, exponent given as a big integer.
    pub fn pow_mod(&self, e: &BigUint, modulus: &Poly) -> Result<Poly> {
        self.check(modulus)?;
        let mut acc = Poly::one(&self.field).divmod_unchecked(modulus)?.1;
        let base = self.divmod_unchecked(modulus)?.1;
        for i in (0..e.bits()).rev() {
            acc = acc.mul_unchecked(&acc).divmod_unchecked(modulus)?.1;
            if e.bit(i) {
                acc = acc.mul_unchecked(&base).divmod_unchecked(modulus)?.1;
            }
        }
        Ok(acc)
    }

    /// Coefficient-wise p-th root; only meaningful when every exponent with a
    /// nonzero coefficient is divisible by p (i.e. the derivative vanishes).
    pub(crate) fn pth_root(&self) -> Poly {
        let f = &self.field;
        let p = f.p() as usize;
        let coeffs = self
            .coeffs
            .iter()
            .step_by(p)
            .map(|&c| f.pth_root_code(c))
            .collect();
        Poly::from_raw(f, coeffs)
    }
}

/// Number of polynomials (zero included) with norm at most `q^n`: `q^(n+1)`.
pub fn count_norm_le(q: u64, n: u64) -> BigUint {
    BigUint::from(q).pow(n as u32 + 1)
}

/// Number of polynomials with norm exactly `q^n`.
pub fn count_norm_exact(q: u64, n: u64) -> BigUint {
    if n == 0 {
        BigUint::from(q - 1)
    } else {
        count_norm_le(q, n) - count_norm_le(q, n - 1)
    }
}

/// Polynomials of one exact degree, in canonical order.
pub struct PolysOfDegree {
    field: FieldSpec,
    degree: usize,
    monic_only: bool,
    next: u64,
    total: u64,
}

impl Iterator for PolysOfDegree {
    type Item = Poly;

    fn next(&mut self) -> Option<Poly> {
        if self.next >= self.total {
            return None;
        }
        let q = self.field.q() as u64;
        let mut idx = self.next;
        self.next += 1;
        let mut coeffs = vec![0u32; self.degree + 1];
        // base-q digits of the index, c0 least significant, lead on top
        for slot in coeffs.iter_mut().take(self.degree) {
            *slot = (idx % q) as u32;
            idx /= q;
        }
        coeffs[self.degree] = if self.monic_only { 1 } else { idx as u32 + 1 };
        Some(Poly {
            field: self.field.clone(),
            coeffs,
        })
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.total - self.next) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for PolysOfDegree {}

fn degree_count(q: u64, degree: usize, monic_only: bool) -> u64 {
    let base = q
        .checked_pow(degree as u32)
        .expect("enumeration size overflows u64");
    if monic_only {
        base
    } else {
        base * (q - 1)
    }
}

/// Every polynomial of exact degree `degree`; `(q-1) q^degree` of them.
pub fn enumerate_polys(field: &FieldSpec, degree: usize) -> PolysOfDegree {
    PolysOfDegree {
        field: field.clone(),
        degree,
        monic_only: false,
        next: 0,
        total: degree_count(field.q() as u64, degree, false),
    }
}

/// Monic polynomials of exact degree `degree`.
pub fn enumerate_monic(field: &FieldSpec, degree: usize) -> PolysOfDegree {
    PolysOfDegree {
        field: field.clone(),
        degree,
        monic_only: true,
        next: 0,
        total: degree_count(field.q() as u64, degree, true),
    }
}

/// All nonzero polynomials of degree at most `max_degree`, in canonical order.
pub fn nonzero_polys_up_to(field: &FieldSpec, max_degree: usize) -> impl Iterator<Item = Poly> {
    let field = field.clone();
    (0..=max_degree).flat_map(move |d| enumerate_polys(&field, d))
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let bracket = self.field.k() > 1;
        let mut first = true;
        for (e, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            let coeff = if bracket {
                format!("[{c}]")
            } else {
                c.to_string()
            };
            match (e, c) {
                (0, _) => write!(f, "{coeff}")?,
                (1, 1) => write!(f, "x")?,
                (1, _) => write!(f, "{coeff}*x")?,
                (_, 1) => write!(f, "x^{e}")?,
                _ => write!(f, "{coeff}*x^{e}")?,
            }
        }
        Ok(())
    }
}

/// Parses the textual polynomial form, e.g. `x^3+x+1`, `2*x^2+1` or `[2]*x+[3]`.
pub fn parse_poly(field: &FieldSpec, text: &str) -> Result<Poly> {
    let cleaned: Vec<(usize, char)> = text
        .char_indices()
        .filter(|(_, c)| !c.is_whitespace())
        .collect();
    if cleaned.is_empty() {
        return Err(Error::SyntaxError {
            pos: 0,
            msg: "empty polynomial".into(),
        });
    }
    let mut parser = Parser {
        chars: &cleaned,
        at: 0,
        field,
        end: text.len(),
    };
    let mut terms: Vec<(usize, u32)> = Vec::new();
    loop {
        let term = parser.term()?;
        if terms.iter().any(|&(e, _)| e == term.0) {
            return Err(parser.error("repeated exponent"));
        }
        terms.push(term);
        match parser.peek() {
            None => break,
            Some('+') => parser.at += 1,
            Some(c) => return Err(parser.error(&format!("unexpected '{c}'"))),
        }
    }
    let top = terms.iter().map(|&(e, _)| e).max().unwrap_or(0);
    let mut coeffs = vec![0u32; top + 1];
    for (e, c) in terms {
        coeffs[e] = c;
    }
    Ok(Poly::from_raw(field, coeffs))
}

struct Parser<'a> {
    chars: &'a [(usize, char)],
    at: usize,
    field: &'a FieldSpec,
    end: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.at).map(|&(_, c)| c)
    }

    fn pos(&self) -> usize {
        self.chars.get(self.at).map_or(self.end, |&(p, _)| p)
    }

    fn error(&self, msg: &str) -> Error {
        Error::SyntaxError {
            pos: self.pos(),
            msg: msg.to_string(),
        }
    }

    fn number(&mut self) -> Result<u64> {
        let start = self.at;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.at += 1;
        }
        if start == self.at {
            return Err(self.error("expected a number"));
        }
        let digits: String = self.chars[start..self.at].iter().map(|&(_, c)| c).collect();
        digits
            .parse()
            .map_err(|_| self.error("number too large"))
    }

    fn coefficient(&mut self) -> Result<u32> {
        let q = self.field.q();
        let bracketed = self.field.k() > 1;
        let value = if self.peek() == Some('[') {
            self.at += 1;
            let v = self.number()?;
            if self.peek() != Some(']') {
                return Err(self.error("expected ']'"));
            }
            self.at += 1;
            v
        } else {
            let v = self.number()?;
            // a bare 0 denotes zero in every field
            if bracketed && v != 0 {
                return Err(self.error("coefficients over prime-power fields use [code]"));
            }
            v
        };
        if value >= q as u64 {
            return Err(Error::CoefficientOutOfRange { value, q });
        }
        Ok(value as u32)
    }

    fn monomial(&mut self) -> Result<usize> {
        // at 'x'
        self.at += 1;
        if self.peek() == Some('^') {
            self.at += 1;
            let e = self.number()?;
            usize::try_from(e).map_err(|_| self.error("exponent too large"))
        } else {
            Ok(1)
        }
    }

    fn term(&mut self) -> Result<(usize, u32)> {
        match self.peek() {
            Some('x') => Ok((self.monomial()?, 1)),
            Some(c) if c.is_ascii_digit() || c == '[' => {
                let coeff = self.coefficient()?;
                if self.peek() == Some('*') {
                    self.at += 1;
                    if self.peek() != Some('x') {
                        return Err(self.error("expected 'x'"));
                    }
                    Ok((self.monomial()?, coeff))
                } else {
                    Ok((0, coeff))
                }
            }
            Some(c) => Err(self.error(&format!("unexpected '{c}'"))),
            None => Err(self.error("expected a term")),
        }
    }
}
