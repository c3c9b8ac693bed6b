//! Exact rationals and certified enclosures.
//!
//! Every real quantity the crate reports is an [`Interval`] of rationals that
//! is guaranteed to contain it. Truncated infinite products are enclosed by
//! multiplying the finite part with a tail interval bounded through elementary
//! inequalities, all in exact arithmetic.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always reduced.
pub type Rat = BigRational;

/// Resolution used when an enclosure is rounded outward to keep numbers small.
pub const GRID_BITS: u64 = 256;

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(n: impl Into<BigInt>) -> Rat {
    Rat::from_integer(n.into())
}

/// `q^(-e)` exactly.
pub fn inv_pow(q: u64, e: u64) -> Rat {
    Rat::new(
        BigInt::one(),
        BigInt::from(q).pow(u32::try_from(e).expect("exponent fits in u32")),
    )
}

/// A closed interval `[lo, hi]` known to contain some real quantity.
#[derive(Clone, PartialEq, Eq)]
pub struct Interval {
    lo: Rat,
    hi: Rat,
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}]",
            decimal_floor(&self.lo, 15),
            decimal_ceil(&self.hi, 15)
        )
    }
}

impl Interval {
    pub fn new(lo: Rat, hi: Rat) -> Result<Interval> {
        if lo > hi {
            return Err(Error::InvalidArgument(format!(
                "empty interval [{lo}, {hi}]"
            )));
        }
        Ok(Interval { lo, hi })
    }

    pub fn point(v: Rat) -> Interval {
        Interval {
            lo: v.clone(),
            hi: v,
        }
    }

    pub fn one() -> Interval {
        Interval::point(Rat::one())
    }

    pub fn lo(&self) -> &Rat {
        &self.lo
    }

    pub fn hi(&self) -> &Rat {
        &self.hi
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rat {
        (&self.lo + &self.hi) / rat_int(2)
    }

    pub fn contains(&self, v: &Rat) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn intersects(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// Strictly below `other` (disjoint and to the left).
    pub fn strictly_below(&self, other: &Interval) -> bool {
        self.hi < other.lo
    }

    pub fn add(&self, other: &Interval) -> Interval {
        Interval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    /// Product of two non-negative intervals.
    pub fn mul(&self, other: &Interval) -> Result<Interval> {
        if self.lo.is_negative() || other.lo.is_negative() {
            return Err(Error::NegativeOperand);
        }
        Ok(Interval {
            lo: &self.lo * &other.lo,
            hi: &self.hi * &other.hi,
        })
    }

    pub fn scale(&self, r: &Rat) -> Interval {
        let (a, b) = (&self.lo * r, &self.hi * r);
        if r.is_negative() {
            Interval { lo: b, hi: a }
        } else {
            Interval { lo: a, hi: b }
        }
    }

    /// Widens the endpoints outward onto the grid `2^-bits`.
    pub fn outward(&self, bits: u64) -> Interval {
        let scale = rat_int(BigInt::one() << bits);
        let den = BigInt::one() << bits;
        Interval {
            lo: Rat::new((&self.lo * &scale).floor().to_integer(), den.clone()),
            hi: Rat::new((&self.hi * &scale).ceil().to_integer(), den),
        }
    }

    pub fn to_json(&self) -> IntervalJson {
        IntervalJson {
            lo: self.lo.to_string(),
            hi: self.hi.to_string(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct IntervalJson {
    pub lo: String,
    pub hi: String,
}

/// `e^x` for `0 <= x <= 1`: Taylor partial sum, plus the geometric bound on the
/// remainder for the upper end.
pub fn exp_enclosure(x: &Rat) -> Interval {
    assert!(
        !x.is_negative() && x <= &Rat::one(),
        "exp enclosure needs 0 <= x <= 1"
    );
    if x.is_zero() {
        return Interval::one();
    }
    let eps = Rat::new(BigInt::one(), BigInt::one() << GRID_BITS);
    let mut sum = Rat::one();
    let mut term = Rat::one();
    let mut j = 0u64;
    loop {
        j += 1;
        term = term * x / rat_int(j);
        sum += &term;
        if term < eps {
            break;
        }
    }
    // remaining terms: next * (1 + x/(j+2) + ...) <= next / (1 - x/(j+2))
    let next = &term * x / rat_int(j + 1);
    let ratio = x / rat_int(j + 2);
    let remainder = next / (Rat::one() - ratio);
    Interval {
        lo: sum.clone(),
        hi: sum + remainder,
    }
    .outward(GRID_BITS)
}

/// Upper bound on `e^x`, `0 <= x <= 1`.
pub fn exp_upper(x: &Rat) -> Rat {
    exp_enclosure(x).hi
}

/// Encloses `m * ln(1 + x)` for `0 <= x <= 1/2` via the alternating series,
/// whose consecutive partial sums bracket the limit.
pub fn scaled_log1p(m: &BigUint, x: &Rat) -> Interval {
    assert!(!x.is_negative() && x <= &rat(1, 2), "log1p needs 0 <= x <= 1/2");
    let m = rat_int(BigInt::from(m.clone()));
    if x.is_zero() || m.is_zero() {
        return Interval::point(Rat::zero());
    }
    let eps = Rat::new(BigInt::one(), BigInt::one() << (GRID_BITS + 8));
    let mut power = x.clone();
    let mut sum = Rat::zero();
    let mut j = 1u64;
    loop {
        let term = &m * &power / rat_int(j);
        let prev = sum.clone();
        if j % 2 == 1 {
            sum += &term;
        } else {
            sum -= &term;
        }
        if term < eps {
            let (lo, hi) = if sum < prev { (sum, prev) } else { (prev, sum) };
            return Interval { lo, hi }.outward(GRID_BITS);
        }
        power *= x;
        j += 1;
    }
}

fn pow10(digits: u32) -> BigInt {
    BigInt::from(10u32).pow(digits)
}

/// Rounds half away from zero to `digits` fractional digits, as a scaled integer.
fn round_scaled(v: &Rat, digits: u32) -> BigInt {
    let scaled = v.abs() * rat_int(pow10(digits));
    let n = (scaled + rat(1, 2)).floor().to_integer();
    if v.is_negative() {
        -n
    } else {
        n
    }
}

fn format_scaled(n: &BigInt, digits: u32) -> String {
    let neg = n.is_negative();
    let (int, frac) = n.abs().div_rem(&pow10(digits));
    let mut s = String::new();
    if neg && !n.is_zero() {
        s.push('-');
    }
    s.push_str(&int.to_string());
    if digits > 0 {
        s.push('.');
        s.push_str(&format!("{:0>width$}", frac, width = digits as usize));
    }
    s
}

/// Decimal rendering valid for every real in `v`, or `NeedsMorePrecision`
/// when the endpoints round differently.
pub fn render_decimal(v: &Interval, digits: u32) -> Result<String> {
    if digits == 0 {
        return Err(Error::InvalidArgument("digits must be at least 1".into()));
    }
    let lo = round_scaled(&v.lo, digits);
    let hi = round_scaled(&v.hi, digits);
    if lo != hi {
        return Err(Error::NeedsMorePrecision { digits });
    }
    Ok(format_scaled(&lo, digits))
}

/// `r` rounded half away from zero, no certification.
pub fn decimal(r: &Rat, digits: u32) -> String {
    format_scaled(&round_scaled(r, digits), digits)
}

fn decimal_floor(r: &Rat, digits: u32) -> String {
    format_scaled(&(r * rat_int(pow10(digits))).floor().to_integer(), digits)
}

fn decimal_ceil(r: &Rat, digits: u32) -> String {
    format_scaled(&(r * rat_int(pow10(digits))).ceil().to_integer(), digits)
}

/// Both endpoints to `digits` places, rounded outward.
pub fn describe(v: &Interval, digits: u32) -> String {
    format!(
        "[{}, {}]",
        decimal_floor(&v.lo, digits),
        decimal_ceil(&v.hi, digits)
    )
}

/// Parses a plain decimal such as `0.6483610` into an exact rational.
pub fn parse_decimal(s: &str) -> Result<Rat> {
    let bad = || Error::InvalidArgument(format!("not a decimal: {s}"));
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if (int.is_empty() && frac.is_empty())
        || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    let n: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().map_err(|_| bad())?
    };
    let v = Rat::new(n, pow10(frac.len() as u32));
    Ok(if neg { -v } else { v })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn d(s: &str) -> Rat {
        parse_decimal(s).unwrap()
    }

    fn iv(a: &str, b: &str) -> Interval {
        Interval::new(d(a), d(b)).unwrap()
    }

    #[test]
    fn interval_examples() {
        let x = iv("0.3", "0.7");
        assert_eq!(Interval::one().mul(&x).unwrap(), x);
        let sum = Interval::point(rat(1, 2)).add(&Interval::point(rat(1, 4)));
        assert_eq!(sum, Interval::point(rat(3, 4)));
        let y = iv("0.9", "1.0");
        assert_eq!(y.mul(&y).unwrap(), iv("0.81", "1"));
        assert_eq!(
            iv("-1", "1").mul(&y).unwrap_err(),
            Error::NegativeOperand
        );
        assert!(Interval::new(rat(1, 1), rat(0, 1)).is_err());
        assert_eq!(x.scale(&rat(-2, 1)), iv("-1.4", "-0.6"));
    }

    #[test]
    fn render_examples() {
        assert_eq!(
            render_decimal(&iv("0.6483610", "0.6483614"), 6).unwrap(),
            "0.648361"
        );
        assert_eq!(
            render_decimal(&iv("0.6483604", "0.6483606"), 6).unwrap_err(),
            Error::NeedsMorePrecision { digits: 6 }
        );
        assert_eq!(
            render_decimal(&Interval::point(rat(3, 4)), 2).unwrap(),
            "0.75"
        );
        // half away from zero
        assert_eq!(render_decimal(&iv("0.125", "0.125"), 2).unwrap(), "0.13");
        assert_eq!(render_decimal(&iv("-0.125", "-0.125"), 2).unwrap(), "-0.13");
        assert_eq!(render_decimal(&iv("0.999996", "0.999997"), 5).unwrap(), "1.00000");
    }

    #[test]
    fn exp_and_log_enclosures() {
        let e = exp_enclosure(&Rat::one());
        assert!(e.lo() > &d("2.71828182845904523536028747135266249")
            && e.hi() < &d("2.71828182845904523536028747135266250"));
        assert!(e.width() < inv_pow(2, 200));
        let half = exp_enclosure(&rat(1, 2));
        assert!(half.lo() > &d("1.6487212707001281468486507878141")
            && half.hi() < &d("1.6487212707001281468486507878142"));
        let l = scaled_log1p(&BigUint::from(3u32), &rat(1, 2));
        // 3 ln 1.5
        assert!(l.lo() > &d("1.21639532432449314593403934639304740")
            && l.hi() < &d("1.21639532432449314593403934639304741"));
    }

    fn arb_interval() -> impl Strategy<Value = Interval> {
        (0i64..1000, 0i64..1000, 1i64..1000).prop_map(|(a, w, den)| {
            Interval::new(rat(a, den), rat(a + w, den)).unwrap()
        })
    }

    proptest! {
        #[test]
        fn arithmetic_contains_midpoint_results(a in arb_interval(), b in arb_interval(), s in -50i64..50) {
            let (ma, mb) = (a.midpoint(), b.midpoint());
            prop_assert!(a.add(&b).contains(&(&ma + &mb)));
            prop_assert!(a.mul(&b).unwrap().contains(&(&ma * &mb)));
            let r = rat(s, 7);
            prop_assert!(a.scale(&r).contains(&(&ma * &r)));
            prop_assert!(a.outward(20).contains(&ma));
        }

        #[test]
        fn rendering_is_certified(a in 0i64..10_000_000, w in 0i64..40, digits in 1u32..6) {
            let v = Interval::new(rat(a, 10_000_000), rat(a + w, 10_000_000)).unwrap();
            if let Ok(s) = render_decimal(&v, digits) {
                for t in 0..=w {
                    prop_assert_eq!(&decimal(&rat(a + t, 10_000_000), digits), &s);
                }
            }
        }
    }
}
