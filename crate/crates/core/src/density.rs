//! Densities and density bounds, as certified intervals.
//!
//! * greedy set: `(1 - 1/q) prod_{i>=1} (1 - q^(1-2*3^i)) / (1 - q^(1-3^i))`,
//!   also available through the zeta function and through the irreducible
//!   counts `m(n, q)` so the three forms can be checked against each other;
//! * `m_q = (1 - q^-2) prod_{i>=1} (1 + q^(-3^i))`, the density reached by
//!   `S(T_{3,q})`, together with the exact checkpoint ratios approaching it;
//! * the upper bounds `1 - (q-1)/(q^3-1)` and `(q-1) sum_n q^(-r_n)`.
//!
//! Each truncated product is multiplied by a tail interval whose upper end
//! comes from `ln(1+x) <= x` and `-ln(1-x) <= 2x` (x <= 1/2), pushed through an
//! exact upper bound on `exp`.

use std::sync::{Mutex, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::factor::count_irreducibles;
use crate::ff::{is_prime_power, FieldSpec};
use crate::numeric::{
    exp_enclosure, inv_pow, rat, rat_int, render_decimal, scaled_log1p, Interval, IntervalJson,
    Rat, GRID_BITS,
};
use crate::polyring::{count_norm_exact, count_norm_le, nonzero_polys_up_to};
use crate::progfree::{a3_list, greedy_member, nk, t3q_degrees};

/// Which quantity a report describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    Greedy,
    LowerMq,
    UpperSimple,
    UpperNo,
    Checkpoint,
    Empirical,
}

/// Truncation parameters behind a reported value; only those meaningful for
/// the quantity are set.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Truncation {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub product_depth: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub series_terms: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree_bound: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityReport {
    pub q: u64,
    pub quantity: Quantity,
    pub value: Interval,
    /// Exact value, when the quantity is rational.
    pub exact: Option<Rat>,
    pub digits: u32,
    pub rendered: String,
    pub truncation: Truncation,
}

#[derive(Debug, Clone, Serialize)]
pub struct DensityReportJson {
    pub q: u64,
    pub quantity: Quantity,
    pub digits: u32,
    pub value: String,
    pub interval: IntervalJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
    pub truncation: Truncation,
}

impl DensityReport {
    fn from_exact(q: u64, quantity: Quantity, v: Rat, digits: u32, t: Truncation) -> Result<Self> {
        let value = Interval::point(v.clone());
        Ok(DensityReport {
            q,
            quantity,
            rendered: render_decimal(&value, digits)?,
            value,
            exact: Some(v),
            digits,
            truncation: t,
        })
    }

    pub fn to_json(&self) -> DensityReportJson {
        DensityReportJson {
            q: self.q,
            quantity: self.quantity,
            digits: self.digits,
            value: self.rendered.clone(),
            interval: self.value.to_json(),
            exact: self.exact.as_ref().map(|r| r.to_string()),
            truncation: self.truncation.clone(),
        }
    }
}

fn check_q(q: u64) -> Result<()> {
    if q < 2 {
        return Err(Error::InvalidArgument(format!("q must be at least 2, got {q}")));
    }
    Ok(())
}

fn check_prime_power(q: u64) -> Result<()> {
    if !is_prime_power(q) {
        return Err(Error::NotPrimePower(q));
    }
    Ok(())
}

fn check_digits(digits: u32) -> Result<()> {
    if digits == 0 {
        return Err(Error::InvalidArgument("digits must be at least 1".into()));
    }
    Ok(())
}

/// Width target before rendering `digits` places.
fn width_target(digits: u32) -> Rat {
    inv_pow(10, digits as u64 + 2)
}

/// `q^(-e)` as an enclosure; tiny values collapse to `[0, 2^-2G]` instead of
/// materialising enormous denominators.
fn inv_pow_enclosure(q: u64, e: u64) -> Interval {
    let floor_log2 = 63 - q.leading_zeros() as u64;
    if e.saturating_mul(floor_log2) >= 2 * GRID_BITS {
        Interval::new(Rat::zero(), Rat::new(BigInt::one(), BigInt::one() << (2 * GRID_BITS)))
            .expect("ordered")
    } else {
        Interval::point(inv_pow(q, e))
    }
}

/// Largest `i` with `3^i * log2(q)` small enough that `q^(-3^i)` is still
/// computed exactly.
fn max_exact_level(q: u64) -> u32 {
    let floor_log2 = (63 - q.leading_zeros()) as u64;
    let mut i = 0;
    while 3u64.pow(i + 1) * floor_log2 < 2 * GRID_BITS {
        i += 1;
    }
    i
}

/// `zeta_q(s) = 1 / (1 - q^(1-s))`, for `s >= 2`.
pub fn zeta_q(q: u64, s: i64) -> Result<Rat> {
    check_q(q)?;
    if s <= 1 {
        return Err(Error::Divergent(s));
    }
    Ok(Rat::one() / (Rat::one() - inv_pow(q, (s - 1) as u64)))
}

/// Outcome of the Euler-product power-series check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZetaCheck {
    pub holds: bool,
    /// `(degree, product coefficient, q^degree)` at the first disagreement.
    pub first_mismatch: Option<(usize, BigInt, BigInt)>,
}

/// Checks `prod_{n<=D} (1 - t^n)^(-m(n,q)) = sum_{d<=D} q^d t^d  (mod t^(D+1))`
/// with exact integer power series.
pub fn zeta_identity_check(q: u64, max_degree: usize) -> ZetaCheck {
    let series = euler_product_series(q, max_degree);
    for (d, c) in series.iter().enumerate() {
        let expect = BigInt::from(q).pow(d as u32);
        if *c != expect {
            return ZetaCheck {
                holds: false,
                first_mismatch: Some((d, c.clone(), expect)),
            };
        }
    }
    ZetaCheck {
        holds: true,
        first_mismatch: None,
    }
}

/// Coefficients of `prod_{n<=D} (1 - t^n)^(-m(n,q))` through `t^D`.
pub fn euler_product_series(q: u64, max_degree: usize) -> Vec<BigInt> {
    let mut acc = vec![BigInt::zero(); max_degree + 1];
    acc[0] = BigInt::one();
    for n in 1..=max_degree {
        let m = BigInt::from(count_irreducibles(q, n as u64));
        // (1 - t^n)^(-m) = sum_j C(m + j - 1, j) t^(n j)
        let mut factor = vec![BigInt::zero(); max_degree + 1];
        let mut binom = BigInt::one();
        let mut j = 0usize;
        while n * j <= max_degree {
            factor[n * j] = binom.clone();
            j += 1;
            binom = binom * (&m + BigInt::from(j - 1)) / BigInt::from(j);
        }
        let mut next = vec![BigInt::zero(); max_degree + 1];
        for (a, ca) in acc.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for (b, cb) in factor.iter().enumerate().take(max_degree + 1 - a) {
                if !cb.is_zero() {
                    next[a + b] += ca * cb;
                }
            }
        }
        acc = next;
    }
    acc
}

/// `F(t) = (1 - 1/t) prod_{i>=0} (1 + t^(-3^i))` through `i = depth`, times
/// the tail enclosure `[1, exp(2 t^(-3^(depth+1)))]`.
pub fn local_density(t: u64, depth: u32) -> Interval {
    assert!(t >= 2, "local density needs t >= 2");
    let depth = depth.min(max_exact_level(t));
    let mut value = Interval::point(Rat::one() - inv_pow(t, 1));
    for i in 0..=depth {
        let term = inv_pow_enclosure(t, 3u64.pow(i));
        value = value
            .mul(&Interval::one().add(&term))
            .expect("positive")
            .outward(GRID_BITS);
    }
    let tail = inv_pow_enclosure(t, 3u64.pow(depth + 1)).hi() * rat_int(2);
    let tail = Interval::new(Rat::one(), exp_enclosure(&tail).hi().clone()).expect("ordered");
    value.mul(&tail).expect("positive").outward(GRID_BITS)
}

/// `(1 - 1/t) sum_{n in A3*, n < 3^K} t^(-n)`, which equals the K-factor
/// partial product exactly.
pub fn local_density_partial_sum(t: u64, k: u32) -> Rat {
    let limit = 3u64.pow(k) - 1;
    let sum = a3_list(limit)
        .into_iter()
        .fold(Rat::zero(), |acc, n| acc + inv_pow(t, n));
    (Rat::one() - inv_pow(t, 1)) * sum
}

/// `(1 - 1/t) prod_{i<K} (1 + t^(-3^i))`, exact.
pub fn local_density_partial_product(t: u64, k: u32) -> Rat {
    (0..k).fold(Rat::one() - inv_pow(t, 1), |acc, i| {
        acc * (Rat::one() + inv_pow(t, 3u64.pow(i)))
    })
}

/// Tail factor `[1, exp(4 q^(1-3^(depth+1)))]` for the greedy products.
fn greedy_tail(q: u64, depth: u32) -> Interval {
    let x = inv_pow_enclosure(q, 3u64.pow(depth + 1) - 1);
    let bound = x.hi() * rat_int(4);
    Interval::new(Rat::one(), exp_enclosure(&bound).hi().clone()).expect("ordered")
}

/// Greedy density from the direct product through `i = depth`.
pub fn greedy_density_direct(q: u64, depth: u32) -> Interval {
    let depth = depth.min(max_exact_level(q));
    let mut value = Interval::point(Rat::one() - inv_pow(q, 1));
    for i in 1..=depth {
        let e = 3u64.pow(i);
        // (1 - q^(1-2e)) / (1 - q^(1-e)), exact
        let num = Rat::one() - inv_pow(q, 2 * e - 1);
        let den = Rat::one() - inv_pow(q, e - 1);
        value = value
            .mul(&Interval::point(num / den))
            .expect("positive")
            .outward(GRID_BITS);
    }
    value.mul(&greedy_tail(q, depth)).expect("positive").outward(GRID_BITS)
}

/// `(1/zeta_q(2)) prod_{i=1}^{depth} zeta_q(3^i) / zeta_q(2 3^i)`, exact.
pub fn greedy_zeta_partial(q: u64, depth: u32) -> Result<Rat> {
    let mut acc = Rat::one() / zeta_q(q, 2)?;
    for i in 1..=depth {
        let e = 3i64.pow(i);
        acc = acc * zeta_q(q, e)? / zeta_q(q, 2 * e)?;
    }
    Ok(acc)
}

/// Greedy density through the zeta function, truncated at `depth`.
pub fn greedy_density_zeta(q: u64, depth: u32) -> Result<Interval> {
    let depth = depth.min(max_exact_level(q));
    Ok(Interval::point(greedy_zeta_partial(q, depth)?)
        .mul(&greedy_tail(q, depth))?
        .outward(GRID_BITS))
}

/// Greedy density as `(1 - 1/q) prod_{i<=depth} prod_{n<=degrees} (1 + q^(-3^i n))^m(n,q)`,
/// evaluated through logarithms, with the omitted factors bounded by
/// `m(n,q) q^(-3^i n) <= q^(-(3^i - 1) n) / n`.
pub fn greedy_density_irreducibles(q: u64, depth: u32, degrees: usize) -> Result<Interval> {
    check_q(q)?;
    if depth == 0 || degrees == 0 {
        return Err(Error::InvalidArgument("depth and degree bound must be positive".into()));
    }
    let tiny = Interval::new(Rat::zero(), Rat::new(BigInt::one(), BigInt::one() << (2 * GRID_BITS)))
        .expect("ordered");
    let floor_log2 = (63 - q.leading_zeros()) as u64;
    let mut log_sum = Interval::point(Rat::zero());
    for i in 1..=depth {
        let e = 3u64.pow(i);
        for n in 1..=degrees as u64 {
            let piece = if (e - 1).saturating_mul(n).saturating_mul(floor_log2) >= 2 * GRID_BITS {
                tiny.clone()
            } else {
                scaled_log1p(&count_irreducibles(q, n), &inv_pow(q, e * n))
            };
            log_sum = log_sum.add(&piece).outward(GRID_BITS);
        }
    }
    // omitted pairs: n > degrees (any i), then i > depth (any n)
    let big_n = degrees as u64 + 1;
    let tail_degrees = inv_pow_enclosure(q, 2 * big_n).hi() * rat(2, 1) / rat_int(big_n);
    let tail_levels = inv_pow_enclosure(q, 3u64.pow(depth + 1) - 1).hi() * rat(2, 1);
    let upper = log_sum.hi() + tail_degrees + tail_levels;
    if upper > Rat::one() {
        return Err(Error::InvalidArgument("truncation too coarse for the exp bound".into()));
    }
    let lo = exp_enclosure(log_sum.lo()).lo().clone();
    let hi = exp_enclosure(&upper).hi().clone();
    let front = Rat::one() - inv_pow(q, 1);
    Ok(Interval::new(&front * lo, front * hi)?.outward(GRID_BITS))
}

/// The three evaluations of the greedy density and whether they agree.
#[derive(Debug, Clone)]
pub struct FormCheck {
    pub zeta_form: Interval,
    pub irreducible_form: Interval,
    pub direct_form: Interval,
    pub consistent: bool,
}

impl FormCheck {
    pub fn max_width(&self) -> Rat {
        [&self.zeta_form, &self.irreducible_form, &self.direct_form]
            .iter()
            .map(|v| v.width())
            .max()
            .expect("three forms")
    }
}

/// Evaluates the zeta form and the direct form to product depth `depth`, and
/// the irreducible-count form with degrees up to `degrees`; consistent when all
/// pairs of enclosures overlap.
pub fn cross_check_density_forms(q: u64, depth: u32, degrees: usize) -> Result<FormCheck> {
    let zeta_form = greedy_density_zeta(q, depth)?;
    let irreducible_form = greedy_density_irreducibles(q, depth.max(1), degrees)?;
    let direct_form = greedy_density_direct(q, depth);
    let consistent = zeta_form.intersects(&irreducible_form)
        && zeta_form.intersects(&direct_form)
        && irreducible_form.intersects(&direct_form);
    Ok(FormCheck {
        zeta_form,
        irreducible_form,
        direct_form,
        consistent,
    })
}

/// Doubles the product depth from 3 until the enclosure is narrow enough and
/// rounds unambiguously.
fn adaptive(
    q: u64,
    digits: u32,
    quantity: Quantity,
    eval: impl Fn(u32) -> Interval,
) -> Result<DensityReport> {
    check_digits(digits)?;
    let cap = max_exact_level(q).max(3);
    let mut depth = 3;
    loop {
        let value = eval(depth);
        if value.width() < width_target(digits) {
            if let Ok(rendered) = render_decimal(&value, digits) {
                return Ok(DensityReport {
                    q,
                    quantity,
                    value,
                    exact: None,
                    digits,
                    rendered,
                    truncation: Truncation {
                        product_depth: Some(depth),
                        ..Truncation::default()
                    },
                });
            }
        }
        if depth >= cap {
            return Err(Error::NeedsMorePrecision { digits });
        }
        depth = (depth * 2).min(cap);
    }
}

/// Density of the greedy progression-free set, to `digits` places.
pub fn greedy_density(q: u64, digits: u32) -> Result<DensityReport> {
    check_prime_power(q)?;
    adaptive(q, digits, Quantity::Greedy, |d| greedy_density_direct(q, d))
}

/// `m_q = (1 - q^-2) prod_{i>=1} (1 + q^(-3^i))`, which is `F(q)`.
pub fn lower_bound_mq(q: u64, digits: u32) -> Result<DensityReport> {
    check_q(q)?;
    adaptive(q, digits, Quantity::LowerMq, |d| local_density(q, d))
}

/// Density of `S(T_{3,q})` among polynomials of degree at most `N_k`:
/// `sum_{n in A3*, n <= N_k} (q^-n - q^(-n-1))`.
pub fn checkpoint_density(q: u64, k: u32) -> Result<Rat> {
    check_q(q)?;
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    Ok(a3_list(nk(k))
        .into_iter()
        .fold(Rat::zero(), |acc, n| acc + inv_pow(q, n) - inv_pow(q, n + 1)))
}

/// The same ratio from polynomial counts: `|S(T) ∩ S(q^N_k)| / q^(N_k+1)`.
pub fn checkpoint_density_by_counts(q: u64, k: u32) -> Result<Rat> {
    check_q(q)?;
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let top = nk(k);
    let members = t3q_degrees(top)
        .iter()
        .fold(BigUint::zero(), |acc, n| acc + count_norm_exact(q, n));
    Ok(Rat::new(members.into(), count_norm_le(q, top).into()))
}

/// `1 - ((q-1)/q) sum_{i<terms} q^(-2-3i)`; `None` means the full series,
/// `1 - (q-1)/(q^3-1)`.
pub fn upper_bound_simple(q: u64, terms: Option<u32>) -> Result<Rat> {
    check_q(q)?;
    let front = Rat::new(BigInt::from(q - 1), BigInt::from(q));
    Ok(match terms {
        Some(t) => {
            let sum = (0..t as u64).fold(Rat::zero(), |acc, i| acc + inv_pow(q, 2 + 3 * i));
            Rat::one() - front * sum
        }
        None => {
            Rat::one() - Rat::new(BigInt::from(q - 1), BigInt::from(q).pow(3) - BigInt::one())
        }
    })
}

/// Report wrapper for [`upper_bound_simple`] with the full series.
pub fn upper_bound_simple_report(q: u64, digits: u32) -> Result<DensityReport> {
    check_digits(digits)?;
    let v = upper_bound_simple(q, None)?;
    DensityReport::from_exact(q, Quantity::UpperSimple, v, digits, Truncation::default())
}

/// `r_1, ..., r_N`: `r_n` is the least `m` such that `[1, m]` holds an
/// `n`-element subset without 3-term arithmetic progressions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RnTable {
    pub values: Vec<u64>,
}

impl RnTable {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Default cap on search nodes for one `rn_sequence` call.
pub const DEFAULT_RN_BUDGET: u64 = 2_000_000_000;

const RN_MAX_M: u64 = 4096;

fn rn_cache() -> &'static Mutex<Vec<u64>> {
    static CACHE: OnceLock<Mutex<Vec<u64>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(Vec::new()))
}

/// Computes `r_1..r_{n_max}`, reusing values found by earlier calls.
pub fn rn_sequence(n_max: usize, budget: u64) -> Result<RnTable> {
    if n_max == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let mut cache = rn_cache().lock().unwrap_or_else(|e| e.into_inner());
    let mut nodes = 0u64;
    while cache.len() < n_max {
        let next = next_rn(&cache, &mut nodes, budget)?;
        cache.push(next);
    }
    Ok(RnTable {
        values: cache[..n_max].to_vec(),
    })
}

/// Uncached search, for tests that want to time or audit it.
pub fn rn_sequence_uncached(n_max: usize, budget: u64) -> Result<RnTable> {
    let mut values = Vec::new();
    let mut nodes = 0u64;
    while values.len() < n_max {
        let next = next_rn(&values, &mut nodes, budget)?;
        values.push(next);
    }
    Ok(RnTable { values })
}

/// Given `r_1..r_{n-1}`, finds `r_n`. A witness set in `[1, m]` with `m`
/// minimal must contain both 1 and m, so the search pins both ends.
fn next_rn(known: &[u64], nodes: &mut u64, budget: u64) -> Result<u64> {
    let n = known.len() + 1;
    if n <= 2 {
        return Ok(n as u64);
    }
    let mut m = known[n - 2] + 1;
    loop {
        if m > RN_MAX_M {
            return Err(Error::BudgetExceeded {
                what: "r_n interval length",
                needed: m as u128,
                cap: RN_MAX_M as u128,
            });
        }
        let mut search = ApFreeSearch::new(known, m, n, budget);
        search.nodes = *nodes;
        let found = search.run()?;
        *nodes = search.nodes;
        if found {
            return Ok(m);
        }
        m += 1;
    }
}

struct ApFreeSearch<'a> {
    known: &'a [u64],
    m: u64,
    target: usize,
    chosen: Vec<u64>,
    blocked: Vec<u16>,
    nodes: u64,
    budget: u64,
}

impl<'a> ApFreeSearch<'a> {
    fn new(known: &'a [u64], m: u64, target: usize, budget: u64) -> Self {
        ApFreeSearch {
            known,
            m,
            target,
            chosen: Vec::with_capacity(target),
            blocked: vec![0; m as usize + 1],
            nodes: 0,
            budget,
        }
    }

    /// Largest AP-free subset of an interval of `len` integers, from known `r`.
    fn capacity(&self, len: u64) -> usize {
        self.known.iter().take_while(|&&r| r <= len).count()
    }

    fn run(&mut self) -> Result<bool> {
        // 1 and m are both in the set; their midpoint may not be
        self.chosen.push(1);
        if (1 + self.m).is_multiple_of(2) {
            self.blocked[self.m.div_ceil(2) as usize] += 1;
        }
        self.extend(2)
    }

    fn toggle(&mut self, x: u64, delta: i32) {
        let m = self.m;
        let mut marks: Vec<u64> = self
            .chosen
            .iter()
            .filter(|&&a| a < x && 2 * x - a < m)
            .map(|&a| 2 * x - a)
            .collect();
        if (x + m).is_multiple_of(2) {
            marks.push((x + m) / 2);
        }
        for t in marks {
            let slot = &mut self.blocked[t as usize];
            *slot = (*slot as i32 + delta) as u16;
        }
    }

    /// Places the remaining middle elements, all in `[from, m - 1]`.
    fn extend(&mut self, from: u64) -> Result<bool> {
        // +1 for m itself
        if self.chosen.len() + 1 >= self.target {
            return Ok(true);
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExceeded {
                what: "r_n search nodes",
                needed: self.nodes as u128,
                cap: self.budget as u128,
            });
        }
        let need = self.target - self.chosen.len() - 1;
        for x in from..self.m {
            if self.capacity(self.m - x) < need {
                break;
            }
            if self.blocked[x as usize] > 0 {
                continue;
            }
            self.toggle(x, 1);
            self.chosen.push(x);
            let done = self.extend(x + 1)?;
            self.chosen.pop();
            self.toggle(x, -1);
            if done {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// `(q-1) sum_n q^(-r_n)`: partial sum through `n = N` plus the tail
/// `[0, q^(-r_N)]`, valid because `r_{N+j} >= r_N + j`.
pub fn upper_bound_no_interval(q: u64, table: &RnTable) -> Result<Interval> {
    check_q(q)?;
    let last = *table.values.last().ok_or_else(|| {
        Error::InvalidArgument("r_n table is empty".into())
    })?;
    let partial = table
        .values
        .iter()
        .fold(Rat::zero(), |acc, &r| acc + inv_pow(q, r))
        * rat_int(q - 1);
    let tail = inv_pow(q, last);
    Interval::new(partial.clone(), partial + tail)
}

/// The arithmetic-progression upper bound to `digits` places, extending the
/// `r_n` table until the tail `q^(-r_N)` is below `10^-(digits+3)`.
pub fn upper_bound_no(q: u64, digits: u32) -> Result<DensityReport> {
    upper_bound_no_with_budget(q, digits, DEFAULT_RN_BUDGET)
}

pub fn upper_bound_no_with_budget(q: u64, digits: u32, budget: u64) -> Result<DensityReport> {
    check_q(q)?;
    check_digits(digits)?;
    let mut n = 9;
    loop {
        let table = rn_sequence(n, budget)?;
        let value = upper_bound_no_interval(q, &table)?;
        if value.width() < width_target(digits + 1) {
            if let Ok(rendered) = render_decimal(&value, digits) {
                return Ok(DensityReport {
                    q,
                    quantity: Quantity::UpperNo,
                    value,
                    exact: None,
                    digits,
                    rendered,
                    truncation: Truncation {
                        series_terms: Some(n),
                        ..Truncation::default()
                    },
                });
            }
        }
        if n >= 40 {
            return Err(Error::NeedsMorePrecision { digits });
        }
        n += 1;
    }
}

/// `|{f != 0 : deg f <= D, f greedy}| / q^(D+1)`.
pub fn empirical_greedy_density(field: &FieldSpec, max_degree: usize, budget: u128) -> Result<Rat> {
    let q = field.q() as u128;
    let total = q.checked_pow(max_degree as u32 + 1).unwrap_or(u128::MAX);
    if total > budget {
        return Err(Error::BudgetExceeded {
            what: "polynomial enumeration",
            needed: total,
            cap: budget,
        });
    }
    let mut members = 0u64;
    for f in nonzero_polys_up_to(field, max_degree) {
        if greedy_member(&f)? {
            members += 1;
        }
    }
    Ok(Rat::new(BigInt::from(members), BigInt::from(total)))
}

/// Prime powers in `[2, limit]`, by trial division.
pub fn prime_powers_up_to(limit: u64) -> Vec<u64> {
    (2..=limit).filter(|&q| is_prime_power(q)).collect()
}

/// One row per prime power `q <= q_max`: the greedy density to 6 places.
/// Rows are computed on worker threads and returned in order of `q`.
pub fn figure1_data(q_max: u64) -> Result<Vec<(u64, String)>> {
    let qs = prime_powers_up_to(q_max);
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(8);
    let chunk = qs.len().div_ceil(workers).max(1);
    let rows: Vec<Result<Vec<(u64, String)>>> = std::thread::scope(|scope| {
        let handles: Vec<_> = qs
            .chunks(chunk)
            .map(|part| {
                scope.spawn(move || {
                    part.iter()
                        .map(|&q| greedy_density(q, 6).map(|r| (q, r.rendered)))
                        .collect::<Result<Vec<_>>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker panicked"))
            .collect()
    });
    let mut out = Vec::with_capacity(qs.len());
    for part in rows {
        out.extend(part?);
    }
    Ok(out)
}

/// `|x - m_q|` style checks need a signed rational absolute value.
pub fn abs_diff(a: &Rat, b: &Rat) -> Rat {
    (a - b).abs()
}
