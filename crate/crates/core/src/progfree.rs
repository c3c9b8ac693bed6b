//! Geometric-progression-free sets in F_q[x].
//!
//! A (non-unit) progression is a triple `b, r b, r^2 b` with `deg r >= 1`. The
//! greedy set keeps exactly the polynomials whose prime exponents all avoid
//! the digit 2 in base 3; [`greedy_construct_bruteforce`] rebuilds it literally
//! so the two descriptions can be compared.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::error::{Error, Result};
use crate::factor::factorize;
use crate::ff::FieldSpec;
use crate::polyring::{enumerate_polys, nonzero_polys_up_to, Poly};

/// Default cap on the number of polynomials an enumeration may touch.
pub const DEFAULT_ENUM_BUDGET: u128 = 1 << 22;

/// Default cap on the vertex count of the extremal search.
pub const DEFAULT_EXTREMAL_BUDGET: usize = 40;

/// Whether `n` has no digit 2 in base 3, i.e. lies in the greedy AP-free set.
pub fn a3_contains(mut n: u64) -> bool {
    while n > 0 {
        if n % 3 == 2 {
            return false;
        }
        n /= 3;
    }
    true
}

/// Elements of the greedy AP-free set up to `limit`.
pub fn a3_list(limit: u64) -> Vec<u64> {
    (0..=limit).filter(|&n| a3_contains(n)).collect()
}

/// `(3^k - 1) / 2`, the integer written `11...1` in base 3.
pub fn nk(k: u32) -> u64 {
    (3u64.pow(k) - 1) / 2
}

/// Membership in the greedy set: every exponent of the factorization avoids
/// base-3 digit 2. Units are members.
pub fn greedy_member(f: &Poly) -> Result<bool> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(factorize(f)?.exponents().all(a3_contains))
}

fn check_budget(field: &FieldSpec, max_degree: usize, budget: u128) -> Result<()> {
    let needed = (field.q() as u128)
        .checked_pow(max_degree as u32 + 1)
        .unwrap_or(u128::MAX);
    if needed > budget {
        return Err(Error::BudgetExceeded {
            what: "polynomial enumeration",
            needed,
            cap: budget,
        });
    }
    Ok(())
}

/// Runs the greedy construction literally: seed with the nonzero constants,
/// then admit each polynomial (by increasing degree) unless it completes a
/// progression `a, r a, r^2 a` whose first two terms were already admitted.
pub fn greedy_construct_bruteforce(
    field: &FieldSpec,
    max_degree: usize,
    budget: u128,
) -> Result<BTreeSet<Poly>> {
    check_budget(field, max_degree, budget)?;
    let mut admitted: HashSet<Poly> = enumerate_polys(field, 0).collect();
    // every ratio that can occur, with its square
    let ratios: Vec<(Poly, Poly)> = (1..=max_degree / 2)
        .flat_map(|d| enumerate_polys(field, d))
        .map(|r| {
            let sq = r.mul_unchecked(&r);
            (r, sq)
        })
        .collect();
    for d in 1..=max_degree {
        let mut fresh = Vec::new();
        for f in enumerate_polys(field, d) {
            let mut blocked = false;
            for (r, sq) in ratios.iter().take_while(|(r, _)| 2 * r.degree().unwrap() <= d) {
                if let Some(a) = f.checked_div(sq)? {
                    if admitted.contains(&a) && admitted.contains(&a.mul_unchecked(r)) {
                        blocked = true;
                        break;
                    }
                }
            }
            if !blocked {
                fresh.push(f);
            }
        }
        admitted.extend(fresh);
    }
    Ok(admitted.into_iter().collect())
}

/// The greedy set up to `max_degree`, via [`greedy_member`].
pub fn greedy_set(field: &FieldSpec, max_degree: usize, budget: u128) -> Result<Vec<Poly>> {
    check_budget(field, max_degree, budget)?;
    let mut out = Vec::new();
    for f in nonzero_polys_up_to(field, max_degree) {
        if greedy_member(&f)? {
            out.push(f);
        }
    }
    Ok(out)
}

/// A progression found in a set: `terms` are the set members, equal to
/// `base, ratio*base, ratio^2*base` (up to units in unit-tolerant mode).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProgressionWitness {
    pub base: Poly,
    pub ratio: Poly,
    pub terms: [Poly; 3],
}

/// Finds the first progression in canonical `(base, ratio)` order.
///
/// In strict mode the terms must be exactly `a, r a, r^2 a`. With
/// `unit_tolerant`, the second and third terms only need to match up to a unit
/// factor, and the reported ratio is monic.
pub fn has_progression(polys: &[Poly], unit_tolerant: bool) -> Result<Option<ProgressionWitness>> {
    let Some(first) = polys.first() else {
        return Ok(None);
    };
    if polys.iter().any(|f| f.field() != first.field()) {
        return Err(Error::SpecMismatch);
    }
    if polys.iter().any(Poly::is_zero) {
        return Err(Error::ZeroPolynomial);
    }
    let mut sorted: Vec<Poly> = polys.to_vec();
    sorted.sort();
    sorted.dedup();
    let max_deg = sorted.last().and_then(Poly::degree).unwrap_or(0);

    // representative member for each monic associate (smallest in canonical order)
    let mut by_associate: HashMap<Poly, Poly> = HashMap::new();
    if unit_tolerant {
        for f in &sorted {
            by_associate
                .entry(f.monic_associate()?)
                .or_insert_with(|| f.clone());
        }
    }
    let members: HashSet<&Poly> = sorted.iter().collect();

    for a in &sorted {
        let da = a.degree().unwrap();
        let mut best: Option<ProgressionWitness> = None;
        for b in &sorted {
            let db = b.degree().unwrap();
            if db <= da || da + 2 * (db - da) > max_deg {
                continue;
            }
            let witness = if unit_tolerant {
                let Some(r) = b.monic_associate()?.checked_div(&a.monic_associate()?)? else {
                    continue;
                };
                let third = r.mul_unchecked(&r).mul_unchecked(a).monic_associate()?;
                let second = r.mul_unchecked(a).monic_associate()?;
                match (by_associate.get(&second), by_associate.get(&third)) {
                    (Some(mid), Some(top)) => ProgressionWitness {
                        base: a.clone(),
                        ratio: r,
                        terms: [a.clone(), mid.clone(), top.clone()],
                    },
                    _ => continue,
                }
            } else {
                let Some(r) = b.checked_div(a)? else {
                    continue;
                };
                let top = r.mul_unchecked(b);
                if !members.contains(&top) {
                    continue;
                }
                ProgressionWitness {
                    base: a.clone(),
                    ratio: r,
                    terms: [a.clone(), b.clone(), top],
                }
            };
            if best.as_ref().is_none_or(|w| witness.ratio < w.ratio) {
                best = Some(witness);
            }
        }
        if best.is_some() {
            return Ok(best);
        }
    }
    Ok(None)
}

/// A finite set of degrees `X`, standing for `S(X)`: all polynomials whose
/// norm is `q^n` for some `n` in `X`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DegreeSet(BTreeSet<u64>);

impl FromIterator<u64> for DegreeSet {
    fn from_iter<I: IntoIterator<Item = u64>>(iter: I) -> Self {
        DegreeSet(iter.into_iter().collect())
    }
}

impl DegreeSet {
    pub fn contains(&self, n: u64) -> bool {
        self.0.contains(&n)
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.0.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Membership of a polynomial in `S(X)`; zero is never a member.
    pub fn contains_poly(&self, f: &Poly) -> bool {
        f.degree().is_some_and(|d| self.contains(d as u64))
    }

    pub fn to_vec(&self) -> Vec<u64> {
        self.0.iter().copied().collect()
    }
}

/// `A3* ∩ [0, limit]`, the degrees of `S(T_{3,q})`.
pub fn t3q_degrees(limit: u64) -> DegreeSet {
    a3_list(limit).into_iter().collect()
}

/// `{m - a : a in A3* ∩ [0, m]}`.
pub fn reflected_degrees(m: u64) -> DegreeSet {
    a3_list(m).into_iter().map(|a| m - a).collect()
}

/// No `a, a+d, a+2d` (d >= 1) inside the set.
pub fn is_ap_free(s: &DegreeSet) -> bool {
    let v = s.to_vec();
    for (i, &a) in v.iter().enumerate() {
        for &b in &v[i + 1..] {
            if s.contains(2 * b - a) {
                return false;
            }
        }
    }
    true
}

/// Result of the exact extremal search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtremalResult {
    pub size: usize,
    /// Canonically least optimum: the one that keeps the earliest polynomials.
    pub witness: Vec<Poly>,
    pub vertices: usize,
    pub edges: usize,
}

/// Exact maximum size of a progression-free subset of the nonzero polynomials
/// of degree at most `max_degree`, by branch and bound on the 3-uniform
/// hypergraph of progressions.
pub fn max_progression_free_subset(
    field: &FieldSpec,
    max_degree: usize,
    budget: usize,
) -> Result<ExtremalResult> {
    let needed = (field.q() as u128)
        .checked_pow(max_degree as u32 + 1)
        .map_or(u128::MAX, |n| n - 1);
    if needed > budget as u128 {
        return Err(Error::BudgetExceeded {
            what: "extremal search vertices",
            needed,
            cap: budget as u128,
        });
    }
    let vertices: Vec<Poly> = nonzero_polys_up_to(field, max_degree).collect();
    let index: HashMap<&Poly, usize> = vertices.iter().enumerate().map(|(i, f)| (f, i)).collect();
    let mut edges: BTreeSet<[usize; 3]> = BTreeSet::new();
    for a in &vertices {
        let da = a.degree().unwrap();
        for dr in 1..=(max_degree.saturating_sub(da)) / 2 {
            for r in enumerate_polys(field, dr) {
                let ra = r.mul_unchecked(a);
                let rra = r.mul_unchecked(&ra);
                let mut e = [index[a], index[&ra], index[&rra]];
                e.sort_unstable();
                edges.insert(e);
            }
        }
    }
    let edges: Vec<[usize; 3]> = edges.into_iter().collect();
    let n = vertices.len();

    let mut degree = vec![0usize; n];
    for e in &edges {
        for &v in e {
            degree[v] += 1;
        }
    }
    let mut by_degree: Vec<usize> = (0..n).collect();
    by_degree.sort_by(|&a, &b| degree[b].cmp(&degree[a]).then(a.cmp(&b)));

    let graph = Hypergraph::new(n, &edges);
    let mut search = Search::new(&graph, by_degree, 0);
    search.run();
    let size = search.best_size;

    // second pass in canonical order, accepting only optimal sets: the first
    // one reached is the one that keeps the earliest polynomials
    let mut canonical = Search::new(&graph, (0..n).collect(), size);
    canonical.run();
    let witness = canonical
        .best_set
        .expect("an optimum exists")
        .into_iter()
        .map(|i| vertices[i].clone())
        .collect();
    Ok(ExtremalResult {
        size,
        witness,
        vertices: n,
        edges: edges.len(),
    })
}

struct Hypergraph {
    n: usize,
    edges: Vec<[usize; 3]>,
    incident: Vec<Vec<usize>>,
}

impl Hypergraph {
    fn new(n: usize, edges: &[[usize; 3]]) -> Hypergraph {
        let mut incident = vec![Vec::new(); n];
        for (i, e) in edges.iter().enumerate() {
            for &v in e {
                incident[v].push(i);
            }
        }
        Hypergraph {
            n,
            edges: edges.to_vec(),
            incident,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum State {
    Open,
    In,
    Out,
}

struct Search<'g> {
    graph: &'g Hypergraph,
    order: Vec<usize>,
    state: Vec<State>,
    chosen: usize,
    /// best size seen so far; solutions must beat it
    best_size: usize,
    best_set: Option<Vec<usize>>,
    /// accept a solution of size `target` when `target > 0`
    target: usize,
}

impl<'g> Search<'g> {
    fn new(graph: &'g Hypergraph, order: Vec<usize>, target: usize) -> Search<'g> {
        Search {
            graph,
            order,
            state: vec![State::Open; graph.n],
            chosen: 0,
            best_size: target.saturating_sub(1),
            best_set: None,
            target,
        }
    }

    fn run(&mut self) {
        if self.target == 0 {
            self.best_size = 0;
            self.best_set = Some(Vec::new());
        }
        self.descend(0);
    }

    fn done(&self) -> bool {
        self.target > 0 && self.best_set.is_some()
    }

    /// Upper bound: chosen + open − (greedy packing of live edges whose open
    /// parts are disjoint; each needs one more exclusion).
    fn bound(&self) -> usize {
        let open = self.state.iter().filter(|&&s| s == State::Open).count();
        let mut used = vec![false; self.graph.n];
        let mut packing = 0;
        for e in &self.graph.edges {
            if e.iter().any(|&v| self.state[v] == State::Out || used[v]) {
                continue;
            }
            let open_part: Vec<usize> = e
                .iter()
                .copied()
                .filter(|&v| self.state[v] == State::Open)
                .collect();
            if open_part.is_empty() {
                continue;
            }
            for v in open_part {
                used[v] = true;
            }
            packing += 1;
        }
        self.chosen + open - packing
    }

    fn completes_edge(&self, v: usize) -> bool {
        self.graph.incident[v].iter().any(|&ei| {
            self.graph.edges[ei]
                .iter()
                .all(|&u| u == v || self.state[u] == State::In)
        })
    }

    fn descend(&mut self, pos: usize) {
        if self.done() {
            return;
        }
        if pos == self.order.len() {
            if self.chosen > self.best_size {
                self.best_size = self.chosen;
                let set: Vec<usize> = (0..self.graph.n)
                    .filter(|&v| self.state[v] == State::In)
                    .collect();
                self.best_set = Some(set);
            }
            return;
        }
        if self.bound() <= self.best_size {
            return;
        }
        let v = self.order[pos];
        if !self.completes_edge(v) {
            self.state[v] = State::In;
            self.chosen += 1;
            self.descend(pos + 1);
            self.chosen -= 1;
        }
        self.state[v] = State::Out;
        self.descend(pos + 1);
        self.state[v] = State::Open;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::field_of_order;
    use crate::polyring::parse_poly;

    fn p(field: &FieldSpec, s: &str) -> Poly {
        parse_poly(field, s).unwrap()
    }

    #[test]
    fn a3_examples() {
        for n in [0, 1, 3, 4, 9, 10, 12, 13] {
            assert!(a3_contains(n));
        }
        assert!(!a3_contains(2));
        assert!(!a3_contains(7));
        assert_eq!(a3_list(13), vec![0, 1, 3, 4, 9, 10, 12, 13]);
        assert_eq!(a3_list(2), vec![0, 1]);
        // the greedy oracle agrees: {0,1,3,4,9,10,12,13,27,28,30}
        assert_eq!(greedy_ap_free_oracle(30), a3_list(30));
        assert_eq!(a3_list(30).len(), 11);
        assert_eq!(a3_list(40).len(), 16);
    }

    /// Greedy AP-free construction, independent of the ternary description.
    fn greedy_ap_free_oracle(limit: u64) -> Vec<u64> {
        let mut set: Vec<u64> = Vec::new();
        let mut member = vec![false; limit as usize + 1];
        for n in 0..=limit {
            // n would close a, b, n with b - a = n - b
            let closes = set
                .iter()
                .any(|&b| 2 * b >= n && member[(2 * b - n) as usize] && 2 * b - n < b);
            if !closes {
                set.push(n);
                member[n as usize] = true;
            }
        }
        set
    }

    #[test]
    fn ternary_description_matches_greedy_oracle() {
        assert_eq!(greedy_ap_free_oracle(10_000), a3_list(10_000));
    }

    #[test]
    fn greedy_member_examples() {
        let f2 = field_of_order(2).unwrap();
        assert!(!greedy_member(&p(&f2, "x^2")).unwrap());
        let f = p(&f2, "x").pow(3).mul(&p(&f2, "x+1")).unwrap();
        assert!(greedy_member(&f).unwrap());
        let f7 = field_of_order(7).unwrap();
        assert!(greedy_member(&p(&f7, "4")).unwrap());
        assert_eq!(
            greedy_member(&Poly::zero(&f7)).unwrap_err(),
            Error::ZeroPolynomial
        );
    }

    #[test]
    fn bruteforce_examples() {
        let f2 = field_of_order(2).unwrap();
        let got: Vec<Poly> = greedy_construct_bruteforce(&f2, 2, DEFAULT_ENUM_BUDGET)
            .unwrap()
            .into_iter()
            .collect();
        let want: Vec<Poly> = ["1", "x", "x+1", "x^2+x", "x^2+x+1"]
            .iter()
            .map(|s| p(&f2, s))
            .collect();
        assert_eq!(got, want);
        let got = greedy_construct_bruteforce(&f2, 0, DEFAULT_ENUM_BUDGET).unwrap();
        assert_eq!(got.into_iter().collect::<Vec<_>>(), vec![Poly::one(&f2)]);
        let f3 = field_of_order(3).unwrap();
        assert_eq!(
            greedy_construct_bruteforce(&f3, 1, DEFAULT_ENUM_BUDGET)
                .unwrap()
                .len(),
            8
        );
        assert!(matches!(
            greedy_construct_bruteforce(&f3, 30, DEFAULT_ENUM_BUDGET),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn progression_examples() {
        let f2 = field_of_order(2).unwrap();
        let set = [p(&f2, "1"), p(&f2, "x"), p(&f2, "x^2")];
        let w = has_progression(&set, false).unwrap().unwrap();
        assert_eq!((w.base, w.ratio), (p(&f2, "1"), p(&f2, "x")));
        let set = [p(&f2, "1"), p(&f2, "x"), p(&f2, "x^2+x")];
        assert_eq!(has_progression(&set, false).unwrap(), None);

        let f3 = field_of_order(3).unwrap();
        let set = [p(&f3, "1"), p(&f3, "x"), p(&f3, "2*x^2")];
        assert_eq!(has_progression(&set, false).unwrap(), None);
        let w = has_progression(&set, true).unwrap().unwrap();
        assert_eq!((w.base.clone(), w.ratio.clone()), (p(&f3, "1"), p(&f3, "x")));
        assert_eq!(w.terms[2], p(&f3, "2*x^2"));

        let mixed = [p(&f3, "1"), p(&f2, "x")];
        assert_eq!(has_progression(&mixed, false).unwrap_err(), Error::SpecMismatch);
    }

    #[test]
    fn witness_order_is_canonical() {
        let f3 = field_of_order(3).unwrap();
        // both r = x and r = 2x work from a = 1 (x^2 = (2x)^2); x is smaller
        let set = [p(&f3, "1"), p(&f3, "x"), p(&f3, "2*x"), p(&f3, "x^2")];
        let w = has_progression(&set, false).unwrap().unwrap();
        assert_eq!(w.ratio, p(&f3, "x"));
        assert_eq!(w.terms, [p(&f3, "1"), p(&f3, "x"), p(&f3, "x^2")]);
    }

    #[test]
    fn nk_values() {
        assert_eq!([nk(1), nk(2), nk(3), nk(4)], [1, 4, 13, 40]);
        assert_eq!(nk(3), 9 + 3 + 1);
    }

    #[test]
    fn degree_sets() {
        assert_eq!(t3q_degrees(4).to_vec(), vec![0, 1, 3, 4]);
        assert_eq!(reflected_degrees(4).to_vec(), vec![0, 1, 3, 4]);
        assert_eq!(reflected_degrees(5).to_vec(), vec![1, 2, 4, 5]);
        for k in 1..=6 {
            assert_eq!(reflected_degrees(nk(k)), t3q_degrees(nk(k)));
        }
        assert!(is_ap_free(&[0, 1, 3, 4].into_iter().collect()));
        assert!(!is_ap_free(&[0, 1, 2].into_iter().collect()));
        assert!(is_ap_free(&DegreeSet::default()));
        assert!(is_ap_free(&[7].into_iter().collect()));
        assert!(is_ap_free(&t3q_degrees(500)));
    }

    #[test]
    fn degree_set_progressions_match_polynomial_progressions() {
        let f2 = field_of_order(2).unwrap();
        let all: Vec<Poly> = nonzero_polys_up_to(&f2, 5).collect();
        for mask in 0u32..64 {
            let x: DegreeSet = (0..6).filter(|d| mask >> d & 1 == 1).collect();
            let members: Vec<Poly> = all.iter().filter(|f| x.contains_poly(f)).cloned().collect();
            let free = has_progression(&members, false).unwrap().is_none();
            assert_eq!(free, is_ap_free(&x), "X = {:?}", x.to_vec());
        }
    }

    #[test]
    fn extremal_small_cases() {
        let f2 = field_of_order(2).unwrap();
        let r = max_progression_free_subset(&f2, 1, DEFAULT_EXTREMAL_BUDGET).unwrap();
        assert_eq!(r.size, 3);
        assert_eq!(r.edges, 0);
        let r = max_progression_free_subset(&f2, 2, DEFAULT_EXTREMAL_BUDGET).unwrap();
        assert!(r.size >= 5);
        assert_eq!(r.witness.len(), r.size);
        assert!(has_progression(&r.witness, false).unwrap().is_none());
        assert!(matches!(
            max_progression_free_subset(&f2, 5, DEFAULT_EXTREMAL_BUDGET),
            Err(Error::BudgetExceeded { .. })
        ));
    }
}
