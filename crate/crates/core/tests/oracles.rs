//! Cross-checks of library results against small independent computations.

use gpfree::density::{
    checkpoint_density, cross_check_density_forms, empirical_greedy_density, greedy_density,
    rn_sequence, rn_sequence_uncached, upper_bound_no, zeta_identity_check, DEFAULT_RN_BUDGET,
};
use gpfree::factor::count_irreducibles;
use gpfree::numeric::{inv_pow, rat};
use gpfree::progfree::{greedy_set, has_progression, t3q_degrees, DEFAULT_ENUM_BUDGET};
use gpfree::{field_of_order, is_irreducible};
use num_bigint::BigUint;
use num_traits::ToPrimitive;

/// r_n by scanning every subset of [1, m] as a bitmask.
fn rn_bitmask(n_max: usize) -> Vec<u64> {
    let mut out = Vec::new();
    let mut m = 0u64;
    while out.len() < n_max {
        m += 1;
        let mut top = 0;
        for mask in 0u32..(1 << m) {
            let size = mask.count_ones() as usize;
            if size <= top {
                continue;
            }
            let free = (0..m).all(|a| {
                (1..m).all(|d| {
                    let c = a + 2 * d;
                    c >= m || mask >> a & 1 == 0 || mask >> (a + d) & 1 == 0 || mask >> c & 1 == 0
                })
            });
            if free {
                top = size;
            }
        }
        while out.len() < top {
            out.push(m);
        }
    }
    out.truncate(n_max);
    out
}

#[test]
fn rn_matches_exhaustive_subsets() {
    let oracle = rn_bitmask(9);
    assert_eq!(oracle, vec![1, 2, 4, 5, 9, 11, 13, 14, 20]);
    assert_eq!(rn_sequence_uncached(9, DEFAULT_RN_BUDGET).unwrap().values, oracle);
    assert_eq!(rn_sequence(9, DEFAULT_RN_BUDGET).unwrap().values, oracle);
}

#[test]
fn rn_is_strictly_increasing() {
    let t = rn_sequence(18, DEFAULT_RN_BUDGET).unwrap();
    assert!(t.values.windows(2).all(|w| w[1] > w[0]));
    assert_eq!(t.values[14], 40);
}

#[test]
fn irreducible_counts_match_enumeration() {
    for q in [2u64, 3, 4] {
        let field = field_of_order(q).unwrap();
        for d in 1..=4usize {
            let count = gpfree::polyring::enumerate_monic(&field, d)
                .filter(|f| is_irreducible(f).unwrap())
                .count();
            assert_eq!(BigUint::from(count), count_irreducibles(q, d as u64), "q={q} d={d}");
        }
    }
}

#[test]
fn euler_product_holds() {
    for q in [2u64, 3, 4, 5, 7] {
        assert!(zeta_identity_check(q, 12).holds, "q={q}");
    }
}

#[test]
fn three_density_forms_agree() {
    let target = inv_pow(10, 8);
    for q in [2u64, 3, 4, 5, 7, 8, 9] {
        let check = cross_check_density_forms(q, 4, 14).unwrap();
        assert!(check.consistent, "q={q}");
        assert!(check.max_width() < target, "q={q}");
    }
}

#[test]
fn greedy_enumeration_tracks_density() {
    let field = field_of_order(2).unwrap();
    let empirical = empirical_greedy_density(&field, 12, DEFAULT_ENUM_BUDGET).unwrap();
    let limit = greedy_density(2, 9).unwrap().value;
    let diff = (empirical - limit.midpoint()).to_f64().unwrap().abs();
    assert!(diff < 0.01, "diff {diff}");
}

#[test]
fn greedy_set_is_progression_free() {
    for q in [2u64, 3] {
        let field = field_of_order(q).unwrap();
        let set = greedy_set(&field, if q == 2 { 6 } else { 3 }, DEFAULT_ENUM_BUDGET).unwrap();
        assert!(has_progression(&set, false).unwrap().is_none(), "q={q}");
    }
}

#[test]
fn checkpoint_is_a_degree_count() {
    let degrees = t3q_degrees(4).to_vec();
    assert_eq!(degrees, vec![0, 1, 3, 4]);
    let field = field_of_order(2).unwrap();
    let members = gpfree::polyring::nonzero_polys_up_to(&field, 4)
        .filter(|f| degrees.contains(&(f.degree().unwrap() as u64)))
        .count();
    assert_eq!(members, 27);
    assert_eq!(checkpoint_density(2, 2).unwrap(), rat(27, 32));
}

#[test]
fn progression_bound_exceeds_lower_bound() {
    for q in [2u64, 3, 5] {
        let upper = upper_bound_no(q, 9).unwrap().value;
        let lower = gpfree::density::lower_bound_mq(q, 9).unwrap().value;
        assert!(lower.strictly_below(&upper), "q={q}");
    }
}

#[test]
fn greedy_density_increases_with_q() {
    let values: Vec<_> = gpfree::density::prime_powers_up_to(130)
        .into_iter()
        .map(|q| gpfree::density::greedy_density_direct(q, 5))
        .collect();
    assert!(values.windows(2).all(|w| w[0].strictly_below(&w[1])));
}

#[test]
fn simple_bound_terms_decrease() {
    for q in [2u64, 3, 7] {
        let limit = gpfree::density::upper_bound_simple(q, None).unwrap();
        let mut prev = gpfree::density::upper_bound_simple(q, Some(0)).unwrap();
        for t in 1..10 {
            let v = gpfree::density::upper_bound_simple(q, Some(t)).unwrap();
            assert!(v < prev && v > limit, "q={q} t={t}");
            prev = v;
        }
    }
}
