use std::cmp::Ordering;
use std::collections::BTreeSet;

use proptest::prelude::*;
use twostep::combinat::{dim_forms, macaulay_growth};
use twostep::landscape::delta_int;
use twostep::profiles::smoothable_dim;
use twostep::search::{
    enumerate_domain, find_certificates, minimal_sequence_set, minimal_sequences, reachable, seq_compare, Domain,
    Strategy as Search,
};
use twostep::Exec;

/// Independent membership test for the lattice domain, written directly
/// from the four inequality families with all fractions cleared.
fn in_domain(n: usize, r: usize, k: usize, c: &[i64]) -> bool {
    let rd = |d: usize| dim_forms(n, d) as i64;
    let nn = n as i64;
    if c.len() != 2 * r || c.iter().any(|&v| v < 0) {
        return false;
    }
    if c[0] > rd(k) || (nn * nn - 1) * c[0] > nn * c[1] || c[1] > rd(k + 1) {
        return false;
    }
    for i in 1..r {
        let (prev, lo, hi) = (c[2 * i - 1], c[2 * i], c[2 * i + 1]);
        let big = rd(k + i + 1);
        if lo > prev || hi > big || (nn * nn - 1) * lo > nn * hi || (nn * big - prev) * lo > big * hi {
            return false;
        }
    }
    (0..r).all(|i| macaulay_growth(n, k + i, c[2 * i] as usize).unwrap() as i64 <= c[2 * i + 1])
}

fn brute_force(n: usize, r: usize, k: usize) -> BTreeSet<Vec<i64>> {
    let mut bounds = Vec::new();
    for i in 0..r {
        bounds.push(dim_forms(n, k + i) as i64);
        bounds.push(dim_forms(n, k + i + 1) as i64);
    }
    let mut out = BTreeSet::new();
    let mut cur = vec![0i64; 2 * r];
    loop {
        if in_domain(n, r, k, &cur) {
            out.insert(cur.clone());
        }
        let mut j = 0;
        while j < cur.len() && cur[j] == bounds[j] {
            cur[j] = 0;
            j += 1;
        }
        if j == cur.len() {
            return out;
        }
        cur[j] += 1;
    }
}

#[test]
fn enumeration_matches_a_brute_force_box_scan() {
    for (n, r, k) in [(2, 1, 1), (2, 2, 2), (3, 1, 2), (3, 2, 1), (4, 1, 2), (2, 3, 1)] {
        let dom = Domain::new(n, r, k).unwrap();
        let listed: Vec<Vec<i64>> = enumerate_domain(&dom)
            .map(|p| p.into_iter().map(|v| v as i64).collect())
            .collect();
        let set: BTreeSet<Vec<i64>> = listed.iter().cloned().collect();
        assert_eq!(set.len(), listed.len(), "duplicates for {n},{r},{k}");
        let mut sorted = listed.clone();
        sorted.sort();
        assert_eq!(sorted, listed, "not in lexicographic order for {n},{r},{k}");
        assert_eq!(set, brute_force(n, r, k), "{n},{r},{k}");
        for p in &listed {
            assert!(dom.contains(p));
        }
    }
}

#[test]
fn certificates_are_sound() {
    for (n, r, k) in [(2, 5, 9), (3, 2, 2), (3, 3, 1), (2, 8, 1), (4, 1, 2)] {
        let rep = find_certificates(n, r, k, Search::Exhaustive, Exec::Parallel).unwrap();
        for c in &rep.certificates {
            let pt: Vec<i64> = c.point.iter().map(|&v| v as i64).collect();
            let d = delta_int(n, r, k, &pt).unwrap();
            assert!(d >= 0);
            assert_eq!(c.delta, twostep::exactla::q(d));
            assert!(in_domain(n, r, k, &pt));
            let last = *c.colengths.last().unwrap();
            assert!(c.dim_bound + n >= smoothable_dim(n, last), "{c:?}");
            assert!(c.colengths.windows(2).all(|w| w[0] <= w[1]));
        }
    }
}

#[test]
fn parallel_and_sequential_searches_agree() {
    for (n, r, k, s) in [
        (2, 5, 9, Search::Exhaustive),
        (2, 4, 29, Search::Hypercube { cap: Search::DEFAULT_CAP }),
        (3, 3, 1, Search::Exhaustive),
        (2, 5, 9, Search::Hypercube { cap: 2 }),
    ] {
        let a = find_certificates(n, r, k, s, Exec::Sequential).unwrap();
        let b = find_certificates(n, r, k, s, Exec::Parallel).unwrap();
        assert_eq!(a, b, "{n},{r},{k}");
    }
}

#[test]
fn hypercube_search_finds_the_four_level_surface_sequence() {
    let rep = find_certificates(2, 4, 29, Search::Hypercube { cap: Search::DEFAULT_CAP }, Exec::Parallel).unwrap();
    assert!(rep.certificates.iter().any(|c| c.colengths == [454, 491, 527, 565]));
}

#[test]
fn exhaustive_threefold_search_finds_the_two_level_sequences() {
    let mut found = BTreeSet::new();
    for k in 1..=2 {
        let rep = find_certificates(3, 2, k, Search::Exhaustive, Exec::Parallel).unwrap();
        found.extend(rep.certificates.into_iter().map(|c| c.colengths));
    }
    for s in [[14, 24], [15, 24], [13, 26]] {
        assert!(found.contains(&s.to_vec()), "{s:?}");
    }
}

#[test]
fn listed_three_level_sequences_are_pairwise_incomparable() {
    let seqs: Vec<Vec<usize>> = [
        [7, 13, 17], [7, 12, 18], [6, 13, 18], [8, 13, 18], [6, 12, 20], [8, 12, 20], [5, 13, 20],
        [5, 14, 20], [4, 13, 21], [3, 14, 21], [4, 14, 21], [6, 11, 22], [7, 11, 22], [3, 13, 22],
        [4, 12, 23], [5, 12, 23], [2, 14, 23], [2, 15, 23], [3, 12, 24], [2, 13, 24], [2, 12, 25],
    ]
    .iter()
    .map(|s| s.to_vec())
    .collect();
    for a in &seqs {
        for b in &seqs {
            if a != b {
                assert!(!reachable(a, b), "{a:?} reaches {b:?}");
            }
        }
    }
    assert_eq!(minimal_sequence_set(&seqs, false).len(), seqs.len());
}

#[test]
fn empty_domains_give_empty_results() {
    // (2, 2, k) never reaches Δ ≥ 0.
    let rep = find_certificates(2, 2, 3, Search::Exhaustive, Exec::Sequential).unwrap();
    assert!(rep.certificates.is_empty());
    assert!(minimal_sequences(&[], false).is_empty());
}

fn small_seq() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0usize..6, 3)
}

proptest! {
    #[test]
    fn lex_from_last_is_a_total_order(a in small_seq(), b in small_seq(), c in small_seq()) {
        let ab = seq_compare(&a, &b).unwrap();
        let bc = seq_compare(&b, &c).unwrap();
        prop_assert_eq!(seq_compare(&b, &a).unwrap(), ab.reverse());
        prop_assert_eq!(ab == Ordering::Equal, a == b);
        if ab != Ordering::Greater && bc != Ordering::Greater {
            prop_assert_ne!(seq_compare(&a, &c).unwrap(), Ordering::Greater);
        }
    }

    #[test]
    fn covering_moves_are_reachable(d in prop::collection::vec(1usize..30, 1..5), i in 0usize..5) {
        let i = i % d.len();
        let mut up = d.clone();
        for v in &mut up[i..] {
            *v += 1;
        }
        prop_assert!(reachable(&d, &up));
        let mut ins = d.clone();
        ins.insert(i + 1, d[i] + 1);
        prop_assert!(reachable(&d, &ins));
        let min = minimal_sequence_set(&[d.clone(), up], false);
        prop_assert_eq!(min, vec![d]);
    }

    #[test]
    fn singleton_is_its_own_minimum(d in prop::collection::vec(1usize..30, 1..5)) {
        prop_assert_eq!(minimal_sequence_set(std::slice::from_ref(&d), true), vec![d]);
    }
}
