mod common;

use catring::normalform::{check_random_associativity, complete, verify_ring, CategoryRing, CompletionOptions};
use catring::presentation::{build_presentation, presentation_c4};
use catring::Error;
use common::{fp_completion_oracle, rank_table, ring};

fn frozen(k: u64) -> Vec<Vec<usize>> {
    match k {
        2 => common::C2_RANKS.iter().map(|r| r.to_vec()).collect(),
        4 => common::C4_RANKS.iter().map(|r| r.to_vec()).collect(),
        _ => unreachable!(),
    }
}

#[test]
fn oracle_reproduces_frozen_ranks() {
    for k in [2, 4] {
        let r = ring(k);
        let bound = r.meta().bound + 2;
        let oracle = fp_completion_oracle(r.presentation(), bound).expect("closure certificate");
        assert_eq!(oracle.ranks, frozen(k), "k = {k}");
        assert_eq!(oracle.core_length, r.meta().core_length, "k = {k}");
    }
}

#[test]
fn completed_ranks_match_oracle() {
    for k in [1, 2, 3, 4, 6] {
        let r = ring(k);
        let oracle = fp_completion_oracle(r.presentation(), r.meta().bound + 2).unwrap();
        assert_eq!(rank_table(&r), oracle.ranks, "k = {k}");
    }
}

#[test]
fn ranks_follow_the_double_coset_count() {
    // Hom(C(C_k/X), C(C_k/Y)) has rank (k / lcm) * gcd of the orders
    for k in 1..=6u64 {
        let r = ring(k);
        for (x, hx) in r.objects().iter().enumerate() {
            for (y, hy) in r.objects().iter().enumerate() {
                let (a, b) = (hx.0, hy.0);
                let g = num_integer::gcd(a, b);
                let expected = (k / (a * b / g)) * g;
                assert_eq!(r.pair_rank(x, y) as u64, expected, "k = {k}, {a} -> {b}");
            }
        }
    }
}

#[test]
fn oracle_fails_below_closure() {
    let p = build_presentation(4).unwrap();
    assert!(fp_completion_oracle(&p, 2).is_none());
}

#[test]
fn hand_written_c4_completes_to_same_ranks() {
    let r = complete(&presentation_c4(), CompletionOptions::default()).unwrap();
    assert_eq!(rank_table(&r), frozen(4));
    assert!(verify_ring(&r).passed());
}

#[test]
fn k6_verifies() {
    let r = ring(6);
    let report = verify_ring(&r);
    assert!(report.passed(), "{:?}", report.failures);
    assert_eq!(r.total_rank(), 48);
}

#[test]
fn random_associativity() {
    for k in [3, 4, 6] {
        assert_eq!(check_random_associativity(&ring(k), 7, 500, 8), Vec::<String>::new(), "k = {k}");
    }
}

#[test]
fn small_bound_reports_not_stabilized() {
    let err = complete(&build_presentation(4).unwrap(), CompletionOptions { max_len: 4, window: 2 }).unwrap_err();
    match err {
        Error::NotStabilized { max_len, .. } => assert_eq!(max_len, 4),
        e => panic!("unexpected {e}"),
    }
}

#[test]
fn json_round_trip_is_byte_stable() {
    let r = ring(4);
    let s = r.to_json();
    let back = CategoryRing::from_json(&s).unwrap();
    assert_eq!(back.to_json(), s);
    assert_eq!(back.content_hash(), r.content_hash());
    let shipped = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/ring_c4.json")).unwrap();
    assert_eq!(shipped, s);
}

#[test]
fn corrupted_table_names_the_triple() {
    let mut r = (*ring(2)).clone();
    let (u, v) = (r.pair_range(0, 1).start, r.pair_range(1, 0).start);
    let mut c = r.structure_constants(u, v).unwrap().to_vec();
    c[0] += 1;
    r.set_structure_constants(u, v, c);
    let report = verify_ring(&r);
    assert!(!report.passed());
    assert!(report.failures.iter().any(|f| f.contains("associativity fails on triple")), "{:?}", report.failures);
}
