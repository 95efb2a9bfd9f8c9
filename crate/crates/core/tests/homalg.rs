mod common;

use std::sync::Arc;

use catring::homalg::{
    ext, free_cover, free_resolution, hom_module, is_projective, kernel, projective_dimension, uct_terms, yoneda,
    FreeModule, GradedModule, ProjectiveDimension,
};
use catring::intmat::Int;
use catring::Error;
use common::{ext_oracle, hom_oracle, invariants_profile, ring, small_groups};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn fixture(name: &str) -> String {
    std::fs::read_to_string(format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

/// A sum of two representables modulo one or two random elements.
fn random_module(rng: &mut ChaCha8Rng) -> Arc<GradedModule> {
    let r = ring(4);
    let n = r.object_count();
    let entries = vec![(rng.gen_range(0..n), rng.gen_range(0..2)), (rng.gen_range(0..n), rng.gen_range(0..2))];
    let f = FreeModule::new(r.clone(), entries);
    let mut rels = Vec::new();
    for _ in 0..rng.gen_range(1..=2) {
        let (x, e) = (rng.gen_range(0..n), rng.gen_range(0..2));
        let d = f.module().dim(x, e);
        let v: Vec<Int> = (0..d).map(|_| Int::from(rng.gen_range(-2..=2))).collect();
        rels.push((x, e, v));
    }
    Arc::new(f.module().quotient_by(&rels).unwrap())
}

#[test]
fn hom_from_representable_is_evaluation() {
    let r = ring(4);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..20 {
        let m = random_module(&mut rng);
        for (x, h) in r.objects().iter().enumerate() {
            let p = yoneda(&r, *h, 0).unwrap().module().clone();
            let hom = hom_module(&p, &m).unwrap();
            let mut got = hom.invariants.clone();
            got.sort();
            let mut want = m.value(x, 0).invariants();
            want.sort();
            assert_eq!(got, want, "object {}", h.0);
        }
    }
}

#[test]
fn ext_zero_is_hom() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..10 {
        let (m, n) = (random_module(&mut rng), random_module(&mut rng));
        let mut hom = hom_module(&m, &n).unwrap().invariants;
        let mut e0 = ext(&m, &n, 0).unwrap().degrees[0].clone();
        hom.sort();
        e0.sort();
        assert_eq!(hom, e0);
    }
}

#[test]
fn resolutions_are_complexes() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..10 {
        let m = random_module(&mut rng);
        let res = free_resolution(&m, 3).unwrap();
        if let Some(d1) = res.differentials.first() {
            assert!(d1.then(&res.augmentation).unwrap().is_zero());
        }
        for w in res.differentials.windows(2) {
            assert!(w[1].then(&w[0]).unwrap().is_zero());
        }
    }
}

#[test]
fn cover_is_surjective_and_kernel_injective() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..10 {
        let m = random_module(&mut rng);
        let cover = free_cover(&m).unwrap();
        let (k, iota) = kernel(&cover.map).unwrap();
        assert!(iota.then(&cover.map).unwrap().is_zero());
        // the cokernel of the kernel inclusion has the cover's image as values
        for x in 0..m.ring().object_count() {
            for e in 0..2 {
                let rank_free = cover.free.module().dim(x, e);
                assert!(k.dim(x, e) <= rank_free);
            }
        }
    }
}

#[test]
fn ext_ignores_generator_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..8 {
        let (m, n) = (random_module(&mut rng), random_module(&mut rng));
        let m2 = Arc::new(common::reversed_generators(&m));
        for k in 0..=2 {
            let (a, b) = (ext(&m, &n, k).unwrap(), ext(&m2, &n, k).unwrap());
            assert_eq!(a, b, "Ext^{k}");
        }
    }
}

#[test]
fn ext_is_additive() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..6 {
        let (m1, m2, n) = (random_module(&mut rng), random_module(&mut rng), random_module(&mut rng));
        let sum = Arc::new(GradedModule::direct_sum(&[&m1, &m2]).unwrap());
        for k in 0..=1 {
            let (a, b, s) = (ext(&m1, &n, k).unwrap(), ext(&m2, &n, k).unwrap(), ext(&sum, &n, k).unwrap());
            for d in 0..2 {
                let joint = common::add_profiles(invariants_profile(&a.degrees[d]), invariants_profile(&b.degrees[d]));
                assert_eq!(invariants_profile(&s.degrees[d]), joint);
            }
        }
    }
}

#[test]
fn suspension_swaps_degrees() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..6 {
        let (m, n) = (random_module(&mut rng), random_module(&mut rng));
        assert_eq!(m.suspend().suspend().to_json(), m.to_json());
        let (a, b) = (ext(&m, &n, 1).unwrap(), ext(&Arc::new(m.suspend()), &n, 1).unwrap());
        assert_eq!(a.degrees[0], b.degrees[1]);
        assert_eq!(a.degrees[1], b.degrees[0]);
    }
}

#[test]
fn classical_hom_ext_and_uct() {
    let r = ring(1);
    for a in small_groups() {
        for b in small_groups() {
            let (m, n) = (common::graded(&r, &a, &[]), common::graded(&r, &b, &[]));
            let hom = ext(&m, &n, 0).unwrap();
            let e1 = ext(&m, &n, 1).unwrap();
            assert_eq!(invariants_profile(&hom.degrees[0]), hom_oracle(&a, &b), "Hom({a:?}, {b:?})");
            assert_eq!(invariants_profile(&e1.degrees[0]), ext_oracle(&a, &b), "Ext({a:?}, {b:?})");
            assert!(hom.degrees[1].is_empty() && e1.degrees[1].is_empty());
            assert!(ext(&m, &n, 2).unwrap().is_zero());
            let uct = uct_terms(&m, &n).unwrap();
            assert!(uct.pd_check);
            assert_eq!(uct.ext1_shifted.degrees[1], e1.degrees[0]);
            let pd = projective_dimension(&m, 2).unwrap();
            let free = a.iter().all(|&o| o == 0);
            assert_eq!(pd, ProjectiveDimension::Exactly(if free { 0 } else { 1 }), "{a:?}");
        }
    }
}

#[test]
fn named_classical_values() {
    let r = ring(1);
    let show = |a: &[u64], b: &[u64], k| ext(&common::graded(&r, a, &[]), &common::graded(&r, b, &[]), k).unwrap().to_string();
    assert_eq!(show(&[6], &[0], 1), "Ext^1: degree 0: Z/6; degree 1: 0");
    assert_eq!(show(&[6], &[4], 0), "Ext^0: degree 0: Z/2; degree 1: 0");
    assert_eq!(show(&[6], &[4], 1), "Ext^1: degree 0: Z/2; degree 1: 0");
    assert_eq!(show(&[0], &[0], 0), "Ext^0: degree 0: Z; degree 1: 0");
}

#[test]
fn representables_are_projective() {
    let r = ring(4);
    for h in r.objects() {
        let p = yoneda(&r, *h, 1).unwrap().module().clone();
        assert!(is_projective(&p).unwrap());
        assert_eq!(projective_dimension(&p, 1).unwrap(), ProjectiveDimension::Exactly(0));
        assert_eq!(free_cover(&p).unwrap().free.entries().len(), 1);
    }
}

#[test]
fn witness_is_not_projective() {
    let r = ring(4);
    let m = Arc::new(GradedModule::from_json(&fixture("witness_module.json"), r.clone()).unwrap());
    let n = Arc::new(GradedModule::from_json(&fixture("witness_partner.json"), r.clone()).unwrap());
    assert!(!is_projective(&m).unwrap());
    assert_eq!(projective_dimension(&m, 3).unwrap(), ProjectiveDimension::AboveCap(3));
    assert_eq!(ext(&m, &n, 2).unwrap().to_string(), "Ext^2: degree 0: Z/2 + Z/2; degree 1: 0");
    assert!(!uct_terms(&m, &n).unwrap().pd_check);
}

#[test]
fn module_json_round_trip_and_ring_check() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let m = random_module(&mut rng);
    let s = m.to_json();
    assert_eq!(GradedModule::from_json(&s, ring(4)).unwrap().to_json(), s);
    assert!(matches!(GradedModule::from_json(&s, ring(2)), Err(Error::RingMismatch)));
}

#[test]
fn broken_functoriality_is_rejected() {
    let r = ring(2);
    let m = yoneda(&r, r.objects()[1], 0).unwrap().module().clone();
    let values = (0..r.object_count()).map(|x| [m.value(x, 0).clone(), m.value(x, 1).clone()]).collect();
    let mut actions: Vec<[catring::intmat::Matrix; 2]> =
        (0..r.total_rank()).map(|b| [m.action(b, 0).clone(), m.action(b, 1).clone()]).collect();
    // double the action of a non-identity endomorphism
    let b = r.pair_range(0, 0).find(|&b| b != r.unit_index(0)).unwrap();
    let doubled = actions[b][0].clone();
    actions[b][0].add_scaled(&Int::from(1), &doubled);
    assert!(GradedModule::new(r.clone(), values, actions).is_err());
}
