use std::collections::BTreeMap;

use operlab_core::dop_local::{
    act, admits_surjection, composition_consistent, from_sol, leibniz_consistent, pn_curvature, sol, tensor, truncate,
    verify_descent, LevelStructure,
};
use operlab_core::rings::{PrimeModulus, WittRing};
use operlab_core::witt_opers::{
    build_witt_oper, canonical_diagonal_lift, canonicalize, decompose_dormant_matrix, diagonal_reduce, miura_fibers,
    theta_classify, ATuple, LevelSide, WittContext,
};
use proptest::prelude::*;

fn ring(p: u64, n: u32) -> WittRing {
    WittRing::new(PrimeModulus::new(p).unwrap(), n).unwrap()
}

#[test]
fn theta_counts_match_formula() {
    for (n, p, len) in [(1, 5, 2), (2, 5, 1), (2, 5, 2), (2, 5, 3), (3, 7, 1), (2, 7, 2), (3, 7, 2), (4, 11, 1)] {
        let ctx = WittContext::unguarded(n, p, len).unwrap();
        assert_eq!(theta_classify(&ctx).len() as u64, ctx.expected_class_count(), "n={n} p={p} N={len}");
    }
}

#[test]
fn build_then_decompose_is_identity() {
    for (n, p, len) in [(2, 5, 2), (3, 7, 1), (2, 7, 2), (3, 5, 2)] {
        let ctx = WittContext::unguarded(n, p, len).unwrap();
        for class in theta_classify(&ctx) {
            let d = build_witt_oper(&ctx, class.canonical(), LevelSide::N1).unwrap();
            assert_eq!(decompose_dormant_matrix(d.connection_matrix()).unwrap(), class);
            assert_eq!(decompose_dormant_matrix(&d.matrix_in_flag_basis().unwrap()).unwrap(), class);
        }
    }
}

#[test]
fn miura_covering_is_n_factorial_to_one() {
    for (n, p, len, fact) in [(2, 5, 2, 2), (3, 7, 1, 6), (3, 5, 2, 6)] {
        let ctx = WittContext::unguarded(n, p, len).unwrap();
        let fibers: BTreeMap<_, _> = miura_fibers(&ctx).unwrap();
        assert_eq!(fibers.len(), theta_classify(&ctx).len());
        assert!(fibers.values().all(|&k| k == fact));
    }
}

#[test]
fn truncation_maps_classes_evenly() {
    let ctx = WittContext::new(2, 5, 3).unwrap();
    let mut image: BTreeMap<Vec<u64>, usize> = BTreeMap::new();
    for class in theta_classify(&ctx) {
        *image.entry(class.truncate(2).unwrap().values()).or_default() += 1;
    }
    let lower = theta_classify(&WittContext::new(2, 5, 2).unwrap());
    assert_eq!(image.len(), lower.len());
    assert!(image.values().all(|&k| k == 5));
}

#[test]
fn reduction_and_lift_round_trip() {
    for (n, len) in [(1, 1), (1, 2), (2, 1), (2, 2), (3, 1), (3, 2)] {
        let ctx = WittContext::unguarded(n, 5, len).unwrap();
        for class in theta_classify(&ctx) {
            let d = build_witt_oper(&ctx, class.canonical(), LevelSide::N1).unwrap();
            let red = diagonal_reduce(&ctx, &d, 2 * 5i64.pow(len)).unwrap();
            assert_eq!(red, build_witt_oper(&ctx, class.canonical(), LevelSide::OneN).unwrap());
            assert_eq!(canonical_diagonal_lift(&ctx, &red).unwrap(), d);
        }
    }
}

#[test]
fn dop_invariants_exhaustive_small() {
    for (p, len) in [(3u64, 1u32), (3, 2), (3, 3), (5, 1), (5, 2)] {
        let r = ring(p, len);
        let w = 2 * (p as i64).pow(len);
        for a in r.elements() {
            let s = LevelStructure::new(a).unwrap();
            assert!(pn_curvature(&s, w).unwrap().is_zero());
            assert!(leibniz_consistent(&s, w).unwrap());
            assert!(composition_consistent(&s, w).unwrap());
            assert!(verify_descent(a, w).unwrap());
            let basis = sol(&s).unwrap();
            assert_eq!(basis.residue, (-a).value());
            assert_eq!(from_sol(&basis, r).unwrap(), s);
        }
    }
}

#[test]
fn surjections_only_between_equal_structures() {
    let r = ring(3, 2);
    for a in r.elements() {
        for b in r.elements() {
            let (x, y) = (LevelStructure::new(a).unwrap(), LevelStructure::new(b).unwrap());
            assert_eq!(admits_surjection(&x, &y, 18).unwrap(), a == b, "a={a} b={b}");
        }
    }
}

proptest! {
    #[test]
    fn canonicalize_is_translation_and_permutation_invariant(
        v in proptest::collection::vec(0i64..49, 3),
        c in 0i64..49,
        perm in Just(vec![2usize, 0, 1]),
    ) {
        let r = ring(7, 2);
        let t = ATuple::from_ints(r, &v);
        prop_assume!(t.is_regular());
        let moved: Vec<i64> = perm.iter().map(|&i| v[i] + c).collect();
        let class = canonicalize(&t).unwrap();
        prop_assert_eq!(canonicalize(&ATuple::from_ints(r, &moved)).unwrap(), class.clone());
        prop_assert_eq!(canonicalize(class.canonical()).unwrap(), class);
    }

    #[test]
    fn lucas_scalar_depends_on_a_mod_p_power(a in 0i64..125, k in -300i64..300, level in 0u32..3) {
        let s3 = LevelStructure::new(ring(5, 3).elem(a)).unwrap();
        let s = LevelStructure::new(ring(5, level + 1).elem(a)).unwrap();
        prop_assert_eq!(act(level, &s3, k).unwrap().to_index(), act(level, &s, k).unwrap().to_index());
    }

    #[test]
    fn tensor_adds_and_truncation_commutes(a in 0i64..25, b in 0i64..25) {
        let r = ring(5, 2);
        let (x, y) = (LevelStructure::new(r.elem(a)).unwrap(), LevelStructure::new(r.elem(b)).unwrap());
        let t = tensor(&x, &y, 30).unwrap();
        prop_assert_eq!(t.a(), r.elem(a + b));
        let tx = truncate(&x, 1).unwrap();
        let ty = truncate(&y, 1).unwrap();
        prop_assert_eq!(truncate(&t, 1).unwrap(), tensor(&tx, &ty, 30).unwrap());
    }

    #[test]
    fn perturbed_structures_are_not_dormant(a in 0i64..25, offset in 1u64..20) {
        let s = LevelStructure::perturbed(ring(5, 2).elem(a), 1, 5 + offset).unwrap();
        prop_assert!(!pn_curvature(&s, 50).unwrap().is_zero());
    }
}
