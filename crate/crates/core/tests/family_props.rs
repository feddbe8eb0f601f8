mod common;

use proptest::prelude::*;

use common::{brute_cross, fam, family_from_bits};
use crossint::constructions::{acz_pair, canonical_pair, legal_params, CanonicalParams};
use crossint::fam::{decode_family, decode_pair, encode_family, encode_pair};
use crossint::family::{is_cross_intersecting, normalize_pair, CrossPair, Family, SubsetMask};
use crossint::search::closure;

fn family_strategy(max_n: usize, max_len: usize) -> impl Strategy<Value = Family> {
    (1..=max_n).prop_flat_map(move |n| {
        prop::collection::vec(0u32..(1 << n), 0..=max_len).prop_map(move |bits| family_from_bits(n, &bits))
    })
}

/// A closed pair grown from a random generator, both sides nonempty.
fn closed_pair_strategy() -> impl Strategy<Value = CrossPair> {
    (2usize..=6, 0usize..=3, prop::collection::vec(any::<u32>(), 1..=3)).prop_filter_map(
        "both sides nonempty",
        |(n, ell, seeds)| {
            let ell = ell.min(n / 2);
            let bits: Vec<u32> = seeds.iter().map(|s| s % (1 << n)).collect();
            let c = closure(&family_from_bits(n, &bits), ell);
            (!c.a().is_empty() && !c.b().is_empty()).then_some(c)
        },
    )
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn family_round_trips_through_fam(f in family_strategy(8, 12)) {
        let text = encode_family(&f);
        prop_assert_eq!(decode_family(&text).unwrap(), f);
    }

    #[test]
    fn pair_round_trips_through_fam(p in closed_pair_strategy()) {
        let text = encode_pair(&p);
        let back = decode_pair(&text).unwrap();
        prop_assert_eq!(encode_pair(&back), text);
        prop_assert_eq!(back, p);
    }

    #[test]
    fn cross_property_is_permutation_invariant(
        (p, perm) in closed_pair_strategy().prop_flat_map(|p| { let n = p.n(); (Just(p), permutation(n)) })
    ) {
        let q = p.permute(&perm);
        prop_assert!(is_cross_intersecting(&q));
        prop_assert_eq!(q.product(), p.product());
        // Perturbing one member breaks it in both labelings or neither.
        let extra = SubsetMask::full(p.n());
        let bump = |x: &CrossPair| {
            CrossPair::new(Family::new(x.n(), x.a().iter().chain([extra])).unwrap(), x.b().clone(), x.ell()).unwrap()
        };
        prop_assert_eq!(is_cross_intersecting(&bump(&p)), is_cross_intersecting(&bump(&p).permute(&perm)));
    }

    #[test]
    fn normalization_is_idempotent_and_conserves_product(p in closed_pair_strategy()) {
        let Ok((q, trace)) = normalize_pair(&p) else {
            // Only {∅} x {∅} at ell = 0 reduces to nothing.
            prop_assert_eq!(p.ell(), 0);
            return Ok(());
        };
        prop_assert!(brute_cross(&q));
        prop_assert!(q.a().is_antichain() && q.b().is_antichain());
        prop_assert_eq!(p.product(), q.product() << (trace.original_n - trace.reduced_n));
        let (r, again) = normalize_pair(&q).unwrap();
        prop_assert!(again.is_empty());
        prop_assert_eq!(r, q);
    }

    #[test]
    fn non_antichain_side_leaves_uncovered_elements(p in closed_pair_strategy()) {
        if !p.a().is_antichain() {
            prop_assert_ne!(p.b().support_union(), SubsetMask::full(p.n()));
        }
        if !p.b().is_antichain() {
            prop_assert_ne!(p.a().support_union(), SubsetMask::full(p.n()));
        }
    }

    #[test]
    fn normalization_of_submaximal_pairs_never_gains(
        p in closed_pair_strategy(),
        drop_a in any::<prop::sample::Index>(),
    ) {
        // Dropping a member keeps the cross property; only <= survives.
        if p.a().len() < 2 {
            return Ok(());
        }
        let skip = drop_a.index(p.a().len());
        let a = Family::new(p.n(), p.a().iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, m)| m)).unwrap();
        let sub = CrossPair::new(a, p.b().clone(), p.ell()).unwrap();
        if let Ok((q, t)) = normalize_pair(&sub) {
            prop_assert!(sub.product() <= q.product() << (t.original_n - t.reduced_n));
        }
    }
}

#[test]
fn normalize_fixtures() {
    let p = CrossPair::new(fam(3, &[&[1], &[1, 3]]), fam(3, &[&[1], &[1, 2]]), 1).unwrap();
    let (q, t) = normalize_pair(&p).unwrap();
    assert_eq!(t.removed_from_a_side, vec![3]);
    assert_eq!(t.removed_from_b_side, vec![2]);
    assert_eq!(q.n(), 1);
    assert_eq!(p.product(), q.product() << 2);

    let bad = CrossPair::new(fam(2, &[&[1]]), fam(2, &[&[2]]), 1).unwrap();
    assert!(normalize_pair(&bad).is_err());
}

#[test]
fn canonical_products_and_cross_property_up_to_twelve() {
    for ell in 0..=4 {
        for n in 1..=12 {
            for p in legal_params(n, ell) {
                let c = canonical_pair(&p).unwrap();
                assert!(brute_cross(&c), "{p}");
                assert_eq!(c.product(), p.product(), "{p}");
                if n >= 2 * ell {
                    let conj = common::binom(2 * ell as u64, ell as u64) << (n - 2 * ell);
                    assert_eq!(c.product(), u128::from(conj), "{p}");
                }
            }
        }
    }
}

#[test]
fn acz_is_swapped_canonical() {
    for ell in 1..=3 {
        for n in 2 * ell..=10 {
            let c = canonical_pair(&CanonicalParams::new(n, ell, 2 * ell, 0, n).unwrap()).unwrap();
            assert_eq!(acz_pair(n, ell).unwrap(), c.swapped(), "n={n}, ell={ell}");
        }
    }
}

#[test]
fn normalized_regime_is_a_fixed_point() {
    for ell in 1..=4 {
        for n in 1..=12 {
            for p in legal_params(n, ell).into_iter().filter(|p| p.nprime == n && p.kappa + p.tau == n) {
                let c = canonical_pair(&p).unwrap();
                let (q, t) = normalize_pair(&c).unwrap();
                assert!(t.is_empty(), "{p}");
                assert_eq!(q, c);
                assert!(c.a().is_antichain() && c.b().is_antichain());
            }
        }
    }
}
