//! Helpers shared by the integration tests. Nothing here calls into the
//! search engine, so the oracle stays independent of it.

#![allow(dead_code)]

use std::collections::BTreeSet;

use crossint::family::{CrossPair, Family, SubsetMask};

/// `P_ℓ(n)` by brute force: every subfamily `F` of `2^[n]` is closed up
/// (`B = β(F)`, `A = β(B)`) and the largest product over the distinct
/// closed pairs with both sides nonempty is returned. Feasible for `n ≤ 4`.
pub fn naive_max_product(n: usize, ell: usize) -> u64 {
    assert!(n <= 4, "2^(2^n) subfamilies");
    let universe = 1usize << n;
    let beta = |f: u32| -> u32 {
        let mut out = 0u32;
        for y in 0..universe {
            let ok = (0..universe)
                .filter(|x| f >> x & 1 == 1)
                .all(|x| (x & y).count_ones() as usize == ell);
            if ok {
                out |= 1 << y;
            }
        }
        out
    };
    let mut closed: BTreeSet<(u32, u32)> = BTreeSet::new();
    for f in 0..(1u64 << universe) {
        let b = beta(f as u32);
        let a = beta(b);
        closed.insert((a, b));
    }
    closed
        .iter()
        .filter(|(a, b)| *a != 0 && *b != 0)
        .map(|(a, b)| u64::from(a.count_ones()) * u64::from(b.count_ones()))
        .max()
        .unwrap_or(0)
}

pub fn fam(n: usize, sets: &[&[usize]]) -> Family {
    Family::from_sets(n, sets.iter().map(|s| s.iter().copied())).unwrap()
}

pub fn family_from_bits(n: usize, bits: &[u32]) -> Family {
    Family::new(n, bits.iter().map(|&b| SubsetMask::from_bits(b, n).unwrap())).unwrap()
}

/// `(A, B)` cross-intersecting by direct pairwise counting.
pub fn brute_cross(p: &CrossPair) -> bool {
    p.a()
        .iter()
        .all(|x| p.b().iter().all(|y| x.intersection(y).len() as usize == p.ell()))
}

pub fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}
