//! Seeded randomized checks behind the hidden `selftest` subcommand.

use std::collections::BTreeSet;
use std::io::Write;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bounds::{lo_count, middle_binomial_sum, sumset, IntervalUnion};
use crate::error::Result;
use crate::fam::{decode_pair, encode_pair};
use crate::family::{is_cross_intersecting, normalize_pair, Family, SubsetMask};
use crate::search::{beta_operator, closure};

fn random_family(rng: &mut ChaCha8Rng, n: usize, max: usize) -> Family {
    let k = rng.gen_range(0..=max);
    let full = SubsetMask::full(n).bits();
    Family::new(
        n,
        (0..k).map(|_| SubsetMask::from_bits(rng.gen_range(0..=full), n).expect("in range")),
    )
    .expect("valid n")
}

fn is_subfamily(f: &Family, g: &Family) -> bool {
    f.iter().all(|m| g.contains(m))
}

fn galois(rng: &mut ChaCha8Rng) -> bool {
    let n = rng.gen_range(1..=5);
    let ell = rng.gen_range(0..=n.min(2));
    let f = random_family(rng, n, 4);
    let extra = random_family(rng, n, 2);
    let g = Family::new(n, f.iter().chain(extra.iter())).expect("valid n");
    let bf = beta_operator(&f, ell);
    let c = closure(&f, ell);
    is_subfamily(&beta_operator(&g, ell), &bf)
        && is_subfamily(&f, c.a())
        && beta_operator(c.a(), ell) == bf
}

fn normalization(rng: &mut ChaCha8Rng) -> bool {
    let n = rng.gen_range(2..=6);
    let ell = rng.gen_range(0..=2usize.min(n / 2));
    let f = random_family(rng, n, 3);
    let c = closure(&f, ell);
    if c.a().is_empty() || c.b().is_empty() {
        return true;
    }
    let Ok((q, t)) = normalize_pair(&c) else {
        // Only the all-{∅} pair reduces to nothing.
        return ell == 0;
    };
    // A closed pair is maximal, so the product identity is exact.
    is_cross_intersecting(&q)
        && q.a().is_antichain()
        && q.b().is_antichain()
        && c.product() == q.product() << (t.original_n - t.reduced_n)
}

fn littlewood_offord(rng: &mut ChaCha8Rng) -> bool {
    let len = rng.gen_range(1..=10);
    let den: i64 = rng.gen_range(1..=4);
    let a: Vec<BigRational> = (0..len)
        .map(|_| {
            let mut x: i64 = rng.gen_range(-6..=6);
            if x == 0 {
                x = 1;
            }
            BigRational::new(BigInt::from(x), BigInt::from(den))
        })
        .collect();
    let delta = a.iter().map(|x| x.abs()).min().expect("nonempty");
    let m = rng.gen_range(1..=3);
    let mut lo = BigRational::from_integer(BigInt::from(rng.gen_range(-8..=0)));
    let mut intervals = Vec::new();
    for _ in 0..m {
        let hi = &lo + &delta;
        intervals.push((lo.clone(), hi.clone()));
        lo = hi + BigRational::from_integer(BigInt::from(rng.gen_range(0..=2)));
    }
    let t = IntervalUnion::new(intervals).expect("sorted, disjoint");
    let count = lo_count(&a, &t).expect("legal instance");
    BigUint::from(count) <= middle_binomial_sum(len, m.min(len + 1)).expect("m <= len + 1")
}

fn sumsets(rng: &mut ChaCha8Rng) -> bool {
    let pick = |rng: &mut ChaCha8Rng| -> BTreeSet<BigRational> {
        let k = rng.gen_range(1..=6);
        (0..k)
            .map(|_| BigRational::new(BigInt::from(rng.gen_range(-20..=20)), BigInt::from(rng.gen_range(1..=3))))
            .collect()
    };
    let (a, b) = (pick(rng), pick(rng));
    sumset(&a, &b).expect("nonempty").len() + 1 >= a.len() + b.len()
}

fn round_trip(rng: &mut ChaCha8Rng) -> bool {
    let n = rng.gen_range(1..=6);
    let ell = rng.gen_range(0..=n);
    let c = closure(&random_family(rng, n, 3), ell);
    let text = encode_pair(&c);
    decode_pair(&text).map(|p| encode_pair(&p) == text).unwrap_or(false)
}

type Check = fn(&mut ChaCha8Rng) -> bool;

/// Runs `cases` instances of each check. Exit 0 when all pass, 1 otherwise.
pub fn run(seed: u64, cases: usize, out: &mut dyn Write) -> Result<i32> {
    let checks: [(&str, Check); 5] = [
        ("galois laws", galois),
        ("normalization", normalization),
        ("littlewood-offord", littlewood_offord),
        ("sumset", sumsets),
        ("fam round trip", round_trip),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failed = 0;
    for (name, check) in checks {
        let bad = (0..cases).filter(|_| !check(&mut rng)).count();
        writeln!(out, "{name:<20} {} / {cases} ok", cases - bad)?;
        failed += bad;
    }
    writeln!(out, "seed {seed}: {}", if failed == 0 { "pass" } else { "FAIL" })?;
    Ok(if failed == 0 { 0 } else { 1 })
}
