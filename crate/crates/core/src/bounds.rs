//! Counting bounds: Sperner, the bipartite LYM sum, Littlewood–Offord
//! interval counts, the sumset fact, and the upper and lower bounds on the
//! maximum cross product.
//!
//! Everything is exact: integers are `BigUint`, reals are `BigRational`.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::family::{Family, SubsetMask};

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    num_integer::binomial(BigUint::from(n), BigUint::from(k))
}

pub fn pow2(e: usize) -> BigUint {
    BigUint::one() << e
}

/// `C(n, ⌊n/2⌋)`, the largest antichain in `2^[n]`.
pub fn sperner_bound(n: usize) -> BigUint {
    binomial(n, n / 2)
}

/// `2^n` for `ell = 0`, otherwise `2^(n-1)`.
pub fn frankl_rodl_bound(n: usize, ell: usize) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::Parameter("frankl_rodl_bound needs n >= 1".into()));
    }
    Ok(if ell == 0 { pow2(n) } else { pow2(n - 1) })
}

/// `C(2ℓ, ℓ) 2^(n-2ℓ)`: the value of the single-set construction, and the
/// conjectured maximum.
pub fn conjectured_max(n: usize, ell: usize) -> Result<BigUint> {
    if n < 2 * ell {
        return Err(Error::Parameter(format!(
            "conjectured_max needs n >= 2*ell (n = {n}, ell = {ell})"
        )));
    }
    Ok(binomial(2 * ell, ell) << (n - 2 * ell))
}

fn check_u(f: &Family, u: usize) -> Result<()> {
    if u > f.n() {
        return Err(Error::Parameter(format!("u = {u} exceeds n = {}", f.n())));
    }
    Ok(())
}

/// `(|A ∩ U|, |A ∩ V|)` with `U = [u]`, `V = [n] \ U`.
fn split_sizes(a: SubsetMask, u: usize) -> (usize, usize) {
    let lo = a.intersection(SubsetMask::prefix(u)).len() as usize;
    (lo, a.len() as usize - lo)
}

/// `Σ 1 / (C(u, |A_U|) C(n-u, |A_V|))` over the members of `f`.
pub fn lym_sum(f: &Family, u: usize) -> Result<BigRational> {
    check_u(f, u)?;
    let n = f.n();
    let mut sum = BigRational::zero();
    for a in f.iter() {
        let (cu, cv) = split_sizes(a, u);
        let den = binomial(u, cu) * binomial(n - u, cv);
        sum += BigRational::new(BigInt::one(), BigInt::from(den));
    }
    Ok(sum)
}

/// Every two distinct members have incomparable traces on `U = [u]` or
/// incomparable traces on `V`. Equal traces count as comparable.
pub fn split_incomparable(f: &Family, u: usize) -> Result<bool> {
    check_u(f, u)?;
    let umask = SubsetMask::prefix(u);
    let comparable = |x: SubsetMask, y: SubsetMask| x.is_subset_of(y) || y.is_subset_of(x);
    let m = f.members();
    for (i, &a) in m.iter().enumerate() {
        for &b in &m[i + 1..] {
            let (au, bu) = (a.intersection(umask), b.intersection(umask));
            let (av, bv) = (a.difference(umask), b.difference(umask));
            if comparable(au, bu) && comparable(av, bv) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `f` is an antichain and `|A ∩ V|` is a monotone non-decreasing function
/// of `|A ∩ U|` over its members.
pub fn bipartite_hypothesis(f: &Family, u: usize) -> Result<bool> {
    check_u(f, u)?;
    if !f.is_antichain() {
        return Ok(false);
    }
    let mut graph = std::collections::BTreeMap::new();
    for a in f.iter() {
        let (cu, cv) = split_sizes(a, u);
        if *graph.entry(cu).or_insert(cv) != cv {
            return Ok(false);
        }
    }
    // BTreeMap iterates keys ascending; values must not decrease.
    Ok(graph.values().zip(graph.values().skip(1)).all(|(x, y)| x <= y))
}

/// `C(u, ⌊u/2⌋) C(n-u, ⌊(n-u)/2⌋)`.
pub fn bipartite_bound(u: usize, n: usize) -> Result<BigUint> {
    if u > n {
        return Err(Error::Parameter(format!("u = {u} exceeds n = {n}")));
    }
    Ok(sperner_bound(u) * sperner_bound(n - u))
}

/// Order in which the binomial coefficients `C(n, ·)` are taken: the centre
/// `⌊n/2⌋` first, then alternately one step above and one step below.
pub fn middle_order(n: usize) -> Vec<usize> {
    let mid = n / 2;
    let mut out = vec![mid];
    for d in 1..=n {
        if mid + d <= n {
            out.push(mid + d);
        }
        if d <= mid {
            out.push(mid - d);
        }
    }
    out
}

/// Sum of the `m` largest binomial coefficients `C(n, ·)`.
pub fn middle_binomial_sum(n: usize, m: usize) -> Result<BigUint> {
    if m > n + 1 {
        return Err(Error::Parameter(format!(
            "cannot take {m} coefficients from row {n}"
        )));
    }
    Ok(middle_order(n)
        .into_iter()
        .take(m)
        .map(|k| binomial(n, k))
        .sum())
}

/// Disjoint, sorted half-open intervals `[lo, hi)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalUnion {
    intervals: Vec<(BigRational, BigRational)>,
}

impl IntervalUnion {
    pub fn new(intervals: Vec<(BigRational, BigRational)>) -> Result<Self> {
        for (lo, hi) in &intervals {
            if lo >= hi {
                return Err(Error::Parameter(format!("empty interval [{lo}, {hi})")));
            }
        }
        for w in intervals.windows(2) {
            if w[0].1 > w[1].0 {
                return Err(Error::Parameter(
                    "intervals must be sorted and pairwise disjoint".into(),
                ));
            }
        }
        Ok(IntervalUnion { intervals })
    }

    /// Convenience for integer endpoints.
    pub fn from_ints(intervals: &[(i64, i64)]) -> Result<Self> {
        IntervalUnion::new(
            intervals
                .iter()
                .map(|&(lo, hi)| (BigRational::from_integer(lo.into()), BigRational::from_integer(hi.into())))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn intervals(&self) -> &[(BigRational, BigRational)] {
        &self.intervals
    }

    pub fn max_width(&self) -> Option<BigRational> {
        self.intervals.iter().map(|(lo, hi)| hi - lo).max()
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        self.intervals.iter().any(|(lo, hi)| lo <= x && x < hi)
    }
}

/// Largest number of subsets of a 24-element list this will enumerate.
pub const LO_MAX_TERMS: usize = 24;

/// Number of subsets `I ⊆ [|a|]` (the empty set included) whose sum
/// `Σ_{i∈I} a_i` falls in `t`. Enumerates all `2^|a|` subsets.
pub fn lo_count(a: &[BigRational], t: &IntervalUnion) -> Result<u64> {
    if a.len() > LO_MAX_TERMS {
        return Err(Error::Precondition(format!(
            "lo_count enumerates at most {LO_MAX_TERMS} terms, got {}",
            a.len()
        )));
    }
    if a.iter().any(|x| x.is_zero()) {
        return Err(Error::Precondition("all terms must be nonzero".into()));
    }
    if let (Some(delta), Some(width)) = (a.iter().map(|x| x.abs()).min(), t.max_width()) {
        if width > delta {
            return Err(Error::Precondition(format!(
                "interval width {width} exceeds min |a_i| = {delta}"
            )));
        }
    }

    // Clear denominators so the enumeration runs on integers.
    let mut den = BigInt::one();
    for x in a {
        den = den.lcm(x.denom());
    }
    for (lo, hi) in t.intervals() {
        den = den.lcm(lo.denom()).lcm(hi.denom());
    }
    let scale = |x: &BigRational| -> BigInt { x.numer() * (&den / x.denom()) };
    let terms: Vec<BigInt> = a.iter().map(scale).collect();
    let bounds: Vec<(BigInt, BigInt)> = t.intervals().iter().map(|(l, h)| (scale(l), scale(h))).collect();

    let total: BigInt = terms.iter().map(|x| x.abs()).sum();
    let small = total.to_i128().is_some()
        && bounds
            .iter()
            .all(|(l, h)| l.to_i128().is_some() && h.to_i128().is_some());
    if small {
        let terms: Vec<i128> = terms.iter().map(|x| x.to_i128().unwrap()).collect();
        let bounds: Vec<(i128, i128)> = bounds
            .iter()
            .map(|(l, h)| (l.to_i128().unwrap(), h.to_i128().unwrap()))
            .collect();
        Ok(gray_count(&terms, |s| bounds.iter().any(|(l, h)| *l <= *s && *s < *h)))
    } else {
        Ok(gray_count(&terms, |s| bounds.iter().any(|(l, h)| l <= s && s < h)))
    }
}

/// Visit all subset sums in Gray-code order, one addition per step.
fn gray_count<T, F>(terms: &[T], hit: F) -> u64
where
    T: Clone + Zero + std::ops::AddAssign + std::ops::SubAssign,
    F: Fn(&T) -> bool,
{
    let mut sum = T::zero();
    let mut inside = vec![false; terms.len()];
    let mut count = u64::from(hit(&sum));
    for step in 1u64..(1u64 << terms.len()) {
        let i = step.trailing_zeros() as usize;
        if inside[i] {
            sum -= terms[i].clone();
        } else {
            sum += terms[i].clone();
        }
        inside[i] = !inside[i];
        count += u64::from(hit(&sum));
    }
    count
}

/// `A + B = {a + b}`.
pub fn sumset(a: &BTreeSet<BigRational>, b: &BTreeSet<BigRational>) -> Result<BTreeSet<BigRational>> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Precondition("sumset needs nonempty operands".into()));
    }
    Ok(a.iter().flat_map(|x| b.iter().map(move |y| x + y)).collect())
}
