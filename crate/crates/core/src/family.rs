//! Subsets of a small ground set, families of them, and cross pairs.
//!
//! Elements are 1-based at every public boundary (`from_elements`,
//! `elements`, the `.fam` format) and 0-based bit positions internally:
//! element `i` lives in bit `i - 1`.

use std::fmt;

use crate::error::{Error, Result};

/// Largest supported ground set. Masks are a single `u32`.
pub const MAX_N: usize = 24;

/// A subset of `[n]` stored as a bit mask.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct SubsetMask(u32);

impl SubsetMask {
    pub const EMPTY: SubsetMask = SubsetMask(0);

    /// Mask with bits outside the low `n` rejected.
    pub fn from_bits(bits: u32, n: usize) -> Result<Self> {
        if bits & !full_bits(n) != 0 {
            return Err(Error::Structural(format!(
                "mask {bits:#x} has bits outside a ground set of size {n}"
            )));
        }
        Ok(SubsetMask(bits))
    }

    /// Raw constructor; callers guarantee the bits fit their ground set.
    #[inline]
    pub(crate) const fn raw(bits: u32) -> Self {
        SubsetMask(bits)
    }

    /// Build from 1-based element indices.
    pub fn from_elements<I: IntoIterator<Item = usize>>(elements: I, n: usize) -> Result<Self> {
        let mut bits = 0u32;
        for e in elements {
            if e == 0 || e > n {
                return Err(Error::Structural(format!(
                    "element {e} outside ground set [1, {n}]"
                )));
            }
            bits |= 1 << (e - 1);
        }
        Ok(SubsetMask(bits))
    }

    /// The whole ground set `[n]`.
    pub fn full(n: usize) -> Self {
        SubsetMask(full_bits(n))
    }

    /// The prefix `{1, ..., s}`.
    pub fn prefix(s: usize) -> Self {
        SubsetMask(full_bits(s))
    }

    #[inline]
    pub fn bits(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Membership of the 1-based element `e`.
    #[inline]
    pub fn contains(self, e: usize) -> bool {
        (1..=32).contains(&e) && self.0 >> (e - 1) & 1 == 1
    }

    /// 1-based elements in ascending order.
    pub fn elements(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let tz = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(tz + 1)
            }
        })
    }

    #[inline]
    pub fn intersection(self, other: SubsetMask) -> SubsetMask {
        SubsetMask(self.0 & other.0)
    }

    #[inline]
    pub fn union(self, other: SubsetMask) -> SubsetMask {
        SubsetMask(self.0 | other.0)
    }

    #[inline]
    pub fn difference(self, other: SubsetMask) -> SubsetMask {
        SubsetMask(self.0 & !other.0)
    }

    #[inline]
    pub fn is_subset_of(self, other: SubsetMask) -> bool {
        self.0 & !other.0 == 0
    }

    /// Image under a permutation given as 0-based images: bit `i` moves to
    /// bit `perm[i]`.
    pub fn permute(self, perm: &[usize]) -> SubsetMask {
        let mut out = 0u32;
        let mut bits = self.0;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            out |= 1 << perm[i];
        }
        SubsetMask(out)
    }

    /// Delete the positions set in `removed` and close up the gaps, so the
    /// survivors are renumbered consecutively from 1.
    pub fn compress(self, removed: SubsetMask) -> SubsetMask {
        let mut out = 0u32;
        let mut pos = 0;
        let mut keep = !removed.0;
        let mut i = 0;
        while i < 32 {
            if keep & 1 == 1 {
                out |= ((self.0 >> i) & 1) << pos;
                pos += 1;
            }
            keep >>= 1;
            i += 1;
        }
        SubsetMask(out)
    }
}

impl fmt::Debug for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.elements().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

#[inline]
pub(crate) fn full_bits(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// `|A ∩ B|`.
#[inline]
pub fn intersect_size(a: SubsetMask, b: SubsetMask) -> u32 {
    (a.0 & b.0).count_ones()
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 || n > MAX_N {
        return Err(Error::Parameter(format!(
            "ground set size {n} outside [1, {MAX_N}]"
        )));
    }
    Ok(())
}

/// A set of subsets of `[n]`, kept sorted by mask value without duplicates.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Family {
    n: usize,
    members: Vec<SubsetMask>,
}

impl Family {
    /// Collects members, sorting and deduplicating them.
    pub fn new<I: IntoIterator<Item = SubsetMask>>(n: usize, members: I) -> Result<Self> {
        check_n(n)?;
        let full = full_bits(n);
        let mut members: Vec<SubsetMask> = members.into_iter().collect();
        if let Some(bad) = members.iter().find(|m| m.0 & !full != 0) {
            return Err(Error::Structural(format!(
                "member {bad:?} lies outside a ground set of size {n}"
            )));
        }
        members.sort_unstable();
        members.dedup();
        Ok(Family { n, members })
    }

    /// Members given as lists of 1-based elements.
    pub fn from_sets<S, I>(n: usize, sets: S) -> Result<Self>
    where
        S: IntoIterator<Item = I>,
        I: IntoIterator<Item = usize>,
    {
        let members = sets
            .into_iter()
            .map(|s| SubsetMask::from_elements(s, n))
            .collect::<Result<Vec<_>>>()?;
        Family::new(n, members)
    }

    pub fn empty(n: usize) -> Result<Self> {
        Family::new(n, std::iter::empty())
    }

    /// All `2^n` subsets of `[n]`.
    pub fn power_set(n: usize) -> Result<Self> {
        check_n(n)?;
        Ok(Family {
            n,
            members: (0..=full_bits(n)).map(SubsetMask).collect(),
        })
    }

    /// Callers guarantee sorted, deduplicated, in-range members.
    pub(crate) fn from_sorted_unchecked(n: usize, members: Vec<SubsetMask>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        Family { n, members }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.members.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    #[inline]
    pub fn members(&self) -> &[SubsetMask] {
        &self.members
    }

    pub fn iter(&self) -> impl Iterator<Item = SubsetMask> + '_ {
        self.members.iter().copied()
    }

    pub fn contains(&self, m: SubsetMask) -> bool {
        self.members.binary_search(&m).is_ok()
    }

    /// Bitwise union of all members.
    pub fn support_union(&self) -> SubsetMask {
        SubsetMask(self.members.iter().fold(0, |acc, m| acc | m.0))
    }

    /// No member is contained in a distinct member.
    pub fn is_antichain(&self) -> bool {
        // Sorted by value, so a proper superset always comes later.
        for (i, &x) in self.members.iter().enumerate() {
            for &y in &self.members[i + 1..] {
                if x.is_subset_of(y) {
                    return false;
                }
            }
        }
        true
    }

    /// Apply a permutation of the ground set (0-based images).
    pub fn permute(&self, perm: &[usize]) -> Family {
        let mut members: Vec<SubsetMask> = self.members.iter().map(|m| m.permute(perm)).collect();
        members.sort_unstable();
        Family {
            n: self.n,
            members,
        }
    }

    /// Project onto `[n] \ removed` and renumber the survivors.
    pub fn compress(&self, removed: SubsetMask) -> Result<Family> {
        let n = self.n - removed.intersection(SubsetMask::full(self.n)).len() as usize;
        Family::new(n, self.members.iter().map(|m| m.compress(removed)))
    }

    /// Cartesian product with all subsets of `free`: every `F ∪ S` with
    /// `S ⊆ free`. `free` must be disjoint from every member.
    pub fn times_power_set(&self, free: SubsetMask) -> Family {
        let mut out = Vec::with_capacity(self.members.len() << free.len());
        for &m in &self.members {
            debug_assert!(m.intersection(free).is_empty());
            // Enumerate submasks of `free`.
            let mut sub = free.0;
            loop {
                out.push(SubsetMask(m.0 | sub));
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & free.0;
            }
        }
        out.sort_unstable();
        out.dedup();
        Family {
            n: self.n,
            members: out,
        }
    }
}

impl fmt::Debug for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.members.iter()).finish()
    }
}

/// Two families on a shared ground set together with the target
/// intersection size `ell`.
#[derive(Clone)]
pub struct CrossPair {
    pub(crate) a: Family,
    pub(crate) b: Family,
    pub(crate) ell: usize,
    /// Cached result of a cross check; not part of the value.
    pub(crate) verified: bool,
}

impl PartialEq for CrossPair {
    fn eq(&self, other: &Self) -> bool {
        self.ell == other.ell && self.a == other.a && self.b == other.b
    }
}

impl Eq for CrossPair {}

impl std::hash::Hash for CrossPair {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.a.hash(state);
        self.b.hash(state);
        self.ell.hash(state);
    }
}

impl CrossPair {
    pub fn new(a: Family, b: Family, ell: usize) -> Result<Self> {
        if a.n != b.n {
            return Err(Error::Structural(format!(
                "families live on ground sets of sizes {} and {}",
                a.n, b.n
            )));
        }
        Ok(CrossPair {
            a,
            b,
            ell,
            verified: false,
        })
    }

    pub fn a(&self) -> &Family {
        &self.a
    }

    pub fn b(&self) -> &Family {
        &self.b
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn n(&self) -> usize {
        self.a.n
    }

    /// Set once `verify` has confirmed the cross property.
    pub fn is_verified(&self) -> bool {
        self.verified
    }

    /// `|A| * |B|`.
    pub fn product(&self) -> u128 {
        self.a.len() as u128 * self.b.len() as u128
    }

    /// Checks the cross property and records the outcome in the
    /// `verified` flag.
    pub fn verify(&mut self) -> bool {
        self.verified = is_cross_intersecting(self);
        self.verified
    }

    pub(crate) fn with_verified(mut self, v: bool) -> Self {
        self.verified = v;
        self
    }

    /// The same pair with the roles of `A` and `B` exchanged.
    pub fn swapped(&self) -> CrossPair {
        CrossPair {
            a: self.b.clone(),
            b: self.a.clone(),
            ell: self.ell,
            verified: self.verified,
        }
    }

    /// Relabel the ground set on both sides (0-based images).
    pub fn permute(&self, perm: &[usize]) -> CrossPair {
        CrossPair {
            a: self.a.permute(perm),
            b: self.b.permute(perm),
            ell: self.ell,
            verified: self.verified,
        }
    }
}

impl fmt::Debug for CrossPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CrossPair")
            .field("n", &self.n())
            .field("ell", &self.ell)
            .field("a", &self.a)
            .field("b", &self.b)
            .finish()
    }
}

/// Every `(A, B)` in `a × b` meets in exactly `ell` elements.
pub fn is_cross_intersecting(p: &CrossPair) -> bool {
    cross_intersects(&p.a, &p.b, p.ell)
}

/// Cross property on two loose families; mismatched ground sets are a
/// structural error.
pub fn check_cross(a: &Family, b: &Family, ell: usize) -> Result<bool> {
    if a.n != b.n {
        return Err(Error::Structural(format!(
            "families live on ground sets of sizes {} and {}",
            a.n, b.n
        )));
    }
    Ok(cross_intersects(a, b, ell))
}

fn cross_intersects(a: &Family, b: &Family, ell: usize) -> bool {
    let ell = ell as u32;
    a.members
        .iter()
        .all(|&x| b.members.iter().all(|&y| intersect_size(x, y) == ell))
}

/// Elements peeled off by [`normalize_pair`], in original 1-based labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionTrace {
    /// Elements no member of `B` contains; they carry the free `2^X`
    /// factor on the `A` side.
    pub removed_from_a_side: Vec<usize>,
    /// Elements no member of `A` contains (the `2^Y` factor on `B`).
    pub removed_from_b_side: Vec<usize>,
    pub original_n: usize,
    pub reduced_n: usize,
}

impl ReductionTrace {
    pub fn is_empty(&self) -> bool {
        self.removed_from_a_side.is_empty() && self.removed_from_b_side.is_empty()
    }
}

/// Restrict a cross-intersecting pair to the elements covered by both
/// sides.
///
/// An element outside `∪B` is deleted from the `A` side, and an element
/// outside `∪A` (and inside `∪B`) from the `B` side; intersections are
/// unchanged. Elements are processed in ascending order. On the reduced
/// ground set both supports are full, so both families are antichains.
///
/// For a maximal pair each peeled element is free on its side and
/// `|A||B| = 2^(n - n') |A'||B'|`. For a non-maximal pair only `≤` holds.
pub fn normalize_pair(p: &CrossPair) -> Result<(CrossPair, ReductionTrace)> {
    if p.a.is_empty() || p.b.is_empty() {
        return Err(Error::Precondition(
            "normalization needs both families nonempty".into(),
        ));
    }
    if !is_cross_intersecting(p) {
        return Err(Error::Precondition(format!(
            "pair is not {}-cross-intersecting",
            p.ell
        )));
    }
    let n = p.n();
    let full = SubsetMask::full(n);
    let x = full.difference(p.b.support_union());
    let y = full.difference(p.a.support_union()).difference(x);
    let removed = x.union(y);
    let trace = ReductionTrace {
        removed_from_a_side: x.elements().collect(),
        removed_from_b_side: y.elements().collect(),
        original_n: n,
        reduced_n: n - removed.len() as usize,
    };
    if removed.is_empty() {
        return Ok((p.clone().with_verified(true), trace));
    }
    if trace.reduced_n == 0 {
        // Only possible when both sides are {∅} (ell = 0).
        return Err(Error::Precondition(
            "pair reduces to an empty ground set".into(),
        ));
    }
    let a = p.a.compress(removed)?;
    let b = p.b.compress(removed)?;
    let out = CrossPair::new(a, b, p.ell)?.with_verified(true);
    Ok((out, trace))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(el: &[usize], n: usize) -> SubsetMask {
        SubsetMask::from_elements(el.iter().copied(), n).unwrap()
    }

    fn fam(n: usize, sets: &[&[usize]]) -> Family {
        Family::from_sets(n, sets.iter().map(|s| s.iter().copied())).unwrap()
    }

    #[test]
    fn intersect_size_examples() {
        assert_eq!(intersect_size(m(&[1, 3], 3), m(&[2, 3], 3)), 1);
        assert_eq!(intersect_size(m(&[], 2), m(&[1, 2], 2)), 0);
        assert_eq!(intersect_size(m(&[1, 2, 3], 3), m(&[1, 2, 3], 3)), 3);
    }

    #[test]
    fn mask_rejects_high_bits() {
        assert!(SubsetMask::from_bits(0b1000, 3).is_err());
        assert!(SubsetMask::from_bits(0b111, 3).is_ok());
        assert!(SubsetMask::from_elements([0], 3).is_err());
        assert!(SubsetMask::from_elements([4], 3).is_err());
    }

    #[test]
    fn element_indexing_round_trips() {
        for bits in 0..(1u32 << 6) {
            let s = SubsetMask::from_bits(bits, 6).unwrap();
            let back = SubsetMask::from_elements(s.elements(), 6).unwrap();
            assert_eq!(s, back);
        }
        assert!(m(&[1], 3).bits() == 1);
    }

    #[test]
    fn family_is_sorted_and_deduplicated() {
        let f = fam(3, &[&[2], &[1, 3], &[2], &[]]);
        assert_eq!(f.members(), &[m(&[], 3), m(&[2], 3), m(&[1, 3], 3)]);
        assert!(Family::new(0, []).is_err());
        assert!(Family::new(25, []).is_err());
    }

    #[test]
    fn cross_intersecting_examples() {
        let p = CrossPair::new(fam(2, &[&[1]]), fam(2, &[&[2]]), 1).unwrap();
        assert!(!is_cross_intersecting(&p));

        let a = Family::new(4, (0..4).map(SubsetMask::raw)).unwrap();
        let b = Family::new(4, (0..4).map(|b| SubsetMask::raw(b << 2))).unwrap();
        let mut p = CrossPair::new(a, b, 0).unwrap();
        assert!(!p.is_verified());
        assert!(p.verify());
        assert!(p.is_verified());
    }

    #[test]
    fn mismatched_ground_sets_are_structural_errors() {
        let a = fam(2, &[&[1]]);
        let b = fam(3, &[&[1]]);
        assert!(matches!(CrossPair::new(a.clone(), b.clone(), 1), Err(Error::Structural(_))));
        assert!(matches!(check_cross(&a, &b, 1), Err(Error::Structural(_))));
    }

    #[test]
    fn antichain_examples() {
        let layer = Family::new(4, (0..16u32).filter(|b| b.count_ones() == 2).map(SubsetMask::raw))
            .unwrap();
        assert!(layer.is_antichain());
        assert!(!fam(2, &[&[1], &[1, 2]]).is_antichain());
        assert!(Family::empty(3).unwrap().is_antichain());
    }

    #[test]
    fn support_union_examples() {
        assert_eq!(fam(3, &[&[1], &[2, 3]]).support_union(), m(&[1, 2, 3], 3));
        assert_eq!(fam(4, &[&[1, 2]]).support_union(), m(&[1, 2], 4));
        assert_eq!(Family::empty(4).unwrap().support_union(), SubsetMask::EMPTY);
    }

    #[test]
    fn normalized_pair_is_left_alone() {
        let p = CrossPair::new(fam(3, &[&[1, 3], &[2]]), fam(3, &[&[1, 2], &[2, 3]]), 1).unwrap();
        let (q, trace) = normalize_pair(&p).unwrap();
        assert!(trace.is_empty());
        assert_eq!(q.a(), p.a());
        assert_eq!(q.b(), p.b());
        assert_eq!(trace.reduced_n, 3);
    }

    #[test]
    fn normalize_rejects_bad_input() {
        let p = CrossPair::new(fam(2, &[&[1]]), fam(2, &[&[2]]), 1).unwrap();
        assert!(matches!(normalize_pair(&p), Err(Error::Precondition(_))));
        let p = CrossPair::new(Family::empty(2).unwrap(), fam(2, &[&[2]]), 1).unwrap();
        assert!(matches!(normalize_pair(&p), Err(Error::Precondition(_))));
    }

    #[test]
    fn compress_closes_gaps() {
        let s = m(&[1, 3, 5], 5);
        assert_eq!(s.compress(m(&[2], 5)), m(&[1, 2, 4], 4));
        assert_eq!(s.compress(m(&[1, 2], 5)), m(&[1, 3], 3));
    }

    #[test]
    fn times_power_set_counts() {
        let f = fam(4, &[&[1], &[2]]);
        let g = f.times_power_set(m(&[3, 4], 4));
        assert_eq!(g.len(), 8);
    }
}
