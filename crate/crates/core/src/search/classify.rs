//! Matching pairs against the canonical extremal family up to relabeling
//! and swapping sides.

use serde::Serialize;

use super::{max_product, SearchConfig};
use crate::constructions::{canonical_pair, legal_params, CanonicalParams};
use crate::error::{Error, Result};
use crate::family::{is_cross_intersecting, CrossPair, Family};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassificationResult {
    pub matched: bool,
    pub params: Option<CanonicalParams>,
    pub swapped: bool,
    /// 0-based images: element `i + 1` of the (possibly swapped) canonical
    /// pair becomes element `relabeling[i] + 1` of the input. Empty when
    /// unmatched.
    pub relabeling: Vec<usize>,
    /// Matched with `ℓ = 0, κ = 0`, which the extremal theorem does not
    /// cover.
    pub extension: bool,
}

impl ClassificationResult {
    fn unmatched() -> Self {
        ClassificationResult {
            matched: false,
            params: None,
            swapped: false,
            relabeling: Vec::new(),
            extension: false,
        }
    }
}

/// Per element: how many `A` members and how many `B` members contain it.
fn signatures(p: &CrossPair) -> Vec<(usize, usize)> {
    let deg = |f: &Family, e: usize| f.iter().filter(|m| m.contains(e)).count();
    (1..=p.n()).map(|e| (deg(p.a(), e), deg(p.b(), e))).collect()
}

fn same_shape(p: &CrossPair, q: &CrossPair) -> bool {
    p.n() == q.n() && p.ell() == q.ell() && p.a().len() == q.a().len() && p.b().len() == q.b().len()
}

struct Matcher<'a> {
    src: &'a CrossPair,
    dst: &'a CrossPair,
    order: Vec<usize>,
    cands: Vec<Vec<usize>>,
}

impl Matcher<'_> {
    /// The members of `src` restricted to the assigned elements and mapped
    /// across agree, as multisets, with those of `dst` restricted to the
    /// image.
    fn consistent(&self, perm: &[Option<usize>], image: u32) -> bool {
        let side = |s: &Family, d: &Family| {
            let mut x: Vec<u32> = s
                .iter()
                .map(|m| {
                    let mut out = 0u32;
                    for (i, t) in perm.iter().enumerate() {
                        if let Some(t) = t {
                            if m.bits() >> i & 1 == 1 {
                                out |= 1 << t;
                            }
                        }
                    }
                    out
                })
                .collect();
            let mut y: Vec<u32> = d.iter().map(|m| m.bits() & image).collect();
            x.sort_unstable();
            y.sort_unstable();
            x == y
        };
        side(self.src.a(), self.dst.a()) && side(self.src.b(), self.dst.b())
    }

    fn search(&self, depth: usize, perm: &mut Vec<Option<usize>>, image: u32) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let e = self.order[depth];
        for &t in &self.cands[e] {
            if image >> t & 1 == 1 {
                continue;
            }
            perm[e] = Some(t);
            let next = image | 1 << t;
            if self.consistent(perm, next) && self.search(depth + 1, perm, next) {
                return true;
            }
            perm[e] = None;
        }
        false
    }
}

/// A permutation `π` (0-based images) with `src.permute(π) == dst`, found
/// by backtracking over elements with matching incidence counts.
pub fn find_relabeling(src: &CrossPair, dst: &CrossPair) -> Option<Vec<usize>> {
    if !same_shape(src, dst) {
        return None;
    }
    let (ss, ds) = (signatures(src), signatures(dst));
    let (mut a, mut b) = (ss.clone(), ds.clone());
    a.sort_unstable();
    b.sort_unstable();
    if a != b {
        return None;
    }
    let n = src.n();
    let cands: Vec<Vec<usize>> = (0..n).map(|i| (0..n).filter(|&t| ds[t] == ss[i]).collect()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (cands[i].len(), i));
    let m = Matcher {
        src,
        dst,
        order,
        cands,
    };
    let mut perm = vec![None; n];
    if !m.search(0, &mut perm, 0) {
        return None;
    }
    let perm: Vec<usize> = perm.into_iter().map(|t| t.expect("complete")).collect();
    debug_assert_eq!(src.permute(&perm).a(), dst.a());
    Some(perm)
}

/// Equal up to relabeling and swapping sides.
pub fn isomorphic(p: &CrossPair, q: &CrossPair) -> bool {
    find_relabeling(p, q).is_some() || find_relabeling(&p.swapped(), q).is_some()
}

/// First canonical match in the order of [`legal_params`], unswapped
/// before swapped.
pub fn classify_extremal(p: &CrossPair) -> Result<ClassificationResult> {
    if !is_cross_intersecting(p) {
        return Err(Error::Precondition(format!(
            "pair is not {}-cross-intersecting",
            p.ell()
        )));
    }
    for params in legal_params(p.n(), p.ell()) {
        if params.product() != p.product() {
            continue;
        }
        let c = canonical_pair(&params)?;
        for swapped in [false, true] {
            let src = if swapped { c.swapped() } else { c.clone() };
            if let Some(relabeling) = find_relabeling(&src, p) {
                return Ok(ClassificationResult {
                    matched: true,
                    params: Some(params),
                    swapped,
                    relabeling,
                    extension: params.is_extension(),
                });
            }
        }
    }
    Ok(ClassificationResult::unmatched())
}

#[derive(Clone, Debug)]
pub struct OptimumClass {
    /// Least `.fam` encoding in the class.
    pub representative: CrossPair,
    /// Optima found in this class.
    pub members: usize,
    pub classification: ClassificationResult,
}

#[derive(Clone, Debug)]
pub struct OptimaReport {
    pub n: usize,
    pub ell: usize,
    pub value: u64,
    pub optima_found: usize,
    pub classes: Vec<OptimumClass>,
}

impl OptimaReport {
    pub fn unmatched(&self) -> impl Iterator<Item = &OptimumClass> {
        self.classes.iter().filter(|c| !c.classification.matched)
    }
}

/// All optima, grouped up to relabeling and swap, each class classified.
/// Unmatched classes are reported, never dropped.
pub fn enumerate_optima(n: usize, ell: usize, cfg: &SearchConfig) -> Result<OptimaReport> {
    let report = max_product(n, ell, &cfg.clone().with_all_optima(true))?;
    let mut classes: Vec<OptimumClass> = Vec::new();
    for w in report.witnesses {
        if let Some(c) = classes.iter_mut().find(|c| isomorphic(&c.representative, &w)) {
            c.members += 1;
            continue;
        }
        let classification = classify_extremal(&w)?;
        classes.push(OptimumClass {
            representative: w,
            members: 1,
            classification,
        });
    }
    Ok(OptimaReport {
        n,
        ell,
        value: report.value,
        optima_found: report.optima_found,
        classes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::acz_pair;

    fn fam(n: usize, sets: &[&[usize]]) -> Family {
        Family::from_sets(n, sets.iter().map(|s| s.iter().copied())).unwrap()
    }

    #[test]
    fn canonical_round_trip_is_identity() {
        let params = CanonicalParams::new(3, 1, 2, 1, 3).unwrap();
        let r = classify_extremal(&canonical_pair(&params).unwrap()).unwrap();
        assert!(r.matched);
        assert_eq!(r.params, Some(params));
        assert!(!r.swapped);
        assert_eq!(r.relabeling, vec![0, 1, 2]);
    }

    #[test]
    fn acz_is_swapped_tau_zero() {
        let r = classify_extremal(&acz_pair(4, 1).unwrap()).unwrap();
        assert!(r.matched);
        assert!(r.swapped);
        let p = r.params.unwrap();
        assert_eq!((p.kappa, p.tau, p.nprime), (2, 0, 4));
    }

    #[test]
    fn suboptimal_pair_is_unmatched() {
        let p = CrossPair::new(fam(2, &[&[1]]), fam(2, &[&[1]]), 1).unwrap();
        assert!(!classify_extremal(&p).unwrap().matched);
        let bad = CrossPair::new(fam(2, &[&[1]]), fam(2, &[&[2]]), 1).unwrap();
        assert!(matches!(classify_extremal(&bad), Err(Error::Precondition(_))));
    }

    #[test]
    fn relabeled_input_is_found() {
        let params = CanonicalParams::new(6, 2, 3, 2, 6).unwrap();
        let c = canonical_pair(&params).unwrap();
        let perm = vec![4, 0, 5, 2, 1, 3];
        let q = c.permute(&perm).swapped();
        let r = classify_extremal(&q).unwrap();
        assert!(r.matched);
        let base = canonical_pair(&r.params.unwrap()).unwrap();
        let base = if r.swapped { base.swapped() } else { base };
        assert_eq!(base.permute(&r.relabeling), q);
    }

    #[test]
    fn optima_small_cases() {
        let r = enumerate_optima(2, 1, &SearchConfig::for_n(2)).unwrap();
        assert_eq!(r.value, 2);
        assert_eq!(r.unmatched().count(), 0);

        let r = enumerate_optima(3, 0, &SearchConfig::for_n(3)).unwrap();
        assert_eq!(r.value, 8);
        assert!(r.classes.iter().all(|c| c.classification.matched && c.classification.extension));
    }
}
