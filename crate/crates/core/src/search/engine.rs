//! Close-by-one enumeration of closed pairs.
//!
//! Objects are the `2^n` subsets, and `rows[x]` is the bitset of all `y`
//! with `|x ∩ y| = ℓ`. A node is a closed pair `(A, B)` with `B = β(A)`;
//! children add one object `j ≥ y` to `A` and close. A child whose closure
//! gains an object below `j` was already reached from a smaller generator
//! and is skipped, so every closed pair is visited once.
//!
//! Symmetry: swapping sides and relabeling `[n]` preserve the product, so
//! some optimum has a smallest member equal to `[s]`, lying in `A`. For
//! each `s` the search runs on the sets of size at least `s` and starts
//! from the closure of `{[s]}`. An optimum of the restricted relation is
//! maximal, hence closed, in the full one.
//!
//! Bounds at a node with `a = |A|` and candidate counts
//! `c_g = |B ∩ rows[g]|` sorted descending: a descendant adding `m`
//! objects has `|B'| ≤ c_(m)`, so its product is at most
//! `(a + m) c_(m)`. With the dimension bound, a descendant with
//! `|B'| = c'` also has `|A'| ≤ 2^(n - ⌈log2 c'⌉)`.

use std::sync::atomic::{AtomicU64, Ordering};
use std::time::Instant;

use rayon::prelude::*;

use super::{SearchConfig, SearchReport, ABSOLUTE_MAX_N};
use crate::bits;
use crate::bounds::binomial;
use crate::error::{Error, Result};
use crate::fam::encode_pair;
use crate::family::{CrossPair, Family, SubsetMask};
use num_traits::ToPrimitive;

struct Universe {
    n: usize,
    size: usize,
    w: usize,
    rows: Vec<u64>,
}

impl Universe {
    fn new(n: usize, ell: usize) -> Self {
        let size = 1usize << n;
        let w = bits::words_for(size);
        let mut rows = vec![0u64; size * w];
        for x in 0..size {
            let r = &mut rows[x * w..(x + 1) * w];
            for y in 0..size {
                if (x & y).count_ones() as usize == ell {
                    bits::set(r, y);
                }
            }
        }
        Universe { n, size, w, rows }
    }

    #[inline]
    fn row(&self, x: usize) -> &[u64] {
        &self.rows[x * self.w..(x + 1) * self.w]
    }
}

/// Generator and closed pair `(A, B)` of a child node.
type Child = (usize, Vec<u64>, Vec<u64>);

struct Ctx<'a> {
    uni: &'a Universe,
    cfg: &'a SearchConfig,
    incumbent: &'a AtomicU64,
}

#[derive(Default)]
struct Tally {
    nodes: u64,
    pruned: u64,
    best: u64,
    found: Vec<(Vec<u64>, Vec<u64>)>,
}

impl Tally {
    fn merge(&mut self, other: Tally) {
        self.nodes += other.nodes;
        self.pruned += other.pruned;
        if other.best > self.best {
            self.best = other.best;
            self.found = other.found;
        } else if other.best == self.best {
            self.found.extend(other.found);
        }
    }
}

/// `max_{c' ≤ c} c' · min(a, 2^(n - ⌈log2 c'⌉))`. Within a dyadic block the
/// cap is constant, so only `c` itself and the largest power of two not
/// above it need checking.
fn dimension_term(n: usize, c: u64, a: u64) -> u64 {
    let full = 1u64 << n;
    let ceil_log = 64 - (c - 1).leading_zeros() as usize;
    let at_c = c * a.min(full >> ceil_log.min(n));
    let p = 1u64 << (63 - c.leading_zeros());
    at_c.max((a * p).min(full))
}

impl Ctx<'_> {
    fn close(&self, allowed: &[u64], b: &[u64]) -> Vec<u64> {
        let mut a = allowed.to_vec();
        for y in bits::ones(b) {
            bits::and_assign(&mut a, self.uni.row(y));
        }
        a
    }

    fn record(&self, t: &mut Tally, a: &[u64], b: &[u64]) {
        let p = (bits::count(a) * bits::count(b)) as u64;
        if p < self.incumbent.load(Ordering::Relaxed) || p < t.best {
            return;
        }
        self.incumbent.fetch_max(p, Ordering::Relaxed);
        if p > t.best {
            t.best = p;
            t.found.clear();
        }
        t.found.push((a.to_vec(), b.to_vec()));
    }

    /// Canonical children of `(a, b)` with generators `≥ y`, or `None` when
    /// the bound rules the subtree out.
    fn children(
        &self,
        t: &mut Tally,
        allowed: &[u64],
        a: &[u64],
        b: &[u64],
        y: usize,
    ) -> Option<Vec<Child>> {
        let mut free = allowed.to_vec();
        for (f, x) in free.iter_mut().zip(a) {
            *f &= !x;
        }
        let cands: Vec<(usize, usize)> = bits::ones(&free)
            .filter(|&j| j >= y)
            .map(|j| (j, bits::and_count(b, self.uni.row(j))))
            .filter(|&(_, c)| c > 0)
            .collect();
        if self.cfg.prune_product || self.cfg.prune_dimension {
            let mut counts: Vec<u64> = cands.iter().map(|&(_, c)| c as u64).collect();
            counts.sort_unstable_by(|x, y| y.cmp(x));
            let base = bits::count(a) as u64;
            let bound = counts
                .iter()
                .enumerate()
                .map(|(i, &c)| {
                    let cap = if self.cfg.prune_product {
                        base + i as u64 + 1
                    } else {
                        1 << self.uni.n
                    };
                    if self.cfg.prune_dimension {
                        dimension_term(self.uni.n, c, cap)
                    } else {
                        c * cap
                    }
                })
                .max()
                .unwrap_or(0);
            if bound < self.incumbent.load(Ordering::Relaxed) {
                t.pruned += 1;
                return None;
            }
        }
        let mut out = Vec::new();
        let mut nb = vec![0u64; self.uni.w];
        for (j, _) in cands {
            bits::and_into(&mut nb, b, self.uni.row(j));
            let na = self.close(allowed, &nb);
            if bits::has_new_below(&na, a, j) {
                continue;
            }
            out.push((j, na, nb.clone()));
        }
        Some(out)
    }

    fn dfs(&self, t: &mut Tally, allowed: &[u64], a: &[u64], b: &[u64], y: usize) {
        t.nodes += 1;
        self.record(t, a, b);
        if let Some(kids) = self.children(t, allowed, a, b, y) {
            for (j, na, nb) in kids {
                self.dfs(t, allowed, &na, &nb, j + 1);
            }
        }
    }
}

fn to_pair(n: usize, ell: usize, a: &[u64], b: &[u64]) -> CrossPair {
    let fam = |x: &[u64]| {
        Family::from_sorted_unchecked(n, bits::ones(x).map(|i| SubsetMask::raw(i as u32)).collect())
    };
    CrossPair::new(fam(a), fam(b), ell)
        .expect("same ground set")
        .with_verified(true)
}

struct Task {
    root: usize,
    a: Vec<u64>,
    b: Vec<u64>,
    y: usize,
}

/// Exact maximum of `|A||B|` over `ℓ`-cross-intersecting pairs on `[n]`
/// with both families nonempty.
pub fn max_product(n: usize, ell: usize, cfg: &SearchConfig) -> Result<SearchReport> {
    let start = Instant::now();
    let cap = cfg.hard_cap.min(ABSOLUTE_MAX_N);
    if n == 0 || n > cap {
        return Err(Error::Parameter(format!("n = {n} outside the search range 1..={cap}")));
    }
    if ell > n {
        return Err(Error::Parameter(format!("ell = {ell} exceeds n = {n}")));
    }
    if cfg.worker_count == 0 {
        return Err(Error::Parameter("worker count must be at least 1".into()));
    }
    let uni = Universe::new(n, ell);
    // The construction value is attained, so it is a safe starting point.
    let seed = if n >= 2 * ell {
        binomial(2 * ell, ell).to_u64().expect("small") << (n - 2 * ell)
    } else {
        0
    };
    let incumbent = AtomicU64::new(seed);
    let ctx = Ctx {
        uni: &uni,
        cfg,
        incumbent: &incumbent,
    };

    let mut roots: Vec<Vec<u64>> = Vec::new();
    let mut tasks: Vec<Task> = Vec::new();
    let mut total = Tally::default();
    for s in ell..=n {
        let mut allowed = vec![0u64; uni.w];
        for x in (0..uni.size).filter(|x| x.count_ones() as usize >= s) {
            bits::set(&mut allowed, x);
        }
        let mut b0 = vec![0u64; uni.w];
        bits::and_into(&mut b0, uni.row((1 << s) - 1), &allowed);
        if bits::is_zero(&b0) {
            continue;
        }
        let a0 = ctx.close(&allowed, &b0);
        total.nodes += 1;
        ctx.record(&mut total, &a0, &b0);
        if let Some(kids) = ctx.children(&mut total, &allowed, &a0, &b0, 0) {
            for (j, a, b) in kids {
                tasks.push(Task {
                    root: roots.len(),
                    a,
                    b,
                    y: j + 1,
                });
            }
        }
        roots.push(allowed);
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.worker_count)
        .build()
        .map_err(|e| Error::Parameter(format!("cannot start workers: {e}")))?;
    let tallies: Vec<Tally> = pool.install(|| {
        tasks
            .par_iter()
            .map(|task| {
                let mut t = Tally::default();
                ctx.dfs(&mut t, &roots[task.root], &task.a, &task.b, task.y);
                t
            })
            .collect()
    });
    for t in tallies {
        total.merge(t);
    }
    if total.found.is_empty() {
        return Err(Error::Precondition(format!(
            "no cross-intersecting pair found for n = {n}, ell = {ell}"
        )));
    }

    let mut witnesses: Vec<(String, CrossPair)> = total
        .found
        .iter()
        .map(|(a, b)| {
            let p = to_pair(n, ell, a, b);
            (encode_pair(&p), p)
        })
        .collect();
    witnesses.sort_by(|x, y| x.0.cmp(&y.0));
    witnesses.dedup_by(|x, y| x.0 == y.0);
    let optima_found = witnesses.len();
    if !cfg.enumerate_all_optima {
        witnesses.truncate(1);
    }
    Ok(SearchReport {
        n,
        ell,
        value: total.best,
        witnesses: witnesses.into_iter().map(|(_, p)| p).collect(),
        optima_found,
        nodes_visited: total.nodes,
        nodes_pruned: total.pruned,
        elapsed: start.elapsed(),
    })
}
