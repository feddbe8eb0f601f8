//! Exact `P_ℓ(n)` by enumerating closed pairs of the relation
//! `|A ∩ B| = ℓ`, and isomorphism classification of the optima.

mod classify;
mod engine;

use std::env;
use std::time::Duration;

use crate::error::{Error, Result};
use crate::family::{CrossPair, Family, SubsetMask};

pub use classify::{
    classify_extremal, enumerate_optima, find_relabeling, isomorphic, ClassificationResult, OptimaReport,
    OptimumClass,
};
pub use engine::max_product;

/// Search limit on `n` unless the environment raises it.
pub const DEFAULT_HARD_CAP: usize = 8;
/// The environment may not raise the limit past this.
pub const ABSOLUTE_MAX_N: usize = 12;
pub const HARD_CAP_ENV: &str = "CROSSINT_HARD_CAP";

/// Reads `CROSSINT_HARD_CAP`, falling back to [`DEFAULT_HARD_CAP`].
pub fn hard_cap_from_env() -> Result<usize> {
    match env::var(HARD_CAP_ENV) {
        Err(_) => Ok(DEFAULT_HARD_CAP),
        Ok(v) => {
            let cap: usize = v
                .trim()
                .parse()
                .map_err(|_| Error::Parameter(format!("{HARD_CAP_ENV}={v:?} is not an integer")))?;
            if cap == 0 || cap > ABSOLUTE_MAX_N {
                return Err(Error::Parameter(format!(
                    "{HARD_CAP_ENV}={cap} outside 1..={ABSOLUTE_MAX_N}"
                )));
            }
            Ok(cap)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    /// Cardinality bound on descendants.
    pub prune_product: bool,
    /// Caps the `A` side by `2^(n - ⌈log2 |B|⌉)`, from `k + h ≤ n`.
    pub prune_dimension: bool,
    /// Report every optimum rather than only the least one.
    pub enumerate_all_optima: bool,
    pub worker_count: usize,
    pub hard_cap: usize,
}

impl SearchConfig {
    /// Product pruning on; dimension pruning from `n = 7` up.
    pub fn for_n(n: usize) -> Self {
        SearchConfig {
            prune_product: true,
            prune_dimension: n >= 7,
            enumerate_all_optima: false,
            worker_count: 1,
            hard_cap: DEFAULT_HARD_CAP,
        }
    }

    pub fn no_pruning() -> Self {
        SearchConfig {
            prune_product: false,
            prune_dimension: false,
            ..SearchConfig::for_n(0)
        }
    }

    pub fn with_workers(mut self, w: usize) -> Self {
        self.worker_count = w;
        self
    }

    pub fn with_all_optima(mut self, all: bool) -> Self {
        self.enumerate_all_optima = all;
        self
    }

    pub fn with_hard_cap(mut self, cap: usize) -> Self {
        self.hard_cap = cap;
        self
    }
}

#[derive(Clone, Debug)]
pub struct SearchReport {
    pub n: usize,
    pub ell: usize,
    /// `P_ℓ(n)`.
    pub value: u64,
    /// Optimal pairs in ascending `.fam` encoding order. Only the first
    /// unless all optima were requested.
    pub witnesses: Vec<CrossPair>,
    /// Optimal closed pairs met during the reduced search.
    pub optima_found: usize,
    pub nodes_visited: u64,
    pub nodes_pruned: u64,
    pub elapsed: Duration,
}

/// `β(f)`: every `B ⊆ [n]` meeting each member of `f` in exactly `ℓ`
/// elements. The relation is symmetric, so the same map serves as `α`.
pub fn beta_operator(f: &Family, ell: usize) -> Family {
    let n = f.n();
    let members = (0..=SubsetMask::full(n).bits())
        .map(SubsetMask::raw)
        .filter(|&b| f.iter().all(|a| a.intersection(b).len() as usize == ell))
        .collect();
    Family::from_sorted_unchecked(n, members)
}

/// `(α(β(f)), β(f))`.
pub fn closure(f: &Family, ell: usize) -> CrossPair {
    let b = beta_operator(f, ell);
    let a = beta_operator(&b, ell);
    CrossPair::new(a, b, ell)
        .expect("same ground set")
        .with_verified(true)
}

pub fn is_closed(p: &CrossPair) -> bool {
    beta_operator(p.a(), p.ell()) == *p.b() && beta_operator(p.b(), p.ell()) == *p.a()
}
