//! Exhaustive minimum-size search over isomorphism classes of posets.
//!
//! Classes on `n` elements are generated from the classes on `n - 1`
//! elements by adding a new maximal element whose lower covers form an
//! antichain (every poset arises this way, by deleting a maximal element).
//! Candidates are keyed by [`Poset::canonical_form`] and only the first
//! candidate of each class is kept, relabeled into canonical order.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use thiserror::Error;

use crate::bounds::{lower_bound, upper_bound};
use crate::constructions::trivial_construction;
use crate::poset::Poset;
use crate::profile::{longest_chain_len, maximal_chain_count, profile_matrix, ChainProfile};

pub const DEFAULT_CLASS_BUDGET: u64 = 10_000_000;

/// Enumeration is limited to posets whose comparability rows fit a `u64`.
pub const MAX_ENUMERATION_SIZE: usize = 63;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
    #[error("size cap {cap} is below the lower bound {lower}")]
    CapBelowLowerBound { cap: usize, lower: BigUint },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchStatus {
    /// The witness has the minimum possible size.
    Exact,
    /// The class budget ran out before the minimum was settled.
    BudgetExhausted,
    /// Every size up to the cap was scanned without a match, so the minimum
    /// exceeds the cap.
    AboveCap,
}

impl fmt::Display for SearchStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SearchStatus::Exact => "exact",
            SearchStatus::BudgetExhausted => "budget_exhausted",
            SearchStatus::AboveCap => "above_cap",
        })
    }
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub status: SearchStatus,
    pub size: Option<usize>,
    pub witness: Option<Poset>,
    /// Isomorphism classes examined.
    pub explored: u64,
    /// The witness is the trivial construction, reached at the upper bound.
    pub ceiling_used: bool,
}

/// Memoized isomorphism-class representatives, level by level.
#[derive(Debug)]
pub struct PosetCatalog {
    levels: Vec<Vec<Poset>>,
}

impl Default for PosetCatalog {
    fn default() -> Self {
        PosetCatalog {
            levels: vec![vec![Poset::empty()]],
        }
    }
}

impl PosetCatalog {
    pub fn new() -> Self {
        Self::default()
    }

    /// One representative per isomorphism class of posets on `n` elements,
    /// in a fixed order.
    pub fn level(&mut self, n: usize) -> &[Poset] {
        assert!(
            n <= MAX_ENUMERATION_SIZE,
            "enumeration limited to {MAX_ENUMERATION_SIZE} elements"
        );
        while self.levels.len() <= n {
            let next = extend_level(self.levels.last().expect("level 0 exists"));
            self.levels.push(next);
        }
        &self.levels[n]
    }
}

/// Stream of isomorphism-class representatives on `n` elements.
pub fn enumerate_posets(n: usize) -> impl Iterator<Item = Poset> {
    let mut catalog = PosetCatalog::new();
    catalog.level(n);
    catalog.levels.swap_remove(n).into_iter()
}

fn extend_level(parents: &[Poset]) -> Vec<Poset> {
    let keyed: Vec<Vec<(Poset, crate::CanonicalKey, Vec<usize>)>> = parents
        .par_iter()
        .map(|parent| {
            antichains(parent)
                .into_iter()
                .map(|lower_covers| {
                    let child = add_maximal(parent, &lower_covers);
                    let (key, order) = child.canonical_labeling();
                    (child, key, order)
                })
                .collect()
        })
        .collect();
    let mut seen = HashSet::new();
    let mut level = Vec::new();
    for (child, key, order) in keyed.into_iter().flatten() {
        if seen.insert(key) {
            level.push(child.relabel(&order));
        }
    }
    level
}

/// All antichains of `poset` (including the empty one) as ascending index
/// lists, in lexicographic order of their bitmasks' recursion.
pub(crate) fn antichains(poset: &Poset) -> Vec<Vec<usize>> {
    let n = poset.len();
    let up = poset.strict_up_sets();
    let mut comparable = vec![0u64; n];
    for (x, set) in up.iter().enumerate() {
        for y in set.ones() {
            comparable[x] |= 1 << y;
            comparable[y] |= 1 << x;
        }
    }
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn grow(start: usize, blocked: u64, comparable: &[u64], current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(current.clone());
        for v in start..comparable.len() {
            if blocked >> v & 1 == 0 {
                current.push(v);
                grow(v + 1, blocked | comparable[v] | 1 << v, comparable, current, out);
                current.pop();
            }
        }
    }
    grow(0, 0, &comparable, &mut current, &mut out);
    out
}

fn add_maximal(parent: &Poset, lower_covers: &[usize]) -> Poset {
    let top = parent.len();
    let mut edges = parent.cover_edges().to_vec();
    edges.extend(lower_covers.iter().map(|&a| (a, top)));
    Poset::from_cover_edges(top + 1, edges).expect("antichain below a new maximal element is a valid cover set")
}

/// Cheap necessary conditions first, then the full profile.
fn realizes(poset: &Poset, profile: &ChainProfile, m: usize, n: &BigUint) -> bool {
    longest_chain_len(poset) == m
        && &maximal_chain_count(poset) == n
        && profile_matrix(poset).is_ok_and(|p| &p == profile)
}

/// Exact search driver holding the enumeration cache across queries.
#[derive(Debug, Default)]
pub struct Searcher {
    catalog: PosetCatalog,
}

impl Searcher {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn catalog(&mut self) -> &mut PosetCatalog {
        &mut self.catalog
    }

    /// Smallest poset whose profile is `profile`, scanning sizes from the
    /// lower bound up to `min(size_cap, upper bound)`.
    pub fn minimal_poset(
        &mut self,
        profile: &ChainProfile,
        size_cap: usize,
        class_budget: u64,
    ) -> Result<SearchResult, SearchError> {
        let lower = lower_bound(profile);
        let start = match lower.to_usize() {
            Some(l) if l <= size_cap => l,
            _ => return Err(SearchError::CapBelowLowerBound { cap: size_cap, lower }),
        };
        let upper = upper_bound(profile).to_usize().unwrap_or(usize::MAX);
        let m = usize::try_from(profile.max()).map_err(|_| SearchError::InvalidProfile("maximum too large".into()))?;
        let n = profile.total();

        let mut explored = 0u64;
        for size in start..=size_cap.min(upper) {
            if size == upper {
                let witness = trivial_construction(profile).map_err(|e| SearchError::InvalidProfile(e.to_string()))?;
                return Ok(finish(profile, witness, explored, true));
            }
            if size > MAX_ENUMERATION_SIZE || explored >= class_budget {
                return Ok(exhausted(explored));
            }
            let level = self.catalog.level(size);
            let allowed = level
                .len()
                .min((class_budget - explored).to_usize().unwrap_or(usize::MAX));
            let found = level[..allowed]
                .par_iter()
                .position_first(|p| realizes(p, profile, m, &n));
            match found {
                Some(k) => {
                    explored += k as u64 + 1;
                    let witness = level[k].clone();
                    return Ok(finish(profile, witness, explored, false));
                }
                None => {
                    explored += allowed as u64;
                    if allowed < level.len() {
                        return Ok(exhausted(explored));
                    }
                }
            }
        }
        Ok(SearchResult {
            status: SearchStatus::AboveCap,
            size: None,
            witness: None,
            explored,
            ceiling_used: false,
        })
    }
}

/// One-shot search with a fresh enumeration cache.
pub fn minimal_poset(profile: &ChainProfile, size_cap: usize, class_budget: u64) -> Result<SearchResult, SearchError> {
    Searcher::new().minimal_poset(profile, size_cap, class_budget)
}

fn finish(profile: &ChainProfile, witness: Poset, explored: u64, ceiling_used: bool) -> SearchResult {
    assert_eq!(
        profile_matrix(&witness).as_ref(),
        Ok(profile),
        "search witness must realize the requested profile"
    );
    SearchResult {
        status: SearchStatus::Exact,
        size: Some(witness.len()),
        witness: Some(witness),
        explored,
        ceiling_used,
    }
}

fn exhausted(explored: u64) -> SearchResult {
    SearchResult {
        status: SearchStatus::BudgetExhausted,
        size: None,
        witness: None,
        explored,
        ceiling_used: false,
    }
}
