//! Maximal-chain cardinality profiles.
//!
//! Two independent routes produce a [`ChainProfile`] from a poset: powers of
//! the cover adjacency matrix ([`profile_matrix`]) and explicit depth-first
//! enumeration of source-to-sink paths ([`profile_enumerate`]).

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::poset::{ElementSet, Poset};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProfileError {
    #[error("operation requires a nonempty poset")]
    EmptyPoset,
    #[error("more than {0} maximal chains; use the matrix method")]
    BudgetExceeded(u64),
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
}

/// Multiset of positive chain cardinalities. Always nonempty.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ChainProfile {
    counts: BTreeMap<u64, BigUint>,
}

impl ChainProfile {
    /// Builds a profile from (cardinality, multiplicity) pairs; pairs with
    /// multiplicity zero are dropped and repeated cardinalities accumulate.
    pub fn from_counts<I>(pairs: I) -> Result<Self, ProfileError>
    where
        I: IntoIterator<Item = (u64, BigUint)>,
    {
        let mut counts = BTreeMap::new();
        for (value, mult) in pairs {
            if value == 0 {
                return Err(ProfileError::InvalidProfile("cardinalities must be positive".into()));
            }
            if !mult.is_zero() {
                *counts.entry(value).or_insert_with(BigUint::zero) += mult;
            }
        }
        if counts.is_empty() {
            return Err(ProfileError::InvalidProfile("profile must be nonempty".into()));
        }
        Ok(ChainProfile { counts })
    }

    pub fn from_values<I: IntoIterator<Item = u64>>(values: I) -> Result<Self, ProfileError> {
        Self::from_counts(values.into_iter().map(|v| (v, BigUint::one())))
    }

    /// Total multiplicity, usually written `n`.
    pub fn total(&self) -> BigUint {
        self.counts.values().sum()
    }

    /// Largest cardinality, usually written `m`.
    pub fn max(&self) -> u64 {
        *self.counts.keys().next_back().expect("profile is nonempty")
    }

    pub fn min(&self) -> u64 {
        *self.counts.keys().next().expect("profile is nonempty")
    }

    pub fn multiplicity(&self, value: u64) -> BigUint {
        self.counts.get(&value).cloned().unwrap_or_default()
    }

    /// Distinct cardinalities with their multiplicities, ascending.
    pub fn iter(&self) -> impl Iterator<Item = (u64, &BigUint)> + '_ {
        self.counts.iter().map(|(&v, m)| (v, m))
    }

    pub fn distinct_len(&self) -> usize {
        self.counts.len()
    }

    /// Expands to a sorted list of cardinalities, one entry per member.
    /// Returns `None` if the profile has more than `limit` members.
    pub fn to_sorted_vec(&self, limit: usize) -> Option<Vec<u64>> {
        let total = self.total().to_usize().filter(|&t| t <= limit)?;
        let mut out = Vec::with_capacity(total);
        for (&v, m) in &self.counts {
            out.extend(std::iter::repeat_n(v, m.to_usize()?));
        }
        Some(out)
    }
}

impl fmt::Display for ChainProfile {
    /// `cardinality:multiplicity` pairs, ascending, space separated.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (v, m)) in self.counts.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}:{m}")?;
        }
        Ok(())
    }
}

impl FromStr for ChainProfile {
    type Err = ProfileError;

    /// Comma-separated members; `5x2` stands for two copies of 5.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |tok: &str| ProfileError::InvalidProfile(format!("cannot parse member `{tok}`"));
        let mut pairs = Vec::new();
        for tok in s.split(',').map(str::trim) {
            let (value, mult) = match tok.split_once(['x', 'X']) {
                Some((v, k)) => (v.trim(), k.trim().parse::<BigUint>().map_err(|_| bad(tok))?),
                None => (tok, BigUint::one()),
            };
            let value: u64 = value.parse().map_err(|_| bad(tok))?;
            pairs.push((value, mult));
        }
        Self::from_counts(pairs)
    }
}

/// Square matrix of arbitrary-precision counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountMatrix {
    dim: usize,
    entries: Vec<BigUint>,
}

impl CountMatrix {
    pub fn zeros(dim: usize) -> Self {
        CountMatrix {
            dim,
            entries: vec![BigUint::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = BigUint::one();
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &BigUint {
        &self.entries[i * self.dim + j]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    /// `self * A` where `A` is the cover adjacency matrix of `poset`; costs
    /// one pass over the cover edges per row.
    pub fn mul_cover(&self, poset: &Poset) -> CountMatrix {
        assert_eq!(self.dim, poset.len());
        let mut out = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                let x = self.get(i, j);
                if x.is_zero() {
                    continue;
                }
                for &k in poset.upper_covers(j) {
                    out.entries[i * self.dim + k] += x;
                }
            }
        }
        out
    }

    /// `A^k` for the cover adjacency matrix of `poset`.
    pub fn cover_power(poset: &Poset, k: usize) -> CountMatrix {
        (0..k).fold(Self::identity(poset.len()), |acc, _| acc.mul_cover(poset))
    }
}

pub fn adjacency_matrix(poset: &Poset) -> Result<CountMatrix, ProfileError> {
    if poset.is_empty() {
        return Err(ProfileError::EmptyPoset);
    }
    let mut a = CountMatrix::zeros(poset.len());
    for &(i, j) in poset.cover_edges() {
        a.entries[i * a.dim + j] = BigUint::one();
    }
    Ok(a)
}

/// Profile via adjacency-matrix powers: entry (i, j) of `A^k` counts chains
/// of cardinality `k + 1` from `i` to `j`; summing over minimal `i` and
/// maximal `j` counts maximal chains.
pub fn profile_matrix(poset: &Poset) -> Result<ChainProfile, ProfileError> {
    if poset.is_empty() {
        return Err(ProfileError::EmptyPoset);
    }
    let minimal = poset.minimal_elements();
    let maximal = poset.maximal_elements();
    let mut power = CountMatrix::identity(poset.len());
    let mut pairs = Vec::new();
    for k in 0..poset.len() {
        if k > 0 {
            power = power.mul_cover(poset);
        }
        let mut count = BigUint::zero();
        for i in minimal.iter() {
            for j in maximal.iter() {
                count += power.get(i, j);
            }
        }
        pairs.push((k as u64 + 1, count));
    }
    ChainProfile::from_counts(pairs)
}

/// Profile by walking every source-to-sink path of the cover DAG. Fails once
/// more than `path_budget` maximal chains have been seen.
pub fn profile_enumerate(poset: &Poset, path_budget: u64) -> Result<ChainProfile, ProfileError> {
    if poset.is_empty() {
        return Err(ProfileError::EmptyPoset);
    }
    let mut by_len: BTreeMap<u64, u64> = BTreeMap::new();
    let mut seen = 0u64;
    for_each_maximal_chain(poset, |chain| {
        seen += 1;
        if seen > path_budget {
            return false;
        }
        *by_len.entry(chain.len() as u64).or_default() += 1;
        true
    });
    if seen > path_budget {
        return Err(ProfileError::BudgetExceeded(path_budget));
    }
    ChainProfile::from_counts(by_len.into_iter().map(|(v, c)| (v, BigUint::from(c))))
}

/// Calls `visit` with every maximal chain (bottom to top), in lexicographic
/// order of index sequences. Stops early when `visit` returns false.
pub fn for_each_maximal_chain<F>(poset: &Poset, mut visit: F)
where
    F: FnMut(&[usize]) -> bool,
{
    let mut path = Vec::new();
    // (element, index of next upper cover to try)
    let mut stack: Vec<(usize, usize)> = Vec::new();
    for source in poset.minimal_elements().iter() {
        path.push(source);
        stack.push((source, 0));
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            let ups = poset.upper_covers(v);
            if ups.is_empty() {
                if !visit(&path) {
                    return;
                }
            } else if *next < ups.len() {
                let w = ups[*next];
                *next += 1;
                path.push(w);
                stack.push((w, 0));
                continue;
            }
            stack.pop();
            path.pop();
        }
    }
}

/// `height[v]`: cardinality of the longest chain from `v` up to a maximal
/// element.
pub(crate) fn heights_to_top(poset: &Poset) -> Vec<usize> {
    let mut height = vec![1usize; poset.len()];
    for &v in poset.topological_order().iter().rev() {
        if let Some(h) = poset.upper_covers(v).iter().map(|&w| height[w]).max() {
            height[v] = h + 1;
        }
    }
    height
}

/// Cardinality of the longest chain, `0` for the empty poset.
pub fn longest_chain_len(poset: &Poset) -> usize {
    heights_to_top(poset).into_iter().max().unwrap_or(0)
}

/// Number of maximal chains, by propagating the row vector of minimal
/// elements through the adjacency matrix.
pub fn maximal_chain_count(poset: &Poset) -> BigUint {
    let mut paths = vec![BigUint::zero(); poset.len()];
    let mut total = BigUint::zero();
    for &v in poset.topological_order() {
        if poset.lower_covers(v).is_empty() {
            paths[v] = BigUint::one();
        }
        if poset.upper_covers(v).is_empty() {
            total += &paths[v];
        }
        let here = paths[v].clone();
        for &w in poset.upper_covers(v) {
            paths[w] += &here;
        }
    }
    total
}

/// A maximal chain of maximum cardinality; among those, the
/// lexicographically least index sequence.
pub fn max_chain(poset: &Poset) -> Result<ElementSet, ProfileError> {
    if poset.is_empty() {
        return Err(ProfileError::EmptyPoset);
    }
    let height = heights_to_top(poset);
    let m = *height.iter().max().expect("nonempty");
    let mut v = (0..poset.len())
        .find(|&v| height[v] == m)
        .expect("some element attains m");
    let mut chain = vec![v];
    while height[v] > 1 {
        v = *poset
            .upper_covers(v)
            .iter()
            .find(|&&w| height[w] == height[v] - 1)
            .expect("longest chain continues");
        chain.push(v);
    }
    Ok(ElementSet::from_vec_unchecked(chain))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pendant_example() -> Poset {
        // x1..x5 = 0..4, s21 = 5, s31 = 6, s32 = 7, s51 = 8
        Poset::from_cover_edges(9, vec![(0, 1), (1, 2), (2, 3), (3, 4), (0, 5), (1, 6), (1, 7), (3, 8)]).unwrap()
    }

    fn profile(values: &[u64]) -> ChainProfile {
        ChainProfile::from_values(values.iter().copied()).unwrap()
    }

    #[test]
    fn adjacency_examples() {
        let a = adjacency_matrix(&Poset::chain(2)).unwrap();
        assert_eq!(a.get(0, 1), &BigUint::one());
        assert!(a.get(0, 0).is_zero() && a.get(1, 0).is_zero() && a.get(1, 1).is_zero());
        assert!(adjacency_matrix(&Poset::antichain(2)).unwrap().is_zero());
        let d = Poset::from_cover_edges(4, vec![(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        let a = adjacency_matrix(&d).unwrap();
        let ones: Vec<(usize, usize)> = (0..4)
            .flat_map(|i| (0..4).map(move |j| (i, j)))
            .filter(|&(i, j)| !a.get(i, j).is_zero())
            .collect();
        assert_eq!(ones, vec![(0, 1), (0, 2), (1, 3), (2, 3)]);
        assert_eq!(adjacency_matrix(&Poset::empty()), Err(ProfileError::EmptyPoset));
    }

    #[test]
    fn cover_power_matches_dense_product() {
        let p = pendant_example();
        let a = adjacency_matrix(&p).unwrap();
        let a2 = CountMatrix::cover_power(&p, 2);
        for i in 0..9 {
            for j in 0..9 {
                let dense: BigUint = (0..9).map(|k| a.get(i, k) * a.get(k, j)).sum();
                assert_eq!(&dense, a2.get(i, j));
            }
        }
        assert!(CountMatrix::cover_power(&p, 9).is_zero());
    }

    #[test]
    fn pendant_profile_both_methods() {
        let p = pendant_example();
        assert_eq!(profile_matrix(&p).unwrap(), profile(&[2, 3, 3, 5, 5]));
        assert_eq!(profile_enumerate(&p, 100).unwrap(), profile(&[2, 3, 3, 5, 5]));
    }

    #[test]
    fn simple_profiles() {
        assert_eq!(profile_matrix(&Poset::chain(6)).unwrap(), profile(&[6]));
        assert_eq!(profile_enumerate(&Poset::chain(1), 1).unwrap(), profile(&[1]));
        assert_eq!(profile_matrix(&Poset::antichain(3)).unwrap(), profile(&[1, 1, 1]));
        let dd =
            Poset::from_cover_edges(7, vec![(0, 1), (0, 2), (1, 3), (2, 3), (3, 4), (3, 5), (4, 6), (5, 6)]).unwrap();
        assert_eq!(profile_enumerate(&dd, 10).unwrap(), profile(&[5, 5, 5, 5]));
        assert_eq!(profile_matrix(&dd).unwrap(), profile(&[5, 5, 5, 5]));
    }

    #[test]
    fn enumeration_budget() {
        let dd =
            Poset::from_cover_edges(7, vec![(0, 1), (0, 2), (1, 3), (2, 3), (3, 4), (3, 5), (4, 6), (5, 6)]).unwrap();
        assert_eq!(profile_enumerate(&dd, 3), Err(ProfileError::BudgetExceeded(3)));
        assert!(profile_enumerate(&dd, 4).is_ok());
        assert_eq!(profile_enumerate(&Poset::empty(), 4), Err(ProfileError::EmptyPoset));
    }

    #[test]
    fn max_chain_examples() {
        assert_eq!(max_chain(&Poset::chain(4)).unwrap().as_slice(), &[0, 1, 2, 3]);
        assert_eq!(max_chain(&pendant_example()).unwrap().as_slice(), &[0, 1, 2, 3, 4]);
        assert_eq!(max_chain(&Poset::antichain(3)).unwrap().as_slice(), &[0]);
        let v = Poset::from_cover_edges(4, vec![(1, 3), (1, 2), (0, 2)]).unwrap();
        assert_eq!(max_chain(&v).unwrap().as_slice(), &[0, 2]);
        assert_eq!(max_chain(&Poset::empty()), Err(ProfileError::EmptyPoset));
    }

    #[test]
    fn chain_count_and_length() {
        assert_eq!(maximal_chain_count(&pendant_example()), BigUint::from(5u32));
        assert_eq!(longest_chain_len(&pendant_example()), 5);
        assert_eq!(longest_chain_len(&Poset::empty()), 0);
    }

    #[test]
    fn parse_and_display() {
        let s: ChainProfile = "2,3,3,5,5".parse().unwrap();
        assert_eq!(s.to_string(), "2:1 3:2 5:2");
        assert_eq!("2, 3x2, 5x2".parse::<ChainProfile>().unwrap(), s);
        assert_eq!(s.total(), BigUint::from(5u32));
        assert_eq!((s.min(), s.max()), (2, 5));
        assert!("0,1".parse::<ChainProfile>().is_err());
        assert!("".parse::<ChainProfile>().is_err());
        assert!("3x0".parse::<ChainProfile>().is_err());
        assert!("a".parse::<ChainProfile>().is_err());
        assert_eq!(s.to_sorted_vec(10), Some(vec![2, 3, 3, 5, 5]));
        assert_eq!(s.to_sorted_vec(4), None);
    }

    #[test]
    fn exponential_counts_do_not_overflow() {
        // 70 stacked 2-antichains: 2^70 maximal chains of cardinality 70
        let layer = Poset::antichain(2);
        let p = (0..70).fold(Poset::empty(), |acc, _| acc.ordinal_sum(&layer));
        let s = profile_matrix(&p).unwrap();
        assert_eq!(s.multiplicity(70), BigUint::one() << 70);
        assert_eq!(maximal_chain_count(&p), BigUint::one() << 70);
    }
}
