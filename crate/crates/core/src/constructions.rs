//! Witness posets for a prescribed profile.
//!
//! * [`trivial_construction`]: a spine chain of `max(S)` elements plus one
//!   pendant element per remaining profile member; `max(S) + |S| - 1`
//!   elements for any profile.
//! * [`sums_construction`]: an ordinal sum of blocks, each a chain of
//!   `a_i + 1` elements next to one incomparable element. Its profile is
//!   `{k + x : x in sums(A)}` and it uses `max(S) + log2 |S|` elements.
//! * [`as_shifted_sums`] / [`reconstruct_subset_sums`] recognise profiles of
//!   that second shape.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::poset::Poset;
use crate::profile::{ChainProfile, ProfileError};

/// `k` block sizes `a_1..a_k` describing the profile `{k + x : x in sums(A)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumsDecomposition {
    terms: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SumsError {
    #[error("a sums decomposition needs at least one term")]
    NoTerms,
    #[error("multiset of {0} subset sums is not a power of two in size")]
    Size(BigUint),
}

impl SumsDecomposition {
    pub fn new(terms: Vec<u64>) -> Result<Self, SumsError> {
        if terms.is_empty() {
            return Err(SumsError::NoTerms);
        }
        Ok(SumsDecomposition { terms })
    }

    pub fn k(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> &[u64] {
        &self.terms
    }

    /// The profile this decomposition describes.
    pub fn profile(&self) -> ChainProfile {
        let k = self.k() as u64;
        ChainProfile::from_counts(subset_sums(&self.terms).into_iter().map(|(s, c)| (s + k, c)))
            .expect("k >= 1 keeps every member positive")
    }
}

/// Multiset of subset sums, as value -> multiplicity.
pub fn subset_sums(terms: &[u64]) -> BTreeMap<u64, BigUint> {
    let mut sums = BTreeMap::from([(0u64, BigUint::one())]);
    for &a in terms {
        let mut next = sums.clone();
        for (&s, c) in &sums {
            *next.entry(s + a).or_insert_with(BigUint::zero) += c;
        }
        sums = next;
    }
    sums
}

/// Spine `x_1 < ... < x_m` (elements `0..m`) plus one element `s_jk` for
/// every member `j` of `S` other than one copy of `m`, covering `x_{j-1}`
/// (isolated when `j = 1`). Pendants are numbered from `m` upward in
/// ascending order of `j`.
pub fn trivial_construction(profile: &ChainProfile) -> Result<Poset, ProfileError> {
    let m = to_len(profile.max())?;
    let mut edges: Vec<(usize, usize)> = (1..m).map(|i| (i - 1, i)).collect();
    let mut next = m;
    for (j, mult) in profile.iter() {
        let mut copies = mult
            .to_usize()
            .ok_or_else(|| ProfileError::InvalidProfile("multiplicity too large to build".into()))?;
        if j == profile.max() {
            copies -= 1;
        }
        let j = to_len(j)?;
        for _ in 0..copies {
            if j > 1 {
                edges.push((j - 2, next));
            }
            next += 1;
        }
    }
    Ok(Poset::from_cover_edges(next, edges).expect("construction yields a valid cover graph"))
}

/// Ordinal sum of blocks `chain(a_i + 1) + one isolated element`, for
/// `i = 1..k` bottom to top. Within a block the chain comes first and the
/// isolated element last.
pub fn sums_construction(decomposition: &SumsDecomposition) -> Poset {
    decomposition.terms.iter().fold(Poset::empty(), |acc, &a| {
        let len = a as usize + 1;
        let block = Poset::from_cover_edges(len + 1, (1..len).map(|i| (i - 1, i)).collect())
            .expect("chain plus isolated element is valid");
        acc.ordinal_sum(&block)
    })
}

/// Recovers a multiset `A` of nonnegative integers with `sums(A) = T`, or
/// `None` if there is none. `T` is given as value -> multiplicity.
///
/// Repeatedly peels off the smallest nonzero-index element `a` (the second
/// smallest member): the smallest unmatched sum is paired with its `+ a`
/// partner, and the unmatched half carries on. The result is re-checked
/// against `T` before it is returned.
pub fn reconstruct_subset_sums(sums: &BTreeMap<u64, BigUint>) -> Result<Option<Vec<u64>>, SumsError> {
    let total: BigUint = sums.values().sum();
    if total.is_zero() || total.count_ones() != 1 {
        return Err(SumsError::Size(total));
    }
    let mut rest: BTreeMap<u64, BigUint> = sums
        .iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(&v, c)| (v, c.clone()))
        .collect();
    let mut terms = Vec::new();
    loop {
        let (&smallest, count) = rest.iter().next().expect("nonempty");
        if smallest != 0 {
            return Ok(None);
        }
        let size: BigUint = rest.values().sum();
        if size.is_one() {
            break;
        }
        let a = if count > &BigUint::one() {
            0
        } else {
            *rest.keys().nth(1).expect("at least two members")
        };
        let mut half = BTreeMap::new();
        if a == 0 {
            for (v, c) in rest {
                if c.bit(0) {
                    return Ok(None);
                }
                half.insert(v, c >> 1);
            }
        } else {
            while let Some((v, c)) = rest.pop_first() {
                match rest.get_mut(&(v + a)) {
                    Some(partner) if *partner >= c => {
                        *partner -= &c;
                        if partner.is_zero() {
                            rest.remove(&(v + a));
                        }
                    }
                    _ => return Ok(None),
                }
                half.insert(v, c);
            }
        }
        terms.push(a);
        rest = half;
    }
    terms.sort_unstable();
    let expected: BTreeMap<u64, BigUint> = sums
        .iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(&v, c)| (v, c.clone()))
        .collect();
    Ok((subset_sums(&terms) == expected).then_some(terms))
}

/// Writes `S` as `{k + x : x in sums(A)}` with `|S| = 2^k`, if possible.
/// Then `k = log2 |S|` and `k = min(S)` (the empty subset).
pub fn as_shifted_sums(profile: &ChainProfile) -> Option<SumsDecomposition> {
    let n = profile.total();
    if n.count_ones() != 1 {
        return None;
    }
    let k = n.bits() - 1;
    if k == 0 || profile.min() != k {
        return None;
    }
    let shifted: BTreeMap<u64, BigUint> = profile.iter().map(|(v, c)| (v - k, c.clone())).collect();
    let terms = reconstruct_subset_sums(&shifted).ok()??;
    SumsDecomposition::new(terms).ok()
}

fn to_len(value: u64) -> Result<usize, ProfileError> {
    value
        .to_usize()
        .ok_or_else(|| ProfileError::InvalidProfile(format!("{value} is too large to build")))
}
