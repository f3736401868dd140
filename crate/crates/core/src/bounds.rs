//! Bounds on the minimum cardinality of a poset realizing a profile.
//!
//! With `m = max(S)` and `n = |S|`:
//! `m + ceil(log2 n) <= |P| <= m + n - 1`.

use std::fmt;

use num_bigint::BigUint;
use num_traits::One;

use crate::constructions::as_shifted_sums;
use crate::profile::ChainProfile;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExactRule {
    SmallN,
    ShiftedSums,
    SparseCondition,
    None,
}

impl fmt::Display for ExactRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExactRule::SmallN => "small_n",
            ExactRule::ShiftedSums => "shifted_sums",
            ExactRule::SparseCondition => "sparse_condition",
            ExactRule::None => "none",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundsReport {
    pub lower: BigUint,
    pub upper: BigUint,
    pub exact: Option<BigUint>,
    pub rule: ExactRule,
}

impl fmt::Display for BoundsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "lower={} upper={}", self.lower, self.upper)?;
        if let Some(exact) = &self.exact {
            write!(f, " exact={exact}")?;
        }
        write!(f, " rule={}", self.rule)
    }
}

/// `ceil(log2 n)` for `n >= 1`.
pub fn ceil_log2(n: &BigUint) -> u64 {
    if n.is_one() {
        0
    } else {
        (n - 1u32).bits()
    }
}

/// `m + ceil(log2 n)`.
pub fn lower_bound(profile: &ChainProfile) -> BigUint {
    BigUint::from(profile.max()) + ceil_log2(&profile.total())
}

/// `m + n - 1`, the size of the trivial construction.
pub fn upper_bound(profile: &ChainProfile) -> BigUint {
    BigUint::from(profile.max()) + profile.total() - 1u32
}

/// Hypothesis under which `m + n - 1` is known to be optimal: all members
/// distinct and `(m - a) >= (m - b) + (m - c) + n - 3` for all `a < b < c`.
///
/// For a fixed `a` the right-hand side is largest when `b` and `c` are the
/// two members immediately above `a`, so only those triples are checked.
pub fn sparse_condition(profile: &ChainProfile) -> bool {
    if profile.iter().any(|(_, mult)| !mult.is_one()) {
        return false;
    }
    let members: Vec<i128> = profile.iter().map(|(v, _)| i128::from(v)).collect();
    let m = *members.last().expect("nonempty");
    let n = members.len() as i128;
    members
        .windows(3)
        .all(|w| (m - w[0]) >= (m - w[1]) + (m - w[2]) + n - 3)
}

/// Lower and upper bounds, plus the exact minimum when one of the known
/// rules applies (checked in order: small n, shifted sums, sparse).
pub fn exact_bounds(profile: &ChainProfile) -> BoundsReport {
    let lower = lower_bound(profile);
    let upper = upper_bound(profile);
    let (exact, rule) = if profile.total() <= BigUint::from(3u32) {
        (Some(upper.clone()), ExactRule::SmallN)
    } else if as_shifted_sums(profile).is_some() {
        (Some(lower.clone()), ExactRule::ShiftedSums)
    } else if sparse_condition(profile) {
        (Some(upper.clone()), ExactRule::SparseCondition)
    } else {
        (None, ExactRule::None)
    };
    BoundsReport {
        lower,
        upper,
        exact,
        rule,
    }
}
