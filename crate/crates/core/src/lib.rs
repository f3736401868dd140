//! Posets with a prescribed multiset of maximal-chain cardinalities.
//!
//! Given a multiset `S` of positive integers (a *chain profile*), this crate
//! bounds the minimum size of a poset whose maximal chains have exactly those
//! cardinalities, builds witnesses, finds the exact minimum for small cases by
//! exhaustive search, and checks compact certificates whose verification cost
//! depends on the bit size of `S` rather than on the size of the poset.

mod bitset;
pub mod bounds;
mod canon;
pub mod certificate;
pub mod cli;
pub mod constructions;
pub mod poset;
pub mod profile;
pub mod search;

pub use bounds::{exact_bounds, lower_bound, sparse_condition, upper_bound, BoundsReport, ExactRule};
pub use canon::CanonicalKey;
pub use certificate::{compress, size_of_profile, verify, CompressedPoset, LengthPolynomial, Rejection, Vertex};
pub use constructions::{
    as_shifted_sums, reconstruct_subset_sums, sums_construction, trivial_construction, SumsDecomposition,
};
pub use poset::{ElementSet, ParseError, Poset, PosetError};
pub use profile::{
    adjacency_matrix, max_chain, profile_enumerate, profile_matrix, ChainProfile, CountMatrix, ProfileError,
};
pub use search::{enumerate_posets, minimal_poset, PosetCatalog, SearchResult, SearchStatus, Searcher};
