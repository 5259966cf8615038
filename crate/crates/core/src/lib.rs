//! Exact combinatorics on the partial semigroup 𝔽 of finite nonempty
//! subsets of ω under disjoint union.
//!
//! The crate is organised bottom-up:
//!
//! * [`fset`]: the element type [`FSet`] and the ordered / meshed relation.
//! * [`fu`]: disjoint sequences, FU-sets, supports, condensations and the
//!   support-transfer isomorphism.
//! * [`meshing`]: meshing graphs, witness search and construction, the
//!   nearly ordered base sequence and f-alternation.
//! * [`partition`]: colorings, homogeneous condensations, FRS numbers,
//!   splitting points, pair colorings and canonical classification.
//! * [`construction`]: towers of refined condensations with an independent
//!   trace auditor.

pub mod construction;
pub mod fset;
pub mod fu;
pub mod meshing;
pub mod partition;

pub use fset::{fs_union, pair_relation, FSet, PairRelation, Universe, DEFAULT_UNIVERSE};
pub use fu::{DisjointSeq, Support};

/// Color index; colors of a `c`-coloring are `0..c`.
pub type Color = u32;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("the empty set is not an element of 𝔽")]
    EmptySet,
    #[error("value {value} is outside the universe bound {bound}")]
    OutOfUniverse { value: u32, bound: u32 },
    #[error("universe bound must be at least 2, got {0}")]
    InvalidUniverse(u32),
    #[error("sets overlap; their union is undefined in 𝔽")]
    Overlap,
    #[error("entries {0} and {1} of the sequence overlap")]
    OverlappingEntries(usize, usize),
    #[error("set is not in the FU-set of the sequence")]
    NotInFu,
    #[error("sequence is not a condensation of the base")]
    NotACondensation,
    #[error("sequence lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("support index {index} out of range for a sequence of length {len}")]
    BadSupport { index: usize, len: usize },
    #[error("no solution exists within the search bounds")]
    NotFound,
    #[error("search budget of {0} nodes exceeded")]
    BudgetExceeded(u64),
    #[error("sequence too short: need {needed} entries, have {got}")]
    TooShort { needed: usize, got: usize },
    #[error("entry {0} is not strictly above its predecessor")]
    NotOrdered(usize),
    #[error("list is not strictly increasing at position {0}")]
    NotIncreasing(usize),
    #[error("construction needs values up to {needed} but the universe bound is {bound}")]
    UniverseExceeded { needed: u64, bound: u32 },
    #[error("no color assigned to {0}")]
    MissingColor(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
