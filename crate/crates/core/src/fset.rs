//! Finite nonempty subsets of ω and the relations between them.
//!
//! An [`FSet`] is stored as a bit vector whose length is trimmed to the
//! highest member, so equal sets always have equal representations and
//! disjointness, union and subset tests are word-parallel.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use smallvec::SmallVec;

use crate::{Error, Result};

const WORD: u32 = 64;

/// Default exclusive upper bound on the members of an [`FSet`].
pub const DEFAULT_UNIVERSE: u32 = 4096;

/// Exclusive upper bound on set members.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Universe(u32);

impl Universe {
    pub fn new(bound: u32) -> Result<Self> {
        if bound < 2 {
            return Err(Error::InvalidUniverse(bound));
        }
        Ok(Universe(bound))
    }

    pub fn bound(self) -> u32 {
        self.0
    }

    pub fn check(self, value: u32) -> Result<()> {
        if value >= self.0 {
            Err(Error::OutOfUniverse {
                value,
                bound: self.0,
            })
        } else {
            Ok(())
        }
    }
}

impl Default for Universe {
    fn default() -> Self {
        Universe(DEFAULT_UNIVERSE)
    }
}

/// A finite nonempty subset of ω.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FSet {
    // Invariant: nonempty, last word nonzero.
    words: SmallVec<[u64; 4]>,
}

/// How two disjoint sets sit relative to each other.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PairRelation {
    /// `max(s) < min(t)`
    Ordered,
    /// `max(t) < min(s)`
    ReverseOrdered,
    /// Neither order holds.
    Meshed,
}

impl FSet {
    /// Builds a set under the default universe bound.
    pub fn new<I: IntoIterator<Item = u32>>(members: I) -> Result<Self> {
        Self::with_universe(members, Universe::default())
    }

    pub fn with_universe<I: IntoIterator<Item = u32>>(members: I, universe: Universe) -> Result<Self> {
        let mut words: SmallVec<[u64; 4]> = SmallVec::new();
        for m in members {
            universe.check(m)?;
            let w = (m / WORD) as usize;
            if words.len() <= w {
                words.resize(w + 1, 0);
            }
            words[w] |= 1u64 << (m % WORD);
        }
        Self::from_words(words).ok_or(Error::EmptySet)
    }

    pub fn singleton(value: u32) -> Result<Self> {
        Self::new([value])
    }

    /// The interval `lo..=hi`.
    pub fn interval(lo: u32, hi: u32) -> Result<Self> {
        Self::new(lo..=hi)
    }

    fn from_words(mut words: SmallVec<[u64; 4]>) -> Option<Self> {
        while words.last() == Some(&0) {
            words.pop();
        }
        if words.is_empty() {
            None
        } else {
            Some(FSet { words })
        }
    }

    pub fn min_elem(&self) -> u32 {
        let (i, w) = self
            .words
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .expect("FSet is nonempty");
        i as u32 * WORD + w.trailing_zeros()
    }

    pub fn max_elem(&self) -> u32 {
        let last = *self.words.last().expect("FSet is nonempty");
        (self.words.len() as u32 - 1) * WORD + (WORD - 1 - last.leading_zeros())
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Always false; present for API symmetry with collections.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, value: u32) -> bool {
        let w = (value / WORD) as usize;
        w < self.words.len() && self.words[w] & (1u64 << (value % WORD)) != 0
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let base = i as u32 * WORD;
            BitIter(w).map(move |b| base + b)
        })
    }

    pub fn to_vec(&self) -> Vec<u32> {
        self.iter().collect()
    }

    pub fn is_disjoint(&self, other: &FSet) -> bool {
        self.words
            .iter()
            .zip(other.words.iter())
            .all(|(a, b)| a & b == 0)
    }

    pub fn is_subset(&self, other: &FSet) -> bool {
        self.words.len() <= other.words.len()
            && self
                .words
                .iter()
                .zip(other.words.iter())
                .all(|(a, b)| a & !b == 0)
    }

    /// The partial semigroup operation of 𝔽: union of disjoint sets.
    pub fn union(&self, other: &FSet) -> Result<FSet> {
        if !self.is_disjoint(other) {
            return Err(Error::Overlap);
        }
        Ok(self.union_unchecked(other))
    }

    /// Plain set union, defined for all pairs.
    pub fn union_unchecked(&self, other: &FSet) -> FSet {
        let (long, short) = if self.words.len() >= other.words.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut words = long.words.clone();
        for (w, s) in words.iter_mut().zip(short.words.iter()) {
            *w |= s;
        }
        FSet { words }
    }

    /// Set difference; `None` when nothing is left.
    pub fn difference(&self, other: &FSet) -> Option<FSet> {
        let mut words = self.words.clone();
        for (w, o) in words.iter_mut().zip(other.words.iter()) {
            *w &= !o;
        }
        Self::from_words(words)
    }

    /// Splits into `self ∩ (n+1)` and `self ∖ (n+1)`, i.e. the members
    /// `≤ n` and those `> n`.
    pub fn split_at(&self, n: u32) -> (Option<FSet>, Option<FSet>) {
        let mut low = self.words.clone();
        let mut high = self.words.clone();
        let cut = n as u64 + 1;
        for (i, (l, h)) in low.iter_mut().zip(high.iter_mut()).enumerate() {
            let start = i as u64 * WORD as u64;
            let mask = if cut <= start {
                0
            } else if cut >= start + WORD as u64 {
                u64::MAX
            } else {
                (1u64 << (cut - start)) - 1
            };
            *l &= mask;
            *h &= !mask;
        }
        (Self::from_words(low), Self::from_words(high))
    }

    /// `max(self) < min(other)`.
    pub fn precedes(&self, other: &FSet) -> bool {
        self.max_elem() < other.min_elem()
    }

    /// Ordered / reverse-ordered / meshed classification of a disjoint pair.
    pub fn relation(&self, other: &FSet) -> Result<PairRelation> {
        if !self.is_disjoint(other) {
            return Err(Error::Overlap);
        }
        Ok(self.relation_unchecked(other))
    }

    pub(crate) fn relation_unchecked(&self, other: &FSet) -> PairRelation {
        if self.max_elem() < other.min_elem() {
            PairRelation::Ordered
        } else if other.max_elem() < self.min_elem() {
            PairRelation::ReverseOrdered
        } else {
            PairRelation::Meshed
        }
    }

    /// True iff the two sets mesh (neither precedes the other).
    pub fn meshes(&self, other: &FSet) -> bool {
        !self.precedes(other) && !other.precedes(self)
    }
}

/// Union of two disjoint sets.
pub fn fs_union(s: &FSet, t: &FSet) -> Result<FSet> {
    s.union(t)
}

pub fn pair_relation(s: &FSet, t: &FSet) -> Result<PairRelation> {
    s.relation(t)
}

struct BitIter(u64);

impl Iterator for BitIter {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        if self.0 == 0 {
            return None;
        }
        let b = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(b)
    }
}

/// Lexicographic order on the increasing member lists.
impl Ord for FSet {
    fn cmp(&self, other: &Self) -> Ordering {
        let n = self.words.len().max(other.words.len());
        for i in 0..n {
            let a = self.words.get(i).copied().unwrap_or(0);
            let b = other.words.get(i).copied().unwrap_or(0);
            let diff = a ^ b;
            if diff == 0 {
                continue;
            }
            let bit = diff.trailing_zeros();
            let in_self = a & (1u64 << bit) != 0;
            let (has, lacks) = if in_self { (self, other) } else { (other, self) };
            // `lacks` agrees with `has` below the differing bit. It is a
            // proper prefix (hence smaller) iff it has nothing above it.
            let pos = i as u32 * WORD + bit;
            let ord = if lacks.max_elem() > pos {
                Ordering::Less
            } else {
                Ordering::Greater
            };
            return if std::ptr::eq(has, self) {
                ord
            } else {
                ord.reverse()
            };
        }
        Ordering::Equal
    }
}

impl PartialOrd for FSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for FSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for FSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, m) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{m}")?;
        }
        f.write_str("}")
    }
}

impl Serialize for FSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for FSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let members = Vec::<u32>::deserialize(deserializer)?;
        if members.windows(2).any(|w| w[0] >= w[1]) {
            return Err(serde::de::Error::custom(
                "set members must be strictly increasing",
            ));
        }
        FSet::new(members).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set(v: &[u32]) -> FSet {
        FSet::new(v.iter().copied()).unwrap()
    }

    #[test]
    fn union_examples() {
        assert_eq!(fs_union(&set(&[0, 2]), &set(&[1])).unwrap(), set(&[0, 1, 2]));
        assert!(matches!(
            fs_union(&set(&[0, 2]), &set(&[2, 3])),
            Err(Error::Overlap)
        ));
        assert_eq!(fs_union(&set(&[5]), &set(&[7])).unwrap(), set(&[5, 7]));
    }

    #[test]
    fn relation_examples() {
        use PairRelation::*;
        assert_eq!(pair_relation(&set(&[1, 2]), &set(&[3, 4])).unwrap(), Ordered);
        assert_eq!(pair_relation(&set(&[1, 3]), &set(&[2, 4])).unwrap(), Meshed);
        assert_eq!(
            pair_relation(&set(&[3, 4]), &set(&[1, 2])).unwrap(),
            ReverseOrdered
        );
        assert!(pair_relation(&set(&[1]), &set(&[1, 2])).is_err());
    }

    #[test]
    fn empty_and_out_of_universe_are_rejected() {
        assert!(matches!(FSet::new([]), Err(Error::EmptySet)));
        assert!(matches!(
            FSet::new([DEFAULT_UNIVERSE]),
            Err(Error::OutOfUniverse { .. })
        ));
        let small = Universe::new(8).unwrap();
        assert!(FSet::with_universe([7], small).is_ok());
        assert!(FSet::with_universe([8], small).is_err());
        assert!(Universe::new(1).is_err());
    }

    #[test]
    fn accessors_across_word_boundaries() {
        let s = set(&[3, 63, 64, 130]);
        assert_eq!(s.min_elem(), 3);
        assert_eq!(s.max_elem(), 130);
        assert_eq!(s.len(), 4);
        assert_eq!(s.to_vec(), vec![3, 63, 64, 130]);
        let (lo, hi) = s.split_at(63);
        assert_eq!(lo.unwrap(), set(&[3, 63]));
        assert_eq!(hi.unwrap(), set(&[64, 130]));
        let (lo, hi) = s.split_at(130);
        assert_eq!(lo.unwrap(), s);
        assert!(hi.is_none());
    }

    #[test]
    fn trichotomy_exhaustive_on_eight_points() {
        let subsets: Vec<FSet> = (1u32..256)
            .map(|m| FSet::new((0..8).filter(|b| m & (1 << b) != 0)).unwrap())
            .collect();
        for s in &subsets {
            for t in &subsets {
                if !s.is_disjoint(t) {
                    continue;
                }
                let ordered = s.max_elem() < t.min_elem();
                let reverse = t.max_elem() < s.min_elem();
                let meshed = !ordered && !reverse;
                assert_eq!(
                    [ordered, reverse, meshed].iter().filter(|b| **b).count(),
                    1
                );
                let expected = if ordered {
                    PairRelation::Ordered
                } else if reverse {
                    PairRelation::ReverseOrdered
                } else {
                    PairRelation::Meshed
                };
                assert_eq!(s.relation(t).unwrap(), expected);
            }
        }
    }

    #[test]
    fn json_encoding() {
        let s = set(&[0, 2, 5]);
        assert_eq!(serde_json::to_string(&s).unwrap(), "[0,2,5]");
        assert_eq!(serde_json::from_str::<FSet>("[0,2,5]").unwrap(), s);
        assert!(serde_json::from_str::<FSet>("[2,0]").is_err());
        assert!(serde_json::from_str::<FSet>("[]").is_err());
        assert!(serde_json::from_str::<FSet>("[1,1]").is_err());
    }

    fn arb_set() -> impl Strategy<Value = FSet> {
        prop::collection::btree_set(0u32..200, 1..12).prop_map(|s| FSet::new(s).unwrap())
    }

    proptest! {
        #[test]
        fn order_matches_member_lists(a in arb_set(), b in arb_set()) {
            prop_assert_eq!(a.cmp(&b), a.to_vec().cmp(&b.to_vec()));
        }

        #[test]
        fn union_laws(a in arb_set(), b in arb_set(), c in arb_set()) {
            if a.is_disjoint(&b) && b.is_disjoint(&c) && a.is_disjoint(&c) {
                let left = fs_union(&fs_union(&a, &b).unwrap(), &c).unwrap();
                let right = fs_union(&a, &fs_union(&b, &c).unwrap()).unwrap();
                prop_assert_eq!(&left, &right);
                prop_assert_eq!(fs_union(&a, &b).unwrap(), fs_union(&b, &a).unwrap());
                let ab = fs_union(&a, &b).unwrap();
                prop_assert_eq!(ab.min_elem(), a.min_elem().min(b.min_elem()));
                prop_assert_eq!(ab.max_elem(), a.max_elem().max(b.max_elem()));
            } else if !a.is_disjoint(&b) {
                prop_assert!(fs_union(&a, &b).is_err());
            }
        }

        #[test]
        fn json_round_trip(a in arb_set()) {
            let text = serde_json::to_string(&a).unwrap();
            prop_assert_eq!(serde_json::from_str::<FSet>(&text).unwrap(), a);
        }
    }
}
