//! Disjoint sequences, FU-sets, supports and condensations.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, FSet, Result};

/// Largest generator count for which a full FU-set is materialised.
pub const MAX_MATERIALISED: usize = 26;

/// A finite sequence of pairwise-disjoint [`FSet`]s.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct DisjointSeq {
    entries: Vec<FSet>,
}

/// A nonempty set of indices into a [`DisjointSeq`], kept sorted.
///
/// Supports compare lexicographically as increasing index lists.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Support(Vec<usize>);

impl Support {
    pub fn new<I: IntoIterator<Item = usize>>(indices: I) -> Result<Self> {
        let set: BTreeSet<usize> = indices.into_iter().collect();
        if set.is_empty() {
            return Err(Error::Invalid("support must be nonempty".into()));
        }
        Ok(Support(set.into_iter().collect()))
    }

    pub(crate) fn from_sorted(indices: Vec<usize>) -> Self {
        debug_assert!(!indices.is_empty() && indices.windows(2).all(|w| w[0] < w[1]));
        Support(indices)
    }

    /// Support of the bits set in `mask`.
    pub fn from_mask(mask: u64) -> Result<Self> {
        Self::new((0..64).filter(|b| mask & (1u64 << b) != 0))
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn min_index(&self) -> usize {
        self.0[0]
    }

    pub fn max_index(&self) -> usize {
        *self.0.last().expect("support is nonempty")
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn is_disjoint(&self, other: &Support) -> bool {
        self.0.iter().all(|i| !other.contains(*i))
    }
}

impl fmt::Debug for Support {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl<'de> Deserialize<'de> for Support {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        Support::new(v).map_err(serde::de::Error::custom)
    }
}

impl DisjointSeq {
    pub fn new(entries: Vec<FSet>) -> Result<Self> {
        for i in 0..entries.len() {
            for j in i + 1..entries.len() {
                if !entries[i].is_disjoint(&entries[j]) {
                    return Err(Error::OverlappingEntries(i, j));
                }
            }
        }
        Ok(DisjointSeq { entries })
    }

    pub(crate) fn new_unchecked(entries: Vec<FSet>) -> Self {
        DisjointSeq { entries }
    }

    /// Sequence of singletons `{v}` for each value.
    pub fn singletons<I: IntoIterator<Item = u32>>(values: I) -> Result<Self> {
        let entries = values
            .into_iter()
            .map(FSet::singleton)
            .collect::<Result<Vec<_>>>()?;
        Self::new(entries)
    }

    /// Builds from increasing member lists, e.g. `&[&[0, 2], &[1]]`.
    pub fn from_lists(lists: &[&[u32]]) -> Result<Self> {
        let entries = lists
            .iter()
            .map(|l| FSet::new(l.iter().copied()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(entries)
    }

    pub fn entries(&self) -> &[FSet] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<FSet> {
        self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<&FSet> {
        self.entries.get(i)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, FSet> {
        self.entries.iter()
    }

    /// The entries from index `k` on.
    pub fn suffix(&self, k: usize) -> DisjointSeq {
        DisjointSeq::new_unchecked(self.entries[k.min(self.len())..].to_vec())
    }

    /// The entries with indices in `range`.
    pub fn slice(&self, range: std::ops::Range<usize>) -> DisjointSeq {
        DisjointSeq::new_unchecked(self.entries[range].to_vec())
    }

    /// `⋃_{i ∈ v} x_i`.
    pub fn union_of(&self, support: &Support) -> Result<FSet> {
        let mut it = support.indices().iter();
        let first = *it.next().expect("support is nonempty");
        let mut acc = self.entry_checked(first)?.clone();
        for &i in it {
            acc = acc.union_unchecked(self.entry_checked(i)?);
        }
        Ok(acc)
    }

    fn entry_checked(&self, i: usize) -> Result<&FSet> {
        self.entries.get(i).ok_or(Error::BadSupport {
            index: i,
            len: self.len(),
        })
    }

    /// The condensation whose entries are the unions over `supports`.
    pub fn condense(&self, supports: &[Support]) -> Result<DisjointSeq> {
        let entries = supports
            .iter()
            .map(|s| self.union_of(s))
            .collect::<Result<Vec<_>>>()?;
        DisjointSeq::new(entries)
    }

    /// Entries sorted by increasing minimum.
    pub fn canonical(&self) -> DisjointSeq {
        let mut entries = self.entries.clone();
        entries.sort_by_key(FSet::min_elem);
        DisjointSeq::new_unchecked(entries)
    }

    /// Every entry lies strictly below the next one.
    pub fn is_ordered(&self) -> bool {
        self.entries.windows(2).all(|w| w[0].precedes(&w[1]))
    }

    /// Union of all entries, `None` for the empty sequence.
    pub fn total(&self) -> Option<FSet> {
        let mut it = self.entries.iter();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, e| acc.union_unchecked(e)))
    }

    /// All of FU(x) indexed by generator mask: element `mask - 1` is the
    /// union of the entries whose bits are set in `mask`.
    pub fn fu_table(&self) -> Result<Vec<FSet>> {
        if self.len() > MAX_MATERIALISED {
            return Err(Error::Invalid(format!(
                "FU-set of {} generators is too large to materialise",
                self.len()
            )));
        }
        let size = (1usize << self.len()) - 1;
        let mut table: Vec<FSet> = Vec::with_capacity(size);
        for mask in 1..=size {
            let low = mask.trailing_zeros() as usize;
            let rest = mask & (mask - 1);
            let elem = if rest == 0 {
                self.entries[low].clone()
            } else {
                table[rest - 1].union_unchecked(&self.entries[low])
            };
            table.push(elem);
        }
        Ok(table)
    }
}

impl fmt::Debug for DisjointSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for DisjointSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str(")")
    }
}

impl Serialize for DisjointSeq {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.entries.serialize(s)
    }
}

impl<'de> Deserialize<'de> for DisjointSeq {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let entries = Vec::<FSet>::deserialize(d)?;
        DisjointSeq::new(entries).map_err(serde::de::Error::custom)
    }
}

impl<'a> IntoIterator for &'a DisjointSeq {
    type Item = &'a FSet;
    type IntoIter = std::slice::Iter<'a, FSet>;

    fn into_iter(self) -> Self::IntoIter {
        self.entries.iter()
    }
}

/// FU_k(x): all nonempty unions of entries with index `≥ k`.
pub fn fu_set(x: &DisjointSeq, k: usize) -> Result<BTreeSet<FSet>> {
    if k > x.len() {
        return Err(Error::TooShort {
            needed: k,
            got: x.len(),
        });
    }
    Ok(x.suffix(k).fu_table()?.into_iter().collect())
}

/// The x-support of `z`: the unique index set whose entries union to `z`.
pub fn x_supp(z: &FSet, x: &DisjointSeq) -> Result<Support> {
    let mut indices = Vec::new();
    let mut covered = 0usize;
    for (i, e) in x.iter().enumerate() {
        if e.is_subset(z) {
            indices.push(i);
            covered += e.len();
        } else if !e.is_disjoint(z) {
            return Err(Error::NotInFu);
        }
    }
    if indices.is_empty() || covered != z.len() {
        return Err(Error::NotInFu);
    }
    Ok(Support::from_sorted(indices))
}

/// Whether every entry of `y` from index `drop` on lies in FU(x).
///
/// `drop = 0` is the condensation relation `y ⊑ x`; a positive `drop`
/// exempts that many leading entries.
pub fn is_condensation(y: &DisjointSeq, x: &DisjointSeq, drop: usize) -> bool {
    let mut used: Vec<bool> = vec![false; x.len()];
    for z in y.entries().iter().skip(drop) {
        let Ok(supp) = x_supp(z, x) else {
            return false;
        };
        for &i in supp.indices() {
            // Follows from disjointness of y; checked anyway.
            if std::mem::replace(&mut used[i], true) {
                return false;
            }
        }
    }
    true
}

/// Support tuples of all length-`n` condensations of a sequence with
/// `len` generators, as restricted growth labelings; each unordered family
/// appears once, in generation order.
pub(crate) fn condensation_supports(len: usize, n: usize, budget: u64) -> Result<Vec<Vec<Support>>> {
    let mut out = Vec::new();
    if n == 0 || n > len {
        return Ok(out);
    }
    let mut blocks: Vec<Vec<usize>> = Vec::with_capacity(n);
    let mut nodes = 0u64;
    fn rec(
        i: usize,
        len: usize,
        n: usize,
        blocks: &mut Vec<Vec<usize>>,
        out: &mut Vec<Vec<Support>>,
        nodes: &mut u64,
        budget: u64,
    ) -> Result<()> {
        *nodes += 1;
        if *nodes > budget {
            return Err(Error::BudgetExceeded(budget));
        }
        // Not enough indices left to open the missing blocks.
        if n - blocks.len() > len - i {
            return Ok(());
        }
        if i == len {
            out.push(blocks.iter().cloned().map(Support::from_sorted).collect());
            return Ok(());
        }
        rec(i + 1, len, n, blocks, out, nodes, budget)?;
        for b in 0..blocks.len() {
            blocks[b].push(i);
            rec(i + 1, len, n, blocks, out, nodes, budget)?;
            blocks[b].pop();
        }
        if blocks.len() < n {
            blocks.push(vec![i]);
            rec(i + 1, len, n, blocks, out, nodes, budget)?;
            blocks.pop();
        }
        Ok(())
    }
    rec(0, len, n, &mut blocks, &mut out, &mut nodes, budget)?;
    Ok(out)
}

/// A condensation together with its support over the generating sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Condensation {
    pub supports: Vec<Support>,
    pub seq: DisjointSeq,
}

/// All length-`n` condensations of `x` in canonical form: entries sorted by
/// increasing minimum, the list sorted by support tuples.
pub fn enumerate_condensations_with_supports(
    x: &DisjointSeq,
    n: usize,
    budget: u64,
) -> Result<Vec<Condensation>> {
    if n == 0 {
        return Err(Error::Invalid("condensation length must be at least 1".into()));
    }
    let mut all = Vec::new();
    for supports in condensation_supports(x.len(), n, budget)? {
        let mut pairs: Vec<(FSet, Support)> = supports
            .into_iter()
            .map(|s| Ok((x.union_of(&s)?, s)))
            .collect::<Result<_>>()?;
        pairs.sort_by_key(|(e, _)| e.min_elem());
        let (entries, supports): (Vec<FSet>, Vec<Support>) = pairs.into_iter().unzip();
        all.push(Condensation {
            supports,
            seq: DisjointSeq::new_unchecked(entries),
        });
    }
    all.sort_by(|a, b| a.supports.cmp(&b.supports));
    Ok(all)
}

pub fn enumerate_condensations(x: &DisjointSeq, n: usize, budget: u64) -> Result<Vec<DisjointSeq>> {
    Ok(enumerate_condensations_with_supports(x, n, budget)?
        .into_iter()
        .map(|c| c.seq)
        .collect())
}

/// The natural isomorphism FU(src) → FU(dst): `⋃_{i∈v} src_i ↦ ⋃_{i∈v} dst_i`.
pub fn support_transfer(z: &FSet, src: &DisjointSeq, dst: &DisjointSeq) -> Result<FSet> {
    if src.len() != dst.len() {
        return Err(Error::LengthMismatch(src.len(), dst.len()));
    }
    dst.union_of(&x_supp(z, src)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[u32]) -> FSet {
        FSet::new(v.iter().copied()).unwrap()
    }

    fn seq(v: &[&[u32]]) -> DisjointSeq {
        DisjointSeq::from_lists(v).unwrap()
    }

    fn supp(v: &[usize]) -> Support {
        Support::new(v.iter().copied()).unwrap()
    }

    #[test]
    fn fu_set_examples() {
        let x = seq(&[&[0], &[1]]);
        let fu = fu_set(&x, 0).unwrap();
        let expected: BTreeSet<FSet> = [set(&[0]), set(&[1]), set(&[0, 1])].into_iter().collect();
        assert_eq!(fu, expected);
        assert_eq!(fu_set(&seq(&[&[0], &[4, 5], &[9]]), 0).unwrap().len(), 7);
        assert_eq!(
            fu_set(&x, 1).unwrap(),
            [set(&[1])].into_iter().collect::<BTreeSet<_>>()
        );
        assert!(fu_set(&x, 2).unwrap().is_empty());
        assert!(fu_set(&x, 3).is_err());
    }

    #[test]
    fn overlapping_sequence_rejected() {
        assert!(matches!(
            DisjointSeq::from_lists(&[&[0, 1], &[1]]),
            Err(Error::OverlappingEntries(0, 1))
        ));
    }

    #[test]
    fn x_supp_examples() {
        assert_eq!(x_supp(&set(&[0, 1]), &seq(&[&[0], &[1]])).unwrap(), supp(&[0, 1]));
        assert_eq!(
            x_supp(&set(&[1, 3, 5]), &seq(&[&[1, 3], &[5], &[9]])).unwrap(),
            supp(&[0, 1])
        );
        assert!(matches!(
            x_supp(&set(&[0, 2]), &seq(&[&[0], &[1]])),
            Err(Error::NotInFu)
        ));
        // Partial overlap with an entry.
        assert!(x_supp(&set(&[1]), &seq(&[&[1, 3]])).is_err());
    }

    #[test]
    fn condensation_examples() {
        let x = seq(&[&[0], &[1], &[2]]);
        assert!(is_condensation(&seq(&[&[0, 1], &[2]]), &x, 0));
        assert!(!is_condensation(&seq(&[&[0, 2]]), &seq(&[&[0], &[1]]), 0));
        assert!(is_condensation(&seq(&[&[9], &[0, 1]]), &x, 1));
        assert!(!is_condensation(&seq(&[&[9], &[0, 1]]), &x, 0));
    }

    #[test]
    fn enumerate_examples() {
        let x2 = seq(&[&[0], &[1]]);
        assert_eq!(enumerate_condensations(&x2, 2, 1000).unwrap(), vec![x2.clone()]);
        let x3 = seq(&[&[0], &[1], &[2]]);
        let six = enumerate_condensations(&x3, 2, 1000).unwrap();
        assert_eq!(six.len(), 6);
        assert!(enumerate_condensations(&x3, 4, 1000).unwrap().is_empty());
        assert!(enumerate_condensations(&x3, 0, 1000).is_err());
        assert!(matches!(
            enumerate_condensations(&x3, 2, 3),
            Err(Error::BudgetExceeded(3))
        ));
    }

    #[test]
    fn enumerate_is_canonical() {
        // Out-of-order generators still give min-sorted entries.
        let x = seq(&[&[9], &[0, 1], &[4]]);
        let all = enumerate_condensations_with_supports(&x, 2, 10_000).unwrap();
        for c in &all {
            assert!(c.seq.entries().windows(2).all(|w| w[0].min_elem() < w[1].min_elem()));
            assert_eq!(c.seq, x.condense(&c.supports).unwrap());
        }
        assert!(all.windows(2).all(|w| w[0].supports < w[1].supports));
    }

    #[test]
    fn transfer_examples() {
        let t = support_transfer(&set(&[0, 1]), &seq(&[&[0], &[1]]), &seq(&[&[5], &[7, 8]]));
        assert_eq!(t.unwrap(), set(&[5, 7, 8]));
        let id = seq(&[&[3], &[4]]);
        assert_eq!(support_transfer(&set(&[3]), &id, &id).unwrap(), set(&[3]));
        let t = support_transfer(&set(&[0, 4]), &seq(&[&[0], &[4]]), &seq(&[&[2, 6], &[1]]));
        assert_eq!(t.unwrap(), set(&[1, 2, 6]));
        assert!(matches!(
            support_transfer(&set(&[0]), &seq(&[&[0]]), &seq(&[&[1], &[2]])),
            Err(Error::LengthMismatch(1, 2))
        ));
        assert!(matches!(
            support_transfer(&set(&[7]), &id, &id),
            Err(Error::NotInFu)
        ));
    }

    #[test]
    fn json_encoding() {
        let x = seq(&[&[0, 2], &[1, 3]]);
        assert_eq!(serde_json::to_string(&x).unwrap(), "[[0,2],[1,3]]");
        assert_eq!(serde_json::from_str::<DisjointSeq>("[[0,2],[1,3]]").unwrap(), x);
        assert!(serde_json::from_str::<DisjointSeq>("[[0,2],[2,3]]").is_err());
    }
}
