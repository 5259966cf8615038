//! Meshing graphs and the witnesses built from them.
//!
//! The meshing graph of a condensation `t ⊑ s` joins `t_i` and `t_j` when
//! some base entries `s_n ⊆ t_i`, `s_m ⊆ t_j` mesh. A length-`n` condensation
//! with a complete meshing graph is an n-witness.

use std::collections::{BTreeSet, HashSet};
use std::fmt::Write as _;

use crate::fu::{x_supp, DisjointSeq};
use crate::{Error, FSet, Result, Universe};

/// Fixed-capacity bit set over indices of a base sequence.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub(crate) struct IdxSet {
    words: Vec<u64>,
}

impl IdxSet {
    pub(crate) fn empty(capacity: usize) -> Self {
        IdxSet {
            words: vec![0; capacity.div_ceil(64).max(1)],
        }
    }

    pub(crate) fn from_indices(capacity: usize, indices: &[usize]) -> Self {
        let mut s = Self::empty(capacity);
        for &i in indices {
            s.insert(i);
        }
        s
    }

    pub(crate) fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1u64 << (i % 64);
    }

    pub(crate) fn intersects(&self, other: &IdxSet) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub(crate) fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + b)
            })
        })
    }
}

/// Pairwise meshing table of a base sequence.
#[derive(Clone, Debug)]
pub(crate) struct BaseMesh {
    // rows[i] = { j : s_i and s_j mesh }
    rows: Vec<IdxSet>,
}

impl BaseMesh {
    pub(crate) fn new(base: &DisjointSeq) -> Self {
        let len = base.len();
        let rows = (0..len)
            .map(|i| {
                let mut row = IdxSet::empty(len);
                for j in 0..len {
                    if i != j && base.entries()[i].meshes(&base.entries()[j]) {
                        row.insert(j);
                    }
                }
                row
            })
            .collect();
        BaseMesh { rows }
    }

    /// Whether some base entry of `a` meshes with some base entry of `b`.
    pub(crate) fn linked(&self, a: &IdxSet, b: &IdxSet) -> bool {
        a.iter().any(|i| self.rows[i].intersects(b))
    }
}

/// The meshing graph of a condensation relative to a base sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeshGraph {
    vertices: Vec<FSet>,
    edges: BTreeSet<(usize, usize)>,
    base: DisjointSeq,
}

impl MeshGraph {
    pub fn vertices(&self) -> &[FSet] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Edges as index pairs `(i, j)` with `i < j`.
    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn base(&self) -> &DisjointSeq {
        &self.base
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.edges.contains(&(i.min(j), i.max(j)))
    }

    pub fn is_complete(&self) -> bool {
        let n = self.vertices.len();
        self.edges.len() == n * n.saturating_sub(1) / 2
    }

    /// Graphviz rendering; vertices are labelled with their JSON encoding.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph meshing {\n");
        for (i, v) in self.vertices.iter().enumerate() {
            let label = serde_json::to_string(v).expect("sets serialise");
            writeln!(out, "  {i} [label=\"{label}\"];").unwrap();
        }
        for (i, j) in &self.edges {
            writeln!(out, "  {i} -- {j};").unwrap();
        }
        out.push_str("}\n");
        out
    }
}

/// Builds `G_t` over base `s`. Pass `s = t` for the self-based graph.
pub fn meshing_graph(t: &DisjointSeq, s: &DisjointSeq) -> Result<MeshGraph> {
    let mesh = BaseMesh::new(s);
    let supports = t
        .iter()
        .map(|ti| {
            x_supp(ti, s)
                .map(|sp| IdxSet::from_indices(s.len(), sp.indices()))
                .map_err(|_| Error::NotACondensation)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut edges = BTreeSet::new();
    for i in 0..supports.len() {
        for j in i + 1..supports.len() {
            if mesh.linked(&supports[i], &supports[j]) {
                edges.insert((i, j));
            }
        }
    }
    Ok(MeshGraph {
        vertices: t.entries().to_vec(),
        edges,
        base: s.clone(),
    })
}

pub fn is_complete(g: &MeshGraph) -> bool {
    g.is_complete()
}

/// Searches for an n-witness of `a`: a disjoint `t` of length `n` with
/// `FU(t) ⊆ a ∩ FU(s)` and a complete meshing graph over `s`.
///
/// Candidates are tried by increasing maximum element. `Ok(None)` is an
/// exhaustive negative; running out of `budget` node expansions is
/// [`Error::BudgetExceeded`]. The witness is returned with entries sorted
/// by minimum.
pub fn find_n_witness(
    a: &BTreeSet<FSet>,
    s: &DisjointSeq,
    n: usize,
    budget: u64,
) -> Result<Option<DisjointSeq>> {
    if n == 0 {
        return Err(Error::Invalid("witness length must be at least 1".into()));
    }
    let mesh = BaseMesh::new(s);
    let mut cands: Vec<(FSet, IdxSet)> = a
        .iter()
        .filter_map(|z| {
            x_supp(z, s)
                .ok()
                .map(|sp| (z.clone(), IdxSet::from_indices(s.len(), sp.indices())))
        })
        .collect();
    cands.sort_by(|x, y| x.0.max_elem().cmp(&y.0.max_elem()).then_with(|| x.0.cmp(&y.0)));
    let lookup: HashSet<&FSet> = a.iter().collect();

    struct Search<'a> {
        cands: &'a [(FSet, IdxSet)],
        lookup: &'a HashSet<&'a FSet>,
        mesh: &'a BaseMesh,
        n: usize,
        budget: u64,
        nodes: u64,
        chosen: Vec<usize>,
        fu: Vec<FSet>,
    }

    impl Search<'_> {
        fn run(&mut self, start: usize) -> Result<bool> {
            if self.chosen.len() == self.n {
                return Ok(true);
            }
            for k in start..self.cands.len() {
                self.nodes += 1;
                if self.nodes > self.budget {
                    return Err(Error::BudgetExceeded(self.budget));
                }
                let (c, csup) = &self.cands[k];
                let fits = self.chosen.iter().all(|&j| {
                    let (e, esup) = &self.cands[j];
                    e.is_disjoint(c) && self.mesh.linked(esup, csup)
                });
                if !fits {
                    continue;
                }
                let grown: Vec<FSet> = self.fu.iter().map(|u| u.union_unchecked(c)).collect();
                if !grown.iter().all(|g| self.lookup.contains(g)) {
                    continue;
                }
                let before = self.fu.len();
                self.fu.push(c.clone());
                self.fu.extend(grown);
                self.chosen.push(k);
                if self.run(k + 1)? {
                    return Ok(true);
                }
                self.chosen.pop();
                self.fu.truncate(before);
            }
            Ok(false)
        }
    }

    let mut search = Search {
        cands: &cands,
        lookup: &lookup,
        mesh: &mesh,
        n,
        budget,
        nodes: 0,
        chosen: Vec::new(),
        fu: Vec::new(),
    };
    if search.run(0)? {
        let entries = search.chosen.iter().map(|&k| cands[k].0.clone()).collect();
        Ok(Some(DisjointSeq::new_unchecked(entries).canonical()))
    } else {
        Ok(None)
    }
}

/// Interleaves an ordered sequence into `n` pairwise meshed sets
/// `w_j = v_j ∪ v_{j+n}`.
pub fn make_complete_witness(v: &DisjointSeq, n: usize) -> Result<DisjointSeq> {
    if n == 0 {
        return Err(Error::Invalid("witness length must be at least 1".into()));
    }
    if v.len() < 2 * n {
        return Err(Error::TooShort {
            needed: 2 * n,
            got: v.len(),
        });
    }
    if let Some(i) = v.entries().windows(2).position(|w| !w[0].precedes(&w[1])) {
        return Err(Error::NotOrdered(i + 1));
    }
    let e = v.entries();
    let out = (0..n).map(|j| e[j].union_unchecked(&e[j + n])).collect();
    Ok(DisjointSeq::new_unchecked(out))
}

const CLIQUE_BUDGET: u64 = 5_000_000;

/// Builds an n-witness whose minima lie in `mins` and maxima in `maxes`
/// from three groups of entries of `s`: `n` entries with minimum in `mins`,
/// then a pairwise meshed block of `n` entries beyond them, then `n`
/// entries with maximum in `maxes` beyond both. `t_k` is the union of the
/// `k`-th entry of each group.
///
/// Each group is chosen with the smallest possible maximum, so `Ok(None)`
/// means no such three-group choice exists in `s`.
pub fn minmax_witness(
    mins: &BTreeSet<u32>,
    maxes: &BTreeSet<u32>,
    s: &DisjointSeq,
    n: usize,
) -> Result<Option<DisjointSeq>> {
    if n == 0 {
        return Err(Error::Invalid("witness length must be at least 1".into()));
    }
    let mut by_max: Vec<usize> = (0..s.len()).collect();
    by_max.sort_by_key(|&i| s.entries()[i].max_elem());
    let e = s.entries();

    let low: Vec<usize> = by_max
        .iter()
        .copied()
        .filter(|&i| mins.contains(&e[i].min_elem()))
        .take(n)
        .collect();
    if low.len() < n {
        return Ok(None);
    }
    let low_top = low.iter().map(|&i| e[i].max_elem()).max().unwrap();

    let middle_pool: Vec<usize> = by_max
        .iter()
        .copied()
        .filter(|&i| e[i].min_elem() > low_top)
        .collect();
    let Some(middle) = least_meshed_block(s, &middle_pool, n)? else {
        return Ok(None);
    };
    let mid_top = middle.iter().map(|&i| e[i].max_elem()).max().unwrap();

    let high: Vec<usize> = by_max
        .iter()
        .copied()
        .filter(|&i| e[i].min_elem() > mid_top && maxes.contains(&e[i].max_elem()))
        .take(n)
        .collect();
    if high.len() < n {
        return Ok(None);
    }

    let sorted = |mut g: Vec<usize>| {
        g.sort_by_key(|&i| e[i].min_elem());
        g
    };
    let (low, middle, high) = (sorted(low), sorted(middle), sorted(high));
    let t = (0..n)
        .map(|k| e[low[k]].union_unchecked(&e[middle[k]]).union_unchecked(&e[high[k]]))
        .collect();
    Ok(Some(DisjointSeq::new_unchecked(t)))
}

/// Pairwise meshed `n`-subset of `pool` (sorted by maximum) whose largest
/// maximum is as small as possible.
fn least_meshed_block(s: &DisjointSeq, pool: &[usize], n: usize) -> Result<Option<Vec<usize>>> {
    let e = s.entries();
    let mut nodes = 0u64;

    fn extend(
        e: &[FSet],
        pool: &[usize],
        limit: usize,
        start: usize,
        need: usize,
        chosen: &mut Vec<usize>,
        nodes: &mut u64,
    ) -> Result<bool> {
        if need == 0 {
            return Ok(true);
        }
        for k in start..limit {
            *nodes += 1;
            if *nodes > CLIQUE_BUDGET {
                return Err(Error::BudgetExceeded(CLIQUE_BUDGET));
            }
            let c = pool[k];
            if chosen.iter().all(|&j| e[j].meshes(&e[c])) {
                chosen.push(c);
                if extend(e, pool, limit, k + 1, need - 1, chosen, nodes)? {
                    return Ok(true);
                }
                chosen.pop();
            }
        }
        Ok(false)
    }

    for top in 0..pool.len() {
        let mut chosen = vec![pool[top]];
        if extend(e, pool, top, 0, n - 1, &mut chosen, &mut nodes)? {
            return Ok(Some(chosen));
        }
    }
    Ok(None)
}

/// Index ranges of the blocks of [`gen_base_sequence`]: block `k`
/// (1-based) covers entries `k(k-1)/2 .. k(k+1)/2`.
pub fn base_block_ranges(num_blocks: usize) -> Vec<std::ops::Range<usize>> {
    (1..=num_blocks)
        .map(|k| k * (k - 1) / 2..k * (k + 1) / 2)
        .collect()
}

/// The nearly ordered base sequence: blocks `B_1, …, B_b` where `B_k` has
/// `k` entries `{a_j, b_j}` drawn from `2k` fresh consecutive naturals
/// `a_0 < … < a_{k-1} < b_0 < … < b_{k-1}`.
pub fn gen_base_sequence(num_blocks: usize, universe: Universe) -> Result<DisjointSeq> {
    if num_blocks == 0 {
        return Err(Error::Invalid("need at least one block".into()));
    }
    let needed = num_blocks as u64 * (num_blocks as u64 + 1);
    if needed > universe.bound() as u64 {
        return Err(Error::UniverseExceeded {
            needed: needed - 1,
            bound: universe.bound(),
        });
    }
    let mut entries = Vec::with_capacity(num_blocks * (num_blocks + 1) / 2);
    let mut next = 0u32;
    for k in 1..=num_blocks as u32 {
        for j in 0..k {
            entries.push(FSet::with_universe([next + j, next + k + j], universe)?);
        }
        next += 2 * k;
    }
    Ok(DisjointSeq::new_unchecked(entries))
}

/// Labels of the merged minima (0) and maxima (1) of a sequence, in
/// increasing order of value; at equal values the minimum comes first.
pub fn minmax_word(seq: &DisjointSeq) -> Vec<u8> {
    let mut marks: Vec<(u32, u8)> = seq
        .iter()
        .flat_map(|e| [(e.min_elem(), 0u8), (e.max_elem(), 1u8)])
        .collect();
    marks.sort();
    marks.into_iter().map(|(_, b)| b).collect()
}

/// A prefix of the word `0 1 00 11 000 111 …` (block `n` is `n` zeros then
/// `n` ones).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FPattern {
    bits: Vec<u8>,
}

impl FPattern {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        let canonical = f_pattern(bits.len());
        if canonical.bits != bits {
            return Err(Error::Invalid(
                "bits are not a prefix of the alternation pattern".into(),
            ));
        }
        Ok(canonical)
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }
}

pub fn f_pattern(length: usize) -> FPattern {
    let mut bits = Vec::with_capacity(length);
    let mut n = 1;
    while bits.len() < length {
        bits.extend(std::iter::repeat_n(0u8, n));
        bits.extend(std::iter::repeat_n(1u8, n));
        n += 1;
    }
    bits.truncate(length);
    FPattern { bits }
}

/// Whether `x_k ∈ A_{f(k)}` for every `k` below both lengths.
pub fn is_f_alternating(
    xs: &[u32],
    f: &FPattern,
    a0: &BTreeSet<u32>,
    a1: &BTreeSet<u32>,
) -> Result<bool> {
    if let Some(i) = xs.windows(2).position(|w| w[0] >= w[1]) {
        return Err(Error::NotIncreasing(i + 1));
    }
    Ok(xs
        .iter()
        .zip(f.bits())
        .all(|(x, &b)| if b == 0 { a0.contains(x) } else { a1.contains(x) }))
}

/// Greedy longest f-alternating selection: each `x_k` is the least member
/// of `A_{f(k)}` above `x_{k-1}`. `None` if position 0 cannot be filled.
pub fn f_alternating_merge(a0: &BTreeSet<u32>, a1: &BTreeSet<u32>, f: &FPattern) -> Option<Vec<u32>> {
    let mut out: Vec<u32> = Vec::new();
    for &b in f.bits() {
        let pool = if b == 0 { a0 } else { a1 };
        let next = match out.last() {
            None => pool.iter().next(),
            Some(&prev) => pool.range(prev + 1..).next(),
        };
        match next {
            Some(&x) => out.push(x),
            None => break,
        }
    }
    if out.is_empty() {
        None
    } else {
        Some(out)
    }
}
