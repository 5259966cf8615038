//! Towers of refined condensations of a base sequence.
//!
//! Each stage refines its predecessor into a sequence `z` that is
//! homogeneous for the stage's colorings, carries complete witness blocks
//! over the base and respects optional min/max pools. [`verify_trace`]
//! re-derives every recorded fact from the raw sequences.

use std::collections::BTreeSet;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::fu::{is_condensation, x_supp, DisjointSeq};
use crate::meshing::{f_pattern, meshing_graph, minmax_word, BaseMesh, IdxSet};
use crate::partition::Coloring;
use crate::{Color, Error, FSet, Result};

/// What a hashed coloring looks at.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HashKey {
    #[default]
    Set,
    Min,
    Max,
    MinMax,
}

/// A coloring of FU(base), either tabulated or given by a rule.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ColoringRule {
    /// Explicit cells; sets outside the table are uncolored.
    Table { coloring: Coloring },
    /// Size of the base support, mod 2.
    SupportParity,
    MinMod { modulus: u32 },
    MaxMod { modulus: u32 },
    /// Seeded hash of the chosen key, mod `colors`.
    Random {
        colors: u32,
        seed: u64,
        #[serde(default)]
        key: HashKey,
    },
}

fn mix(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl ColoringRule {
    pub fn colors(&self) -> u32 {
        match self {
            ColoringRule::Table { coloring } => coloring.colors(),
            ColoringRule::SupportParity => 2,
            ColoringRule::MinMod { modulus } | ColoringRule::MaxMod { modulus } => *modulus,
            ColoringRule::Random { colors, .. } => *colors,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.colors() == 0 {
            return Err(Error::Invalid("a coloring needs at least one color".into()));
        }
        Ok(())
    }

    fn needs_support(&self) -> bool {
        matches!(self, ColoringRule::SupportParity)
    }

    /// Color of `z` given the size of its base support.
    fn eval(&self, z: &FSet, support_len: usize) -> Option<Color> {
        match self {
            ColoringRule::Table { coloring } => coloring.color(z),
            ColoringRule::SupportParity => Some((support_len % 2) as Color),
            ColoringRule::MinMod { modulus } => Some(z.min_elem() % modulus),
            ColoringRule::MaxMod { modulus } => Some(z.max_elem() % modulus),
            ColoringRule::Random { colors, seed, key } => {
                let mut h = mix(*seed);
                let mut feed = |v: u32| h = mix(h ^ v as u64);
                match key {
                    HashKey::Set => z.iter().for_each(&mut feed),
                    HashKey::Min => feed(z.min_elem()),
                    HashKey::Max => feed(z.max_elem()),
                    HashKey::MinMax => {
                        feed(z.min_elem());
                        feed(z.max_elem());
                    }
                }
                Some((h % *colors as u64) as Color)
            }
        }
    }

    /// Color of `z ∈ FU(base)`; `None` if `z` is uncolored or, for
    /// support-based rules, not in FU(base).
    pub fn color(&self, z: &FSet, base: &DisjointSeq) -> Option<Color> {
        let support_len = if self.needs_support() {
            x_supp(z, base).ok()?.len()
        } else {
            0
        };
        self.eval(z, support_len)
    }
}

/// Requirements on one stage of a tower.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageConstraints {
    #[serde(default)]
    pub colorings: Vec<ColoringRule>,
    /// Sizes of the complete witness blocks, placed in this order at the
    /// end of the stage sequence.
    #[serde(default)]
    pub witness_sizes: Vec<usize>,
    /// Allowed minima; empty means unconstrained.
    #[serde(default)]
    pub min_pool: BTreeSet<u32>,
    /// Allowed maxima; empty means unconstrained.
    #[serde(default)]
    pub max_pool: BTreeSet<u32>,
    /// Leading entries that may come from FU(base) instead of FU(prev).
    #[serde(default)]
    pub drop_budget: usize,
}

impl StageConstraints {
    fn validate(&self, target_len: usize) -> Result<()> {
        if self.witness_sizes.contains(&0) {
            return Err(Error::Invalid("witness sizes must be at least 1".into()));
        }
        let total: usize = self.witness_sizes.iter().sum();
        if total > target_len {
            return Err(Error::Invalid(format!(
                "witness blocks need {total} entries but the target length is {target_len}"
            )));
        }
        self.colorings.iter().try_for_each(ColoringRule::validate)
    }

    /// Index ranges of the witness blocks in a sequence of length `len`.
    pub fn block_ranges(&self, len: usize) -> Vec<Range<usize>> {
        let total: usize = self.witness_sizes.iter().sum();
        let mut start = len.saturating_sub(total);
        self.witness_sizes
            .iter()
            .map(|&w| {
                let r = start..start + w;
                start += w;
                r
            })
            .collect()
    }

    fn claims_f_alternation(&self) -> bool {
        !self.witness_sizes.is_empty() && self.witness_sizes.iter().enumerate().all(|(i, &w)| w == i + 1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchParams {
    pub target_len: usize,
    /// Candidate nodes examined per stage.
    pub budget: u64,
    /// Largest number of generators merged into one candidate entry.
    pub max_union: usize,
}

impl Default for SearchParams {
    fn default() -> Self {
        SearchParams {
            target_len: 8,
            budget: 10_000_000,
            max_union: 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coverage {
    pub covered: u64,
    pub total: u64,
}

/// The facts a stage claims about itself.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageAudit {
    /// Least number of leading entries exempt from `⊑ prev`.
    pub drop: usize,
    /// Color of FU(z) per coloring; `None` when no element is colored.
    pub colors: Vec<Option<Color>>,
    pub coverage: Vec<Coverage>,
    pub blocks: Vec<Range<usize>>,
    pub minima: Vec<u32>,
    pub maxima: Vec<u32>,
    /// Whether the block region's min/max word is an f-pattern prefix;
    /// recorded only when the witness sizes are `1, 2, …, k`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f_alternating: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageRecord {
    pub constraints: StageConstraints,
    pub seq: DisjointSeq,
    pub audit: StageAudit,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionTrace {
    pub base: DisjointSeq,
    pub stages: Vec<StageRecord>,
}

/// A stage that could not be built, with the stages completed before it.
#[derive(Debug, thiserror::Error)]
#[error("stage {stage} failed: {error}")]
pub struct TowerFailure {
    pub stage: usize,
    pub error: Error,
    pub partial: ConstructionTrace,
}

struct Cand {
    set: FSet,
    supp: IdxSet,
    supp_len: usize,
    key: Vec<usize>,
}

/// Unions of at most `max_union` entries of `gens`, with base supports,
/// sorted by maximum and then base support.
fn candidates(gens: &DisjointSeq, base: &DisjointSeq, max_union: usize) -> Result<Vec<Cand>> {
    fn walk(gens: &[FSet], start: usize, left: usize, acc: Option<FSet>, out: &mut Vec<FSet>) {
        for i in start..gens.len() {
            let next = match &acc {
                None => gens[i].clone(),
                Some(a) => a.union_unchecked(&gens[i]),
            };
            if left > 1 {
                walk(gens, i + 1, left - 1, Some(next.clone()), out);
            }
            out.push(next);
        }
    }
    let mut sets = Vec::new();
    walk(gens.entries(), 0, max_union.max(1), None, &mut sets);
    let mut out = sets
        .into_iter()
        .map(|set| {
            let sp = x_supp(&set, base).map_err(|_| Error::NotACondensation)?;
            Ok(Cand {
                supp: IdxSet::from_indices(base.len(), sp.indices()),
                supp_len: sp.len(),
                key: sp.indices().to_vec(),
                set,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    sort_cands(&mut out);
    Ok(out)
}

fn sort_cands(c: &mut Vec<Cand>) {
    c.sort_by(|a, b| a.set.max_elem().cmp(&b.set.max_elem()).then_with(|| a.key.cmp(&b.key)));
    c.dedup_by(|a, b| a.set == b.set);
}

struct Dfs<'a> {
    prev_pool: &'a [Cand],
    drop_pool: &'a [Cand],
    mesh: &'a BaseMesh,
    cons: &'a StageConstraints,
    targets: Vec<Color>,
    // block index per position; None inside the ordered prefix
    slots: Vec<Option<usize>>,
    block_start: Vec<usize>,
    drop: usize,
    budget: u64,
    nodes: u64,
    chosen: Vec<&'a Cand>,
    fu: Vec<(FSet, usize)>,
}

impl<'a> Dfs<'a> {
    fn fits(&self, pos: usize, c: &Cand) -> bool {
        let (lo, hi) = (c.set.min_elem(), c.set.max_elem());
        if !self.cons.min_pool.is_empty() && !self.cons.min_pool.contains(&lo) {
            return false;
        }
        if !self.cons.max_pool.is_empty() && !self.cons.max_pool.contains(&hi) {
            return false;
        }
        if !self.chosen.iter().all(|e| e.set.is_disjoint(&c.set)) {
            return false;
        }
        match self.slots[pos] {
            None => pos == 0 || self.chosen[pos - 1].set.precedes(&c.set),
            Some(b) => {
                let start = self.block_start[b];
                let floor = self.chosen[..start].iter().map(|e| e.set.max_elem()).max();
                if floor.is_some_and(|f| f >= lo) {
                    return false;
                }
                if pos > start && self.chosen[pos - 1].set.min_elem() >= lo {
                    return false;
                }
                self.chosen[start..]
                    .iter()
                    .all(|e| self.mesh.linked(&e.supp, &c.supp))
            }
        }
    }

    fn grown(&self, c: &Cand) -> Option<Vec<(FSet, usize)>> {
        let mut out = Vec::with_capacity(self.fu.len() + 1);
        out.push((c.set.clone(), c.supp_len));
        out.extend(
            self.fu
                .iter()
                .map(|(u, n)| (u.union_unchecked(&c.set), n + c.supp_len)),
        );
        for (z, n) in &out {
            for (rule, &t) in self.cons.colorings.iter().zip(&self.targets) {
                if rule.eval(z, *n).is_some_and(|col| col != t) {
                    return None;
                }
            }
        }
        Some(out)
    }

    fn run(&mut self, pos: usize) -> Result<bool> {
        if pos == self.slots.len() {
            return Ok(true);
        }
        let pool = if pos < self.drop { self.drop_pool } else { self.prev_pool };
        for c in pool {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::BudgetExceeded(self.budget));
            }
            if !self.fits(pos, c) {
                continue;
            }
            let Some(grown) = self.grown(c) else {
                continue;
            };
            let before = self.fu.len();
            self.fu.extend(grown);
            self.chosen.push(c);
            if self.run(pos + 1)? {
                return Ok(true);
            }
            self.chosen.pop();
            self.fu.truncate(before);
        }
        Ok(false)
    }
}

/// All color vectors for `rules`, lexicographically.
fn target_vectors(rules: &[ColoringRule]) -> Vec<Vec<Color>> {
    rules.iter().fold(vec![Vec::new()], |acc, r| {
        acc.into_iter()
            .flat_map(|v| {
                (0..r.colors()).map(move |c| {
                    let mut w = v.clone();
                    w.push(c);
                    w
                })
            })
            .collect()
    })
}

fn audit_stage(seq: &DisjointSeq, prev: &DisjointSeq, base: &DisjointSeq, cons: &StageConstraints) -> Result<StageAudit> {
    let drop = (0..=seq.len())
        .find(|&d| is_condensation(seq, prev, d))
        .unwrap_or(seq.len());
    let table = seq.fu_table()?;
    let mut colors = Vec::new();
    let mut coverage = Vec::new();
    for rule in &cons.colorings {
        let seen: Vec<Color> = table.iter().filter_map(|z| rule.color(z, base)).collect();
        colors.push(seen.first().copied());
        coverage.push(Coverage {
            covered: seen.len() as u64,
            total: table.len() as u64,
        });
    }
    let blocks = cons.block_ranges(seq.len());
    let f_alternating = cons
        .claims_f_alternation()
        .then(|| block_word_is_f_pattern(seq, &blocks));
    Ok(StageAudit {
        drop,
        colors,
        coverage,
        blocks,
        minima: seq.iter().map(FSet::min_elem).collect(),
        maxima: seq.iter().map(FSet::max_elem).collect(),
        f_alternating,
    })
}

fn block_word_is_f_pattern(seq: &DisjointSeq, blocks: &[Range<usize>]) -> bool {
    let mut word = Vec::new();
    for r in blocks {
        if r.end > seq.len() {
            return false;
        }
        word.extend(minmax_word(&seq.slice(r.clone())));
    }
    f_pattern(word.len()).bits() == word.as_slice()
}

/// One refinement step. Entries of the result lie in FU(prev), except for
/// up to `drop_budget` leading entries which may come from FU(base).
///
/// Exemption counts are tried in increasing order, then color vectors in
/// lexicographic order (color 0 first), then candidate tuples by
/// increasing maximum. [`Error::NotFound`] is exhaustive over candidates
/// merging at most `params.max_union` generators.
pub fn refine_stage(
    prev: &DisjointSeq,
    base: &DisjointSeq,
    cons: &StageConstraints,
    params: &SearchParams,
) -> Result<(DisjointSeq, StageAudit)> {
    let len = params.target_len;
    if len == 0 {
        return Err(Error::Invalid("target length must be at least 1".into()));
    }
    cons.validate(len)?;
    if !is_condensation(prev, base, 0) {
        return Err(Error::NotACondensation);
    }
    let prev_pool = candidates(prev, base, params.max_union)?;
    let drop_pool = if prev == base || cons.drop_budget == 0 {
        Vec::new()
    } else {
        let mut all = candidates(base, base, params.max_union)?;
        all.extend(candidates(prev, base, params.max_union)?);
        sort_cands(&mut all);
        all
    };
    let mesh = BaseMesh::new(base);

    let blocks = cons.block_ranges(len);
    let mut slots = vec![None; len];
    for (b, r) in blocks.iter().enumerate() {
        slots[r.clone()].iter_mut().for_each(|s| *s = Some(b));
    }
    let max_drop = if drop_pool.is_empty() { 0 } else { cons.drop_budget.min(len) };

    let mut nodes = 0u64;
    for drop in 0..=max_drop {
        for targets in target_vectors(&cons.colorings) {
            let mut dfs = Dfs {
                prev_pool: &prev_pool,
                drop_pool: &drop_pool,
                mesh: &mesh,
                cons,
                targets,
                slots: slots.clone(),
                block_start: blocks.iter().map(|r| r.start).collect(),
                drop,
                budget: params.budget,
                nodes,
                chosen: Vec::with_capacity(len),
                fu: Vec::new(),
            };
            let found = dfs.run(0)?;
            nodes = dfs.nodes;
            if found {
                let seq = DisjointSeq::new_unchecked(dfs.chosen.iter().map(|c| c.set.clone()).collect());
                let audit = audit_stage(&seq, prev, base, cons)?;
                return Ok((seq, audit));
            }
        }
    }
    Err(Error::NotFound)
}

/// Builds one stage per constraint set, each refining the previous stage
/// (the first refines `base`).
pub fn run_tower(
    base: &DisjointSeq,
    stages: &[StageConstraints],
    params: &SearchParams,
) -> std::result::Result<ConstructionTrace, TowerFailure> {
    run_tower_with_progress(base, stages, params, |_, _| {})
}

pub fn run_tower_with_progress<F>(
    base: &DisjointSeq,
    stages: &[StageConstraints],
    params: &SearchParams,
    mut progress: F,
) -> std::result::Result<ConstructionTrace, TowerFailure>
where
    F: FnMut(usize, &StageRecord),
{
    let mut trace = ConstructionTrace {
        base: base.clone(),
        stages: Vec::new(),
    };
    for (i, cons) in stages.iter().enumerate() {
        let prev = trace.stages.last().map_or(base, |s| &s.seq);
        match refine_stage(prev, base, cons, params) {
            Ok((seq, audit)) => {
                let record = StageRecord {
                    constraints: cons.clone(),
                    seq,
                    audit,
                };
                progress(i, &record);
                trace.stages.push(record);
            }
            Err(error) => {
                return Err(TowerFailure {
                    stage: i,
                    error,
                    partial: trace,
                })
            }
        }
    }
    Ok(trace)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fact {
    pub name: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub facts: Vec<Fact>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.facts.iter().all(|f| f.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Fact> {
        self.facts.iter().filter(|f| !f.passed)
    }

    fn push(&mut self, name: String, passed: bool, detail: impl Into<String>) {
        let detail = if passed { String::new() } else { detail.into() };
        self.facts.push(Fact { name, passed, detail });
    }
}

/// Re-derives every fact recorded in `trace` from the raw sequences.
pub fn verify_trace(trace: &ConstructionTrace) -> Report {
    let mut report = Report::default();
    let base = &trace.base;
    for (i, stage) in trace.stages.iter().enumerate() {
        let prev = if i == 0 { base } else { &trace.stages[i - 1].seq };
        let (seq, audit, cons) = (&stage.seq, &stage.audit, &stage.constraints);
        let name = |fact: &str| format!("stage[{i}].{fact}");

        report.push(
            name("condensation"),
            is_condensation(seq, prev, audit.drop),
            format!("{seq} is not a condensation of its predecessor after {} exempt entries", audit.drop),
        );
        let minimal = audit.drop == 0 || !is_condensation(seq, prev, audit.drop - 1);
        report.push(
            name("drop"),
            audit.drop <= cons.drop_budget && minimal,
            format!(
                "recorded drop {} (budget {}, minimal: {minimal})",
                audit.drop, cons.drop_budget
            ),
        );
        report.push(
            name("base_condensation"),
            is_condensation(seq, base, 0),
            "not a condensation of the base",
        );

        let table = seq.fu_table();
        for (j, rule) in cons.colorings.iter().enumerate() {
            let (ok, detail) = match &table {
                Err(e) => (false, e.to_string()),
                Ok(table) => {
                    let seen: Vec<Color> = table.iter().filter_map(|z| rule.color(z, base)).collect();
                    let recorded = audit.colors.get(j).copied().flatten();
                    let cov = audit.coverage.get(j);
                    let homogeneous = seen.iter().all(|&c| Some(c) == recorded)
                        && (seen.is_empty() == recorded.is_none());
                    let cov_ok = cov.is_some_and(|c| {
                        c.covered == seen.len() as u64 && c.total == table.len() as u64
                    });
                    (
                        homogeneous && cov_ok,
                        format!("recorded color {recorded:?}, observed colors {:?}", seen.iter().collect::<BTreeSet<_>>()),
                    )
                }
            };
            report.push(name(&format!("coloring[{j}].homogeneous")), ok, detail);
        }

        let expected_blocks = cons.block_ranges(seq.len());
        for (j, &w) in cons.witness_sizes.iter().enumerate() {
            let (ok, detail) = match audit.blocks.get(j) {
                Some(r) if r.len() == w && r.end <= seq.len() => match meshing_graph(&seq.slice(r.clone()), base) {
                    Ok(g) => (g.is_complete(), format!("block {r:?} has a non-edge")),
                    Err(e) => (false, e.to_string()),
                },
                other => (false, format!("block {other:?} does not hold {w} entries")),
            };
            report.push(name(&format!("witness[{j}].complete")), ok, detail);
        }
        if !cons.witness_sizes.is_empty() || !audit.blocks.is_empty() {
            let ok = audit.blocks == expected_blocks && layout_ordered(seq, &expected_blocks);
            report.push(
                name("witness.ordered"),
                ok,
                "prefix and blocks are not laid out in increasing order",
            );
        }

        let minima: Vec<u32> = seq.iter().map(FSet::min_elem).collect();
        let maxima: Vec<u32> = seq.iter().map(FSet::max_elem).collect();
        let in_pool = |vals: &[u32], pool: &BTreeSet<u32>| pool.is_empty() || vals.iter().all(|v| pool.contains(v));
        report.push(
            name("min_pool"),
            audit.minima == minima && in_pool(&minima, &cons.min_pool),
            format!("minima {minima:?}"),
        );
        report.push(
            name("max_pool"),
            audit.maxima == maxima && in_pool(&maxima, &cons.max_pool),
            format!("maxima {maxima:?}"),
        );

        if cons.claims_f_alternation() || audit.f_alternating.is_some() {
            let actual = block_word_is_f_pattern(seq, &expected_blocks);
            report.push(
                name("f_alternating"),
                cons.claims_f_alternation() && audit.f_alternating == Some(actual),
                format!("recorded {:?}, observed {actual}", audit.f_alternating),
            );
        }

        if cons.witness_sizes.iter().any(|&w| w >= 2) {
            let meshed = seq
                .iter()
                .enumerate()
                .any(|(a, s)| seq.iter().skip(a + 1).any(|t| s.meshes(t)));
            report.push(name("not_ordered"), meshed, "no meshed pair despite a witness block of size ≥ 2");
        }
    }
    report
}

/// Prefix entries increase, every block lies above everything before it,
/// and entries within a block increase by minimum.
fn layout_ordered(seq: &DisjointSeq, blocks: &[Range<usize>]) -> bool {
    let e = seq.entries();
    let prefix_end = blocks.first().map_or(e.len(), |r| r.start);
    if !e[..prefix_end].windows(2).all(|w| w[0].precedes(&w[1])) {
        return false;
    }
    blocks.iter().all(|r| {
        let floor = e[..r.start].iter().map(FSet::max_elem).max();
        e[r.clone()].iter().all(|x| floor.is_none_or(|f| f < x.min_elem()))
            && e[r.clone()].windows(2).all(|w| w[0].min_elem() < w[1].min_elem())
    })
}
