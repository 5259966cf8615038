//! Exhaustive search for Folkman-Rado-Sanders thresholds.
//!
//! A `c`-coloring of the lattice of nonempty subsets of `m` generators
//! *refutes* `m` when no length-`n` condensation has a monochromatic
//! FU-set. The threshold is the least `m` that no coloring refutes.
//!
//! Colorings are explored as base-`c` numerals over the cells ordered by
//! (size, lexicographic), restricted to canonical relabelings (colors
//! appear in first-use order), with a branch cut as soon as a condensation
//! whose last cell was just colored turns out monochromatic. The space is
//! split into shards on a fixed prefix of cells; shards are checked
//! concurrently and the lowest refuting shard wins.

use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;

use super::Coloring;
use crate::fu::{condensation_supports, Support};
use crate::{Color, Error, FSet, Result};

/// Largest generator count the lattice search accepts.
pub const MAX_GENERATORS: usize = 20;

const SHARD_PREFIX: usize = 4;

#[derive(Clone, Debug)]
pub struct FrsQuery {
    /// Condensation length sought.
    pub n: usize,
    /// Number of colors.
    pub colors: u32,
    /// Largest generator count to try.
    pub max_m: usize,
    /// Node budget per generator count, split evenly over the shards.
    pub budget: u64,
    /// Worker threads.
    pub jobs: usize,
}

/// A coloring of the `m`-generator lattice with no monochromatic
/// length-`n` condensation. Cells are keyed by their support, written as
/// a set of generator indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Refutation {
    pub m: usize,
    pub coloring: Coloring,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LevelVerdict {
    /// Every coloring has a monochromatic condensation.
    AllPass,
    Refuted(Refutation),
    BudgetExceeded,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelReport {
    pub m: usize,
    pub verdict: LevelVerdict,
    pub nodes: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FrsOutcome {
    /// The least passing `m`, with refutations of every smaller `m ≥ 1`.
    Found { m: usize, refutations: Vec<Refutation> },
    /// Every `m ≤ max_m` is refuted.
    Exhausted { refutations: Vec<Refutation> },
    /// The search ran out of budget at `stalled_at`; the threshold exceeds
    /// `lower_bound`, the largest `m` refuted so far.
    BudgetExceeded {
        stalled_at: usize,
        lower_bound: usize,
        refutations: Vec<Refutation>,
    },
}

/// Nonempty supports over `m` generators ordered by size, then
/// lexicographically.
pub fn lattice_cells(m: usize) -> Vec<Support> {
    let mut cells: Vec<Support> = (1u64..(1u64 << m))
        .map(|mask| Support::from_mask(mask).expect("nonzero mask"))
        .collect();
    cells.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    cells
}

pub fn frs_number(query: &FrsQuery) -> Result<FrsOutcome> {
    frs_number_with_progress(query, |_| {})
}

/// As [`frs_number`], reporting each generator count as it is settled.
pub fn frs_number_with_progress<F: FnMut(&LevelReport)>(
    query: &FrsQuery,
    mut progress: F,
) -> Result<FrsOutcome> {
    if query.n == 0 || query.colors == 0 {
        return Err(Error::Invalid("n and c must be at least 1".into()));
    }
    if query.max_m > MAX_GENERATORS {
        return Err(Error::Invalid(format!(
            "at most {MAX_GENERATORS} generators are supported"
        )));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(query.jobs.max(1))
        .build()
        .map_err(|e| Error::Invalid(e.to_string()))?;
    let mut refutations = Vec::new();
    for m in 1..=query.max_m {
        let report = pool.install(|| check_level(m, query.n, query.colors, query.budget));
        progress(&report);
        match report.verdict {
            LevelVerdict::AllPass => return Ok(FrsOutcome::Found { m, refutations }),
            LevelVerdict::Refuted(r) => refutations.push(r),
            LevelVerdict::BudgetExceeded => {
                return Ok(FrsOutcome::BudgetExceeded {
                    stalled_at: m,
                    lower_bound: m - 1,
                    refutations,
                })
            }
        }
    }
    Ok(FrsOutcome::Exhausted { refutations })
}

struct Lattice {
    cells: Vec<Support>,
    colors: u32,
    // Condensation FU-sets (as cell positions, trigger excluded) grouped by
    // the position of their last cell.
    by_trigger: Vec<Vec<Vec<usize>>>,
}

impl Lattice {
    fn new(m: usize, n: usize, colors: u32) -> Self {
        let cells = lattice_cells(m);
        let mut position = vec![0usize; 1 << m];
        for (p, c) in cells.iter().enumerate() {
            position[mask_of(c)] = p;
        }
        let mut by_trigger = vec![Vec::new(); cells.len()];
        let families = condensation_supports(m, n, u64::MAX).expect("unbounded budget");
        for family in families {
            let masks: Vec<usize> = family.iter().map(mask_of).collect();
            let mut fu: Vec<usize> = (1usize..(1 << n))
                .map(|sub| {
                    let mask = (0..n)
                        .filter(|b| sub & (1 << b) != 0)
                        .fold(0, |acc, b| acc | masks[b]);
                    position[mask]
                })
                .collect();
            fu.sort_unstable();
            let trigger = fu.pop().expect("nonempty FU-set");
            by_trigger[trigger].push(fu);
        }
        Lattice {
            cells,
            colors,
            by_trigger,
        }
    }

    fn allowed(&self, assignment: &[Color], pos: usize, color: Color) -> bool {
        self.by_trigger[pos]
            .iter()
            .all(|fu| fu.iter().any(|&p| assignment[p] != color))
    }

    fn coloring(&self, m: usize, assignment: &[Color]) -> Refutation {
        let cells = self
            .cells
            .iter()
            .zip(assignment)
            .map(|(s, &c)| {
                let set = FSet::new(s.indices().iter().map(|&i| i as u32)).expect("nonempty");
                (set, c)
            })
            .collect();
        Refutation {
            m,
            coloring: Coloring::new(self.colors, cells).expect("colors in range"),
        }
    }
}

fn mask_of(s: &Support) -> usize {
    s.indices().iter().fold(0, |m, &i| m | (1 << i))
}

enum ShardResult {
    Pass,
    Refuted(Vec<Color>),
    Budget,
    Skipped,
}

/// Runs the lattice search for one generator count.
pub(crate) fn check_level(m: usize, n: usize, colors: u32, budget: u64) -> LevelReport {
    let lattice = Lattice::new(m, n, colors);
    let cells = lattice.cells.len();

    // Shard prefixes, in numeral order.
    let prefix_len = SHARD_PREFIX.min(cells);
    let mut prefixes: Vec<Vec<Color>> = Vec::new();
    let mut scratch = Vec::with_capacity(prefix_len);
    collect_prefixes(&lattice, prefix_len, 0, &mut scratch, &mut prefixes);

    let per_shard = budget.div_ceil(prefixes.len().max(1) as u64).max(1);
    let best = AtomicUsize::new(usize::MAX);
    let results: Vec<(ShardResult, u64)> = prefixes
        .par_iter()
        .enumerate()
        .map(|(idx, prefix)| {
            if best.load(Ordering::Relaxed) < idx {
                return (ShardResult::Skipped, 0);
            }
            let mut assignment = vec![0; cells];
            assignment[..prefix.len()].copy_from_slice(prefix);
            let max_used = prefix.iter().copied().max().unwrap_or(0);
            let mut search = ShardSearch {
                lattice: &lattice,
                assignment,
                nodes: 0,
                budget: per_shard,
                abort: &best,
                index: idx,
            };
            let outcome = search.run(prefix.len(), max_used);
            let result = match outcome {
                Step::Found => {
                    best.fetch_min(idx, Ordering::Relaxed);
                    ShardResult::Refuted(search.assignment)
                }
                Step::Exhausted => ShardResult::Pass,
                Step::Budget => ShardResult::Budget,
                Step::Aborted => ShardResult::Skipped,
            };
            (result, search.nodes)
        })
        .collect();

    // Node totals include shards whose work may be cut short by a lower
    // refutation, so they are informative only.
    let nodes = results.iter().map(|(_, n)| *n).sum();
    let mut budget_hit = false;
    for (result, _) in results {
        match result {
            ShardResult::Refuted(assignment) => {
                return LevelReport {
                    m,
                    verdict: LevelVerdict::Refuted(lattice.coloring(m, &assignment)),
                    nodes,
                }
            }
            ShardResult::Budget => budget_hit = true,
            ShardResult::Pass | ShardResult::Skipped => {}
        }
    }
    let verdict = if budget_hit {
        LevelVerdict::BudgetExceeded
    } else {
        LevelVerdict::AllPass
    };
    LevelReport { m, verdict, nodes }
}

fn collect_prefixes(
    lattice: &Lattice,
    len: usize,
    pos: usize,
    current: &mut Vec<Color>,
    out: &mut Vec<Vec<Color>>,
) {
    if pos == len {
        out.push(current.clone());
        return;
    }
    let limit = next_color_limit(current, lattice.colors);
    for color in 0..limit {
        // `current` holds exactly the cells before `pos`.
        current.push(color);
        if lattice.allowed(current, pos, color) {
            collect_prefixes(lattice, len, pos + 1, current, out);
        }
        current.pop();
    }
}

/// Colors available at the next cell under first-use order.
fn next_color_limit(assigned: &[Color], colors: u32) -> u32 {
    match assigned.iter().max() {
        None => 1,
        Some(&mx) => (mx + 2).min(colors),
    }
}

enum Step {
    Found,
    Exhausted,
    Budget,
    Aborted,
}

struct ShardSearch<'a> {
    lattice: &'a Lattice,
    assignment: Vec<Color>,
    nodes: u64,
    budget: u64,
    abort: &'a AtomicUsize,
    index: usize,
}

impl ShardSearch<'_> {
    fn run(&mut self, pos: usize, max_used: Color) -> Step {
        if pos == self.assignment.len() {
            return Step::Found;
        }
        let limit = (max_used + 2).min(self.lattice.colors);
        for color in 0..limit {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Step::Budget;
            }
            if self.nodes.is_multiple_of(4096) && self.abort.load(Ordering::Relaxed) < self.index {
                return Step::Aborted;
            }
            self.assignment[pos] = color;
            if !self.lattice.allowed(&self.assignment, pos, color) {
                continue;
            }
            match self.run(pos + 1, max_used.max(color)) {
                Step::Exhausted => {}
                other => return other,
            }
        }
        Step::Exhausted
    }
}
