use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::fu::DisjointSeq;
use crate::{Color, Error, FSet, Result};

/// A coloring of ordered pairs `(s, t)` with `s < t` (i.e. `max s < min t`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairColoring {
    colors: u32,
    cells: BTreeMap<(FSet, FSet), Color>,
}

impl PairColoring {
    pub fn new(colors: u32, cells: BTreeMap<(FSet, FSet), Color>) -> Result<Self> {
        if colors == 0 {
            return Err(Error::Invalid("a coloring needs at least one color".into()));
        }
        for ((s, t), c) in &cells {
            if !s.precedes(t) {
                return Err(Error::Invalid(format!("pair ({s}, {t}) is not ordered")));
            }
            if *c >= colors {
                return Err(Error::Invalid(format!("color {c} out of range")));
            }
        }
        Ok(PairColoring { colors, cells })
    }

    /// Colors every ordered pair drawn from `domain`.
    pub fn from_fn<F>(domain: &BTreeSet<FSet>, colors: u32, f: F) -> Result<Self>
    where
        F: Fn(&FSet, &FSet) -> Color,
    {
        let mut cells = BTreeMap::new();
        for s in domain {
            for t in domain {
                if s.precedes(t) {
                    cells.insert((s.clone(), t.clone()), f(s, t));
                }
            }
        }
        Self::new(colors, cells)
    }

    pub fn colors(&self) -> u32 {
        self.colors
    }

    pub fn color(&self, s: &FSet, t: &FSet) -> Option<Color> {
        self.cells.get(&(s.clone(), t.clone())).copied()
    }
}

#[derive(Serialize, Deserialize)]
struct PairColoringRepr {
    colors: u32,
    cells: Vec<(FSet, FSet, Color)>,
}

impl Serialize for PairColoring {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PairColoringRepr {
            colors: self.colors,
            cells: self
                .cells
                .iter()
                .map(|((a, b), c)| (a.clone(), b.clone(), *c))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PairColoring {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = PairColoringRepr::deserialize(d)?;
        let cells = repr.cells.into_iter().map(|(a, b, c)| ((a, b), c)).collect();
        PairColoring::new(repr.colors, cells).map_err(serde::de::Error::custom)
    }
}

/// Outcome of [`pairs_homogeneity_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PairVerdict {
    /// All ordered pairs share one color; `None` when there are no pairs.
    Homogeneous(Option<Color>),
    /// The first pair in enumeration order and the first pair whose color
    /// differs from it.
    Mixed {
        first: (FSet, FSet),
        other: (FSet, FSet),
    },
}

/// Whether `col` is constant on the ordered pairs of `a`. Pairs are visited
/// with `s` then `t` in increasing set order.
pub fn pairs_homogeneity_check(a: &BTreeSet<FSet>, col: &PairColoring) -> Result<PairVerdict> {
    let mut first: Option<((FSet, FSet), Color)> = None;
    for s in a {
        for t in a {
            if !s.precedes(t) {
                continue;
            }
            let c = col
                .color(s, t)
                .ok_or_else(|| Error::MissingColor(format!("({s}, {t})")))?;
            match &first {
                None => first = Some(((s.clone(), t.clone()), c)),
                Some((pair, c0)) if *c0 != c => {
                    return Ok(PairVerdict::Mixed {
                        first: pair.clone(),
                        other: (s.clone(), t.clone()),
                    })
                }
                Some(_) => {}
            }
        }
    }
    Ok(PairVerdict::Homogeneous(first.map(|(_, c)| c)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PairTypes {
    pub has_ordered: bool,
    pub has_meshed: bool,
}

/// Whether FU(t) contains a disjoint ordered pair and a disjoint meshed
/// pair. Scans pairs of disjoint supports; `budget` caps the number of
/// pairs examined.
pub fn pair_types(t: &DisjointSeq, budget: u64) -> Result<PairTypes> {
    let table = t.fu_table()?;
    let full = table.len();
    let mut out = PairTypes {
        has_ordered: false,
        has_meshed: false,
    };
    let mut seen = 0u64;
    for a in 1..=full {
        let rest = full & !a;
        // Submasks of the complement that exceed `a`, so each unordered
        // pair is visited once.
        let mut b = rest;
        while b > a {
            seen += 1;
            if seen > budget {
                return Err(Error::BudgetExceeded(budget));
            }
            let (x, y) = (&table[a - 1], &table[b - 1]);
            if x.meshes(y) {
                out.has_meshed = true;
            } else {
                out.has_ordered = true;
            }
            if out.has_meshed && out.has_ordered {
                return Ok(out);
            }
            b = (b - 1) & rest;
        }
    }
    Ok(out)
}
