//! Colorings of FU-sets and the partition results built on them.

mod canonical;
mod frs;
mod homogeneous;
mod pairs;
mod splitting;

use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Color, Error, FSet, Result};

pub use canonical::{classify_canonical, CanonicalClass};
pub use frs::{frs_number, frs_number_with_progress, lattice_cells, FrsOutcome, FrsQuery, LevelReport, LevelVerdict, Refutation};
pub use homogeneous::homogeneous_condensation;
pub use pairs::{pair_types, pairs_homogeneity_check, PairColoring, PairTypes, PairVerdict};
pub use splitting::{pi, splitting_points};

/// A finite coloring: a map from a finite domain of sets to `0..colors`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coloring {
    colors: u32,
    cells: BTreeMap<FSet, Color>,
}

impl Coloring {
    pub fn new(colors: u32, cells: BTreeMap<FSet, Color>) -> Result<Self> {
        if colors == 0 {
            return Err(Error::Invalid("a coloring needs at least one color".into()));
        }
        if let Some((s, c)) = cells.iter().find(|(_, c)| **c >= colors) {
            return Err(Error::Invalid(format!(
                "color {c} of {s} is out of range for {colors} colors"
            )));
        }
        Ok(Coloring { colors, cells })
    }

    pub fn from_fn<I, F>(domain: I, colors: u32, f: F) -> Result<Self>
    where
        I: IntoIterator<Item = FSet>,
        F: Fn(&FSet) -> Color,
    {
        let cells = domain
            .into_iter()
            .map(|s| {
                let c = f(&s);
                (s, c)
            })
            .collect();
        Self::new(colors, cells)
    }

    pub fn colors(&self) -> u32 {
        self.colors
    }

    pub fn color(&self, s: &FSet) -> Option<Color> {
        self.cells.get(s).copied()
    }

    pub(crate) fn color_required(&self, s: &FSet) -> Result<Color> {
        self.color(s).ok_or_else(|| Error::MissingColor(s.to_string()))
    }

    pub fn cells(&self) -> &BTreeMap<FSet, Color> {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }
}

#[derive(Serialize, Deserialize)]
struct ColoringRepr {
    colors: u32,
    cells: Vec<(FSet, Color)>,
}

impl Serialize for Coloring {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ColoringRepr {
            colors: self.colors,
            cells: self.cells.iter().map(|(k, v)| (k.clone(), *v)).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Coloring {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = ColoringRepr::deserialize(d)?;
        let mut cells = BTreeMap::new();
        for (s, c) in repr.cells {
            if cells.insert(s.clone(), c).is_some() {
                return Err(serde::de::Error::custom(format!("duplicate cell {s}")));
            }
        }
        Coloring::new(repr.colors, cells).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coloring_json() {
        let c = Coloring::from_fn(
            [FSet::new([0]).unwrap(), FSet::new([0, 1]).unwrap()],
            2,
            |s| s.len() as u32 % 2,
        )
        .unwrap();
        let text = serde_json::to_string(&c).unwrap();
        assert_eq!(text, r#"{"colors":2,"cells":[[[0],1],[[0,1],0]]}"#);
        assert_eq!(serde_json::from_str::<Coloring>(&text).unwrap(), c);
        assert!(serde_json::from_str::<Coloring>(r#"{"colors":2,"cells":[[[0],2]]}"#).is_err());
        assert!(serde_json::from_str::<Coloring>(r#"{"colors":2,"cells":[[[0],1],[[0],0]]}"#).is_err());
        assert!(Coloring::new(0, BTreeMap::new()).is_err());
    }
}
