use std::collections::BTreeSet;

use crate::fu::{x_supp, DisjointSeq};
use crate::{FSet, Result};

/// Points `k ∈ x` where `x` splits relative to `t`: both `x ∩ (k+1)` and
/// `x ∖ (k+1)` lie in FU(t) and some `t_j` sits strictly between them.
///
/// A cut can only keep both halves in FU(t) at the maximum of one of the
/// entries making up `x`, so only those points are examined.
pub fn splitting_points(x: &FSet, t: &DisjointSeq) -> Result<BTreeSet<u32>> {
    let supp = x_supp(x, t)?;
    let e = t.entries();
    let mut points = BTreeSet::new();
    for &i in supp.indices() {
        let cut = e[i].max_elem();
        let mut low_max = 0u32;
        let mut high_min = u32::MAX;
        let mut clean = true;
        for &j in supp.indices() {
            if e[j].max_elem() <= cut {
                low_max = low_max.max(e[j].max_elem());
            } else if e[j].min_elem() > cut {
                high_min = high_min.min(e[j].min_elem());
            } else {
                clean = false;
                break;
            }
        }
        if !clean || high_min == u32::MAX {
            continue;
        }
        if e
            .iter()
            .any(|tk| low_max < tk.min_elem() && tk.max_elem() < high_min)
        {
            points.insert(cut);
        }
    }
    Ok(points)
}

/// Number of splitting points of `x` relative to `t`.
pub fn pi(x: &FSet, t: &DisjointSeq) -> Result<usize> {
    Ok(splitting_points(x, t)?.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fu::fu_set;
    use crate::Error;

    fn set(v: &[u32]) -> FSet {
        FSet::new(v.iter().copied()).unwrap()
    }

    /// Literal reading of the definition: every `k ∈ x` is examined.
    fn points_by_definition(x: &FSet, t: &DisjointSeq) -> BTreeSet<u32> {
        let fu = fu_set(t, 0).unwrap();
        x.iter()
            .filter(|&k| {
                let (Some(low), Some(high)) = x.split_at(k) else {
                    return false;
                };
                fu.contains(&low)
                    && fu.contains(&high)
                    && t.iter().any(|tk| low.precedes(tk) && tk.precedes(&high))
            })
            .collect()
    }

    #[test]
    fn examples_on_four_singletons() {
        let t = DisjointSeq::singletons(0..4).unwrap();
        assert_eq!(splitting_points(&set(&[0, 2]), &t).unwrap(), [0].into());
        assert_eq!(pi(&set(&[0, 2]), &t).unwrap(), 1);
        assert_eq!(pi(&set(&[0, 1]), &t).unwrap(), 0);
        assert_eq!(pi(&set(&[0, 1, 2, 3]), &t).unwrap(), 0);
        assert!(matches!(pi(&set(&[9]), &t), Err(Error::NotInFu)));
    }

    #[test]
    fn agrees_with_definition_on_meshed_sequences() {
        let seqs = [
            DisjointSeq::from_lists(&[&[0, 5], &[1, 2], &[3], &[4, 8], &[6, 7]]).unwrap(),
            DisjointSeq::from_lists(&[&[0], &[2, 4], &[3, 5], &[6, 9], &[7, 10], &[8, 11]]).unwrap(),
            DisjointSeq::from_lists(&[&[1, 9], &[0], &[3], &[5, 6], &[11]]).unwrap(),
        ];
        for t in &seqs {
            for x in fu_set(t, 0).unwrap() {
                assert_eq!(splitting_points(&x, t).unwrap(), points_by_definition(&x, t), "{x} in {t}");
            }
        }
    }
}
