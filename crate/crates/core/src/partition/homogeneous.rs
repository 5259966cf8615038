use super::Coloring;
use crate::fu::{enumerate_condensations_with_supports, DisjointSeq};
use crate::{Color, Result};

/// The canonically least length-`n` condensation of `x` whose FU-set is
/// monochromatic under `col`, with its color. `Ok(None)` is exhaustive.
pub fn homogeneous_condensation(
    x: &DisjointSeq,
    col: &Coloring,
    n: usize,
    budget: u64,
) -> Result<Option<(DisjointSeq, Color)>> {
    // Every element of FU(x) must be colored, whether or not it is reached.
    let table = x.fu_table()?;
    let colors = table
        .iter()
        .map(|z| col.color_required(z))
        .collect::<Result<Vec<_>>>()?;
    let color_of_mask = |mask: usize| colors[mask - 1];

    'cands: for cand in enumerate_condensations_with_supports(x, n, budget)? {
        let masks: Vec<usize> = cand
            .supports
            .iter()
            .map(|s| s.indices().iter().fold(0usize, |m, &i| m | (1 << i)))
            .collect();
        let first = color_of_mask(masks[0]);
        for sub in 1usize..(1 << n) {
            let mask = (0..n)
                .filter(|b| sub & (1 << b) != 0)
                .fold(0usize, |m, b| m | masks[b]);
            if color_of_mask(mask) != first {
                continue 'cands;
            }
        }
        return Ok(Some((cand.seq, first)));
    }
    Ok(None)
}
