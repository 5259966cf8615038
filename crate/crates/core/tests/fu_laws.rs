use std::collections::BTreeSet;

use fu_forge_core::fu::{enumerate_condensations, fu_set, is_condensation, support_transfer, x_supp};
use fu_forge_core::{DisjointSeq, FSet};
use proptest::prelude::*;

/// Deals the values `0..universe` into `len` nonempty sets by a label
/// vector; values labelled `len` are left out.
fn seq_from_labels(labels: &[usize], len: usize) -> Option<DisjointSeq> {
    let mut parts = vec![Vec::new(); len];
    for (v, &l) in labels.iter().enumerate() {
        if l < len {
            parts[l].push(v as u32);
        }
    }
    if parts.iter().any(Vec::is_empty) {
        return None;
    }
    DisjointSeq::new(parts.into_iter().map(|p| FSet::new(p).unwrap()).collect()).ok()
}

fn arb_seq(max_len: usize) -> impl Strategy<Value = DisjointSeq> {
    (1..=max_len).prop_flat_map(|len| {
        prop::collection::vec(0..=len, 2 * len..3 * len + 2)
            .prop_filter_map("every entry nonempty", move |labels| seq_from_labels(&labels, len))
    })
}

fn all_subsets(universe: u32) -> Vec<FSet> {
    (1u32..1 << universe)
        .map(|m| FSet::new((0..universe).filter(|b| m & (1 << b) != 0)).unwrap())
        .collect()
}

#[test]
fn unique_representation_exhaustive() {
    // Every disjoint sequence obtained by labelling {0..6} with ≤ 6 parts.
    let universe = 7usize;
    let subsets = all_subsets(universe as u32);
    let mut checked = 0;
    for len in 1..=6usize {
        let mut labels = vec![0usize; universe];
        loop {
            if let Some(x) = seq_from_labels(&labels, len) {
                let fu = fu_set(&x, 0).unwrap();
                assert_eq!(fu.len(), (1 << len) - 1);
                for z in &subsets {
                    match x_supp(z, &x) {
                        Ok(s) => {
                            assert!(fu.contains(z));
                            assert_eq!(&x.union_of(&s).unwrap(), z);
                        }
                        Err(_) => assert!(!fu.contains(z)),
                    }
                }
                checked += 1;
            }
            // next label vector in base len+1
            let mut i = 0;
            while i < universe && labels[i] == len {
                labels[i] = 0;
                i += 1;
            }
            if i == universe {
                break;
            }
            labels[i] += 1;
        }
    }
    assert!(checked > 1000);
}

#[test]
fn condensation_transitivity_exhaustive() {
    for len in 1..=5u32 {
        let x = DisjointSeq::singletons(0..len).unwrap();
        let ys: Vec<DisjointSeq> = (1..=len as usize)
            .flat_map(|n| enumerate_condensations(&x, n, u64::MAX).unwrap())
            .collect();
        for y in &ys {
            assert!(is_condensation(y, &x, 0));
            for n in 1..=y.len() {
                for z in enumerate_condensations(y, n, u64::MAX).unwrap() {
                    assert!(is_condensation(&z, y, 0));
                    assert!(is_condensation(&z, &x, 0), "{z} ⊑ {y} ⊑ {x}");
                }
            }
        }
    }
}

/// Number of unordered n-families of disjoint nonempty index sets, by
/// labelling each generator with a block or "unused" and dividing out the
/// block order.
fn count_by_labelling(len: usize, n: usize) -> u64 {
    let mut count = 0u64;
    let total = (n + 1).pow(len as u32);
    for code in 0..total {
        let mut used = vec![false; n];
        let mut c = code;
        for _ in 0..len {
            let l = c % (n + 1);
            c /= n + 1;
            if l < n {
                used[l] = true;
            }
        }
        if used.iter().all(|&u| u) {
            count += 1;
        }
    }
    count / (1..=n as u64).product::<u64>()
}

#[test]
fn condensation_count_matches_labelling_oracle() {
    for len in 1..=7u32 {
        let x = DisjointSeq::singletons((0..len).map(|v| 3 * v)).unwrap();
        for n in 1..=len as usize + 1 {
            let got = enumerate_condensations(&x, n, u64::MAX).unwrap();
            assert_eq!(got.len() as u64, count_by_labelling(len as usize, n), "len {len} n {n}");
            let distinct: BTreeSet<_> = got.iter().map(|t| t.entries().to_vec()).collect();
            assert_eq!(distinct.len(), got.len());
        }
    }
}

#[test]
fn transfer_is_a_bijective_homomorphism_exhaustive() {
    for len in 1..=5u32 {
        let src = DisjointSeq::singletons(0..len).unwrap();
        let dst = DisjointSeq::new(
            (0..len)
                .map(|i| FSet::new([10 * i + 9, 10 * (len - i) + 3]).unwrap())
                .collect(),
        )
        .unwrap();
        let fu_src = fu_set(&src, 0).unwrap();
        let fu_dst = fu_set(&dst, 0).unwrap();
        let image: BTreeSet<FSet> = fu_src
            .iter()
            .map(|z| support_transfer(z, &src, &dst).unwrap())
            .collect();
        assert_eq!(image, fu_dst);
        for a in &fu_src {
            for b in &fu_src {
                if a.is_disjoint(b) {
                    let lhs = support_transfer(&a.union(b).unwrap(), &src, &dst).unwrap();
                    let rhs = support_transfer(a, &src, &dst)
                        .unwrap()
                        .union(&support_transfer(b, &src, &dst).unwrap())
                        .unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }
}

proptest! {
    #[test]
    fn fu_elements_decompose(x in arb_seq(6)) {
        for z in fu_set(&x, 0).unwrap() {
            let s = x_supp(&z, &x).unwrap();
            prop_assert_eq!(x.union_of(&s).unwrap(), z);
        }
    }

    #[test]
    fn suffix_fu_is_a_subset(x in arb_seq(6), k in 0usize..6) {
        let k = k.min(x.len());
        let tail = fu_set(&x, k).unwrap();
        let all = fu_set(&x, 0).unwrap();
        prop_assert!(tail.is_subset(&all));
        prop_assert_eq!(tail.len(), (1usize << (x.len() - k)) - 1);
    }

    #[test]
    fn condensations_are_condensations(x in arb_seq(5), n in 1usize..4) {
        for t in enumerate_condensations(&x, n, u64::MAX).unwrap() {
            prop_assert!(is_condensation(&t, &x, 0));
            prop_assert!(fu_set(&t, 0).unwrap().is_subset(&fu_set(&x, 0).unwrap()));
        }
    }
}
