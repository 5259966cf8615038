use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::hash::Hash;

use serde::Serialize;

use crate::{Error, FSet, Result};

/// Canonical shape of a function restricted to a finite set of sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum CanonicalClass {
    Constant,
    /// `f = g ∘ min` with `g` injective.
    MinDetermined,
    /// `f = g ∘ max` with `g` injective.
    MaxDetermined,
    /// `f = g ∘ (min, max)` with `g` injective.
    MinMaxDetermined,
    Injective,
    None,
}

/// Classifies `fvals` on `a`. Classes are tried from coarsest to finest
/// kernel: constant, min, max, (min, max), injective. On a finite domain
/// several kernels can coincide; the coarsest one is reported.
pub fn classify_canonical(fvals: &BTreeMap<FSet, u64>, a: &BTreeSet<FSet>) -> Result<CanonicalClass> {
    let values = a
        .iter()
        .map(|s| {
            fvals
                .get(s)
                .map(|v| (s, *v))
                .ok_or_else(|| Error::MissingColor(s.to_string()))
        })
        .collect::<Result<Vec<_>>>()?;

    if values.windows(2).all(|w| w[0].1 == w[1].1) {
        return Ok(CanonicalClass::Constant);
    }
    if factors_injectively(&values, |s| s.min_elem()) {
        return Ok(CanonicalClass::MinDetermined);
    }
    if factors_injectively(&values, |s| s.max_elem()) {
        return Ok(CanonicalClass::MaxDetermined);
    }
    if factors_injectively(&values, |s| (s.min_elem(), s.max_elem())) {
        return Ok(CanonicalClass::MinMaxDetermined);
    }
    if factors_injectively(&values, |s| (*s).clone()) {
        return Ok(CanonicalClass::Injective);
    }
    Ok(CanonicalClass::None)
}

/// `f(s) = f(t) ⇔ key(s) = key(t)` on the domain, i.e. `f = g ∘ key` for
/// an injective `g`.
fn factors_injectively<K, F>(values: &[(&FSet, u64)], key: F) -> bool
where
    K: Eq + Hash,
    F: Fn(&FSet) -> K,
{
    let mut g: HashMap<K, u64> = HashMap::new();
    let mut g_inv: HashMap<u64, K> = HashMap::new();
    for (s, v) in values {
        let k = key(s);
        if let Some(prev) = g.get(&k) {
            if prev != v {
                return false;
            }
        } else {
            if g_inv.contains_key(v) {
                return false;
            }
            g_inv.insert(*v, key(s));
            g.insert(k, *v);
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[u32]) -> FSet {
        FSet::new(v.iter().copied()).unwrap()
    }

    fn table<F: Fn(&FSet) -> u64>(a: &BTreeSet<FSet>, f: F) -> BTreeMap<FSet, u64> {
        a.iter().map(|s| (s.clone(), f(s))).collect()
    }

    #[test]
    fn examples() {
        let a: BTreeSet<FSet> = [set(&[0, 4]), set(&[1, 4]), set(&[2, 9])].into();
        assert_eq!(
            classify_canonical(&table(&a, |s| s.min_elem() as u64), &a).unwrap(),
            CanonicalClass::MinDetermined
        );
        assert_eq!(
            classify_canonical(&table(&a, |_| 7), &a).unwrap(),
            CanonicalClass::Constant
        );
        let a: BTreeSet<FSet> = [set(&[0, 1]), set(&[0, 2]), set(&[3, 4])].into();
        assert_eq!(
            classify_canonical(&table(&a, |s| s.max_elem() as u64), &a).unwrap(),
            CanonicalClass::MaxDetermined
        );
    }

    #[test]
    fn finer_classes() {
        // (min, max) pairs repeat across different interiors.
        let a: BTreeSet<FSet> = [set(&[0, 5]), set(&[0, 2, 5]), set(&[0, 7]), set(&[1, 5])].into();
        let f = table(&a, |s| (s.min_elem() * 10 + s.max_elem()) as u64);
        assert_eq!(classify_canonical(&f, &a).unwrap(), CanonicalClass::MinMaxDetermined);
        let f = table(&a, |s| s.len() as u64 * 100 + s.min_elem() as u64 * 10 + s.max_elem() as u64);
        assert_eq!(classify_canonical(&f, &a).unwrap(), CanonicalClass::Injective);
        // Same value on sets with different (min, max), different values on
        // sets with the same (min, max).
        let f = table(&a, |s| (s.len() % 2) as u64);
        assert_eq!(classify_canonical(&f, &a).unwrap(), CanonicalClass::None);
    }

    #[test]
    fn min_factor_must_be_injective() {
        // Values depend only on min but two mins share a value.
        let a: BTreeSet<FSet> = [set(&[0]), set(&[1]), set(&[2]), set(&[2, 3])].into();
        let f = table(&a, |s| (s.min_elem() / 2) as u64);
        assert_ne!(classify_canonical(&f, &a).unwrap(), CanonicalClass::MinDetermined);
    }

    #[test]
    fn missing_value() {
        let a: BTreeSet<FSet> = [set(&[0])].into();
        assert!(classify_canonical(&BTreeMap::new(), &a).is_err());
    }
}
