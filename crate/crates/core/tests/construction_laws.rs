use std::collections::BTreeSet;

use fu_forge_core::construction::{
    refine_stage, run_tower, verify_trace, ColoringRule, HashKey, SearchParams, StageConstraints,
};
use fu_forge_core::meshing::gen_base_sequence;
use fu_forge_core::{Error, FSet, Universe};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_rule(rng: &mut ChaCha8Rng) -> ColoringRule {
    match rng.random_range(0..4) {
        0 => ColoringRule::SupportParity,
        1 => ColoringRule::MinMod { modulus: rng.random_range(1..=3) },
        2 => ColoringRule::MaxMod { modulus: rng.random_range(1..=2) },
        _ => ColoringRule::Random {
            colors: 2,
            seed: rng.random(),
            key: HashKey::Min,
        },
    }
}

fn random_stage(rng: &mut ChaCha8Rng, len: usize) -> StageConstraints {
    let mut witness_sizes = Vec::new();
    let mut room = len;
    while room > 0 && rng.random_bool(0.5) {
        let w = rng.random_range(1..=room.min(3));
        witness_sizes.push(w);
        room -= w;
    }
    StageConstraints {
        colorings: (0..rng.random_range(0..=2)).map(|_| random_rule(rng)).collect(),
        witness_sizes,
        drop_budget: rng.random_range(0..=3),
        ..Default::default()
    }
}

#[test]
fn every_emitted_trace_verifies() {
    let base = gen_base_sequence(6, Universe::default()).unwrap();
    let mut built = 0;
    for seed in 0..40u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let len = rng.random_range(2..=4);
        let stages: Vec<StageConstraints> = (0..rng.random_range(1..=3)).map(|_| random_stage(&mut rng, len)).collect();
        let params = SearchParams {
            target_len: len,
            budget: 2_000_000,
            max_union: 2,
        };
        let trace = match run_tower(&base, &stages, &params) {
            Ok(t) => t,
            Err(f) => {
                assert!(matches!(f.error, Error::NotFound | Error::BudgetExceeded(_)), "seed {seed}: {f}");
                f.partial
            }
        };
        let report = verify_trace(&trace);
        assert!(report.all_passed(), "seed {seed}: {:?}", report.failures().collect::<Vec<_>>());
        for stage in &trace.stages {
            assert!(stage.audit.drop <= stage.constraints.drop_budget);
            if stage.constraints.witness_sizes.iter().any(|&w| w >= 2) {
                assert!(!stage.seq.is_ordered());
            }
        }
        built += trace.stages.len();
    }
    assert!(built > 20, "only {built} stages were built");
}

#[test]
fn extra_colorings_never_rescue_a_failed_stage() {
    let base = gen_base_sequence(4, Universe::default()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut not_found = 0;
    for _ in 0..60 {
        let len = rng.random_range(2..=4);
        let cons = random_stage(&mut rng, len);
        let params = SearchParams {
            target_len: len,
            budget: 50_000_000,
            max_union: 2,
        };
        let loose = refine_stage(&base, &base, &cons, &params);
        let mut tight = cons.clone();
        tight.colorings.push(random_rule(&mut rng));
        let strict = refine_stage(&base, &base, &tight, &params);
        match (&loose, &strict) {
            (Err(Error::NotFound), s) => {
                not_found += 1;
                assert!(matches!(s, Err(Error::NotFound)), "{cons:?} then {tight:?}");
            }
            // The constrained solution also satisfies the looser stage.
            (Ok(_), Ok((z, _))) => {
                let fu: BTreeSet<FSet> = fu_forge_core::fu::fu_set(z, 0).unwrap();
                for rule in &cons.colorings {
                    let colors: BTreeSet<_> = fu.iter().filter_map(|s| rule.color(s, &base)).collect();
                    assert!(colors.len() <= 1);
                }
            }
            _ => {}
        }
    }
    assert!(not_found > 0);
}
