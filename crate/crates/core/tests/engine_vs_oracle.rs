mod common;

use proptest::prelude::*;
use simpart::engine::{
    check_is_simulation_pr, run_esim, simulation_preorder, CheckLevel, Engine, EngineConfig,
};
use simpart::kripke::{generate_random_ks, parse_ks, KripkeStructure, StateId};
use simpart::oracle::{
    brute_force_simulation, compare_with_oracle, is_simulation, simulation_partition,
};

fn ids(v: &[u32]) -> Vec<StateId> {
    v.iter().map(|&s| StateId(s)).collect()
}

fn assert_matches_oracle(ks: &KripkeStructure) {
    let out = run_esim(ks, EngineConfig::checked(CheckLevel::Full))
        .unwrap_or_else(|e| panic!("{e}\n{}", ks.to_text()));
    let expected = simulation_partition(&brute_force_simulation(ks)).unwrap();
    assert_eq!(out.result, expected, "on\n{}", ks.to_text());
}

#[test]
fn exhaustive_small_structures_match_oracle_under_full_checks() {
    for ks in common::exhaustive_corpus() {
        let out = run_esim(&ks, EngineConfig::checked(CheckLevel::Full))
            .unwrap_or_else(|e| panic!("{e}\n{}", ks.to_text()));
        if let Some((s, t)) = compare_with_oracle(&ks, &out.result) {
            panic!("differs at ({s}, {t}) on\n{}", ks.to_text());
        }
    }
}

#[test]
fn random_structures_match_oracle_under_full_checks() {
    for ks in common::random_corpus(300, 7) {
        assert_matches_oracle(&ks);
    }
}

#[test]
fn larger_random_structures_match_oracle() {
    for seed in 0..40 {
        let ks = generate_random_ks(30 + seed as usize % 20, 1 + seed as usize % 3, 0.08, seed);
        let out = run_esim(&ks, EngineConfig::checked(CheckLevel::Cheap)).unwrap();
        assert_eq!(
            compare_with_oracle(&ks, &out.result),
            None,
            "on\n{}",
            ks.to_text()
        );
    }
}

#[test]
fn ks_a() {
    let ks =
        parse_ks("states 3\nlabel 0 a\nlabel 1 a\nlabel 2 b\ntrans 0 2\ntrans 1 2\ntrans 2 2\n")
            .unwrap();
    let r = simulation_preorder(&ks);
    assert_eq!(r.partition, vec![ids(&[0, 1]), ids(&[2])]);
    assert!(r.order_pairs().is_empty());
}

#[test]
fn ks_b() {
    let ks = parse_ks("states 2\nlabel 0 a\nlabel 1 a\ntrans 0 0\n").unwrap();
    let out = run_esim(&ks, EngineConfig::checked(CheckLevel::Full)).unwrap();
    assert_eq!(out.result.partition, vec![ids(&[0]), ids(&[1])]);
    assert_eq!(out.result.order_pairs(), vec![(1, 0)]);
    assert!(out.result.simulated_by(StateId(1), StateId(0)));
    assert!(!out.result.simulated_by(StateId(0), StateId(1)));
    assert_eq!(out.stats.new_blocks_total, 2);
}

#[test]
fn dead_states() {
    // two dead states with equal labels are equivalent and both sit below
    // a live one
    let ks = parse_ks("states 3\nlabel 0 a\nlabel 1 a\nlabel 2 a\ntrans 2 2\n").unwrap();
    let r = simulation_preorder(&ks);
    assert_eq!(r.partition, vec![ids(&[0, 1]), ids(&[2])]);
    assert_eq!(r.order_pairs(), vec![(0, 1)]);

    let ks = parse_ks("states 4\nlabel 0 a\nlabel 1 b\n").unwrap();
    let r = simulation_preorder(&ks);
    assert_eq!(r.partition, vec![ids(&[0]), ids(&[1]), ids(&[2, 3])]);
    assert!(r.order_pairs().is_empty());
}

#[test]
fn empty_structure() {
    let ks = parse_ks("states 0\n").unwrap();
    let r = simulation_preorder(&ks);
    assert_eq!(r.num_blocks(), 0);
}

#[test]
fn larger_half_keeps_its_count_when_it_reaches_both_halves() {
    // 2 -> 1 -> 0 -> 3; splitting {0, 1, 2} by pre({0}) leaves {2} reaching
    // both halves of the old block
    let ks = parse_ks(
        "states 4\nlabel 0 a\nlabel 1 a\nlabel 2 a\nlabel 3 b\ntrans 0 3\ntrans 1 0\ntrans 2 1\n",
    )
    .unwrap();
    assert_matches_oracle(&ks);
}

#[test]
fn half_that_loses_its_successors_joins_the_remove_list() {
    let ks = parse_ks("states 3\nlabel 0 a\nlabel 1 a\nlabel 2 b\ntrans 0 2\n").unwrap();
    let r = simulation_preorder(&ks);
    assert_eq!(r.partition, vec![ids(&[0]), ids(&[1]), ids(&[2])]);
    assert_eq!(r.order_pairs(), vec![(1, 0)]);
}

#[test]
fn refiner_is_found_after_an_earlier_split_in_the_same_pass() {
    let ks = parse_ks(
        "states 8\nlabel 0 p1\nlabel 1 p1\nlabel 2 p1\nlabel 3 p1\nlabel 4 p0\nlabel 5 p1\nlabel 6 p1\nlabel 7 p0\n\
         trans 0 7\ntrans 4 4\ntrans 5 0\ntrans 6 2\ntrans 7 0\n",
    )
    .unwrap();
    assert_matches_oracle(&ks);
}

#[test]
fn pending_remove_entries_keep_the_driver_going() {
    let ks = parse_ks(
        "states 4\nlabel 0 p0\nlabel 1 p1\nlabel 2 p1\nlabel 3 p1\n\
         trans 0 0\ntrans 0 2\ntrans 1 3\ntrans 2 0\ntrans 3 2\n",
    )
    .unwrap();
    assert_matches_oracle(&ks);
}

#[test]
fn stabilized_pair_satisfies_the_simulation_conditions() {
    for ks in common::random_corpus(200, 99) {
        let mut engine = Engine::new(&ks, EngineConfig::default());
        engine.stabilize().unwrap();
        assert!(
            check_is_simulation_pr(&ks, &engine.pr),
            "on\n{}",
            ks.to_text()
        );
    }
}

#[test]
fn stats_do_not_change_the_result() {
    for ks in common::random_corpus(200, 5) {
        let plain = run_esim(&ks, EngineConfig::default()).unwrap();
        let counted = run_esim(&ks, EngineConfig::checked(CheckLevel::Cheap)).unwrap();
        assert_eq!(plain.result, counted.result);
        assert_eq!(plain.stats, Default::default());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn engine_equals_oracle(n in 1usize..=9, labels in 1usize..=3, p in 0.0f64..0.7, seed in any::<u64>()) {
        let ks = generate_random_ks(n, labels, p, seed);
        let out = run_esim(&ks, EngineConfig::checked(CheckLevel::Full)).unwrap();
        prop_assert_eq!(compare_with_oracle(&ks, &out.result), None);
    }

    #[test]
    fn oracle_is_the_largest_simulation(n in 1usize..=7, labels in 1usize..=2, p in 0.0f64..0.6, seed in any::<u64>()) {
        let ks = generate_random_ks(n, labels, p, seed);
        let r = brute_force_simulation(&ks);
        prop_assert!(is_simulation(&ks, &r));
        prop_assert!(r.check_preorder().is_ok());
        // adding any absent pair breaks the simulation conditions
        for s in ks.states() {
            for t in ks.states() {
                if !r.get(s, t) {
                    let mut bigger = r.clone();
                    bigger.set(s, t, true);
                    prop_assert!(!is_simulation(&ks, &bigger));
                }
            }
        }
    }
}
