mod common;

use common::*;
use poset_rescue::correlated::solve_tree_game;
use poset_rescue::game::{solve_oracle, GameInstance};
use poset_rescue::model::to_pseudo_bayes_tree;
use poset_rescue::rational::{format, parse, ratio};
use poset_rescue::uncorrelated::bounds;
use poset_rescue::{Poset, Subset, Variant};
use proptest::prelude::*;

#[test]
fn poset_counts_match_the_known_sequence() {
    let counts: Vec<usize> = (1..=5).map(|n| posets_up_to_iso(n).len()).collect();
    assert_eq!(counts, vec![1, 2, 5, 16, 63]);
}

#[test]
fn joint_models_rebuild_as_trees_when_possible() {
    let mut rng = rng(11);
    let mut rebuilt = 0;
    for _ in 0..100 {
        let n = rand::Rng::gen_range(&mut rng, 1..=4);
        let model = random_joint(&mut rng, n);
        if let Ok(tree) = to_pseudo_bayes_tree(&model) {
            for mask in 0..1u64 << n {
                assert_eq!(tree.pr(Subset(mask)), model.pr(Subset(mask)));
            }
            rebuilt += 1;
        }
    }
    assert!(rebuilt > 0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rationals_round_trip_through_text(p in -10_000i64..10_000, q in 1i64..10_000) {
        let r = ratio(p, q);
        prop_assert_eq!(parse(&format(&r)), Some(r));
    }

    #[test]
    fn oracle_certificates_close_and_respect_bounds(seed in any::<u64>(), csr in any::<bool>()) {
        let mut rng = rng(seed);
        let n = rand::Rng::gen_range(&mut rng, 1..=4);
        let all = posets_up_to_iso(n);
        let pairs = &all[rand::Rng::gen_range(&mut rng, 0..all.len())];
        let variant = if csr { Variant::Csr } else { Variant::Osr };
        let g = independent_game(poset_from_pairs(n, pairs), probabilities(&mut rng, n), variant);
        let cert = solve_oracle(&g).unwrap();
        prop_assert!(cert.is_exact());
        prop_assert!(cert.value >= ratio(0, 1) && cert.value <= ratio(1, 1));
        let b = bounds(&g).unwrap();
        prop_assert!(b.contains(&cert.value));
    }

    #[test]
    fn tree_game_matches_the_oracle(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let n = rand::Rng::gen_range(&mut rng, 1..=4);
        let tree = random_light_tree(&mut rng, n);
        let g = GameInstance::new(Poset::antichain(&names(n)).unwrap(), tree.into(), Variant::Osr).unwrap();
        let solved = solve_tree_game(&g).unwrap();
        prop_assert!(solved.certificate.is_exact());
        prop_assert_eq!(solved.value, solve_oracle(&g).unwrap().value);
    }
}
