#![allow(dead_code)]

use std::collections::BTreeSet;

use poset_rescue::game::GameInstance;
use poset_rescue::model::{JointModel, ProbabilityModel, PseudoBayesTree, TreeNode};
use poset_rescue::rational::{int, ratio, Rational};
use poset_rescue::{ElementId, IndependentModel, Poset, Subset, Variant};
use rand::Rng;
use rand_xoshiro::SplitMix64;

pub use rand::SeedableRng;
pub type TestRng = SplitMix64;

pub fn rng(seed: u64) -> TestRng {
    SplitMix64::seed_from_u64(seed)
}

pub fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("x{i}")).collect()
}

fn closed(n: usize, rel: &[Subset]) -> bool {
    (0..n).all(|x| rel[x].iter().all(|y| rel[y].is_subset_of(rel[x])))
}

fn canonical(n: usize, pairs: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best: Option<Vec<(usize, usize)>> = None;
    permute(&mut perm, 0, &mut |p| {
        let mut image: Vec<(usize, usize)> = pairs.iter().map(|&(a, b)| (p[a], p[b])).collect();
        image.sort();
        if best.as_ref().is_none_or(|b| image < *b) {
            best = Some(image);
        }
    });
    best.unwrap_or_default()
}

fn permute(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}

/// Every poset on `n` elements up to isomorphism, as strict relation pairs.
/// Each poset has a natural labeling, so only pairs `x < y` with `x < y` as
/// indices are enumerated.
pub fn posets_up_to_iso(n: usize) -> Vec<Vec<(usize, usize)>> {
    let slots: Vec<(usize, usize)> = (0..n)
        .flat_map(|x| (x + 1..n).map(move |y| (x, y)))
        .collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u64..(1 << slots.len()) {
        let pairs: Vec<(usize, usize)> = slots
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &p)| p)
            .collect();
        let mut rel = vec![Subset::EMPTY; n];
        for &(x, y) in &pairs {
            rel[x] = rel[x].with(y);
        }
        if !closed(n, &rel) {
            continue;
        }
        if seen.insert(canonical(n, &pairs)) {
            out.push(pairs);
        }
    }
    out
}

pub fn poset_from_pairs(n: usize, pairs: &[(usize, usize)]) -> Poset {
    Poset::from_pairs(names(n), pairs).unwrap()
}

/// All posets with 1 to `max` elements up to isomorphism.
pub fn small_posets(max: usize) -> Vec<Poset> {
    (1..=max)
        .flat_map(|n| {
            posets_up_to_iso(n)
                .into_iter()
                .map(move |p| poset_from_pairs(n, &p))
        })
        .collect()
}

/// A probability in `(0, 1]`, occasionally exactly one.
pub fn probability(rng: &mut TestRng) -> Rational {
    let d = rng.gen_range(2..=9);
    if rng.gen_ratio(1, 12) {
        return int(1);
    }
    ratio(rng.gen_range(1..d), d)
}

pub fn probabilities(rng: &mut TestRng, n: usize) -> Vec<Rational> {
    (0..n).map(|_| probability(rng)).collect()
}

pub fn independent_game(poset: Poset, p: Vec<Rational>, variant: Variant) -> GameInstance {
    GameInstance::new(poset, IndependentModel::new(p).unwrap().into(), variant).unwrap()
}

/// A joint model from random pattern masses, with every marginal positive.
pub fn random_joint(rng: &mut TestRng, n: usize) -> ProbabilityModel {
    loop {
        let masses: Vec<i64> = (0..1usize << n).map(|_| rng.gen_range(0..6)).collect();
        let total: i64 = masses.iter().sum();
        if total == 0 {
            continue;
        }
        let table: Vec<Rational> = (0..1u64 << n)
            .map(|s| {
                let sum: i64 = (0..1u64 << n)
                    .filter(|t| t & s == s)
                    .map(|t| masses[t as usize])
                    .sum();
                ratio(sum, total)
            })
            .collect();
        let model: ProbabilityModel = JointModel::new(n, table).unwrap().into();
        if model.is_valid() {
            return model;
        }
    }
}

fn random_node(
    rng: &mut TestRng,
    leaves: &[ElementId],
    weights: &dyn Fn(&mut TestRng, bool) -> Rational,
) -> TreeNode {
    if let [x] = leaves {
        return TreeNode::leaf(weights(rng, true), *x);
    }
    let cut = rng.gen_range(1..leaves.len());
    let w = weights(rng, false);
    let l = random_node(rng, &leaves[..cut], weights);
    let r = random_node(rng, &leaves[cut..], weights);
    TreeNode::internal(w, l, r)
}

/// A valid tree model on `n` leaves with every weight, root included, at most one.
pub fn random_light_tree(rng: &mut TestRng, n: usize) -> PseudoBayesTree {
    let leaves: Vec<ElementId> = (0..n).collect();
    loop {
        let tree = PseudoBayesTree::new(random_node(rng, &leaves, &|r, _| probability(r))).unwrap();
        if ProbabilityModel::from(tree.clone()).is_valid() {
            return tree;
        }
    }
}

/// Adds one or two relations between incomparable pairs, respecting the
/// natural labeling so the result stays acyclic.
pub fn random_extension(
    rng: &mut TestRng,
    n: usize,
    pairs: &[(usize, usize)],
) -> Option<Vec<(usize, usize)>> {
    let coarse = poset_from_pairs(n, pairs);
    let free: Vec<(usize, usize)> = (0..n)
        .flat_map(|x| (x + 1..n).map(move |y| (x, y)))
        .filter(|&(x, y)| !coarse.comparable(x, y))
        .collect();
    if free.is_empty() {
        return None;
    }
    let mut out = pairs.to_vec();
    for _ in 0..rng.gen_range(1..=2) {
        out.push(free[rng.gen_range(0..free.len())]);
    }
    Some(out)
}
