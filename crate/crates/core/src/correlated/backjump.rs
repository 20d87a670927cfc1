//! Backjumping searches and a randomized scan comparing them with the full game.
//!
//! A search backjumps when, at every internal node, the first two locations it
//! visits inside that node's span come from different children.

use rand::{Rng, RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::game::{
    payoff_matrix_for, solve_oracle, solve_restricted, GameInstance, SolutionCertificate,
};
use crate::model::{PseudoBayesTree, TreeNode, TreeNodeKind};
use crate::poset::{Poset, Variant};
use crate::rational::{one, ratio, Rational};
use crate::subset::{ElementId, Subset};

use super::unordered_tree;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BackjumpSolution {
    /// Value of the game restricted to backjumping searches.
    pub value: Rational,
    pub rows: usize,
    /// Searcher and hider of the restricted game, checked against all searches.
    pub certificate: SolutionCertificate,
}

fn internal_splits(tree: &PseudoBayesTree) -> Vec<(Subset, Subset)> {
    tree.nodes()
        .into_iter()
        .filter_map(|(n, _)| n.children().map(|[a, _]| (n.span(), a.span())))
        .collect()
}

fn backjumps(splits: &[(Subset, Subset)], seq: &[ElementId]) -> bool {
    splits.iter().all(|&(span, left)| {
        let mut inside = seq.iter().filter(|&&x| span.contains(x));
        match (inside.next(), inside.next()) {
            (Some(&x), Some(&y)) => left.contains(x) != left.contains(y),
            _ => true,
        }
    })
}

pub fn is_backjumping(tree: &PseudoBayesTree, seq: &[ElementId]) -> bool {
    backjumps(&internal_splits(tree), seq)
}

/// Solves the unordered OSR game restricted to backjumping searches. Needs
/// every internal weight below the root to be at least one.
pub fn backjump_value(game: &GameInstance) -> Result<BackjumpSolution> {
    let tree = unordered_tree(game)?;
    if let Some(w) = tree.inner_weights().into_iter().find(|w| *w < one()) {
        return Err(Error::WeightTooSmall(w.to_string()));
    }
    let splits = internal_splits(&tree);
    let rows: Vec<_> = game
        .poset()
        .enumerate_searches(Variant::Osr, true)?
        .into_iter()
        .filter(|s| backjumps(&splits, s))
        .collect();
    let count = rows.len();
    let certificate = solve_restricted(game, payoff_matrix_for(game, rows))?;
    Ok(BackjumpSolution {
        value: certificate.value.clone(),
        rows: count,
        certificate,
    })
}

/// `w(left, right)` for internal nodes and `name:w` for leaves.
pub fn describe_tree(tree: &PseudoBayesTree, names: &[String]) -> String {
    fn go(node: &TreeNode, names: &[String], out: &mut String) {
        match &node.kind {
            TreeNodeKind::Leaf(x) => out.push_str(&format!("{}:{}", names[*x], node.weight)),
            TreeNodeKind::Internal(c) => {
                out.push_str(&format!("{}(", node.weight));
                go(&c[0], names, out);
                out.push_str(", ");
                go(&c[1], names, out);
                out.push(')');
            }
        }
    }
    let mut out = String::new();
    go(tree.root(), names, &mut out);
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialRecord {
    pub index: usize,
    pub leaves: usize,
    pub tree: String,
    pub backjump: Rational,
    pub oracle: Rational,
}

impl TrialRecord {
    pub fn equal(&self) -> bool {
        self.backjump == self.oracle
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjectureReport {
    pub seed: u64,
    pub records: Vec<TrialRecord>,
    /// Trials for which no valid tree turned up.
    pub skipped: Vec<usize>,
}

impl ConjectureReport {
    pub fn matches(&self) -> usize {
        self.records.iter().filter(|r| r.equal()).count()
    }

    pub fn mismatches(&self) -> Vec<usize> {
        self.records
            .iter()
            .filter(|r| !r.equal())
            .map(|r| r.index)
            .collect()
    }
}

const ATTEMPTS: usize = 1000;

fn pick(rng: &mut SplitMix64, choices: &[(i64, i64)]) -> Rational {
    let (n, d) = choices[rng.gen_range(0..choices.len())];
    ratio(n, d)
}

fn random_node(rng: &mut SplitMix64, leaves: &[ElementId], root: bool) -> TreeNode {
    if let [x] = leaves {
        return TreeNode::leaf(
            pick(
                rng,
                &[
                    (1, 5),
                    (1, 4),
                    (1, 3),
                    (2, 5),
                    (1, 2),
                    (3, 5),
                    (2, 3),
                    (3, 4),
                ],
            ),
            *x,
        );
    }
    let weight = if root {
        pick(rng, &[(1, 2), (3, 4), (1, 1)])
    } else {
        pick(rng, &[(1, 1), (5, 4), (3, 2), (2, 1)])
    };
    let cut = rng.gen_range(1..leaves.len());
    let left = random_node(rng, &leaves[..cut], false);
    let right = random_node(rng, &leaves[cut..], false);
    TreeNode::internal(weight, left, right)
}

fn random_tree(rng: &mut SplitMix64, n: usize) -> Option<PseudoBayesTree> {
    let leaves: Vec<ElementId> = (0..n).collect();
    (0..ATTEMPTS).find_map(|_| {
        let tree = PseudoBayesTree::new(random_node(rng, &leaves, true)).ok()?;
        crate::model::ProbabilityModel::from(tree.clone())
            .is_valid()
            .then_some(tree)
    })
}

fn run_trial(
    index: usize,
    seed: u64,
    min_leaves: usize,
    max_leaves: usize,
) -> Result<Option<TrialRecord>> {
    let mut rng = SplitMix64::seed_from_u64(seed);
    let n = rng.gen_range(min_leaves..=max_leaves);
    let Some(tree) = random_tree(&mut rng, n) else {
        return Ok(None);
    };
    let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    let game = GameInstance::new(Poset::antichain(&names)?, tree.clone().into(), Variant::Osr)?;
    let backjump = backjump_value(&game)?.value;
    let oracle = solve_oracle(&game)?.value;
    Ok(Some(TrialRecord {
        index,
        leaves: n,
        tree: describe_tree(&tree, &names),
        backjump,
        oracle,
    }))
}

/// Compares the backjumping value with the full game value on random trees.
/// The result depends only on the arguments.
pub fn conjecture_scan(
    seed: u64,
    trials: usize,
    min_leaves: usize,
    max_leaves: usize,
) -> Result<ConjectureReport> {
    if min_leaves < 2 || min_leaves > max_leaves {
        return Err(Error::WrongStructure(format!(
            "leaf range {min_leaves}..={max_leaves} is empty or below two"
        )));
    }
    if max_leaves > crate::poset::DEFAULT_SEARCH_LIMIT {
        return Err(Error::SizeLimit {
            elements: max_leaves,
            limit: crate::poset::DEFAULT_SEARCH_LIMIT,
        });
    }
    let mut master = SplitMix64::seed_from_u64(seed);
    let seeds: Vec<u64> = (0..trials).map(|_| master.next_u64()).collect();
    let outcomes = seeds
        .into_par_iter()
        .enumerate()
        .map(|(i, s)| run_trial(i, s, min_leaves, max_leaves).map(|r| (i, r)))
        .collect::<Result<Vec<_>>>()?;
    let mut records = Vec::new();
    let mut skipped = Vec::new();
    for (i, r) in outcomes {
        match r {
            Some(r) => records.push(r),
            None => skipped.push(i),
        }
    }
    log::debug!(
        "conjecture scan: {} trials, {} skipped",
        trials,
        skipped.len()
    );
    Ok(ConjectureReport {
        seed,
        records,
        skipped,
    })
}
