//! Depth-first play on a pseudo-Bayesian tree.
//!
//! At a node with subtrees `A` and `B` Searcher exhausts one subtree before
//! the other and Hider picks a side, which gives a 2×2 game per node.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::game::{certify, GameInstance, MixedStrategy, SolutionCertificate};
use crate::model::{PseudoBayesTree, TreeNode, TreeNodeKind};
use crate::poset::SearchSequence;
use crate::rational::{one, ratio, Rational};
use crate::subset::{ElementId, Subset};
use crate::uncorrelated::STRATEGY_LIMIT;

use super::unordered_tree;

/// Per-node quantities of the recursion, in preorder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeGameNode {
    pub span: Subset,
    pub depth: usize,
    pub weight: Rational,
    /// Value of the game on this subtree, incoming weight included.
    pub value: Rational,
    /// Product of all weights in this subtree.
    pub pr: Rational,
    /// Odds of entering the left subtree first versus the right one.
    pub searcher_odds: Option<(Rational, Rational)>,
    /// Odds of hiding in the left subtree versus the right one.
    pub hider_odds: Option<(Rational, Rational)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeGameSolution {
    pub value: Rational,
    pub nodes: Vec<TreeGameNode>,
    pub certificate: SolutionCertificate,
}

fn combine(w: &Rational, va: &Rational, pa: &Rational, vb: &Rational, pb: &Rational) -> Rational {
    let denom = (one() - pa) / va + (one() - pb) / vb;
    if denom.is_zero() {
        // Both subtrees succeed surely; so does the whole search.
        return w.clone();
    }
    w * (one() - pa * pb) / denom
}

/// Returns `(V, Pr)` of `node` and appends its record (and its subtree's) in preorder.
fn analyze(node: &TreeNode, depth: usize, out: &mut Vec<TreeGameNode>) -> (Rational, Rational) {
    let slot = out.len();
    out.push(TreeGameNode {
        span: node.span(),
        depth,
        weight: node.weight.clone(),
        value: Rational::zero(),
        pr: Rational::zero(),
        searcher_odds: None,
        hider_odds: None,
    });
    let (value, pr) = match node.children() {
        None => (node.weight.clone(), node.weight.clone()),
        Some([a, b]) => {
            let (va, pa) = analyze(a, depth + 1, out);
            let (vb, pb) = analyze(b, depth + 1, out);
            out[slot].searcher_odds = Some((va.recip() - &pb / &vb, vb.recip() - &pa / &va));
            out[slot].hider_odds = Some(((one() - &pa) / &va, (one() - &pb) / &vb));
            (
                combine(&node.weight, &va, &pa, &vb, &pb),
                &node.weight * pa * pb,
            )
        }
    };
    out[slot].value = value.clone();
    out[slot].pr = pr.clone();
    (value, pr)
}

/// The recursion's value without checking the weight condition or
/// certifying anything.
pub fn tree_game_value(tree: &PseudoBayesTree) -> Rational {
    analyze(tree.root(), 0, &mut Vec::new()).0
}

fn coin(odds: &(Rational, Rational)) -> (Rational, Rational) {
    let total = &odds.0 + &odds.1;
    if total.is_zero() {
        let half = ratio(1, 2);
        (half.clone(), half)
    } else {
        (&odds.0 / &total, &odds.1 / &total)
    }
}

/// Distribution over depth-first orders induced by the searcher coins.
fn searcher_orders(
    node: &TreeNode,
    nodes: &[TreeGameNode],
    idx: &mut usize,
) -> Vec<(Vec<ElementId>, Rational)> {
    let me = *idx;
    *idx += 1;
    match &node.kind {
        TreeNodeKind::Leaf(x) => vec![(vec![*x], one())],
        TreeNodeKind::Internal(c) => {
            let left = searcher_orders(&c[0], nodes, idx);
            let right = searcher_orders(&c[1], nodes, idx);
            let (qa, qb) = coin(nodes[me].searcher_odds.as_ref().expect("internal node"));
            let mut out = Vec::with_capacity(2 * left.len() * right.len());
            for (sa, wa) in &left {
                for (sb, wb) in &right {
                    let w = wa * wb;
                    if qa.is_positive() {
                        out.push(([sa.as_slice(), sb.as_slice()].concat(), &qa * &w));
                    }
                    if qb.is_positive() {
                        out.push(([sb.as_slice(), sa.as_slice()].concat(), &qb * &w));
                    }
                }
            }
            out
        }
    }
}

fn hider_weights(
    node: &TreeNode,
    nodes: &[TreeGameNode],
    idx: &mut usize,
    mass: Rational,
    out: &mut Vec<(ElementId, Rational)>,
) {
    let me = *idx;
    *idx += 1;
    match &node.kind {
        TreeNodeKind::Leaf(x) => out.push((*x, mass)),
        TreeNodeKind::Internal(c) => {
            let (qa, qb) = coin(nodes[me].hider_odds.as_ref().expect("internal node"));
            hider_weights(&c[0], nodes, idx, &mass * qa, out);
            hider_weights(&c[1], nodes, idx, &mass * qb, out);
        }
    }
}

/// Solves the unordered OSR game of a completely reducible model whose
/// non-root weights are at most one, with both coin strategies expanded
/// and certified.
pub fn solve_tree_game(game: &GameInstance) -> Result<TreeGameSolution> {
    let tree = unordered_tree(game)?;
    if let Some((node, _)) = tree
        .nodes()
        .into_iter()
        .skip(1)
        .find(|(n, _)| n.weight > one())
    {
        return Err(Error::WeightTooLarge(format!(
            "weight {} above {:?}",
            node.weight,
            node.span()
        )));
    }
    if tree.len() > 1 && (1usize << (tree.len() - 1).min(63)) > STRATEGY_LIMIT {
        return Err(Error::SizeLimit {
            elements: tree.len(),
            limit: STRATEGY_LIMIT,
        });
    }
    let mut nodes = Vec::new();
    let (value, _) = analyze(tree.root(), 0, &mut nodes);
    for (i, n) in nodes.iter().enumerate() {
        if n.value < n.pr {
            return Err(Error::Internal(format!(
                "subtree value below its probability at node {i}"
            )));
        }
        if let Some((a, b)) = &n.searcher_odds {
            if a.is_negative() || b.is_negative() {
                return Err(Error::Internal(format!(
                    "negative searcher odds at node {i}"
                )));
            }
        }
    }
    let orders = searcher_orders(tree.root(), &nodes, &mut 0);
    let searcher = MixedStrategy::from_weights(
        orders
            .into_iter()
            .map(|(s, w)| (SearchSequence::from_vec_unchecked(s), w))
            .collect(),
    )?;
    let mut hider = Vec::new();
    hider_weights(tree.root(), &nodes, &mut 0, one(), &mut hider);
    let hider = MixedStrategy::from_weights(hider)?;
    let certificate = certify(game, value.clone(), searcher, hider)?;
    Ok(TreeGameSolution {
        value,
        nodes,
        certificate,
    })
}
