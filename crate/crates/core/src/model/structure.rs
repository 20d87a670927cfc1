//! Dependence structure: correlation sign, conditional independence,
//! co-independence, complete reducibility and the pseudo-Bayesian tree.

use std::collections::HashMap;
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::subset::{ElementId, Subset};

use super::{ProbabilityModel, PseudoBayesTree, TreeNode};

/// Element bound for the exhaustive structure checks.
pub const DEFAULT_MODEL_LIMIT: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorrelationClass {
    Independent,
    Positive,
    Negative,
    Neither,
}

impl CorrelationClass {
    /// `Pr(A|B) >= Pr(A)` for all disjoint `A, B` (independence included).
    pub fn is_positive(self) -> bool {
        matches!(
            self,
            CorrelationClass::Positive | CorrelationClass::Independent
        )
    }

    /// `Pr(A|B) <= Pr(A)` for all disjoint `A, B` (independence included).
    pub fn is_negative(self) -> bool {
        matches!(
            self,
            CorrelationClass::Negative | CorrelationClass::Independent
        )
    }
}

impl fmt::Display for CorrelationClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CorrelationClass::Independent => "independent",
            CorrelationClass::Positive => "positive",
            CorrelationClass::Negative => "negative",
            CorrelationClass::Neither => "neither",
        })
    }
}

fn guard(model: &ProbabilityModel, limit: usize) -> Result<()> {
    if model.len() > limit {
        return Err(Error::SizeLimit {
            elements: model.len(),
            limit,
        });
    }
    Ok(())
}

/// Compares `Pr(A|B)` with `Pr(A)` over every pair of disjoint nonempty
/// subsets with `Pr(B) > 0`.
pub fn correlation_class(model: &ProbabilityModel) -> Result<CorrelationClass> {
    guard(model, DEFAULT_MODEL_LIMIT)?;
    let all = model.all();
    let (mut up, mut down) = (false, false);
    for b in all.nonempty_subsets() {
        let pb = model.pr(b);
        if pb.is_zero() {
            continue;
        }
        for a in all.difference(b).nonempty_subsets() {
            // Pr(A|B) vs Pr(A)  <=>  Pr(A ∪ B) vs Pr(A) Pr(B)
            let joint = model.pr(a.union(b));
            let indep = model.pr(a) * &pb;
            if joint > indep {
                up = true;
            } else if joint < indep {
                down = true;
            }
        }
    }
    Ok(match (up, down) {
        (false, false) => CorrelationClass::Independent,
        (true, false) => CorrelationClass::Positive,
        (false, true) => CorrelationClass::Negative,
        (true, true) => CorrelationClass::Neither,
    })
}

/// `Pr(x, y | z) = Pr(x | z) Pr(y | z)`.
pub fn is_cond_independent(
    model: &ProbabilityModel,
    x: ElementId,
    y: ElementId,
    z: ElementId,
) -> Result<bool> {
    let z_set = Subset::singleton(z);
    let pz = model.pr_checked(z_set)?;
    if pz.is_zero() {
        return Err(Error::ZeroCondition);
    }
    let xyz = model.pr_checked(Subset::pair(x, y).with(z))?;
    let xz = model.pr_checked(z_set.with(x))?;
    let yz = model.pr_checked(z_set.with(y))?;
    Ok(xyz * pz == xz * yz)
}

/// Co-independence of disjoint blocks `a` and `b`: every element of one
/// block carries the same information about the other, and nothing more.
///
/// Identities are compared in cross-multiplied form, so conditioning on a
/// null event never divides by zero.
pub fn is_coindependent(model: &ProbabilityModel, a: Subset, b: Subset) -> Result<bool> {
    if a.is_empty() || b.is_empty() || !a.is_disjoint(b) {
        return Err(Error::WrongStructure(
            "blocks must be disjoint and nonempty".into(),
        ));
    }
    let both = a.union(b);
    model.pr_checked(both)?;
    if both.len() > DEFAULT_MODEL_LIMIT {
        return Err(Error::SizeLimit {
            elements: both.len(),
            limit: DEFAULT_MODEL_LIMIT,
        });
    }
    Ok(coindependent_unchecked(model, a, b))
}

fn coindependent_unchecked(model: &ProbabilityModel, a: Subset, b: Subset) -> bool {
    let pr = |s: Subset| model.pr(s);
    for a_sub in a.nonempty_subsets() {
        let pa_sub = pr(a_sub);
        for b_sub in b.nonempty_subsets() {
            let pab_sub = pr(a_sub.union(b_sub));
            let pb_sub = pr(b_sub);
            // Pr(A'|B') = Pr(A'|y) for every y in B
            for y in b.iter() {
                if &pab_sub * pr(Subset::singleton(y)) != pr(a_sub.with(y)) * &pb_sub {
                    return false;
                }
            }
            // Pr(B'|A') = Pr(B'|x) for every x in A
            for x in a.iter() {
                if &pab_sub * pr(Subset::singleton(x)) != pr(b_sub.with(x)) * &pa_sub {
                    return false;
                }
            }
        }
    }
    for x in a.iter() {
        for y in b.iter() {
            let (px, py, pxy) = (
                pr(Subset::singleton(x)),
                pr(Subset::singleton(y)),
                pr(Subset::pair(x, y)),
            );
            // Pr(A'|x,y) = Pr(A'|x)
            for a_sub in a.nonempty_subsets() {
                if pr(a_sub.with(x).with(y)) * &px != pr(a_sub.with(x)) * &pxy {
                    return false;
                }
            }
            // Pr(B'|x,y) = Pr(B'|y)
            for b_sub in b.nonempty_subsets() {
                if pr(b_sub.with(x).with(y)) * &py != pr(b_sub.with(y)) * &pxy {
                    return false;
                }
            }
        }
    }
    true
}

/// The common ratio `Pr(A'|B') / Pr(A')` for co-independent blocks.
pub fn bayes_factor(model: &ProbabilityModel, a: Subset, b: Subset) -> Result<Rational> {
    if !is_coindependent(model, a, b)? {
        return Err(Error::NotCoindependent);
    }
    let (x, y) = (a.first().expect("nonempty"), b.first().expect("nonempty"));
    let factor = model.pr(Subset::pair(x, y)) / (model.marginal(x) * model.marginal(y));
    for a_sub in a.nonempty_subsets() {
        for b_sub in b.nonempty_subsets() {
            let denom = model.pr(a_sub) * model.pr(b_sub);
            if denom.is_zero() {
                continue;
            }
            if model.pr(a_sub.union(b_sub)) / denom != factor {
                return Err(Error::Internal(format!(
                    "Bayes factor differs on {a_sub:?}, {b_sub:?}"
                )));
            }
        }
    }
    Ok(factor)
}

/// Binary decomposition into co-independent blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Reduction {
    Leaf(ElementId),
    Split(Box<Reduction>, Box<Reduction>),
}

impl Reduction {
    pub fn span(&self) -> Subset {
        match self {
            Reduction::Leaf(x) => Subset::singleton(*x),
            Reduction::Split(l, r) => l.span().union(r.span()),
        }
    }
}

/// Candidate first blocks of `set`: proper subsets containing its least
/// element, in lexicographic order of their member lists.
fn candidate_blocks(set: Subset) -> Vec<Subset> {
    let least = set.first().expect("nonempty");
    let rest = set.without(least);
    let mut blocks: Vec<Subset> = rest
        .subsets()
        .filter(|t| *t != rest)
        .map(|t| t.with(least))
        .collect();
    blocks.sort_by_key(|s| s.to_vec());
    blocks
}

/// Finds a co-independent split of every subset with two or more elements
/// and returns the decomposition of the whole set. The first block at each
/// split is the lexicographically least one containing the least element.
pub fn completely_reduce(model: &ProbabilityModel) -> Result<Reduction> {
    guard(model, DEFAULT_MODEL_LIMIT)?;
    let all = model.all();
    if all.is_empty() {
        return Err(Error::InvalidModel("empty model".into()));
    }
    let mut subsets: Vec<Subset> = all.subsets().filter(|s| s.len() >= 2).collect();
    subsets.sort_by_key(|s| (s.len(), s.to_vec()));
    let mut splits: HashMap<Subset, Subset> = HashMap::new();
    for set in subsets {
        let block = candidate_blocks(set)
            .into_iter()
            .find(|&blk| coindependent_unchecked(model, blk, set.difference(blk)))
            .ok_or(Error::NotReducible(set))?;
        splits.insert(set, block);
    }
    fn build(set: Subset, splits: &HashMap<Subset, Subset>) -> Reduction {
        if set.len() == 1 {
            return Reduction::Leaf(set.first().expect("nonempty"));
        }
        let block = splits[&set];
        Reduction::Split(
            Box::new(build(block, splits)),
            Box::new(build(set.difference(block), splits)),
        )
    }
    Ok(build(all, &splits))
}

/// Builds the pseudo-Bayesian tree of a completely reducible model and
/// checks that it reproduces every subset probability.
pub fn to_pseudo_bayes_tree(model: &ProbabilityModel) -> Result<PseudoBayesTree> {
    let reduction = completely_reduce(model)?;
    let cond = |x: ElementId, y: ElementId| {
        model.conditional_pr(Subset::singleton(x), Subset::singleton(y))
    };
    let ratio_of = |num: Rational, den: Rational| {
        if den.is_zero() {
            Err(Error::ZeroCondition)
        } else {
            Ok(num / den)
        }
    };
    fn build(
        node: &Reduction,
        sibling: Option<ElementId>,
        model: &ProbabilityModel,
        cond: &dyn Fn(ElementId, ElementId) -> Result<Rational>,
        ratio_of: &dyn Fn(Rational, Rational) -> Result<Rational>,
    ) -> Result<TreeNode> {
        match node {
            Reduction::Leaf(x) => {
                let weight = match sibling {
                    Some(s) => cond(*x, s)?,
                    None => model.marginal(*x),
                };
                Ok(TreeNode::leaf(weight, *x))
            }
            Reduction::Split(l, r) => {
                let a0 = l.span().first().expect("nonempty");
                let a1 = r.span().first().expect("nonempty");
                let numerator = match sibling {
                    Some(s) => cond(a0, s)?,
                    None => model.marginal(a0),
                };
                let weight = ratio_of(numerator, cond(a0, a1)?)?;
                let left = build(l, Some(a1), model, cond, ratio_of)?;
                let right = build(r, Some(a0), model, cond, ratio_of)?;
                Ok(TreeNode::internal(weight, left, right))
            }
        }
    }
    let root = build(&reduction, None, model, &cond, &ratio_of)?;
    let tree = PseudoBayesTree::new(root)?;
    for s in model.all().subsets() {
        if tree.pr(s) != model.pr(s) {
            return Err(Error::Internal(format!(
                "tree disagrees with model on {s:?}"
            )));
        }
    }
    Ok(tree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::{f1, pair};
    use crate::model::IndependentModel;
    use crate::rational::{int, ratio};

    fn s(items: &[ElementId]) -> Subset {
        Subset::from_elements(items.iter().copied())
    }

    fn independent(ps: &[(i64, i64)]) -> ProbabilityModel {
        IndependentModel::new(ps.iter().map(|&(n, d)| ratio(n, d)).collect())
            .unwrap()
            .into()
    }

    #[test]
    fn correlation_examples() {
        assert_eq!(
            correlation_class(&f1()).unwrap(),
            CorrelationClass::Positive
        );
        assert_eq!(
            correlation_class(&independent(&[(1, 2), (1, 3), (2, 5)])).unwrap(),
            CorrelationClass::Independent
        );
        let neg = pair(ratio(1, 2), ratio(1, 2), ratio(1, 5));
        assert_eq!(correlation_class(&neg).unwrap(), CorrelationClass::Negative);
        let names: Vec<(i64, i64)> = vec![(1, 2); 9];
        assert!(matches!(
            correlation_class(&independent(&names)),
            Err(Error::SizeLimit { .. })
        ));
    }

    #[test]
    fn conditional_independence_examples() {
        let m = f1();
        assert!(is_cond_independent(&m, 0, 2, 1).unwrap());
        assert!(is_cond_independent(&m, 1, 2, 0).unwrap());
        assert!(is_cond_independent(&independent(&[(1, 2), (1, 3), (1, 5)]), 0, 1, 2).unwrap());
        // a and b are not independent given c in F1: Pr(ab|c) = 1/10, Pr(a|c)Pr(b|c) = 1/5 * 3/10
        assert!(!is_cond_independent(&m, 0, 1, 2).unwrap());
    }

    #[test]
    fn coindependence_examples() {
        let m = f1();
        assert!(is_coindependent(&m, s(&[0, 1]), s(&[2])).unwrap());
        assert!(is_coindependent(&m, s(&[0]), s(&[1])).unwrap());
        assert!(!is_coindependent(&m, s(&[0, 2]), s(&[1])).unwrap());
        assert!(is_coindependent(&m, s(&[0]), s(&[0])).is_err());
    }

    #[test]
    fn bayes_factor_examples() {
        let m = f1();
        assert_eq!(bayes_factor(&m, s(&[0, 1]), s(&[2])).unwrap(), int(2));
        assert_eq!(bayes_factor(&m, s(&[0]), s(&[1])).unwrap(), ratio(10, 3));
        assert_eq!(bayes_factor(&m, s(&[1]), s(&[0])).unwrap(), ratio(10, 3));
        assert_eq!(
            bayes_factor(&independent(&[(1, 2), (1, 3)]), s(&[0]), s(&[1])).unwrap(),
            int(1)
        );
        assert_eq!(
            bayes_factor(&m, s(&[0, 2]), s(&[1])),
            Err(Error::NotCoindependent)
        );
    }

    #[test]
    fn reduction_examples() {
        let r = completely_reduce(&f1()).unwrap();
        assert_eq!(
            r,
            Reduction::Split(
                Box::new(Reduction::Split(
                    Box::new(Reduction::Leaf(0)),
                    Box::new(Reduction::Leaf(1))
                )),
                Box::new(Reduction::Leaf(2))
            )
        );
        assert_eq!(
            completely_reduce(&independent(&[(1, 2)])).unwrap(),
            Reduction::Leaf(0)
        );
        let r = completely_reduce(&independent(&[(1, 2), (1, 3), (1, 5)])).unwrap();
        assert_eq!(
            r,
            Reduction::Split(
                Box::new(Reduction::Leaf(0)),
                Box::new(Reduction::Split(
                    Box::new(Reduction::Leaf(1)),
                    Box::new(Reduction::Leaf(2))
                ))
            )
        );
    }

    #[test]
    fn irreducible_model_reports_subset() {
        // Pairwise independent but not jointly: parity-style distribution.
        let m = crate::model::JointModel::from_entries(
            3,
            &[
                (&[0][..], ratio(1, 2)),
                (&[1], ratio(1, 2)),
                (&[2], ratio(1, 2)),
                (&[0, 1], ratio(1, 4)),
                (&[0, 2], ratio(1, 4)),
                (&[1, 2], ratio(1, 4)),
                (&[0, 1, 2], int(0)),
            ],
        )
        .unwrap();
        assert_eq!(
            completely_reduce(&m.into()),
            Err(Error::NotReducible(Subset::full(3)))
        );
    }

    #[test]
    fn tree_of_f1_has_expected_weights() {
        let t = to_pseudo_bayes_tree(&f1()).unwrap();
        let root = t.root();
        assert_eq!(root.weight, ratio(1, 2));
        let [inner, c] = root.children().unwrap();
        assert_eq!(inner.weight, ratio(3, 5));
        assert_eq!(c.weight, ratio(2, 3));
        let [a, b] = inner.children().unwrap();
        assert_eq!(
            (a.weight.clone(), b.weight.clone()),
            (ratio(1, 3), ratio(1, 2))
        );
        assert_eq!(t.pr(Subset::full(3)), ratio(1, 30));
    }

    #[test]
    fn tree_of_independent_pair_round_trips() {
        let m = independent(&[(1, 2), (1, 3)]);
        let t = to_pseudo_bayes_tree(&m).unwrap();
        for set in Subset::full(2).subsets() {
            assert_eq!(t.pr(set), m.pr(set));
        }
    }
}
