use num_traits::Signed;

use crate::error::{Error, Result};
use crate::rational::{one, Rational};
use crate::subset::{ElementId, Subset};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TreeNodeKind {
    Leaf(ElementId),
    Internal(Box<[TreeNode; 2]>),
}

/// A node with the weight of its incoming edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeNode {
    pub weight: Rational,
    pub kind: TreeNodeKind,
    span: Subset,
}

impl TreeNode {
    pub fn leaf(weight: Rational, element: ElementId) -> TreeNode {
        TreeNode {
            weight,
            kind: TreeNodeKind::Leaf(element),
            span: Subset::singleton(element),
        }
    }

    pub fn internal(weight: Rational, left: TreeNode, right: TreeNode) -> TreeNode {
        let span = left.span.union(right.span);
        TreeNode {
            weight,
            kind: TreeNodeKind::Internal(Box::new([left, right])),
            span,
        }
    }

    /// Leaves below this node.
    pub fn span(&self) -> Subset {
        self.span
    }

    pub fn children(&self) -> Option<&[TreeNode; 2]> {
        match &self.kind {
            TreeNodeKind::Internal(c) => Some(c),
            TreeNodeKind::Leaf(_) => None,
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self.kind, TreeNodeKind::Leaf(_))
    }

    /// Product of every weight in this subtree, incoming edge included.
    pub fn weight_product(&self) -> Rational {
        match &self.kind {
            TreeNodeKind::Leaf(_) => self.weight.clone(),
            TreeNodeKind::Internal(c) => {
                &self.weight * c[0].weight_product() * c[1].weight_product()
            }
        }
    }

    fn pr(&self, set: Subset) -> Rational {
        if self.span.is_disjoint(set) {
            return one();
        }
        match &self.kind {
            TreeNodeKind::Leaf(_) => self.weight.clone(),
            TreeNodeKind::Internal(c) => &self.weight * c[0].pr(set) * c[1].pr(set),
        }
    }

    fn visit<'a>(&'a self, depth: usize, f: &mut impl FnMut(&'a TreeNode, usize)) {
        f(self, depth);
        if let Some(c) = self.children() {
            c[0].visit(depth + 1, f);
            c[1].visit(depth + 1, f);
        }
    }

    fn check_paths(&self, above: &Rational, out: &mut Vec<String>) {
        let path = above * &self.weight;
        match &self.kind {
            TreeNodeKind::Leaf(x) => {
                if path > one() {
                    out.push(format!("path product to #{x} is {path}, above one"));
                }
            }
            TreeNodeKind::Internal(c) => {
                c[0].check_paths(&path, out);
                c[1].check_paths(&path, out);
            }
        }
    }
}

/// Binary tree whose leaves are the locations and whose edge weights are
/// ratios of conditional probabilities. `Pr(S)` is the product of the
/// weights on the union of root-to-leaf paths for the leaves in `S`, the
/// root's incoming edge included.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PseudoBayesTree {
    root: TreeNode,
}

impl PseudoBayesTree {
    /// Checks that the leaves are exactly `0..n` and every weight is positive.
    pub fn new(root: TreeNode) -> Result<Self> {
        let mut seen = Subset::EMPTY;
        let mut leaves = 0usize;
        let mut error = None;
        root.visit(0, &mut |node, _| {
            if !node.weight.is_positive() {
                error.get_or_insert_with(|| {
                    Error::InvalidModel(format!("weight {} is not positive", node.weight))
                });
            }
            if let TreeNodeKind::Leaf(x) = node.kind {
                if x >= 64 || seen.contains(x) {
                    error.get_or_insert_with(|| {
                        Error::InvalidModel(format!("leaf #{x} repeated or out of range"))
                    });
                } else {
                    seen = seen.with(x);
                }
                leaves += 1;
            }
        });
        if let Some(e) = error {
            return Err(e);
        }
        if seen != Subset::full(leaves) {
            return Err(Error::InvalidModel(format!(
                "leaves {seen:?} are not 0..{leaves}"
            )));
        }
        Ok(PseudoBayesTree { root })
    }

    pub fn root(&self) -> &TreeNode {
        &self.root
    }

    pub fn len(&self) -> usize {
        self.root.span.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn pr(&self, set: Subset) -> Rational {
        if set.is_empty() {
            return one();
        }
        self.root.pr(set)
    }

    /// Nodes in preorder with their depth (root at depth 0).
    pub fn nodes(&self) -> Vec<(&TreeNode, usize)> {
        let mut out = Vec::new();
        self.root.visit(0, &mut |n, d| out.push((n, d)));
        out
    }

    /// Incoming weight of every leaf, indexed by element.
    pub fn leaf_weights(&self) -> Vec<Rational> {
        let mut w = vec![one(); self.len()];
        for (node, _) in self.nodes() {
            if let TreeNodeKind::Leaf(x) = node.kind {
                w[x] = node.weight.clone();
            }
        }
        w
    }

    /// Weights of internal nodes other than the root.
    pub fn inner_weights(&self) -> Vec<Rational> {
        self.nodes()
            .into_iter()
            .filter(|(n, d)| *d > 0 && !n.is_leaf())
            .map(|(n, _)| n.weight.clone())
            .collect()
    }

    pub(crate) fn check_weights(&self, out: &mut Vec<String>) {
        for (node, _) in self.nodes() {
            if !node.weight.is_positive() {
                out.push(format!("weight {} is not positive", node.weight));
            }
        }
        self.root.check_paths(&one(), out);
    }
}
