use num_traits::Zero;

use crate::error::{Error, Result};
use crate::game::GameInstance;
use crate::model::{correlation_class, PseudoBayesTree};
use crate::poset::Variant;
use crate::rational::{self, one, Rational};
use crate::uncorrelated::BoundsReport;

/// `(1 - Pr(X)) / Σ odds(w_leaf)` for a tree whose weights, root included,
/// are all at most one.
pub fn reducible_upper_bound(tree: &PseudoBayesTree) -> Result<Rational> {
    if let Some((node, _)) = tree.nodes().into_iter().find(|(n, _)| n.weight > one()) {
        return Err(Error::WeightTooLarge(format!(
            "{} above {:?}",
            node.weight,
            node.span()
        )));
    }
    let o = rational::sum(
        &tree
            .leaf_weights()
            .iter()
            .map(rational::odds)
            .collect::<Vec<_>>(),
    );
    if o.is_zero() {
        return Ok(one());
    }
    Ok((one() - tree.root().weight_product()) / o)
}

/// The same expression with marginal odds. Not a valid bound in general;
/// kept for comparison.
pub fn marginal_odds_bound(tree: &PseudoBayesTree) -> Rational {
    let o: Rational = (0..tree.len())
        .map(|x| rational::odds(&tree.pr(crate::subset::Subset::singleton(x))))
        .sum();
    if o.is_zero() {
        return one();
    }
    (one() - tree.root().weight_product()) / o
}

/// Bounds that follow from the correlation class alone.
///
/// OSR needs positive correlation, CSR negative; independence serves both.
/// The upper end for OSR comes from hiding with weights `1/Pr(x)`.
pub fn correlated_bounds(game: &GameInstance) -> Result<BoundsReport> {
    let class = correlation_class(game.model())?;
    let model = game.model();
    let o = model.odds_sum(model.all());
    let n = Rational::from_integer(game.len().into());
    match game.variant() {
        Variant::Osr if class.is_positive() => Ok(BoundsReport {
            lower: (one() + &o).recip(),
            upper: &n / (&n + &o),
            lower_source: format!("{class} correlation"),
            upper_source: "hider weights 1/Pr(x)".into(),
        }),
        Variant::Csr if class.is_negative() => Ok(BoundsReport {
            lower: (&n + &o).recip(),
            upper: (one() + &o).recip(),
            lower_source: format!("{class} correlation"),
            upper_source: format!("{class} correlation"),
        }),
        _ => Err(Error::WrongCorrelationClass(class.to_string())),
    }
}
