//! Solutions and bounds for correlated success probabilities.

mod backjump;
mod bounds;
mod special;
mod tree_game;

pub use backjump::{
    backjump_value, conjecture_scan, describe_tree, is_backjumping, BackjumpSolution,
    ConjectureReport, TrialRecord,
};
pub use bounds::{marginal_odds_bound, reducible_upper_bound, correlated_bounds};
pub use special::{solve_csr_star, solve_osr3_total, solve_osr_independent_last, Osr3Solution};
pub use tree_game::{solve_tree_game, tree_game_value, TreeGameNode, TreeGameSolution};

use crate::error::{Error, Result};
use crate::game::GameInstance;
use crate::model::{to_pseudo_bayes_tree, ProbabilityModel, PseudoBayesTree};
use crate::poset::Variant;

/// The pseudo-Bayesian tree of an unordered OSR game.
pub(crate) fn unordered_tree(game: &GameInstance) -> Result<PseudoBayesTree> {
    if !game.poset().is_unordered() || game.variant() != Variant::Osr {
        return Err(Error::WrongStructure(
            "an unordered OSR game is required".into(),
        ));
    }
    match game.model() {
        ProbabilityModel::Tree(t) => Ok(t.clone()),
        other => to_pseudo_bayes_tree(other),
    }
}
