//! Closed-form solutions for independent success probabilities.

mod bounds;
mod csr;
mod runs;
mod stages;

pub use bounds::{bounds, BoundsReport};
pub use csr::{
    antichain_objective, csr_flow_strategy, csr_value_and_hider, dual_rounding, solve_csr,
    solve_flow_lp, antichain_hider, CsrSolution, FlowLp, FlowNode, FlowStrategy, Rounding,
};
pub use runs::{run_reduction, triangular_matrix, RunReduction};
pub use stages::{
    solve_multistage, solve_osr_maxima, solve_total_order, solve_unordered, MaximaSolution,
};

use crate::error::{Error, Result};
use crate::game::GameInstance;
use crate::model::ProbabilityModel;
use crate::rational::{self, Rational};

/// Upper bound on the number of pure strategies a closed-form mix may list.
pub const STRATEGY_LIMIT: usize = 200_000;

pub(crate) fn independent_marginals(game: &GameInstance) -> Result<Vec<Rational>> {
    match game.model() {
        ProbabilityModel::Independent(m) => Ok(m.marginals().to_vec()),
        _ => Err(Error::WrongStructure(
            "an independent model is required".into(),
        )),
    }
}

pub(crate) fn odds_of(p: &[Rational]) -> Vec<Rational> {
    p.iter().map(rational::odds).collect()
}
