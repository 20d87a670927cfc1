use thiserror::Error;

use crate::subset::Subset;

pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while building or solving a game.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("relation is not a partial order: cycle through `{0}`")]
    Cycle(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("posets have different element sets")]
    ElementMismatch,
    #[error("instance has {elements} elements, limit is {limit}")]
    SizeLimit { elements: usize, limit: usize },
    #[error("invalid probability model: {0}")]
    InvalidModel(String),
    #[error("conditioning event has probability zero")]
    ZeroCondition,
    #[error("blocks are not co-independent")]
    NotCoindependent,
    #[error("subset {0:?} admits no co-independent split")]
    NotReducible(Subset),
    #[error("illegal search for this game variant")]
    IllegalSearch,
    #[error("payoff matrix is empty")]
    EmptyMatrix,
    #[error("stage {0} is empty")]
    EmptyStage(usize),
    #[error("poset is not the ordinal sum of the given stages")]
    NotOrdinalSum,
    #[error("tree weight {0} exceeds one")]
    WeightTooLarge(String),
    #[error("tree weight {0} is below one")]
    WeightTooSmall(String),
    #[error("correlation class {0} does not support this bound")]
    WrongCorrelationClass(String),
    #[error("center of the star is not independent of its leaves")]
    NotIndependentCenter,
    #[error("preconditions violated: {}", .0.join("; "))]
    PreconditionViolated(Vec<String>),
    #[error("structure mismatch: {0}")]
    WrongStructure(String),
    #[error("dual solution is infeasible")]
    InfeasibleDual,
    #[error("flow problem is infeasible: {0}")]
    InfeasibleFlow(String),
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("internal inconsistency: {0}")]
    Internal(String),
}
