//! Search games on partially ordered sets of locations.
//!
//! A searcher explores locations subject to precedence constraints; each
//! search may fail and end the game. A hider picks one location. The payoff
//! is the probability that the searcher reaches and finds the hider.

pub mod correlated;
pub mod error;
pub mod game;
pub mod lp;
pub mod model;
pub mod poset;
pub mod rational;
pub mod simulate;
pub mod subset;
pub mod uncorrelated;

pub use error::{Error, Result};
pub use model::{IndependentModel, JointModel, ProbabilityModel, PseudoBayesTree, TreeNode};
pub use poset::{Poset, SearchSequence, Variant};
pub use rational::Rational;
pub use subset::{ElementId, Subset};
