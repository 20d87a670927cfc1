//! Joint distributions of the success indicators.
//!
//! A model answers `pr(S)`: the probability that every location in `S` is
//! searched successfully. Three representations are supported: independent
//! marginals, a full table over all subsets, and a pseudo-Bayesian tree.

mod independent;
mod joint;
mod structure;
mod tree;

pub use independent::IndependentModel;
pub use joint::JointModel;
pub use structure::{
    bayes_factor, completely_reduce, correlation_class, is_coindependent, is_cond_independent,
    to_pseudo_bayes_tree, CorrelationClass, Reduction, DEFAULT_MODEL_LIMIT,
};
pub use tree::{PseudoBayesTree, TreeNode, TreeNodeKind};

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, one, Rational};
use crate::subset::{ElementId, Subset};

/// Largest model for which pattern masses (2^n of them) are materialized.
pub const MASS_LIMIT: usize = 20;

/// A nonnegative expected value per location, for general random variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueModel {
    e: Vec<Rational>,
}

impl ValueModel {
    pub fn new(e: Vec<Rational>) -> Result<Self> {
        if let Some(bad) = e.iter().find(|v| v.is_negative()) {
            return Err(Error::InvalidModel(format!(
                "negative expected value {bad}"
            )));
        }
        Ok(ValueModel { e })
    }

    pub fn values(&self) -> &[Rational] {
        &self.e
    }

    pub fn len(&self) -> usize {
        self.e.len()
    }

    pub fn is_empty(&self) -> bool {
        self.e.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProbabilityModel {
    Independent(IndependentModel),
    Joint(JointModel),
    Tree(PseudoBayesTree),
}

impl From<IndependentModel> for ProbabilityModel {
    fn from(m: IndependentModel) -> Self {
        ProbabilityModel::Independent(m)
    }
}

impl From<JointModel> for ProbabilityModel {
    fn from(m: JointModel) -> Self {
        ProbabilityModel::Joint(m)
    }
}

impl From<PseudoBayesTree> for ProbabilityModel {
    fn from(m: PseudoBayesTree) -> Self {
        ProbabilityModel::Tree(m)
    }
}

/// Outcome of [`ProbabilityModel::validate`]: empty when the model is valid.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, msg: String) {
        self.violations.push(msg);
    }
}

impl ProbabilityModel {
    pub fn len(&self) -> usize {
        match self {
            ProbabilityModel::Independent(m) => m.len(),
            ProbabilityModel::Joint(m) => m.len(),
            ProbabilityModel::Tree(m) => m.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn all(&self) -> Subset {
        Subset::full(self.len())
    }

    /// Probability that every location in `set` succeeds; `pr(∅) = 1`.
    pub fn pr(&self, set: Subset) -> Rational {
        debug_assert!(set.is_subset_of(self.all()));
        if set.is_empty() {
            return one();
        }
        match self {
            ProbabilityModel::Independent(m) => m.pr(set),
            ProbabilityModel::Joint(m) => m.pr(set),
            ProbabilityModel::Tree(m) => m.pr(set),
        }
    }

    /// Like [`pr`](Self::pr) but rejects elements outside the model.
    pub fn pr_checked(&self, set: Subset) -> Result<Rational> {
        if !set.is_subset_of(self.all()) {
            let bad = set.difference(self.all()).first().unwrap_or(0);
            return Err(Error::UnknownElement(format!("#{bad}")));
        }
        Ok(self.pr(set))
    }

    pub fn marginal(&self, x: ElementId) -> Rational {
        self.pr(Subset::singleton(x))
    }

    pub fn marginals(&self) -> Vec<Rational> {
        (0..self.len()).map(|x| self.marginal(x)).collect()
    }

    /// `Pr(S | T) = Pr(S ∪ T) / Pr(T)`.
    pub fn conditional_pr(&self, set: Subset, given: Subset) -> Result<Rational> {
        let denom = self.pr_checked(given)?;
        if denom.is_zero() {
            return Err(Error::ZeroCondition);
        }
        Ok(self.pr_checked(set.union(given))? / denom)
    }

    /// Failure odds `(1 - Pr(x)) / Pr(x)` of one location.
    pub fn odds(&self, x: ElementId) -> Rational {
        rational::odds(&self.marginal(x))
    }

    /// Sum of marginal failure odds over `set`.
    pub fn odds_sum(&self, set: Subset) -> Rational {
        set.iter()
            .map(|x| self.odds(x))
            .fold(Rational::zero(), |a, b| a + b)
    }

    /// Full subset table, indexed by mask.
    pub fn table(&self) -> Result<Vec<Rational>> {
        if self.len() > MASS_LIMIT {
            return Err(Error::SizeLimit {
                elements: self.len(),
                limit: MASS_LIMIT,
            });
        }
        Ok(self.all().subsets().map(|s| self.pr(s)).collect())
    }

    /// Probability of each exact success pattern: entry `T` is the
    /// probability that precisely the locations in `T` succeed.
    pub fn pattern_masses(&self) -> Result<Vec<Rational>> {
        let mut mass = self.table()?;
        let n = self.len();
        // Superset Möbius inversion: mass(T) = Σ_{U ⊇ T} (-1)^{|U∖T|} Pr(U).
        for bit in 0..n {
            let b = 1usize << bit;
            for t in 0..mass.len() {
                if t & b == 0 {
                    let hi = mass[t | b].clone();
                    mass[t] -= hi;
                }
            }
        }
        Ok(mass)
    }

    /// Lists violated constraints; never fails.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let n = self.len();
        for x in 0..n {
            let p = self.marginal(x);
            if !p.is_positive() {
                report.push(format!("Pr(#{x}) = {p} is not positive"));
            }
            if p > one() {
                report.push(format!("Pr(#{x}) = {p} exceeds one"));
            }
        }
        match self {
            ProbabilityModel::Independent(_) => {}
            ProbabilityModel::Joint(m) => {
                if m.pr(Subset::EMPTY) != one() {
                    report.push(format!("Pr(∅) = {} is not one", m.pr(Subset::EMPTY)));
                }
            }
            ProbabilityModel::Tree(t) => t.check_weights(&mut report.violations),
        }
        if matches!(self, ProbabilityModel::Independent(_)) {
            return report;
        }
        if n > MASS_LIMIT {
            report.push(format!(
                "model has {n} elements; pattern masses limited to {MASS_LIMIT}"
            ));
            return report;
        }
        let all = self.all();
        for s in all.subsets() {
            for x in all.difference(s).iter() {
                let (ps, pt) = (self.pr(s), self.pr(s.with(x)));
                if pt > ps {
                    report.push(format!(
                        "not monotone: Pr({:?}) = {pt} > Pr({s:?}) = {ps}",
                        s.with(x)
                    ));
                }
            }
        }
        if let Ok(masses) = self.pattern_masses() {
            for (t, m) in masses.iter().enumerate() {
                if m.is_negative() {
                    report.push(format!(
                        "pattern {:?} has negative mass {m}",
                        Subset(t as u64)
                    ));
                }
            }
        }
        report
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_valid()
    }

    /// Copies the model into an explicit subset table.
    pub fn to_joint(&self) -> Result<JointModel> {
        JointModel::new(self.len(), self.table()?)
    }
}
