use num_traits::Signed;

use crate::error::{Error, Result};
use crate::rational::{one, Rational};
use crate::subset::Subset;

/// Independent success indicators with marginals in `(0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndependentModel {
    pr: Vec<Rational>,
}

impl IndependentModel {
    pub fn new(pr: Vec<Rational>) -> Result<Self> {
        for p in &pr {
            if !p.is_positive() || *p > one() {
                return Err(Error::InvalidModel(format!(
                    "marginal {p} is outside (0, 1]"
                )));
            }
        }
        Ok(IndependentModel { pr })
    }

    pub fn len(&self) -> usize {
        self.pr.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pr.is_empty()
    }

    pub fn marginals(&self) -> &[Rational] {
        &self.pr
    }

    pub fn pr(&self, set: Subset) -> Rational {
        set.iter().fold(one(), |acc, x| acc * &self.pr[x])
    }
}
