use crate::error::{Error, Result};
use crate::rational::{one, Rational};
use crate::subset::{ElementId, Subset};

use super::MASS_LIMIT;

/// Explicit table of `Pr(S)` for all `2^n` subsets, indexed by mask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointModel {
    n: usize,
    table: Vec<Rational>,
}

impl JointModel {
    pub fn new(n: usize, table: Vec<Rational>) -> Result<Self> {
        if n > MASS_LIMIT {
            return Err(Error::SizeLimit {
                elements: n,
                limit: MASS_LIMIT,
            });
        }
        if table.len() != 1 << n {
            return Err(Error::InvalidModel(format!(
                "joint table has {} entries, expected {}",
                table.len(),
                1usize << n
            )));
        }
        if table[0] != one() {
            return Err(Error::InvalidModel(format!(
                "Pr(∅) = {} is not one",
                table[0]
            )));
        }
        Ok(JointModel { n, table })
    }

    /// Builds a table from `(subset, probability)` pairs; every nonempty
    /// subset must be listed exactly once.
    pub fn from_entries(n: usize, entries: &[(&[ElementId], Rational)]) -> Result<Self> {
        if n > MASS_LIMIT {
            return Err(Error::SizeLimit {
                elements: n,
                limit: MASS_LIMIT,
            });
        }
        let mut table: Vec<Option<Rational>> = vec![None; 1 << n];
        table[0] = Some(one());
        for (set, p) in entries {
            if set.iter().any(|&x| x >= n) {
                return Err(Error::UnknownElement(format!("{set:?}")));
            }
            let mask = Subset::from_elements(set.iter().copied()).0 as usize;
            if mask != 0 && table[mask].is_some() {
                return Err(Error::InvalidModel(format!("subset {set:?} listed twice")));
            }
            table[mask] = Some(p.clone());
        }
        let table = table
            .into_iter()
            .enumerate()
            .map(|(mask, p)| {
                p.ok_or_else(|| {
                    Error::InvalidModel(format!("missing subset {:?}", Subset(mask as u64)))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        JointModel::new(n, table)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn pr(&self, set: Subset) -> Rational {
        self.table[set.0 as usize].clone()
    }

    pub fn table(&self) -> &[Rational] {
        &self.table
    }
}
