use num_traits::Zero;

use crate::error::Result;
use crate::game::GameInstance;
use crate::poset::Variant;
use crate::rational::{self, one, Rational};

use super::{independent_marginals, odds_of};

/// An interval known to contain the game value, with the reason for each end.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundsReport {
    pub lower: Rational,
    pub upper: Rational,
    pub lower_source: String,
    pub upper_source: String,
}

impl BoundsReport {
    pub fn contains(&self, v: &Rational) -> bool {
        self.lower <= *v && *v <= self.upper
    }
}

/// OSR: `[1/(1+O_X), (1-Pr(X))/O_X]`. CSR: `[1/(w+O_X), 1/(|M|+O_X)]`
/// with `w` the width and `M` the maxima.
pub fn bounds(game: &GameInstance) -> Result<BoundsReport> {
    let p = independent_marginals(game)?;
    let o = rational::sum(&odds_of(&p));
    let n_plus = |k: usize| (Rational::from_integer(k.into()) + &o).recip();
    Ok(match game.variant() {
        Variant::Osr => {
            let pr_all = rational::product(&p);
            let upper = if o.is_zero() {
                one()
            } else {
                (one() - pr_all) / &o
            };
            BoundsReport {
                lower: n_plus(1),
                upper,
                lower_source: "any total-order extension".into(),
                upper_source: "unordered relaxation".into(),
            }
        }
        Variant::Csr => {
            let poset = game.poset();
            BoundsReport {
                lower: n_plus(poset.width()),
                upper: n_plus(poset.maxima().len()),
                lower_source: format!("chain cover of width {}", poset.width()),
                upper_source: format!("hider on {} maxima", poset.maxima().len()),
            }
        }
    })
}
