//! Closed forms for small correlated structures.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::game::{
    certify, payoff_matrix_for, solve_restricted, GameInstance, MixedStrategy, SolutionCertificate,
};
use crate::model::correlation_class;
use crate::poset::{SearchSequence, Variant};
use crate::rational::{self, one, Rational};
use crate::subset::{ElementId, Subset};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Osr3Solution {
    /// `Pr(a | not b, c) / Pr(a | b)`.
    pub factor: Rational,
    /// Rows `[a,b,c]`, `[a,c]`, `[b,c]`, `[c]` numbered from one. The
    /// factor picks which three rows may be mixed; a row can still drop
    /// out, as `[c]` does when `Pr(c)` is large.
    pub predicted_support: Vec<usize>,
    pub lp_support: Vec<usize>,
    pub certificate: SolutionCertificate,
}

impl Osr3Solution {
    pub fn support_matches(&self) -> bool {
        self.predicted_support == self.lp_support
    }

    pub fn support_within_prediction(&self) -> bool {
        self.lp_support
            .iter()
            .all(|r| self.predicted_support.contains(r))
    }
}

/// OSR on a three-element chain under any model.
pub fn solve_osr3_total(game: &GameInstance) -> Result<Osr3Solution> {
    let poset = game.poset();
    if poset.len() != 3 || !poset.is_total_order() || game.variant() != Variant::Osr {
        return Err(Error::WrongStructure(
            "an OSR game on a three-element chain is required".into(),
        ));
    }
    let [a, b, c]: [ElementId; 3] = poset.linear_extension().try_into().expect("three elements");
    let m = game.model();
    let pr = |xs: &[ElementId]| m.pr(Subset::from_elements(xs.iter().copied()));
    let not_b_c = pr(&[c]) - pr(&[b, c]);
    if not_b_c.is_zero() || pr(&[b]).is_zero() || pr(&[a, b]).is_zero() {
        return Err(Error::ZeroCondition);
    }
    let given_not_b = (pr(&[a, c]) - pr(&[a, b, c])) / not_b_c;
    let factor = given_not_b / (pr(&[a, b]) / pr(&[b]));
    let predicted_support = if factor > one() {
        vec![2, 3, 4]
    } else {
        vec![1, 3, 4]
    };

    let rows: Vec<SearchSequence> = [vec![a, b, c], vec![a, c], vec![b, c], vec![c]]
        .into_iter()
        .map(SearchSequence::from_vec_unchecked)
        .collect();
    let certificate = solve_restricted(game, payoff_matrix_for(game, rows.clone()))?;
    let lp_support = (0..rows.len())
        .filter(|&i| certificate.searcher.weight_of(&rows[i]).is_positive())
        .map(|i| i + 1)
        .collect();
    Ok(Osr3Solution {
        factor,
        predicted_support,
        lp_support,
        certificate,
    })
}

/// CSR on a star whose center is independent of every leaf.
pub fn solve_csr_star(game: &GameInstance) -> Result<SolutionCertificate> {
    let poset = game.poset();
    if game.variant() != Variant::Csr {
        return Err(Error::WrongStructure("the star solution is for CSR".into()));
    }
    let center = match poset.maxima().to_vec()[..] {
        [c] => c,
        _ => {
            return Err(Error::WrongStructure(
                "a star has exactly one maximum".into(),
            ))
        }
    };
    let relations = poset.relations();
    if relations.len() + 1 != poset.len() || relations.iter().any(|&(_, hi)| hi != center) {
        return Err(Error::WrongStructure(
            "every other element must lie directly below the center".into(),
        ));
    }
    let m = game.model();
    let leaves: Vec<ElementId> = (0..poset.len()).filter(|&x| x != center).collect();
    let pc = m.marginal(center);
    if leaves
        .iter()
        .any(|&u| m.pr(Subset::pair(u, center)) != m.marginal(u) * &pc)
    {
        return Err(Error::NotIndependentCenter);
    }
    if leaves.iter().any(|&u| m.marginal(u).is_zero()) || pc.is_zero() {
        return Err(Error::InvalidModel(
            "star locations need positive probability".into(),
        ));
    }
    let k = Rational::from_integer(leaves.len().into());
    let mut searcher: Vec<(SearchSequence, Rational)> = leaves
        .iter()
        .map(|&u| {
            (
                SearchSequence::from_vec_unchecked(vec![u, center]),
                m.marginal(u).recip(),
            )
        })
        .collect();
    let (value, hider) = if &pc * &k > one() {
        let o_u = m.odds_sum(Subset::from_elements(leaves.iter().copied()));
        let hider = leaves.iter().map(|&u| (u, m.marginal(u).recip())).collect();
        ((o_u + &k).recip(), hider)
    } else {
        searcher.push((
            SearchSequence::from_vec_unchecked(vec![center]),
            pc.recip() - &k,
        ));
        let mut hider: Vec<(ElementId, Rational)> =
            leaves.iter().map(|&u| (u, m.odds(u))).collect();
        hider.push((center, pc.recip()));
        ((one() + m.odds_sum(m.all())).recip(), hider)
    };
    certify(
        game,
        value,
        MixedStrategy::from_weights(searcher)?,
        MixedStrategy::from_weights(hider)?,
    )
}

/// OSR on a total order whose last location is independent of the rest.
pub fn solve_osr_independent_last(game: &GameInstance) -> Result<SolutionCertificate> {
    let poset = game.poset();
    if !poset.is_total_order() || game.variant() != Variant::Osr || poset.is_empty() {
        return Err(Error::WrongStructure(
            "an OSR game on a nonempty chain is required".into(),
        ));
    }
    let order = poset.linear_extension();
    let n = order.len();
    let last = order[n - 1];
    let m = game.model();
    let pn = m.marginal(last);
    let rest = m.all().without(last);
    let mut failures = Vec::new();
    if let Some(a) = rest
        .nonempty_subsets()
        .find(|&a| m.pr(a.with(last)) != m.pr(a) * &pn)
    {
        let names: Vec<&str> = a.iter().map(|x| poset.name(x)).collect();
        failures.push(format!(
            "`{}` is not independent of {{{}}}",
            poset.name(last),
            names.join(", ")
        ));
    }
    let class = correlation_class(m)?;
    if !class.is_negative() {
        failures.push(format!("correlation is {class}, not negative"));
    }
    if &pn * Rational::from_integer((n - 1).into()) > one() {
        failures.push(format!(
            "Pr(`{}`) = {} exceeds 1/{}",
            poset.name(last),
            pn,
            n - 1
        ));
    }
    if order.iter().any(|&x| m.marginal(x).is_zero()) {
        failures.push("some location has probability zero".into());
    }
    if !failures.is_empty() {
        return Err(Error::PreconditionViolated(failures));
    }
    let mut searcher: Vec<(SearchSequence, Rational)> = order[..n - 1]
        .iter()
        .map(|&j| {
            (
                SearchSequence::from_vec_unchecked(vec![j, last]),
                m.marginal(j).recip(),
            )
        })
        .collect();
    searcher.push((
        SearchSequence::from_vec_unchecked(vec![last]),
        pn.recip() - Rational::from_integer((n - 1).into()),
    ));
    let mut hider: Vec<(ElementId, Rational)> =
        order[..n - 1].iter().map(|&j| (j, m.odds(j))).collect();
    hider.push((last, pn.recip()));
    let value =
        (one() + rational::sum(&order.iter().map(|&x| m.odds(x)).collect::<Vec<_>>())).recip();
    certify(
        game,
        value,
        MixedStrategy::from_weights(searcher)?,
        MixedStrategy::from_weights(hider)?,
    )
}
