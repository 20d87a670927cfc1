use num_traits::Zero;

use crate::error::{Error, Result};
use crate::game::{certify, GameInstance, MixedStrategy, SolutionCertificate};
use crate::poset::{SearchSequence, Variant};
use crate::rational::{self, one, Rational};
use crate::subset::{ElementId, Subset};

use super::{csr, independent_marginals, odds_of, STRATEGY_LIMIT};

/// Value of the unordered OSR game on a set with product `p` and odds sum `o`.
fn unordered_value(p: &Rational, o: &Rational) -> Rational {
    if o.is_zero() {
        one()
    } else {
        (one() - p) / o
    }
}

fn permutations(items: &[ElementId]) -> Vec<Vec<ElementId>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

fn factorial_capped(n: usize) -> usize {
    (1..=n).fold(1usize, |acc, k| acc.saturating_mul(k))
}

/// Orders of one unordered stage: the first location with probability
/// proportional to its odds, the rest in uniformly random order.
fn stage_orders(stage: Subset, odds: &[Rational]) -> Vec<(Vec<ElementId>, Rational)> {
    let elems = stage.to_vec();
    if elems.len() == 1 {
        return vec![(elems, one())];
    }
    let total = rational::sum(elems.iter().map(|&x| &odds[x]));
    let tails = Rational::from_integer(factorial_capped(elems.len() - 1).into());
    let mut out = Vec::new();
    for (i, &first) in elems.iter().enumerate() {
        let w = if total.is_zero() {
            Rational::new(1.into(), elems.len().into())
        } else {
            &odds[first] / &total
        };
        if w.is_zero() {
            continue;
        }
        let mut rest = elems.clone();
        rest.remove(i);
        for tail in permutations(&rest) {
            let mut seq = vec![first];
            seq.extend(tail);
            out.push((seq, &w / &tails));
        }
    }
    out
}

/// Strategies for the game restricted to consecutive stages: Searcher picks
/// an entry stage and then plays each stage's unordered strategy in turn.
fn stage_strategy(
    game: &GameInstance,
    stages: &[Subset],
    p: &[Rational],
) -> Result<SolutionCertificate> {
    let odds = odds_of(p);
    let k = stages.len();
    let prod: Vec<Rational> = stages
        .iter()
        .map(|s| rational::product(s.iter().map(|x| &p[x])))
        .collect();
    let osum: Vec<Rational> = stages
        .iter()
        .map(|s| rational::sum(s.iter().map(|x| &odds[x])))
        .collect();
    let v: Vec<Rational> = (0..k)
        .map(|j| unordered_value(&prod[j], &osum[j]))
        .collect();

    let mut rows = 0usize;
    for j in 0..k {
        let count = stages[j..].iter().fold(1usize, |acc, s| {
            acc.saturating_mul(factorial_capped(s.len()))
        });
        rows = rows.saturating_add(count);
    }
    if rows > STRATEGY_LIMIT {
        return Err(Error::SizeLimit {
            elements: game.len(),
            limit: STRATEGY_LIMIT,
        });
    }

    let orders: Vec<Vec<(Vec<ElementId>, Rational)>> =
        stages.iter().map(|&s| stage_orders(s, &odds)).collect();
    let mut weights = Vec::new();
    for j in 0..k {
        let start = if j == 0 {
            v[0].recip()
        } else {
            v[j].recip() - &prod[j - 1] / &v[j - 1]
        };
        if start.is_zero() {
            continue;
        }
        let mut partial: Vec<(Vec<ElementId>, Rational)> = vec![(Vec::new(), start)];
        for stage_orders in &orders[j..] {
            let mut next = Vec::with_capacity(partial.len() * stage_orders.len());
            for (prefix, w) in &partial {
                for (order, u) in stage_orders {
                    let mut seq = prefix.clone();
                    seq.extend_from_slice(order);
                    next.push((seq, w * u));
                }
            }
            partial = next;
        }
        weights.extend(
            partial
                .into_iter()
                .map(|(s, w)| (SearchSequence::from_vec_unchecked(s), w)),
        );
    }
    let searcher = MixedStrategy::from_weights(weights)?;

    let last = stages[k - 1];
    let mut hider = Vec::with_capacity(game.len());
    for stage in &stages[..k - 1] {
        hider.extend(stage.iter().map(|x| (x, odds[x].clone())));
    }
    if osum[k - 1].is_zero() {
        let share = Rational::new(1.into(), last.len().into());
        hider.extend(last.iter().map(|x| (x, share.clone())));
    } else {
        let scale = one() - &prod[k - 1];
        hider.extend(last.iter().map(|x| (x, &odds[x] / &scale)));
    }
    let hider = MixedStrategy::from_weights(hider)?;

    let denom = rational::sum(&osum[..k - 1]) + v[k - 1].recip();
    certify(game, denom.recip(), searcher, hider)
}

/// Unordered locations. OSR: `(1 - Pr(X)) / O_X`, or 1 when every search
/// surely succeeds. CSR: `1 / (|X| + O_X)`.
pub fn solve_unordered(game: &GameInstance) -> Result<SolutionCertificate> {
    if !game.poset().is_unordered() {
        return Err(Error::WrongStructure("locations must be unordered".into()));
    }
    let p = independent_marginals(game)?;
    match game.variant() {
        Variant::Osr => stage_strategy(game, &[game.poset().all()], &p),
        Variant::Csr => {
            let inverse: Vec<(ElementId, Rational)> =
                p.iter().map(|q| q.recip()).enumerate().collect();
            let total = rational::sum(inverse.iter().map(|(_, w)| w));
            let searcher = MixedStrategy::from_weights(
                inverse
                    .iter()
                    .map(|(x, w)| (SearchSequence::from_vec_unchecked(vec![*x]), w.clone()))
                    .collect(),
            )?;
            let hider = MixedStrategy::from_weights(inverse)?;
            certify(game, total.recip(), searcher, hider)
        }
    }
}

/// A total order: value `1 / (1 + O_X)` for either variant.
pub fn solve_total_order(game: &GameInstance) -> Result<SolutionCertificate> {
    if !game.poset().is_total_order() {
        return Err(Error::WrongStructure(
            "locations must be totally ordered".into(),
        ));
    }
    let p = independent_marginals(game)?;
    let stages: Vec<Subset> = game
        .poset()
        .linear_extension()
        .into_iter()
        .map(Subset::singleton)
        .collect();
    stage_strategy(game, &stages, &p)
}

/// An ordinal sum of unordered stages. With `stages` absent they are
/// detected from the order.
pub fn solve_multistage(
    game: &GameInstance,
    stages: Option<&[Subset]>,
) -> Result<SolutionCertificate> {
    let poset = game.poset();
    let stages: Vec<Subset> = match stages {
        Some(s) => {
            if let Some(i) = s.iter().position(|st| st.is_empty()) {
                return Err(Error::EmptyStage(i));
            }
            let detected = poset.ordinal_stages().ok_or(Error::NotOrdinalSum)?;
            if detected != s {
                return Err(Error::NotOrdinalSum);
            }
            s.to_vec()
        }
        None => poset.ordinal_stages().ok_or(Error::NotOrdinalSum)?,
    };
    if stages.is_empty() {
        return Err(Error::EmptyStage(0));
    }
    let p = independent_marginals(game)?;
    match game.variant() {
        Variant::Osr => stage_strategy(game, &stages, &p),
        Variant::Csr => {
            let odds = odds_of(&p);
            // Maximize |X_k| + O_{<=k}; ties keep the earliest stage.
            let mut below = Rational::zero();
            let mut best: Option<(Rational, Subset)> = None;
            for stage in &stages {
                below += rational::sum(stage.iter().map(|x| &odds[x]));
                let objective = &below + Rational::from_integer(stage.len().into());
                if best.as_ref().is_none_or(|(b, _)| objective > *b) {
                    best = Some((objective, *stage));
                }
            }
            let (objective, antichain) = best.expect("at least one stage");
            let hider = csr::antichain_hider(poset, &p, antichain)?;
            let flow = csr::csr_flow_strategy(game)?;
            certify(game, objective.recip(), flow.searcher, hider)
        }
    }
}

/// The maxima formula together with whether its derivation applies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaximaSolution {
    /// `1 / (O_{X∖M} + 1/V_M)` where `V_M` is the unordered value of the maxima.
    pub value: Rational,
    /// Every non-maximal location lies below every maximal one.
    pub applicable: bool,
    /// Strategies from a linear extension of `X∖M` followed by `M`.
    pub certificate: SolutionCertificate,
}

impl MaximaSolution {
    pub fn certified(&self) -> bool {
        self.applicable && self.certificate.is_exact()
    }
}

/// OSR value from the set of maxima.
pub fn solve_osr_maxima(game: &GameInstance) -> Result<MaximaSolution> {
    if game.variant() != Variant::Osr {
        return Err(Error::WrongStructure(
            "the maxima formula is for the OSR game".into(),
        ));
    }
    let poset = game.poset();
    let p = independent_marginals(game)?;
    let maxima = poset.maxima();
    let mut stages: Vec<Subset> = poset
        .linear_extension()
        .into_iter()
        .filter(|&x| !maxima.contains(x))
        .map(Subset::singleton)
        .collect();
    stages.push(maxima);
    let certificate = stage_strategy(game, &stages, &p)?;
    Ok(MaximaSolution {
        value: certificate.value.clone(),
        applicable: poset.maxima_dominate(),
        certificate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::fixtures::{d, halves, independent, w};
    use crate::game::solve_oracle;
    use crate::poset::Poset;
    use crate::rational::{int, ratio};

    fn antichain(n: usize) -> Poset {
        let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
        Poset::antichain(&names).unwrap()
    }

    #[test]
    fn unordered_examples() {
        let g = independent(antichain(2), &[ratio(1, 2), ratio(1, 3)], Variant::Csr);
        let s = solve_unordered(&g).unwrap();
        assert_eq!(s.value, ratio(1, 5));
        assert_eq!(s.hider.as_vector(2), vec![ratio(2, 5), ratio(3, 5)]);
        assert!(s.is_exact());
        let s = solve_unordered(&halves(antichain(2), Variant::Osr)).unwrap();
        assert_eq!(s.value, ratio(3, 8));
        assert!(s.is_exact());
        let s = solve_unordered(&independent(
            antichain(3),
            &[int(1), int(1), int(1)],
            Variant::Osr,
        ))
        .unwrap();
        assert_eq!(s.value, int(1));
        assert!(s.is_exact());
        let g = independent(
            antichain(4),
            &[ratio(1, 2), ratio(2, 3), ratio(1, 5), int(1)],
            Variant::Osr,
        );
        let s = solve_unordered(&g).unwrap();
        assert_eq!(s.value, solve_oracle(&g).unwrap().value);
        assert!(s.is_exact());
    }

    #[test]
    fn total_order_examples() {
        let g = independent(
            Poset::chain(&["a", "b"]).unwrap(),
            &[ratio(1, 2), ratio(1, 3)],
            Variant::Osr,
        );
        let s = solve_total_order(&g).unwrap();
        assert_eq!(s.value, ratio(1, 4));
        assert_eq!(s.hider.as_vector(2), vec![ratio(1, 4), ratio(3, 4)]);
        assert_eq!(
            s.searcher
                .entries()
                .iter()
                .map(|(_, w)| w.clone())
                .collect::<Vec<_>>(),
            vec![ratio(1, 2), ratio(1, 2)]
        );
        assert!(s.is_exact());
        let s =
            solve_total_order(&halves(Poset::chain(&["a", "b"]).unwrap(), Variant::Csr)).unwrap();
        assert_eq!(s.value, ratio(1, 3));
        let s = solve_total_order(&independent(
            Poset::chain(&["a"]).unwrap(),
            &[ratio(2, 7)],
            Variant::Osr,
        ))
        .unwrap();
        assert_eq!(s.value, ratio(2, 7));
    }

    #[test]
    fn multistage_examples() {
        let s = solve_multistage(&halves(d(), Variant::Osr), None).unwrap();
        assert_eq!(s.value, ratio(1, 4));
        assert!(s.is_exact());
        let s = solve_multistage(&halves(d(), Variant::Csr), None).unwrap();
        assert_eq!(s.value, ratio(1, 4));
        assert!(s.is_exact());
        assert_eq!(
            solve_multistage(&halves(w(), Variant::Osr), None),
            Err(Error::NotOrdinalSum)
        );
        let g = halves(d(), Variant::Osr);
        assert_eq!(
            solve_multistage(&g, Some(&[Subset::EMPTY])),
            Err(Error::EmptyStage(0))
        );
    }

    #[test]
    fn maxima_examples() {
        let s = solve_osr_maxima(&halves(d(), Variant::Osr)).unwrap();
        assert_eq!(s.value, ratio(1, 4));
        assert!(s.certified());
        let s = solve_osr_maxima(&halves(w(), Variant::Osr)).unwrap();
        assert_eq!(s.value, ratio(3, 11));
        assert!(!s.applicable);
        assert!(!s.certified());
        let g = independent(
            antichain(3),
            &[ratio(1, 2), ratio(1, 3), ratio(3, 4)],
            Variant::Osr,
        );
        assert_eq!(
            solve_osr_maxima(&g).unwrap().value,
            solve_unordered(&g).unwrap().value
        );
    }

    #[test]
    fn sure_last_stage_uses_limit_form() {
        // {a} then {b} with Pr(b) = 1: the value is Pr(a).
        let g = independent(
            Poset::chain(&["a", "b"]).unwrap(),
            &[ratio(1, 2), int(1)],
            Variant::Osr,
        );
        let s = solve_multistage(&g, None).unwrap();
        assert_eq!(s.value, ratio(1, 2));
        assert_eq!(solve_oracle(&g).unwrap().value, ratio(1, 2));
        assert!(s.is_exact());
    }
}
