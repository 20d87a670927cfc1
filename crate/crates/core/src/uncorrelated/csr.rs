//! The CSR game on an arbitrary poset: the best maximal antichain gives the
//! value, and a dissipative min-flow on the Hasse diagram gives Searcher's
//! strategy.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::game::{
    certify, GameInstance, HiderMix, MixedStrategy, SearcherMix, SolutionCertificate,
};
use crate::lp;
use crate::poset::{Poset, SearchSequence, Variant};
use crate::rational::{self, one, Rational};
use crate::subset::{ElementId, Subset};

use super::{independent_marginals, odds_of};

/// `O_{A⁻} + |A|`, the reciprocal of the rescue probability Hider can enforce
/// by hiding in the downset of `a`.
pub fn antichain_objective(poset: &Poset, odds: &[Rational], a: Subset) -> Rational {
    let down = poset.downset(a);
    rational::sum(down.iter().map(|x| &odds[x])) + Rational::from_integer(a.len().into())
}

/// Hider mix for an antichain `a`: odds on the strict downset, inverse
/// probabilities on `a`, nothing elsewhere.
pub fn antichain_hider(poset: &Poset, p: &[Rational], a: Subset) -> Result<HiderMix> {
    let down = poset.downset(a);
    let weights = down
        .iter()
        .map(|x| {
            (
                x,
                if a.contains(x) {
                    p[x].recip()
                } else {
                    rational::odds(&p[x])
                },
            )
        })
        .collect();
    MixedStrategy::from_weights(weights)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsrSolution {
    pub value: Rational,
    pub antichain: Subset,
    pub objective: Rational,
    pub hider: HiderMix,
}

/// Value and Hider strategy from the maximal antichain maximizing
/// `O_{A⁻} + |A|` (the lexicographically least one on ties). Large posets go
/// through the flow LP and threshold rounding instead of enumeration.
pub fn csr_value_and_hider(game: &GameInstance) -> Result<CsrSolution> {
    let poset = game.poset();
    let p = independent_marginals(game)?;
    let odds = odds_of(&p);
    let (antichain, objective) = match poset.maximal_antichains() {
        Ok(all) => {
            let mut best: Option<(Subset, Rational)> = None;
            for a in all {
                let obj = antichain_objective(poset, &odds, a.members);
                if best.as_ref().is_none_or(|(_, b)| obj > *b) {
                    best = Some((a.members, obj));
                }
            }
            best.ok_or(Error::EmptyMatrix)?
        }
        Err(Error::SizeLimit { .. }) => {
            let lp = solve_flow_lp(game)?;
            let rounded = dual_rounding(game, &lp.g, &lp.h)?;
            let a = if rounded.maximal {
                rounded.antichain
            } else {
                repair(poset, &rounded)
            };
            let obj = antichain_objective(poset, &odds, a);
            if obj != lp.objective {
                return Err(Error::Internal(
                    "rounded antichain misses the LP optimum".into(),
                ));
            }
            (a, obj)
        }
        Err(e) => return Err(e),
    };
    let hider = antichain_hider(poset, &p, antichain)?;
    Ok(CsrSolution {
        value: objective.recip(),
        antichain,
        objective,
        hider,
    })
}

/// Turns a rounded, possibly non-maximal antichain into a maximal one whose
/// objective is at least as large.
fn repair(poset: &Poset, rounded: &Rounding) -> Subset {
    let covered = poset.downset(rounded.antichain.union(rounded.h_support));
    let mut a = poset.maxima_of(covered);
    for x in 0..poset.len() {
        if a.iter().all(|y| !poset.comparable(x, y)) && !a.contains(x) {
            a = a.with(x);
        }
    }
    a
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FlowNode {
    Source,
    Location(ElementId),
}

/// The min-flow LP and its dual.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowLp {
    /// Source edges to the minima, then Hasse covers.
    pub edges: Vec<(FlowNode, ElementId)>,
    pub flows: Vec<Rational>,
    pub g: Vec<Rational>,
    pub h: Vec<Rational>,
    /// Total flow out of the source; the reciprocal of the value.
    pub objective: Rational,
}

fn flow_edges(poset: &Poset) -> Vec<(FlowNode, ElementId)> {
    let mut edges: Vec<(FlowNode, ElementId)> = poset
        .minima()
        .iter()
        .map(|x| (FlowNode::Source, x))
        .collect();
    let mut covers = poset.covers().to_vec();
    covers.sort();
    edges.extend(covers.into_iter().map(|(v, x)| (FlowNode::Location(v), x)));
    edges
}

/// Solves the dual (one constraint per edge, variables `g`, `h` per node)
/// exactly; edge flows are its dual values.
pub fn solve_flow_lp(game: &GameInstance) -> Result<FlowLp> {
    let poset = game.poset();
    let n = poset.len();
    let odds = odds_of(&independent_marginals(game)?);
    let edges = flow_edges(poset);
    let mut c: Vec<Rational> = odds.iter().map(|o| o + one()).collect();
    c.extend(odds.iter().cloned());
    let mut a = Vec::with_capacity(edges.len());
    let mut b = Vec::with_capacity(edges.len());
    for &(tail, x) in &edges {
        let mut row = vec![Rational::zero(); 2 * n];
        row[x] = one();
        row[n + x] = one();
        match tail {
            FlowNode::Source => b.push(one()),
            FlowNode::Location(v) => {
                row[n + v] = -one();
                b.push(Rational::zero());
            }
        }
        a.push(row);
    }
    let sol = lp::maximize(&c, &a, &b)?;
    let h = sol.x[n..].to_vec();
    let mut g = sol.x;
    g.truncate(n);
    Ok(FlowLp {
        edges,
        flows: sol.duals,
        g,
        h,
        objective: sol.objective,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowStrategy {
    pub edges: Vec<(FlowNode, ElementId, Rational)>,
    pub total: Rational,
    pub searcher: SearcherMix,
}

/// Part of the flow that has followed one route. `amount` is flow units,
/// `mass` the share of Searcher's probability it stands for; searching `x`
/// scales `amount` by `Pr(x)` and leaves `mass` alone.
#[derive(Debug, Clone)]
struct Strand {
    searched: Vec<ElementId>,
    amount: Rational,
    mass: Rational,
}

impl Strand {
    fn take(&mut self, amount: &Rational) -> Strand {
        let mass = &self.mass * amount / &self.amount;
        self.amount -= amount;
        self.mass -= &mass;
        Strand {
            searched: self.searched.clone(),
            amount: amount.clone(),
            mass,
        }
    }
}

/// Moves `demand` units out of `pool`, front first.
fn pour(pool: &mut Vec<Strand>, demand: &Rational) -> Result<Vec<Strand>> {
    let mut out = Vec::new();
    let mut left = demand.clone();
    while left.is_positive() {
        let Some(front) = pool.first_mut() else {
            return Err(Error::InfeasibleFlow(
                "outflow exceeds what remains after searching".into(),
            ));
        };
        if front.amount <= left {
            left -= &front.amount;
            out.push(pool.remove(0));
        } else {
            out.push(front.take(&left));
            left = Rational::zero();
        }
    }
    Ok(out)
}

fn merge(strands: Vec<Strand>) -> Vec<Strand> {
    let mut by_route: BTreeMap<Vec<ElementId>, (Rational, Rational)> = BTreeMap::new();
    for s in strands {
        let e = by_route
            .entry(s.searched)
            .or_insert_with(|| (Rational::zero(), Rational::zero()));
        e.0 += s.amount;
        e.1 += s.mass;
    }
    by_route
        .into_iter()
        .filter(|(_, (a, _))| a.is_positive())
        .map(|(searched, (amount, mass))| Strand {
            searched,
            amount,
            mass,
        })
        .collect()
}

/// Searcher mix from the optimal min-flow. Flow is walked in topological
/// order; at each location exactly `1/Pr(x)` units search it, the rest pass
/// by, and whatever the outgoing edges do not carry ends its chain there.
pub fn csr_flow_strategy(game: &GameInstance) -> Result<FlowStrategy> {
    let poset = game.poset();
    let n = poset.len();
    let p = independent_marginals(game)?;
    let odds = odds_of(&p);
    let lp = solve_flow_lp(game)?;

    let mut arriving: Vec<Vec<Strand>> = vec![Vec::new(); n];
    let mut outgoing: Vec<Vec<(ElementId, Rational)>> = vec![Vec::new(); n];
    for ((tail, x), f) in lp.edges.iter().zip(&lp.flows) {
        match tail {
            FlowNode::Source => {
                if f.is_positive() {
                    arriving[*x].push(Strand {
                        searched: Vec::new(),
                        amount: f.clone(),
                        mass: f.clone(),
                    });
                }
            }
            FlowNode::Location(v) => outgoing[*v].push((*x, f.clone())),
        }
    }

    let mut chains: BTreeMap<Vec<ElementId>, Rational> = BTreeMap::new();
    for x in poset.linear_extension() {
        let mut pool = merge(std::mem::take(&mut arriving[x]));
        let inflow = rational::sum(pool.iter().map(|s| &s.amount));
        let need = p[x].recip();
        if inflow < need {
            return Err(Error::InfeasibleFlow(format!(
                "inflow {inflow} at #{x} is below {need}"
            )));
        }
        let mut searched = pour(&mut pool, &need)?;
        for s in searched.iter_mut() {
            s.searched.push(x);
            s.amount *= &p[x];
        }
        searched.append(&mut pool);
        let mut pool = searched;
        let outflow = rational::sum(outgoing[x].iter().map(|(_, f)| f));
        if &inflow - &outflow < odds[x] {
            return Err(Error::InfeasibleFlow(format!(
                "dissipation at #{x} is below its odds"
            )));
        }
        for (y, f) in &outgoing[x] {
            let moved = pour(&mut pool, f)?;
            arriving[*y].extend(moved);
        }
        for s in pool {
            if !s.searched.is_empty() && s.mass.is_positive() {
                *chains.entry(s.searched).or_insert_with(Rational::zero) += s.mass;
            }
        }
    }
    let searcher = MixedStrategy::from_weights(
        chains
            .into_iter()
            .map(|(c, m)| (SearchSequence::from_vec_unchecked(c), m))
            .collect(),
    )?;
    let edges = lp
        .edges
        .iter()
        .zip(lp.flows)
        .map(|((t, x), f)| (*t, *x, f))
        .collect();
    Ok(FlowStrategy {
        edges,
        total: lp.objective,
        searcher,
    })
}

/// Value, Hider strategy and flow-based Searcher strategy, certified.
pub fn solve_csr(game: &GameInstance) -> Result<SolutionCertificate> {
    if game.variant() != Variant::Csr {
        return Err(Error::WrongStructure(
            "the antichain solution is for the CSR game".into(),
        ));
    }
    let sol = csr_value_and_hider(game)?;
    let flow = csr_flow_strategy(game)?;
    if flow.total != sol.objective {
        return Err(Error::InfeasibleFlow(format!(
            "min-flow {} differs from {}",
            flow.total, sol.objective
        )));
    }
    certify(game, sol.value, flow.searcher, sol.hider)
}

/// Result of threshold rounding of a dual solution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rounding {
    /// `{x : ḡ_x = 1}` at the best threshold.
    pub antichain: Subset,
    /// `{x : h̄_x = 1}` at the best threshold.
    pub h_support: Subset,
    /// `O_{A⁻} + |A|` of the rounded antichain.
    pub objective: Rational,
    pub maximal: bool,
    pub threshold: Option<Rational>,
}

/// Rounds a feasible dual solution to an antichain. Every threshold where
/// the rounding changes is tried and the best antichain kept, so the
/// random threshold of the existence argument is not needed.
pub fn dual_rounding(game: &GameInstance, g: &[Rational], h: &[Rational]) -> Result<Rounding> {
    let poset = game.poset();
    let n = poset.len();
    let odds = odds_of(&independent_marginals(game)?);
    if g.len() != n || h.len() != n || g.iter().chain(h).any(|v| v.is_negative()) {
        return Err(Error::InfeasibleDual);
    }
    for x in 0..n {
        let gh = &g[x] + &h[x];
        if poset.minima().contains(x) && gh > one() {
            return Err(Error::InfeasibleDual);
        }
        if poset.lower_covers(x).any(|v| gh > h[v]) {
            return Err(Error::InfeasibleDual);
        }
    }
    let mut breakpoints: Vec<Rational> = (0..n)
        .flat_map(|x| [h[x].clone(), &g[x] + &h[x]])
        .filter(|t| t.is_positive() && *t <= one())
        .collect();
    breakpoints.sort();
    breakpoints.dedup();
    let mut best = Rounding {
        antichain: Subset::EMPTY,
        h_support: Subset::EMPTY,
        objective: Rational::zero(),
        maximal: false,
        threshold: None,
    };
    for t in breakpoints {
        let h_support: Subset = (0..n).filter(|&x| h[x] >= t).collect();
        let antichain: Subset = (0..n).filter(|&x| &g[x] + &h[x] >= t && t > h[x]).collect();
        let objective = antichain_objective(poset, &odds, antichain);
        if objective > best.objective {
            let maximal = is_maximal_antichain(poset, antichain);
            best = Rounding {
                antichain,
                h_support,
                objective,
                maximal,
                threshold: Some(t),
            };
        }
    }
    Ok(best)
}

fn is_maximal_antichain(poset: &Poset, a: Subset) -> bool {
    !a.is_empty()
        && poset.is_antichain(a)
        && (0..poset.len()).all(|x| a.contains(x) || a.iter().any(|y| poset.comparable(x, y)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::fixtures::{halves, independent, star};
    use crate::game::solve_oracle;
    use crate::rational::{int, ratio};

    fn star_game(center: Rational) -> GameInstance {
        // Elements sort as *, u1, u2.
        independent(star(), &[center, ratio(1, 2), ratio(1, 2)], Variant::Csr)
    }

    fn chain2() -> GameInstance {
        halves(Poset::chain(&["a", "b"]).unwrap(), Variant::Csr)
    }

    fn names(game: &GameInstance, s: &SearcherMix) -> Vec<(Vec<String>, Rational)> {
        s.entries()
            .iter()
            .map(|(q, w)| {
                (
                    q.iter()
                        .map(|&x| game.poset().name(x).to_string())
                        .collect(),
                    w.clone(),
                )
            })
            .collect()
    }

    #[test]
    fn value_and_hider_examples() {
        let s = csr_value_and_hider(&chain2()).unwrap();
        assert_eq!((s.value, s.antichain), (ratio(1, 3), Subset::singleton(1)));
        let s = csr_value_and_hider(&star_game(ratio(1, 4))).unwrap();
        assert_eq!((s.value, s.antichain), (ratio(1, 6), Subset::singleton(0)));
        let s = csr_value_and_hider(&star_game(ratio(3, 4))).unwrap();
        assert_eq!((s.value, s.antichain), (ratio(1, 4), Subset::pair(1, 2)));
    }

    #[test]
    fn flow_strategy_examples() {
        let g = star_game(ratio(1, 4));
        let f = csr_flow_strategy(&g).unwrap();
        assert_eq!(f.total, int(6));
        let rescue = crate::game::rescue_probabilities(g.model(), &f.searcher);
        assert!(rescue.iter().all(|r| *r >= ratio(1, 6)));
        let f = csr_flow_strategy(&chain2()).unwrap();
        assert_eq!(
            names(&chain2(), &f.searcher),
            vec![
                (vec!["a".to_string(), "b".to_string()], ratio(2, 3)),
                (vec!["b".to_string()], ratio(1, 3))
            ]
        );
        let single = independent(
            Poset::antichain(&["a"]).unwrap(),
            &[ratio(2, 5)],
            Variant::Csr,
        );
        let s = solve_csr(&single).unwrap();
        assert_eq!(s.value, ratio(2, 5));
        assert!(s.is_exact());
    }

    #[test]
    fn certified_against_oracle() {
        for center in [ratio(1, 4), ratio(1, 2), ratio(3, 4)] {
            let g = star_game(center);
            let s = solve_csr(&g).unwrap();
            assert!(s.is_exact(), "{s:?}");
            assert_eq!(s.value, solve_oracle(&g).unwrap().value);
        }
    }

    #[test]
    fn rounding_examples() {
        let g = chain2();
        let r = dual_rounding(&g, &[int(0), int(1)], &[int(1), int(0)]).unwrap();
        assert_eq!(
            (r.antichain, r.objective.clone(), r.maximal),
            (Subset::singleton(1), int(3), true)
        );
        let r = dual_rounding(&g, &[int(0), int(0)], &[int(0), int(0)]).unwrap();
        assert_eq!(
            (r.antichain, r.objective, r.maximal),
            (Subset::EMPTY, int(0), false)
        );
        assert_eq!(
            dual_rounding(&g, &[int(0), int(1)], &[int(0), int(0)]),
            Err(Error::InfeasibleDual)
        );
        let s = star_game(ratio(1, 4));
        let r = dual_rounding(&s, &[int(1), int(0), int(0)], &[int(0), int(1), int(1)]).unwrap();
        assert_eq!((r.antichain, r.objective), (Subset::singleton(0), int(6)));
    }

    #[test]
    fn rounding_optimal_dual_attains_optimum() {
        let g = star_game(ratio(3, 4));
        let lp = solve_flow_lp(&g).unwrap();
        let r = dual_rounding(&g, &lp.g, &lp.h).unwrap();
        assert_eq!(r.objective, lp.objective);
    }
}
