//! Game instances, payoffs, exact matrix-game solving and certificates.

use std::collections::HashMap;

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lp;
use crate::model::ProbabilityModel;
use crate::poset::{Poset, SearchSequence, Variant};
use crate::rational::{self, one, Rational};
use crate::subset::{ElementId, Subset};

/// Largest instance for the subset dynamic program behind best responses.
pub const BEST_RESPONSE_LIMIT: usize = 20;

/// A search game: locations, their success distribution and the rules of search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameInstance {
    poset: Poset,
    model: ProbabilityModel,
    variant: Variant,
}

impl GameInstance {
    /// Checks that the model covers exactly the poset's locations and is a
    /// genuine distribution.
    pub fn new(poset: Poset, model: ProbabilityModel, variant: Variant) -> Result<Self> {
        if poset.len() != model.len() {
            return Err(Error::ElementMismatch);
        }
        let report = model.validate();
        if !report.is_valid() {
            return Err(Error::InvalidModel(report.violations.join("; ")));
        }
        Ok(GameInstance {
            poset,
            model,
            variant,
        })
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn model(&self) -> &ProbabilityModel {
        &self.model
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poset.is_empty()
    }

    pub fn with_variant(&self, variant: Variant) -> GameInstance {
        GameInstance {
            variant,
            ..self.clone()
        }
    }

    /// Same model and variant on a different order over the same names.
    pub fn with_poset(&self, poset: Poset) -> Result<GameInstance> {
        if poset.names() != self.poset.names() {
            return Err(Error::ElementMismatch);
        }
        Ok(GameInstance {
            poset,
            ..self.clone()
        })
    }
}

/// A probability distribution over finitely many pure strategies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixedStrategy<T> {
    entries: Vec<(T, Rational)>,
}

pub type SearcherMix = MixedStrategy<SearchSequence>;
pub type HiderMix = MixedStrategy<ElementId>;

impl<T: Clone + PartialEq> MixedStrategy<T> {
    /// Weights must be nonnegative, sum to one and label distinct strategies.
    pub fn new(entries: Vec<(T, Rational)>) -> Result<Self> {
        if entries.iter().any(|(_, w)| w.is_negative()) {
            return Err(Error::Internal("negative strategy weight".into()));
        }
        if rational::sum(entries.iter().map(|(_, w)| w)) != one() {
            return Err(Error::Internal("strategy weights do not sum to one".into()));
        }
        for (i, (t, _)) in entries.iter().enumerate() {
            if entries[..i].iter().any(|(u, _)| u == t) {
                return Err(Error::Internal("repeated pure strategy".into()));
            }
        }
        Ok(MixedStrategy { entries })
    }

    /// Normalizes arbitrary nonnegative weights, merging repeats and
    /// dropping zero entries.
    pub fn from_weights(weights: Vec<(T, Rational)>) -> Result<Self> {
        let mut merged: Vec<(T, Rational)> = Vec::new();
        for (t, w) in weights {
            if w.is_negative() {
                return Err(Error::Internal("negative strategy weight".into()));
            }
            if w.is_zero() {
                continue;
            }
            match merged.iter_mut().find(|(u, _)| *u == t) {
                Some((_, acc)) => *acc += w,
                None => merged.push((t, w)),
            }
        }
        let total = rational::sum(merged.iter().map(|(_, w)| w));
        if total.is_zero() {
            return Err(Error::Internal("strategy has no positive weight".into()));
        }
        Ok(MixedStrategy {
            entries: merged.into_iter().map(|(t, w)| (t, w / &total)).collect(),
        })
    }

    pub fn pure(t: T) -> Self {
        MixedStrategy {
            entries: vec![(t, one())],
        }
    }

    pub fn entries(&self) -> &[(T, Rational)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn weight_of(&self, t: &T) -> Rational {
        self.entries
            .iter()
            .find(|(u, _)| u == t)
            .map(|(_, w)| w.clone())
            .unwrap_or_else(Rational::zero)
    }
}

impl HiderMix {
    /// Weight on each element, indexed by element.
    pub fn as_vector(&self, n: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); n];
        for (x, w) in &self.entries {
            v[*x] = w.clone();
        }
        v
    }
}

/// A strategy pair together with the best-response interval it certifies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionCertificate {
    pub value: Rational,
    pub searcher: SearcherMix,
    pub hider: HiderMix,
    /// What the searcher mix guarantees against every hideout.
    pub lower: Rational,
    /// What the best search achieves against the hider mix.
    pub upper: Rational,
    pub gap: Rational,
}

impl SolutionCertificate {
    /// Both strategies are optimal and the claimed value is the game value.
    pub fn is_exact(&self) -> bool {
        self.gap.is_zero() && self.lower == self.value
    }
}

/// `Pr` of the searched prefix up to the first visit of `h`; zero if `h` is
/// never searched.
pub fn payoff(game: &GameInstance, search: &[ElementId], h: ElementId) -> Result<Rational> {
    if h >= game.len() {
        return Err(Error::UnknownElement(format!("#{h}")));
    }
    if !game.poset.classify(search)?.admissible_for(game.variant) {
        return Err(Error::IllegalSearch);
    }
    Ok(payoff_unchecked(&game.model, search, h))
}

pub(crate) fn payoff_unchecked(
    model: &ProbabilityModel,
    search: &[ElementId],
    h: ElementId,
) -> Rational {
    match search.iter().position(|&x| x == h) {
        Some(k) => model.pr(Subset::from_elements(search[..=k].iter().copied())),
        None => Rational::zero(),
    }
}

/// Payoff of one search against every hideout.
pub(crate) fn payoff_row(model: &ProbabilityModel, search: &[ElementId]) -> Vec<Rational> {
    let mut row = vec![Rational::zero(); model.len()];
    let mut prefix = Subset::EMPTY;
    for &x in search {
        prefix = prefix.with(x);
        row[x] = model.pr(prefix);
    }
    row
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PayoffMatrix {
    pub rows: Vec<SearchSequence>,
    /// `entries[r][h]`: payoff of `rows[r]` against hideout `h`.
    pub entries: Vec<Vec<Rational>>,
}

/// Rows are the maximal admissible searches in lexicographic order.
pub fn payoff_matrix(game: &GameInstance) -> Result<PayoffMatrix> {
    payoff_matrix_with_limit(game, crate::poset::DEFAULT_SEARCH_LIMIT)
}

/// As [`payoff_matrix`] with a custom element limit for the enumeration.
pub fn payoff_matrix_with_limit(game: &GameInstance, limit: usize) -> Result<PayoffMatrix> {
    let rows = game
        .poset
        .enumerate_searches_with_limit(game.variant, true, limit)?;
    Ok(payoff_matrix_for(game, rows))
}

pub fn payoff_matrix_for(game: &GameInstance, rows: Vec<SearchSequence>) -> PayoffMatrix {
    let entries = rows
        .par_iter()
        .map(|s| payoff_row(&game.model, s))
        .collect();
    PayoffMatrix { rows, entries }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixSolution {
    pub value: Rational,
    pub row_mix: Vec<Rational>,
    pub col_mix: Vec<Rational>,
}

/// Exact solution of the zero-sum game where rows maximize.
pub fn solve_matrix_game(entries: &[Vec<Rational>]) -> Result<MatrixSolution> {
    let cols = entries.first().map_or(0, Vec::len);
    if entries.is_empty() || cols == 0 {
        return Err(Error::EmptyMatrix);
    }
    if entries.iter().any(|r| r.len() != cols) {
        return Err(Error::Internal("ragged payoff matrix".into()));
    }
    // The tableau has one row per constraint; use the orientation with fewer.
    if entries.len() > cols {
        let transposed: Vec<Vec<Rational>> = (0..cols)
            .map(|j| entries.iter().map(|r| -&r[j]).collect())
            .collect();
        let s = solve_oriented(&transposed)?;
        return Ok(MatrixSolution {
            value: -s.value,
            row_mix: s.col_mix,
            col_mix: s.row_mix,
        });
    }
    solve_oriented(entries)
}

fn solve_oriented(entries: &[Vec<Rational>]) -> Result<MatrixSolution> {
    let min = entries.iter().flatten().min().cloned().expect("nonempty");
    let shift = if min.is_positive() {
        Rational::zero()
    } else {
        one() - min
    };
    let a: Vec<Vec<Rational>> = entries
        .iter()
        .map(|r| r.iter().map(|v| v + &shift).collect())
        .collect();
    let cols = a[0].len();
    // Column player: max Σy  s.t.  A y <= 1; the duals give the row player.
    let sol = lp::maximize(&vec![one(); cols], &a, &vec![one(); a.len()])?;
    if !sol.objective.is_positive() {
        return Err(Error::Internal("matrix game LP has zero objective".into()));
    }
    let shifted_value = sol.objective.recip();
    let col_mix = sol.x.iter().map(|y| y * &shifted_value).collect();
    let row_mix = sol.duals.iter().map(|u| u * &shifted_value).collect();
    Ok(MatrixSolution {
        value: shifted_value - shift,
        row_mix,
        col_mix,
    })
}

/// Exact value and optimal strategies by linear programming over every
/// maximal search.
pub fn solve_oracle(game: &GameInstance) -> Result<SolutionCertificate> {
    solve_oracle_with_limit(game, crate::poset::DEFAULT_SEARCH_LIMIT)
}

pub fn solve_oracle_with_limit(game: &GameInstance, limit: usize) -> Result<SolutionCertificate> {
    solve_restricted(game, payoff_matrix_with_limit(game, limit)?)
}

/// Solves the game restricted to the given rows; the certificate measures
/// the searcher side against the full game.
pub fn solve_restricted(game: &GameInstance, matrix: PayoffMatrix) -> Result<SolutionCertificate> {
    let sol = solve_matrix_game(&matrix.entries)?;
    let searcher = MixedStrategy::from_weights(matrix.rows.into_iter().zip(sol.row_mix).collect())?;
    let hider = MixedStrategy::from_weights(sol.col_mix.into_iter().enumerate().collect())?;
    certify(game, sol.value, searcher, hider)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapReport {
    pub lower: Rational,
    pub upper: Rational,
    pub gap: Rational,
    /// A hideout attaining `lower`.
    pub worst_hideout: ElementId,
    /// A search attaining `upper`.
    pub best_search: Vec<ElementId>,
}

/// How far each strategy is from optimal: `lower` is the searcher's
/// guarantee, `upper` the best search against the hider.
pub fn best_response_gap(
    game: &GameInstance,
    searcher: &SearcherMix,
    hider: &HiderMix,
) -> Result<GapReport> {
    let n = game.len();
    for (s, _) in searcher.entries() {
        if !game.poset.classify(s)?.admissible_for(game.variant) {
            return Err(Error::IllegalSearch);
        }
    }
    if hider.entries().iter().any(|(h, _)| *h >= n) {
        return Err(Error::UnknownElement("hideout out of range".into()));
    }
    let rescue = rescue_probabilities(game.model(), searcher);
    let (worst_hideout, lower) = rescue
        .iter()
        .cloned()
        .enumerate()
        .min_by(|a, b| a.1.cmp(&b.1))
        .ok_or(Error::EmptyMatrix)?;
    let (upper, best_search) = best_search_against(game, &hider.as_vector(n))?;
    let gap = &upper - &lower;
    Ok(GapReport {
        lower,
        upper,
        gap,
        worst_hideout,
        best_search,
    })
}

/// Rescue probability of a searcher mix at every location.
pub fn rescue_probabilities(model: &ProbabilityModel, searcher: &SearcherMix) -> Vec<Rational> {
    let mut rescue = vec![Rational::zero(); model.len()];
    for (s, w) in searcher.entries() {
        for (acc, v) in rescue.iter_mut().zip(payoff_row(model, s)) {
            if !v.is_zero() {
                *acc += w * v;
            }
        }
    }
    rescue
}

/// Best pure search against hider weights `q`, by dynamic programming over
/// searched sets. Ties go to the smallest next element.
pub fn best_search_against(
    game: &GameInstance,
    q: &[Rational],
) -> Result<(Rational, Vec<ElementId>)> {
    if game.len() > BEST_RESPONSE_LIMIT {
        return Err(Error::SizeLimit {
            elements: game.len(),
            limit: BEST_RESPONSE_LIMIT,
        });
    }
    let mut memo: HashMap<Subset, (Rational, Option<ElementId>)> = HashMap::new();
    let value = best_from(game, q, Subset::EMPTY, None, &mut memo);
    let mut seq = Vec::new();
    let mut state = Subset::EMPTY;
    while let Some((_, Some(x))) = memo.get(&state) {
        seq.push(*x);
        state = state.with(*x);
    }
    Ok((value, seq))
}

fn best_from(
    game: &GameInstance,
    q: &[Rational],
    searched: Subset,
    last: Option<ElementId>,
    memo: &mut HashMap<Subset, (Rational, Option<ElementId>)>,
) -> Rational {
    if let Some((v, _)) = memo.get(&searched) {
        return v.clone();
    }
    let mut best = (Rational::zero(), None);
    for x in game.poset.extensions(game.variant, searched, last).iter() {
        let next = searched.with(x);
        let gain = if q[x].is_zero() {
            Rational::zero()
        } else {
            &q[x] * game.model.pr(next)
        };
        let total = gain + best_from(game, q, next, Some(x), memo);
        if best.1.is_none() || total > best.0 {
            best = (total, Some(x));
        }
    }
    memo.insert(searched, best.clone());
    best.0
}

/// Packages a claimed value with strategies and their measured gap.
pub fn certify(
    game: &GameInstance,
    value: Rational,
    searcher: SearcherMix,
    hider: HiderMix,
) -> Result<SolutionCertificate> {
    let report = best_response_gap(game, &searcher, &hider)?;
    Ok(SolutionCertificate {
        value,
        searcher,
        hider,
        lower: report.lower,
        upper: report.upper,
        gap: report.gap,
    })
}
