//! Finite posets and the order-theoretic queries the games need.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::Deref;

use crate::error::{Error, Result};
use crate::subset::{ElementId, Subset, MAX_ELEMENTS};

/// Default element bound for search enumeration.
pub const DEFAULT_SEARCH_LIMIT: usize = 10;
/// Default element bound for maximal-antichain enumeration.
pub const DEFAULT_ANTICHAIN_LIMIT: usize = 20;

/// Which searches Searcher may play.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    /// Order-reflecting searches: never search below something already searched.
    Osr,
    /// Chains: every search step goes strictly upward.
    Csr,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Osr => "osr",
            Variant::Csr => "csr",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SequenceClass {
    Chain,
    OrderReflecting,
    Invalid,
}

impl SequenceClass {
    pub fn admissible_for(self, variant: Variant) -> bool {
        match variant {
            Variant::Osr => self != SequenceClass::Invalid,
            Variant::Csr => self == SequenceClass::Chain,
        }
    }
}

/// An ordered list of distinct locations.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SearchSequence(Vec<ElementId>);

impl SearchSequence {
    /// Checks for duplicates and out-of-range indices.
    pub fn new(poset: &Poset, seq: Vec<ElementId>) -> Result<Self> {
        let mut seen = Subset::EMPTY;
        for &x in &seq {
            if x >= poset.len() {
                return Err(Error::UnknownElement(format!("#{x}")));
            }
            if seen.contains(x) {
                return Err(Error::DuplicateElement(poset.name(x).to_string()));
            }
            seen = seen.with(x);
        }
        Ok(SearchSequence(seq))
    }

    pub(crate) fn from_vec_unchecked(seq: Vec<ElementId>) -> Self {
        SearchSequence(seq)
    }

    pub fn as_slice(&self) -> &[ElementId] {
        &self.0
    }

    pub fn members(&self) -> Subset {
        Subset::from_elements(self.0.iter().copied())
    }

    pub fn into_vec(self) -> Vec<ElementId> {
        self.0
    }
}

impl Deref for SearchSequence {
    type Target = [ElementId];

    fn deref(&self) -> &[ElementId] {
        &self.0
    }
}

/// A maximal antichain together with its downset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Antichain {
    pub members: Subset,
    pub downset: Subset,
}

/// A finite poset stored as its Hasse diagram plus the strict order relation.
///
/// Elements are kept sorted by name; an [`ElementId`] is the position in
/// that order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poset {
    names: Vec<String>,
    covers: Vec<(ElementId, ElementId)>,
    below: Vec<Subset>,
    above: Vec<Subset>,
}

impl Poset {
    /// Validates a relation given by element names and cover pairs `(x, y)`
    /// meaning `x < y`. Redundant pairs implied by transitivity are dropped
    /// with a warning; cycles are rejected.
    pub fn new<S: AsRef<str>>(elements: &[S], covers: &[(S, S)]) -> Result<Poset> {
        let mut names: Vec<String> = elements.iter().map(|s| s.as_ref().to_string()).collect();
        names.sort();
        for pair in names.windows(2) {
            if pair[0] == pair[1] {
                return Err(Error::DuplicateElement(pair[0].clone()));
            }
        }
        if names.len() > MAX_ELEMENTS {
            return Err(Error::SizeLimit {
                elements: names.len(),
                limit: MAX_ELEMENTS,
            });
        }
        let index: BTreeMap<&str, ElementId> = names
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        let lookup = |s: &S| {
            index
                .get(s.as_ref())
                .copied()
                .ok_or_else(|| Error::UnknownElement(s.as_ref().to_string()))
        };
        let mut pairs = BTreeSet::new();
        for (x, y) in covers {
            pairs.insert((lookup(x)?, lookup(y)?));
        }
        Poset::from_relation(names, pairs.into_iter().collect())
    }

    /// Builds a poset from already indexed pairs; `names` must be sorted.
    fn from_relation(names: Vec<String>, pairs: Vec<(ElementId, ElementId)>) -> Result<Poset> {
        let n = names.len();
        let mut succ = vec![Subset::EMPTY; n];
        for &(x, y) in &pairs {
            if x == y {
                return Err(Error::Cycle(names[x].clone()));
            }
            succ[x] = succ[x].with(y);
        }
        // Transitive closure by repeated propagation in reverse discovery order.
        let mut above = succ.clone();
        loop {
            let mut changed = false;
            for x in 0..n {
                let mut reach = above[x];
                for y in above[x].iter() {
                    reach = reach.union(above[y]);
                }
                if reach != above[x] {
                    above[x] = reach;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        if let Some(x) = (0..n).find(|&x| above[x].contains(x)) {
            return Err(Error::Cycle(names[x].clone()));
        }
        let mut below = vec![Subset::EMPTY; n];
        for (x, up) in above.iter().enumerate() {
            for y in up.iter() {
                below[y] = below[y].with(x);
            }
        }
        let mut covers = Vec::new();
        for (x, y) in pairs {
            if above[x].intersection(below[y]).is_empty() {
                covers.push((x, y));
            } else {
                log::warn!("dropping redundant cover {} < {}", names[x], names[y]);
            }
        }
        Ok(Poset {
            names,
            covers,
            below,
            above,
        })
    }

    /// The unordered poset on the given names.
    pub fn antichain<S: AsRef<str>>(elements: &[S]) -> Result<Poset> {
        Poset::new::<S>(elements, &[])
    }

    /// The total order `elements[0] < elements[1] < ...`.
    pub fn chain<S: AsRef<str>>(elements: &[S]) -> Result<Poset> {
        let covers: Vec<(&str, &str)> = elements
            .windows(2)
            .map(|w| (w[0].as_ref(), w[1].as_ref()))
            .collect();
        let names: Vec<&str> = elements.iter().map(|s| s.as_ref()).collect();
        Poset::new(&names, &covers)
    }

    /// Stacks unordered stages: everything in an earlier stage lies below
    /// everything in a later one.
    pub fn ordinal_sum<S: AsRef<str>>(stages: &[Vec<S>]) -> Result<Poset> {
        let names: Vec<&str> = stages.iter().flatten().map(|s| s.as_ref()).collect();
        let mut covers = Vec::new();
        for w in stages.windows(2) {
            for x in &w[0] {
                for y in &w[1] {
                    covers.push((x.as_ref(), y.as_ref()));
                }
            }
        }
        Poset::new(&names, &covers)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, x: ElementId) -> &str {
        &self.names[x]
    }

    pub fn index_of(&self, name: &str) -> Result<ElementId> {
        self.names
            .binary_search_by(|s| s.as_str().cmp(name))
            .map_err(|_| Error::UnknownElement(name.to_string()))
    }

    pub fn indices_of<S: AsRef<str>>(&self, names: &[S]) -> Result<Subset> {
        names.iter().map(|s| self.index_of(s.as_ref())).collect()
    }

    pub fn all(&self) -> Subset {
        Subset::full(self.len())
    }

    /// Cover pairs of the Hasse diagram, sorted.
    pub fn covers(&self) -> &[(ElementId, ElementId)] {
        &self.covers
    }

    pub fn less(&self, x: ElementId, y: ElementId) -> bool {
        self.above[x].contains(y)
    }

    pub fn comparable(&self, x: ElementId, y: ElementId) -> bool {
        x == y || self.less(x, y) || self.less(y, x)
    }

    /// Everything strictly below `x`.
    pub fn below(&self, x: ElementId) -> Subset {
        self.below[x]
    }

    /// Everything strictly above `x`.
    pub fn above(&self, x: ElementId) -> Subset {
        self.above[x]
    }

    /// `{x : x <= s for some s in set}`.
    pub fn downset(&self, set: Subset) -> Subset {
        set.iter().fold(set, |acc, s| acc.union(self.below[s]))
    }

    pub fn maxima(&self) -> Subset {
        (0..self.len())
            .filter(|&x| self.above[x].is_empty())
            .collect()
    }

    /// Elements of `set` with nothing above them inside `set`.
    pub fn maxima_of(&self, set: Subset) -> Subset {
        set.iter()
            .filter(|&x| self.above[x].is_disjoint(set))
            .collect()
    }

    pub fn minima(&self) -> Subset {
        (0..self.len())
            .filter(|&x| self.below[x].is_empty())
            .collect()
    }

    pub fn is_antichain(&self, set: Subset) -> bool {
        set.iter().all(|x| self.above[x].is_disjoint(set))
    }

    pub fn is_unordered(&self) -> bool {
        self.covers.is_empty()
    }

    pub fn is_total_order(&self) -> bool {
        (0..self.len()).all(|x| self.below[x].len() + self.above[x].len() + 1 == self.len())
    }

    /// Lower covers of `x`.
    pub fn lower_covers(&self, x: ElementId) -> impl Iterator<Item = ElementId> + '_ {
        self.covers.iter().filter(move |c| c.1 == x).map(|c| c.0)
    }

    /// Upper covers of `x`.
    pub fn upper_covers(&self, x: ElementId) -> impl Iterator<Item = ElementId> + '_ {
        self.covers.iter().filter(move |c| c.0 == x).map(|c| c.1)
    }

    /// A linear extension, taking the smallest available index at each step.
    pub fn linear_extension(&self) -> Vec<ElementId> {
        let mut placed = Subset::EMPTY;
        let mut order = Vec::with_capacity(self.len());
        while order.len() < self.len() {
            let next = (0..self.len())
                .find(|&x| !placed.contains(x) && self.below[x].is_subset_of(placed))
                .expect("acyclic");
            placed = placed.with(next);
            order.push(next);
        }
        order
    }

    /// Splits the poset into stages when it is an ordinal sum of antichains:
    /// every element of one stage lies below every element of the next.
    pub fn ordinal_stages(&self) -> Option<Vec<Subset>> {
        let mut stages = Vec::new();
        let mut placed = Subset::EMPTY;
        while placed != self.all() {
            let stage: Subset = self
                .all()
                .difference(placed)
                .iter()
                .filter(|&x| self.below[x].is_subset_of(placed))
                .collect();
            if stage.iter().any(|x| self.below[x] != placed) {
                return None;
            }
            placed = placed.union(stage);
            stages.push(stage);
        }
        Some(stages)
    }

    /// True when each non-maximal element lies below every maximal one.
    pub fn maxima_dominate(&self) -> bool {
        let m = self.maxima();
        self.all()
            .difference(m)
            .iter()
            .all(|x| m.is_subset_of(self.above[x]))
    }

    /// Restricts the order to `set`, keeping names.
    pub fn restrict(&self, set: Subset) -> Poset {
        let keep: Vec<ElementId> = set.to_vec();
        let names: Vec<String> = keep.iter().map(|&x| self.names[x].clone()).collect();
        let mut pairs = Vec::new();
        for (i, &x) in keep.iter().enumerate() {
            for (j, &y) in keep.iter().enumerate() {
                if self.less(x, y) {
                    pairs.push((i, j));
                }
            }
        }
        Poset::from_relation(names, pairs).expect("restriction of a poset is a poset")
    }

    /// Classifies a search as a chain, order-reflecting, or neither.
    pub fn classify(&self, seq: &[ElementId]) -> Result<SequenceClass> {
        let mut seen = Subset::EMPTY;
        for &x in seq {
            if x >= self.len() {
                return Err(Error::UnknownElement(format!("#{x}")));
            }
            if seen.contains(x) {
                return Err(Error::DuplicateElement(self.names[x].clone()));
            }
            seen = seen.with(x);
        }
        let mut chain = true;
        for i in 0..seq.len() {
            for j in i + 1..seq.len() {
                if self.less(seq[j], seq[i]) {
                    return Ok(SequenceClass::Invalid);
                }
                if !self.less(seq[i], seq[j]) {
                    chain = false;
                }
            }
        }
        Ok(if chain {
            SequenceClass::Chain
        } else {
            SequenceClass::OrderReflecting
        })
    }

    /// Classifies a search given by element names.
    pub fn classify_named<S: AsRef<str>>(&self, seq: &[S]) -> Result<SequenceClass> {
        let ids = seq
            .iter()
            .map(|s| self.index_of(s.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        self.classify(&ids)
    }

    /// Elements that may legally be appended to a search that has visited
    /// `searched`, ending at `last`.
    pub fn extensions(
        &self,
        variant: Variant,
        searched: Subset,
        last: Option<ElementId>,
    ) -> Subset {
        match variant {
            Variant::Osr => {
                let blocked = searched
                    .iter()
                    .fold(searched, |acc, x| acc.union(self.below[x]));
                self.all().difference(blocked)
            }
            Variant::Csr => match last {
                Some(x) => self.above[x],
                None => self.all(),
            },
        }
    }

    /// All admissible searches in lexicographic order (a prefix sorts before
    /// its extensions). With `maximal_only`, only searches that cannot be
    /// extended at the end.
    pub fn enumerate_searches(
        &self,
        variant: Variant,
        maximal_only: bool,
    ) -> Result<Vec<SearchSequence>> {
        self.enumerate_searches_with_limit(variant, maximal_only, DEFAULT_SEARCH_LIMIT)
    }

    pub fn enumerate_searches_with_limit(
        &self,
        variant: Variant,
        maximal_only: bool,
        limit: usize,
    ) -> Result<Vec<SearchSequence>> {
        if self.len() > limit {
            return Err(Error::SizeLimit {
                elements: self.len(),
                limit,
            });
        }
        let mut out = Vec::new();
        let mut stack = Vec::with_capacity(self.len());
        self.enumerate_into(variant, maximal_only, &mut stack, Subset::EMPTY, &mut out);
        Ok(out)
    }

    fn enumerate_into(
        &self,
        variant: Variant,
        maximal_only: bool,
        stack: &mut Vec<ElementId>,
        searched: Subset,
        out: &mut Vec<SearchSequence>,
    ) {
        let next = self.extensions(variant, searched, stack.last().copied());
        if !stack.is_empty() && (!maximal_only || next.is_empty()) {
            out.push(SearchSequence(stack.clone()));
        }
        for y in next.iter() {
            stack.push(y);
            self.enumerate_into(variant, maximal_only, stack, searched.with(y), out);
            stack.pop();
        }
    }

    /// Width and a partition into that many chains (minimum chain cover via
    /// bipartite matching on the strict order).
    pub fn width_with_decomposition(&self) -> (usize, Vec<Vec<ElementId>>) {
        let n = self.len();
        let mut match_right: Vec<Option<ElementId>> = vec![None; n];
        for x in 0..n {
            let mut visited = Subset::EMPTY;
            self.augment(x, &mut visited, &mut match_right);
        }
        let mut next = vec![None; n];
        for (y, m) in match_right.iter().enumerate() {
            if let Some(x) = m {
                next[*x] = Some(y);
            }
        }
        let mut chains = Vec::new();
        for (start, matched) in match_right.iter().enumerate() {
            if matched.is_some() {
                continue;
            }
            let mut chain = vec![start];
            let mut cur = start;
            while let Some(y) = next[cur] {
                chain.push(y);
                cur = y;
            }
            chains.push(chain);
        }
        (chains.len(), chains)
    }

    fn augment(
        &self,
        x: ElementId,
        visited: &mut Subset,
        match_right: &mut [Option<ElementId>],
    ) -> bool {
        for y in self.above[x].iter() {
            if visited.contains(y) {
                continue;
            }
            *visited = visited.with(y);
            let free = match match_right[y] {
                None => true,
                Some(other) => self.augment(other, visited, match_right),
            };
            if free {
                match_right[y] = Some(x);
                return true;
            }
        }
        false
    }

    pub fn width(&self) -> usize {
        self.width_with_decomposition().0
    }

    /// Every maximal antichain exactly once, with its downset, sorted by
    /// member list.
    pub fn maximal_antichains(&self) -> Result<Vec<Antichain>> {
        self.maximal_antichains_with_limit(DEFAULT_ANTICHAIN_LIMIT)
    }

    pub fn maximal_antichains_with_limit(&self, limit: usize) -> Result<Vec<Antichain>> {
        if self.len() > limit {
            return Err(Error::SizeLimit {
                elements: self.len(),
                limit,
            });
        }
        // Maximal antichains are the maximal cliques of the incomparability graph.
        let incomparable: Vec<Subset> = (0..self.len())
            .map(|x| {
                self.all()
                    .difference(self.below[x].union(self.above[x]))
                    .without(x)
            })
            .collect();
        let mut found = Vec::new();
        bron_kerbosch(
            &incomparable,
            Subset::EMPTY,
            self.all(),
            Subset::EMPTY,
            &mut found,
        );
        let mut antichains: Vec<Antichain> = found
            .into_iter()
            .map(|members| Antichain {
                members,
                downset: self.downset(members),
            })
            .collect();
        antichains.sort_by_key(|a| a.members.to_vec());
        Ok(antichains)
    }

    /// True when every relation of `coarse` also holds in `fine`.
    pub fn is_extension(coarse: &Poset, fine: &Poset) -> Result<bool> {
        if coarse.names != fine.names {
            return Err(Error::ElementMismatch);
        }
        Ok((0..coarse.len()).all(|x| coarse.above[x].is_subset_of(fine.above[x])))
    }

    /// Every pair `(x, y)` with `x < y`.
    pub fn relations(&self) -> Vec<(ElementId, ElementId)> {
        (0..self.len())
            .flat_map(|x| self.above[x].iter().map(move |y| (x, y)))
            .collect()
    }

    /// Builds a poset from names and an arbitrary (possibly redundant)
    /// relation given by indices into the sorted `names`.
    pub fn from_pairs(names: Vec<String>, pairs: &[(ElementId, ElementId)]) -> Result<Poset> {
        let mut sorted = names.clone();
        sorted.sort();
        if sorted != names {
            return Err(Error::WrongStructure("element names must be sorted".into()));
        }
        if pairs
            .iter()
            .any(|&(x, y)| x >= names.len() || y >= names.len())
        {
            return Err(Error::UnknownElement("index out of range".into()));
        }
        let mut unique: Vec<_> = pairs.to_vec();
        unique.sort();
        unique.dedup();
        let closed = Poset::from_relation(names.clone(), unique)?;
        // Re-derive the Hasse diagram from the closure so nothing is reported twice.
        let hasse: Vec<_> = closed
            .relations()
            .into_iter()
            .filter(|&(x, y)| closed.above[x].intersection(closed.below[y]).is_empty())
            .collect();
        Poset::from_relation(names, hasse)
    }
}

fn bron_kerbosch(adj: &[Subset], r: Subset, mut p: Subset, mut x: Subset, out: &mut Vec<Subset>) {
    if p.is_empty() && x.is_empty() {
        out.push(r);
        return;
    }
    let pivot = p
        .union(x)
        .iter()
        .max_by_key(|&u| adj[u].intersection(p).len())
        .expect("nonempty");
    for v in p.difference(adj[pivot]).iter() {
        bron_kerbosch(
            adj,
            r.with(v),
            p.intersection(adj[v]),
            x.intersection(adj[v]),
            out,
        );
        p = p.without(v);
        x = x.with(v);
    }
}
