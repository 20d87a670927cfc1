use std::fmt;

/// Index of a location inside a poset (position in the sorted element list).
pub type ElementId = usize;

/// Upper bound on the number of locations in any instance.
pub const MAX_ELEMENTS: usize = 64;

/// A set of locations, stored as a bit mask over element indices.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Subset(pub u64);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn full(n: usize) -> Subset {
        if n >= 64 {
            Subset(u64::MAX)
        } else {
            Subset((1u64 << n) - 1)
        }
    }

    pub fn singleton(x: ElementId) -> Subset {
        Subset(1u64 << x)
    }

    pub fn pair(x: ElementId, y: ElementId) -> Subset {
        Subset::singleton(x).with(y)
    }

    pub fn from_elements<I: IntoIterator<Item = ElementId>>(items: I) -> Subset {
        items.into_iter().fold(Subset::EMPTY, |s, x| s.with(x))
    }

    pub fn contains(self, x: ElementId) -> bool {
        self.0 >> x & 1 == 1
    }

    pub fn with(self, x: ElementId) -> Subset {
        Subset(self.0 | 1u64 << x)
    }

    pub fn without(self, x: ElementId) -> Subset {
        Subset(self.0 & !(1u64 << x))
    }

    pub fn union(self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    pub fn intersection(self, other: Subset) -> Subset {
        Subset(self.0 & other.0)
    }

    pub fn difference(self, other: Subset) -> Subset {
        Subset(self.0 & !other.0)
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: Subset) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn first(self) -> Option<ElementId> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> impl Iterator<Item = ElementId> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let x = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(x)
        })
    }

    pub fn to_vec(self) -> Vec<ElementId> {
        self.iter().collect()
    }

    /// All subsets of `self`, including the empty set and `self`, in
    /// increasing mask order.
    pub fn subsets(self) -> impl Iterator<Item = Subset> {
        let mask = self.0;
        let mut next = Some(0u64);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == mask {
                None
            } else {
                Some((cur.wrapping_sub(mask)) & mask)
            };
            Some(Subset(cur))
        })
    }

    /// Nonempty subsets of `self`.
    pub fn nonempty_subsets(self) -> impl Iterator<Item = Subset> {
        self.subsets().filter(|s| !s.is_empty())
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<ElementId> for Subset {
    fn from_iter<I: IntoIterator<Item = ElementId>>(iter: I) -> Self {
        Subset::from_elements(iter)
    }
}
