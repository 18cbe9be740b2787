//! Fixed-width bit sets and named universes.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};

const WORD: usize = 64;

/// A subset of a finite universe `0..width`, stored as a fixed-width bit vector.
///
/// Sets are totally ordered canonically: first by cardinality, then by the
/// numeric value of the bit pattern (element `i` contributes `2^i`).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitSet {
    width: usize,
    words: SmallVec<[u64; 2]>,
}

/// Subset of a state (or point) universe.
pub type StateSet = BitSet;
/// Subset of a property universe.
pub type PropertySet = BitSet;

impl BitSet {
    pub fn empty(width: usize) -> Self {
        BitSet {
            width,
            words: SmallVec::from_elem(0, width.div_ceil(WORD)),
        }
    }

    pub fn full(width: usize) -> Self {
        let mut s = BitSet {
            width,
            words: SmallVec::from_elem(!0, width.div_ceil(WORD)),
        };
        s.trim();
        s
    }

    pub fn singleton(width: usize, i: usize) -> Self {
        let mut s = Self::empty(width);
        s.insert(i);
        s
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(width: usize, indices: I) -> Self {
        let mut s = Self::empty(width);
        for i in indices {
            s.insert(i);
        }
        s
    }

    /// Builds a set of width at most 64 from a bit mask; bits past `width` are dropped.
    pub fn from_mask(width: usize, mask: u64) -> Self {
        assert!(width <= WORD, "from_mask needs width <= 64, got {width}");
        let mut s = Self::empty(width);
        if width > 0 {
            s.words[0] = mask;
        }
        s.trim();
        s
    }

    /// The bit mask of a set of width at most 64.
    pub fn to_mask(&self) -> u64 {
        assert!(self.width <= WORD, "to_mask needs width <= 64, got {}", self.width);
        self.words.first().copied().unwrap_or(0)
    }

    fn trim(&mut self) {
        let rem = self.width % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    #[inline]
    fn same_width(&self, other: &BitSet) {
        assert_eq!(self.width, other.width, "bit set width mismatch");
    }

    /// Size of the universe this set lives in.
    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    /// Number of members.
    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.count() == self.width
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i < self.width && self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        assert!(i < self.width, "index {i} out of range for width {}", self.width);
        self.words[i / WORD] |= 1 << (i % WORD);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        assert!(i < self.width, "index {i} out of range for width {}", self.width);
        self.words[i / WORD] &= !(1 << (i % WORD));
    }

    pub fn union_with(&mut self, other: &BitSet) {
        self.same_width(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &BitSet) {
        self.same_width(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn union(&self, other: &BitSet) -> BitSet {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn intersection(&self, other: &BitSet) -> BitSet {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    pub fn difference(&self, other: &BitSet) -> BitSet {
        self.same_width(other);
        let mut s = self.clone();
        for (a, b) in s.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
        s
    }

    pub fn complement(&self) -> BitSet {
        let mut s = self.clone();
        for w in s.words.iter_mut() {
            *w = !*w;
        }
        s.trim();
        s
    }

    pub fn is_subset(&self, other: &BitSet) -> bool {
        self.same_width(other);
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &BitSet) -> bool {
        self.same_width(other);
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    /// Members in increasing order.
    pub fn iter(&self) -> Iter<'_> {
        Iter {
            set: self,
            word: 0,
            bits: self.words.first().copied().unwrap_or(0),
        }
    }

    /// Smallest member, if any.
    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }
}

pub struct Iter<'a> {
    set: &'a BitSet,
    word: usize,
    bits: u64,
}

impl Iterator for Iter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.bits != 0 {
                let tz = self.bits.trailing_zeros() as usize;
                self.bits &= self.bits - 1;
                return Some(self.word * WORD + tz);
            }
            self.word += 1;
            if self.word >= self.set.words.len() {
                return None;
            }
            self.bits = self.set.words[self.word];
        }
    }
}

impl<'a> IntoIterator for &'a BitSet {
    type Item = usize;
    type IntoIter = Iter<'a>;

    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

impl Ord for BitSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.width
            .cmp(&other.width)
            .then_with(|| self.count().cmp(&other.count()))
            .then_with(|| self.words.iter().rev().cmp(other.words.iter().rev()))
    }
}

impl PartialOrd for BitSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for BitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A finite, indexed universe of uniquely named elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Universe {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl Universe {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(names.len());
        for (i, n) in names.iter().enumerate() {
            if index.insert(n.clone(), i).is_some() {
                return Err(Error::DuplicateName { name: n.clone() });
            }
        }
        Ok(Universe { names, index })
    }

    /// `prefix0, prefix1, ...`
    pub fn indexed(prefix: &str, n: usize) -> Self {
        Universe::new((0..n).map(|i| format!("{prefix}{i}"))).expect("generated names are unique")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// Restriction to the members of `subset`, in index order.
    pub fn restrict(&self, subset: &BitSet) -> Universe {
        Universe::new(subset.iter().map(|i| self.names[i].clone())).expect("subset of unique names")
    }

    pub fn empty_set(&self) -> BitSet {
        BitSet::empty(self.len())
    }

    pub fn full_set(&self) -> BitSet {
        BitSet::full(self.len())
    }

    /// Builds a subset from member names.
    pub fn set_of<'a, I: IntoIterator<Item = &'a str>>(&self, names: I) -> Result<BitSet> {
        let mut s = self.empty_set();
        for n in names {
            let i = self.index_of(n).ok_or_else(|| Error::UnknownName { name: n.to_string() })?;
            s.insert(i);
        }
        Ok(s)
    }

    /// `{a,b,c}` in index order; `{}` for the empty set.
    pub fn format_set(&self, set: &BitSet) -> String {
        let parts: Vec<&str> = set.iter().map(|i| self.name(i)).collect();
        format!("{{{}}}", parts.join(","))
    }
}

macro_rules! id_newtype {
    ($(#[$m:meta])* $name:ident) => {
        $(#[$m])*
        #[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(pub usize);

        impl $name {
            #[inline]
            pub fn index(self) -> usize {
                self.0
            }
        }

        impl From<usize> for $name {
            fn from(i: usize) -> Self {
                $name(i)
            }
        }

        impl From<$name> for usize {
            fn from(id: $name) -> usize {
                id.0
            }
        }
    };
}

id_newtype!(
    /// Index of a state (or of a point of a closure space).
    StateId
);
id_newtype!(
    /// Index of a property, i.e. of a lattice element.
    PropertyId
);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_order_is_cardinality_then_pattern() {
        let mut v = [
            BitSet::from_mask(3, 0b111),
            BitSet::from_mask(3, 0b100),
            BitSet::from_mask(3, 0b011),
            BitSet::from_mask(3, 0),
            BitSet::from_mask(3, 0b001),
            BitSet::from_mask(3, 0b101),
        ];
        v.sort();
        let masks: Vec<u64> = v.iter().map(BitSet::to_mask).collect();
        assert_eq!(masks, vec![0, 0b001, 0b100, 0b011, 0b101, 0b111]);
    }

    #[test]
    fn multiword_ops() {
        let a = BitSet::from_indices(130, [0, 64, 129]);
        let b = BitSet::from_indices(130, [64, 100]);
        assert_eq!(a.intersection(&b).iter().collect::<Vec<_>>(), vec![64]);
        assert_eq!(a.union(&b).count(), 4);
        assert_eq!(a.complement().count(), 127);
        assert!(!a.complement().contains(129));
        assert!(BitSet::full(130).is_full());
        assert!(a.difference(&b).is_subset(&a));
        assert!(a.difference(&b).is_disjoint(&b));
        assert!(BitSet::from_indices(130, [0]) < BitSet::from_indices(130, [129]));
    }

    #[test]
    fn zero_width() {
        let e = BitSet::empty(0);
        assert!(e.is_empty() && e.is_full());
        assert_eq!(e.complement(), e);
        assert_eq!(e.iter().count(), 0);
    }

    #[test]
    fn universe_rejects_duplicates() {
        assert!(matches!(Universe::new(["p", "q", "p"]), Err(Error::DuplicateName { .. })));
        let u = Universe::new(["p", "q", "r"]).unwrap();
        assert_eq!(u.format_set(&u.set_of(["r", "p"]).unwrap()), "{p,r}");
        assert!(u.set_of(["z"]).is_err());
    }
}
