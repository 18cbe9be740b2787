//! Finite complete lattices given by an order relation.

use crate::bitset::{BitSet, PropertyId, PropertySet, Universe};
use crate::error::{Error, Result};

/// A finite lattice with its full order matrix and materialized meet/join tables.
///
/// Finiteness plus pairwise meets and joins plus bottom and top make it complete;
/// meets and joins of arbitrary families are folds over the tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteLattice {
    elements: Universe,
    /// `up[a]` = `{b | a <= b}`
    up: Vec<BitSet>,
    /// `down[a]` = `{b | b <= a}`
    down: Vec<BitSet>,
    meet: Vec<usize>,
    join: Vec<usize>,
    bottom: usize,
    top: usize,
}

/// Builds a lattice from a generating relation: Hasse edges, the full order,
/// or anything in between. Pairs `(x, y)` read `x <= y`.
pub fn validate_lattice(elements: Universe, order_pairs: &[(PropertyId, PropertyId)]) -> Result<FiniteLattice> {
    FiniteLattice::from_pairs(elements, order_pairs)
}

impl FiniteLattice {
    pub fn from_pairs(elements: Universe, order_pairs: &[(PropertyId, PropertyId)]) -> Result<Self> {
        let n = elements.len();
        let mut up: Vec<BitSet> = (0..n).map(|i| BitSet::singleton(n, i)).collect();
        for &(x, y) in order_pairs {
            if x.0 >= n || y.0 >= n {
                return Err(Error::UniverseMismatch {
                    detail: format!("order pair ({}, {}) outside a universe of {n} elements", x.0, y.0),
                });
            }
            up[x.0].insert(y.0);
        }
        Self::from_relation(elements, up)
    }

    /// Builds a lattice from `up[a] ⊇ {b | a <= b}`; the reflexive-transitive
    /// closure is taken before anything is checked.
    pub fn from_relation(elements: Universe, mut up: Vec<BitSet>) -> Result<Self> {
        let n = elements.len();
        if up.len() != n {
            return Err(Error::WidthMismatch { expected: n, found: up.len() });
        }
        for (i, row) in up.iter_mut().enumerate() {
            if row.width() != n {
                return Err(Error::WidthMismatch { expected: n, found: row.width() });
            }
            row.insert(i);
        }
        // Warshall
        for k in 0..n {
            let row_k = up[k].clone();
            for row in up.iter_mut() {
                if row.contains(k) {
                    row.union_with(&row_k);
                }
            }
        }
        for i in 0..n {
            for j in up[i].iter().filter(|&j| j > i) {
                if up[j].contains(i) {
                    return Err(Error::CycleDetected {
                        a: elements.name(i).to_string(),
                        b: elements.name(j).to_string(),
                    });
                }
            }
        }
        let mut down = vec![BitSet::empty(n); n];
        for (i, row) in up.iter().enumerate() {
            for j in row {
                down[j].insert(i);
            }
        }
        let bottom = (0..n).find(|&i| up[i].is_full()).ok_or(Error::NoBottom)?;
        let top = (0..n).find(|&i| down[i].is_full()).ok_or(Error::NoTop)?;

        let mut meet = vec![0; n * n];
        let mut join = vec![0; n * n];
        for a in 0..n {
            for b in a..n {
                let lower = down[a].intersection(&down[b]);
                let m = lower.iter().find(|&m| lower.is_subset(&down[m])).ok_or_else(|| Error::NoMeet {
                    a: elements.name(a).to_string(),
                    b: elements.name(b).to_string(),
                })?;
                meet[a * n + b] = m;
                meet[b * n + a] = m;
            }
        }
        for a in 0..n {
            for b in a..n {
                let upper = up[a].intersection(&up[b]);
                let j = upper.iter().find(|&j| upper.is_subset(&up[j])).ok_or_else(|| Error::NoJoin {
                    a: elements.name(a).to_string(),
                    b: elements.name(b).to_string(),
                })?;
                join[a * n + b] = j;
                join[b * n + a] = j;
            }
        }
        Ok(FiniteLattice { elements, up, down, meet, join, bottom, top })
    }

    /// The sub-poset on `members` with the inherited order, re-indexed in
    /// increasing index order. Fails unless that sub-poset is itself a lattice;
    /// its meets and joins are recomputed and need not agree with this lattice's.
    ///
    /// Returns the new lattice and the map from its indices to ours.
    pub fn subposet(&self, members: &PropertySet) -> Result<(FiniteLattice, Vec<PropertyId>)> {
        let keep: Vec<usize> = members.iter().collect();
        let k = keep.len();
        let up = keep
            .iter()
            .map(|&a| BitSet::from_indices(k, (0..k).filter(|&j| self.up[a].contains(keep[j]))))
            .collect();
        let lattice = FiniteLattice::from_relation(self.elements.restrict(members), up)?;
        Ok((lattice, keep.into_iter().map(PropertyId).collect()))
    }

    pub fn elements(&self) -> &Universe {
        &self.elements
    }

    pub fn size(&self) -> usize {
        self.elements.len()
    }

    pub fn ids(&self) -> impl Iterator<Item = PropertyId> {
        (0..self.size()).map(PropertyId)
    }

    pub fn name(&self, a: PropertyId) -> &str {
        self.elements.name(a.0)
    }

    pub fn bottom(&self) -> PropertyId {
        PropertyId(self.bottom)
    }

    pub fn top(&self) -> PropertyId {
        PropertyId(self.top)
    }

    #[inline]
    pub fn leq(&self, a: PropertyId, b: PropertyId) -> bool {
        self.up[a.0].contains(b.0)
    }

    #[inline]
    pub fn meet(&self, a: PropertyId, b: PropertyId) -> PropertyId {
        PropertyId(self.meet[a.0 * self.size() + b.0])
    }

    #[inline]
    pub fn join(&self, a: PropertyId, b: PropertyId) -> PropertyId {
        PropertyId(self.join[a.0 * self.size() + b.0])
    }

    /// Meet of a family; the empty meet is the top element.
    pub fn meet_all<I: IntoIterator<Item = PropertyId>>(&self, family: I) -> PropertyId {
        family.into_iter().fold(self.top(), |acc, a| self.meet(acc, a))
    }

    /// Join of a family; the empty join is the bottom element.
    pub fn join_all<I: IntoIterator<Item = PropertyId>>(&self, family: I) -> PropertyId {
        family.into_iter().fold(self.bottom(), |acc, a| self.join(acc, a))
    }

    /// `{b | a <= b}`
    pub fn up_set(&self, a: PropertyId) -> &PropertySet {
        &self.up[a.0]
    }

    /// `{b | b <= a}`, i.e. the segment `[0, a]`.
    pub fn down_set(&self, a: PropertyId) -> &PropertySet {
        &self.down[a.0]
    }

    /// `a` covers the bottom element.
    pub fn is_atom(&self, a: PropertyId) -> bool {
        a.0 != self.bottom && self.down[a.0].count() == 2
    }

    pub fn atoms(&self) -> Vec<PropertyId> {
        self.ids().filter(|&a| self.is_atom(a)).collect()
    }

    /// The cover (Hasse) relation as `(lower, upper)` pairs, sorted by lower then upper index.
    pub fn covers(&self) -> Vec<(PropertyId, PropertyId)> {
        let n = self.size();
        let mut out = Vec::new();
        for a in 0..n {
            for b in self.up[a].iter().filter(|&b| b != a) {
                let between = self.up[a].intersection(&self.down[b]);
                if between.count() == 2 {
                    out.push((PropertyId(a), PropertyId(b)));
                }
            }
        }
        out
    }

    /// The full strict order as `(lower, upper)` pairs.
    pub fn strict_order(&self) -> Vec<(PropertyId, PropertyId)> {
        (0..self.size())
            .flat_map(|a| self.up[a].iter().filter(move |&b| b != a).map(move |b| (PropertyId(a), PropertyId(b))))
            .collect()
    }
}
