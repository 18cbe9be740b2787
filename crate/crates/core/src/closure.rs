//! Closure spaces: a universe of points with an intersection-closed family of closed sets.

use crate::bitset::{BitSet, StateId, StateSet, Universe};
use crate::error::{Error, Result};

/// A validated closure space. The closed sets are kept deduplicated and in
/// canonical order (cardinality, then bit pattern), so `closed()[0]` is `∅`
/// and the last entry is the whole space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureSpace {
    points: Universe,
    closed: Vec<StateSet>,
}

/// Accepts `family` iff it contains `∅` and `X` and is closed under pairwise
/// intersection.
pub fn validate_closure_space(points: Universe, mut family: Vec<StateSet>) -> Result<ClosureSpace> {
    let n = points.len();
    if let Some(bad) = family.iter().find(|s| s.width() != n) {
        return Err(Error::WidthMismatch { expected: n, found: bad.width() });
    }
    family.sort_unstable();
    family.dedup();
    if !family.contains(&BitSet::empty(n)) {
        return Err(Error::MissingEmpty);
    }
    if !family.contains(&BitSet::full(n)) {
        return Err(Error::MissingFull);
    }
    for (i, a) in family.iter().enumerate() {
        for b in &family[i + 1..] {
            if family.binary_search(&a.intersection(b)).is_err() {
                return Err(Error::NotIntersectionClosed { a: points.format_set(a), b: points.format_set(b) });
            }
        }
    }
    Ok(ClosureSpace { points, closed: family })
}

/// `cl(A) = ∩{F ∈ F | A ⊆ F}`
pub fn closure_of(cs: &ClosureSpace, a: &StateSet) -> StateSet {
    cs.closure(a)
}

impl ClosureSpace {
    /// Every subset closed.
    pub fn discrete(points: Universe) -> ClosureSpace {
        let n = points.len();
        assert!(n <= 20, "discrete space on {n} points is too large to materialize");
        let closed = (0..1u64 << n).map(|m| BitSet::from_mask(n, m)).collect();
        validate_closure_space(points, closed).expect("power set is a closure space")
    }

    /// Only `∅` and `X` closed.
    pub fn indiscrete(points: Universe) -> ClosureSpace {
        let n = points.len();
        validate_closure_space(points, vec![BitSet::empty(n), BitSet::full(n)]).expect("indiscrete space")
    }

    pub fn points(&self) -> &Universe {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point_ids(&self) -> impl Iterator<Item = StateId> {
        (0..self.len()).map(StateId)
    }

    pub fn closed(&self) -> &[StateSet] {
        &self.closed
    }

    pub fn full(&self) -> StateSet {
        BitSet::full(self.len())
    }

    /// Index of `set` in the canonical closed-set list.
    pub fn position(&self, set: &StateSet) -> Option<usize> {
        self.closed.binary_search(set).ok()
    }

    pub fn is_closed(&self, set: &StateSet) -> bool {
        self.position(set).is_some()
    }

    pub fn closure(&self, a: &StateSet) -> StateSet {
        self.closed
            .iter()
            .filter(|f| a.is_subset(f))
            .fold(self.full(), |acc, f| acc.intersection(f))
    }

    /// The induced subspace `(A, {F ∩ A})`, re-indexed onto the members of `a`
    /// in increasing order. Also returns the inclusion map.
    pub fn subspace(&self, a: &StateSet) -> (ClosureSpace, Vec<StateId>) {
        let inclusion: Vec<StateId> = a.iter().map(StateId).collect();
        let k = inclusion.len();
        let family = self
            .closed
            .iter()
            .map(|f| BitSet::from_indices(k, (0..k).filter(|&j| f.contains(inclusion[j].0))))
            .collect();
        let sub = validate_closure_space(self.points.restrict(a), family).expect("traces of a closure space");
        (sub, inclusion)
    }

    /// `f⁻¹(B)` for a point map `f: self -> target` given by images.
    pub fn preimage(&self, map: &[StateId], b: &StateSet) -> StateSet {
        BitSet::from_indices(self.len(), (0..self.len()).filter(|&i| b.contains(map[i].0)))
    }

    pub fn format(&self, set: &StateSet) -> String {
        self.points.format_set(set)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn ex5_space() -> ClosureSpace {
        let u = Universe::new(["p", "q", "r", "s", "t"]).unwrap();
        let fam = [vec![], vec!["r"], vec!["p", "q"], vec!["s", "t"], vec!["p", "q", "r"], vec!["p", "q", "r", "s", "t"]]
            .iter()
            .map(|v| u.set_of(v.iter().copied()).unwrap())
            .collect();
        validate_closure_space(u, fam).unwrap()
    }

    #[test]
    fn ex5_valid_and_closure() {
        let cs = ex5_space();
        assert_eq!(cs.closed().len(), 6);
        let u = cs.points().clone();
        assert_eq!(cs.format(&closure_of(&cs, &u.set_of(["p"]).unwrap())), "{p,q}");
        assert_eq!(cs.format(&closure_of(&cs, &u.set_of(["p", "r"]).unwrap())), "{p,q,r}");
        assert_eq!(cs.format(&closure_of(&cs, &u.set_of(["r", "s"]).unwrap())), "{p,q,r,s,t}");
        assert!(closure_of(&cs, &u.empty_set()).is_empty());
        for f in cs.closed() {
            assert_eq!(&cs.closure(f), f);
        }
    }

    #[test]
    fn validation_errors() {
        let u = Universe::new(["p", "q", "r"]).unwrap();
        let s = |v: &[&str]| u.set_of(v.iter().copied()).unwrap();
        assert!(validate_closure_space(u.clone(), vec![s(&[]), s(&["p", "q", "r"])]).is_ok());
        assert_eq!(
            validate_closure_space(u.clone(), vec![s(&[]), s(&["p", "q"]), s(&["q", "r"]), s(&["p", "q", "r"])]),
            Err(Error::NotIntersectionClosed { a: "{p,q}".into(), b: "{q,r}".into() })
        );
        assert_eq!(validate_closure_space(u.clone(), vec![s(&["p", "q", "r"])]), Err(Error::MissingEmpty));
        assert_eq!(validate_closure_space(u.clone(), vec![s(&[]), s(&["p"])]), Err(Error::MissingFull));
        // duplicates collapse, order is canonical
        let cs = validate_closure_space(u.clone(), vec![s(&["p", "q", "r"]), s(&[]), s(&["q"]), s(&[])]).unwrap();
        assert_eq!(cs.closed(), &[s(&[]), s(&["q"]), s(&["p", "q", "r"])]);
    }

    #[test]
    fn empty_space() {
        let cs = ClosureSpace::indiscrete(Universe::new(Vec::<String>::new()).unwrap());
        assert_eq!(cs.closed().len(), 1);
        assert!(cs.closure(&BitSet::empty(0)).is_empty());
    }

    #[test]
    fn subspace_traces() {
        let cs = ex5_space();
        let (sub, inc) = cs.subspace(&cs.points().set_of(["p", "q", "r"]).unwrap());
        assert_eq!(inc, vec![StateId(0), StateId(1), StateId(2)]);
        let listed: Vec<String> = sub.closed().iter().map(|f| sub.format(f)).collect();
        assert_eq!(listed, vec!["{}", "{r}", "{p,q}", "{p,q,r}"]);
    }
}
