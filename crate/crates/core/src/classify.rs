//! Predicates on state property systems and on closure spaces.
//!
//! Most notions here exist on both sides of the correspondence: superselection
//! rules and unions of closed sets, d-classical properties and clopen sets,
//! atomisticity and the T1 axiom, pure nonclassicality and connectedness.
//! Each is computed independently on both sides, and where a theorem says the
//! two must agree, a disagreement is reported as an internal inconsistency.

use crate::bitset::{BitSet, PropertyId, PropertySet, StateId, StateSet};
use crate::categorical::functor_f_obj;
use crate::closure::ClosureSpace;
use crate::error::{Error, Result};
use crate::sps::StatePropertySystem;
use crate::Limits;

/// `s_ξ(p) = ∧ξ(p)`, the strongest property actual in `p`.
pub fn strongest_property(sps: &StatePropertySystem, p: StateId) -> PropertyId {
    sps.lattice().meet_all(sps.xi(p).iter().map(PropertyId))
}

/// Every singleton is closed.
pub fn is_t1(cs: &ClosureSpace) -> bool {
    cs.point_ids().all(|p| cs.is_closed(&BitSet::singleton(cs.len(), p.0)))
}

/// The three equivalent characterizations of an atomistic system, each
/// evaluated on its own:
/// 1. `ξ` is injective and every `s_ξ(p)` is an atom;
/// 2. `ξ(p) ⊆ ξ(q)` implies `p = q`;
/// 3. `F(sps)` is T1.
pub fn atomistic_conditions(sps: &StatePropertySystem) -> (bool, bool, bool) {
    let n = sps.states().len();
    let injective = (0..n).all(|p| (p + 1..n).all(|q| sps.xi(StateId(p)) != sps.xi(StateId(q))));
    let atoms = sps.state_ids().all(|p| sps.lattice().is_atom(strongest_property(sps, p)));
    let cond1 = injective && atoms;
    let cond2 = (0..n).all(|p| (0..n).all(|q| p == q || !sps.xi(StateId(p)).is_subset(sps.xi(StateId(q)))));
    let cond3 = is_t1(&functor_f_obj(sps));
    (cond1, cond2, cond3)
}

/// The three equivalent forms of "a and b are separated by a superselection rule".
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SsrForms {
    /// `a∨b ∈ ξ(p) ⇒ a ∈ ξ(p) or b ∈ ξ(p)` for all states.
    pub definitional: bool,
    /// `κ(a∨b) = κ(a) ∪ κ(b)`
    pub kappa_union: bool,
    /// `κ(a) ∪ κ(b)` is a Cartan image.
    pub union_closed: bool,
}

impl SsrForms {
    pub fn agree(&self) -> bool {
        self.definitional == self.kappa_union && self.kappa_union == self.union_closed
    }
}

pub fn ssr_forms(sps: &StatePropertySystem, a: PropertyId, b: PropertyId) -> SsrForms {
    let join = sps.lattice().join(a, b);
    let definitional = sps
        .state_ids()
        .all(|p| !sps.is_actual(p, join) || sps.is_actual(p, a) || sps.is_actual(p, b));
    let union = sps.cartan(a).union(sps.cartan(b));
    SsrForms {
        definitional,
        kappa_union: *sps.cartan(join) == union,
        union_closed: sps.property_with_extent(&union).is_some(),
    }
}

/// `a ssr b`. The definitional and Cartan forms are both evaluated; a
/// disagreement is an internal inconsistency.
pub fn ssr(sps: &StatePropertySystem, a: PropertyId, b: PropertyId) -> Result<bool> {
    let forms = ssr_forms(sps, a, b);
    if !forms.agree() {
        return Err(Error::inconsistency(
            "ssr ⇔ κ(a∨b) = κ(a)∪κ(b) ⇔ κ(a)∪κ(b) ∈ F",
            format!("a = {}, b = {}: {forms:?}", sps.property_name(a), sps.property_name(b)),
        ));
    }
    Ok(forms.definitional)
}

/// Every pair of properties is separated by a superselection rule.
pub fn is_s_classical(sps: &StatePropertySystem) -> Result<bool> {
    let l = sps.lattice();
    for a in l.ids() {
        for b in l.ids().filter(|b| b.0 > a.0) {
            if !ssr(sps, a, b)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The closed sets are closed under pairwise union.
pub fn is_topology(cs: &ClosureSpace) -> bool {
    let f = cs.closed();
    f.iter().enumerate().all(|(i, a)| f[i + 1..].iter().all(|b| cs.is_closed(&a.union(b))))
}

/// Properties `b` with `a∨b = I`, `a∧b = 0` and `a ssr b` (definitional form).
fn complement_candidates(sps: &StatePropertySystem, a: PropertyId) -> Vec<PropertyId> {
    let l = sps.lattice();
    l.ids()
        .filter(|&b| l.join(a, b) == l.top() && l.meet(a, b) == l.bottom() && ssr_forms(sps, a, b).definitional)
        .collect()
}

/// The complement `a^c` when `a` is d-classical, `None` otherwise.
///
/// Checks that the complement is unique, that `κ(a^c)` is the set complement of
/// `κ(a)`, and that `(a^c)^c = a`.
pub fn d_classical_complement(sps: &StatePropertySystem, a: PropertyId) -> Result<Option<PropertyId>> {
    let candidates = complement_candidates(sps, a);
    let c = match candidates.as_slice() {
        [] => return Ok(None),
        [c] => *c,
        many => {
            return Err(Error::MultipleComplements {
                property: sps.property_name(a).to_string(),
                complements: many.iter().map(|&c| sps.property_name(c).to_string()).collect(),
            })
        }
    };
    if *sps.cartan(c) != sps.cartan(a).complement() {
        return Err(Error::inconsistency(
            "κ(a^c) = κ(a)^C",
            format!("a = {}, a^c = {}", sps.property_name(a), sps.property_name(c)),
        ));
    }
    if complement_candidates(sps, c) != [a] {
        return Err(Error::inconsistency(
            "(a^c)^c = a",
            format!("a = {}, a^c = {}", sps.property_name(a), sps.property_name(c)),
        ));
    }
    Ok(Some(c))
}

/// All d-classical properties with their complements, in property order.
pub fn d_classical_pairs(sps: &StatePropertySystem) -> Result<Vec<(PropertyId, PropertyId)>> {
    let mut out = Vec::new();
    for a in sps.lattice().ids() {
        if let Some(c) = d_classical_complement(sps, a)? {
            out.push((a, c));
        }
    }
    Ok(out)
}

pub fn d_classical_properties(sps: &StatePropertySystem) -> Result<PropertySet> {
    let pairs = d_classical_pairs(sps)?;
    Ok(BitSet::from_indices(sps.lattice().size(), pairs.iter().map(|(a, _)| a.0)))
}

/// Closed with a closed complement.
pub fn is_clopen(cs: &ClosureSpace, a: &StateSet) -> bool {
    cs.is_closed(a) && cs.is_closed(&a.complement())
}

/// All clopen sets in canonical order.
pub fn clopens(cs: &ClosureSpace) -> Vec<StateSet> {
    cs.closed().iter().filter(|f| cs.is_closed(&f.complement())).cloned().collect()
}

/// No clopen sets besides `∅` and `X`. The empty space counts as connected.
pub fn is_connected(cs: &ClosureSpace) -> bool {
    cs.closed()
        .iter()
        .all(|f| f.is_empty() || f.is_full() || !cs.is_closed(&f.complement()))
}

/// Connectedness of the induced subspace `(A, {F ∩ A})`, evaluated without re-indexing.
pub(crate) fn induced_connected(cs: &ClosureSpace, a: &StateSet) -> bool {
    let mut traces: Vec<StateSet> = cs.closed().iter().map(|f| f.intersection(a)).collect();
    traces.sort_unstable();
    traces.dedup();
    traces
        .iter()
        .all(|t| t.is_empty() || t == a || traces.binary_search(&a.difference(t)).is_err())
}

/// Whether the subspace induced on `a` is connected.
pub fn is_connected_subset(cs: &ClosureSpace, a: &StateSet, limits: &Limits) -> Result<bool> {
    if a.width() != cs.len() {
        return Err(Error::WidthMismatch { expected: cs.len(), found: a.width() });
    }
    if cs.closed().len() > limits.max_properties {
        return Err(Error::ExhaustiveCapExceeded { size: cs.closed().len(), cap: limits.max_properties });
    }
    Ok(induced_connected(cs, a))
}

/// Every closed set is the intersection of the clopen sets containing it
/// (the empty intersection being `X`). This holds iff some family of clopen
/// sets is a base, since the family of all clopens is the largest candidate.
pub fn is_weakly_zero_dimensional(cs: &ClosureSpace) -> bool {
    let clo = clopens(cs);
    cs.closed().iter().all(|f| {
        let hull = clo.iter().filter(|c| f.is_subset(c)).fold(cs.full(), |acc, c| acc.intersection(c));
        hull == *f
    })
}

/// The classification of a state property system, with the closure-space side
/// computed on `F(sps)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassificationReport {
    pub t1: bool,
    pub atomistic: (bool, bool, bool),
    pub s_classical: bool,
    pub is_topology: bool,
    pub connected: bool,
    pub d_classical_properties: PropertySet,
    /// `(a, a^c)` for every d-classical `a`.
    pub complements: Vec<(PropertyId, PropertyId)>,
    pub weakly_zero_dimensional: bool,
}

impl ClassificationReport {
    pub fn is_atomistic(&self) -> bool {
        self.atomistic.0
    }

    /// Only `0` and `I` are d-classical.
    pub fn is_pure_nonclassical(&self) -> bool {
        self.d_classical_properties.count() <= 2
    }
}

pub fn classify(sps: &StatePropertySystem) -> Result<ClassificationReport> {
    let cs = functor_f_obj(sps);
    let atomistic = atomistic_conditions(sps);
    let complements = d_classical_pairs(sps)?;
    let d_classical_properties = BitSet::from_indices(sps.lattice().size(), complements.iter().map(|(a, _)| a.0));
    let report = ClassificationReport {
        t1: is_t1(&cs),
        atomistic,
        s_classical: is_s_classical(sps)?,
        is_topology: is_topology(&cs),
        connected: is_connected(&cs),
        d_classical_properties,
        complements,
        weakly_zero_dimensional: is_weakly_zero_dimensional(&cs),
    };
    if !(atomistic.0 == atomistic.1 && atomistic.1 == atomistic.2) {
        return Err(Error::inconsistency("atomistic conditions are equivalent", format!("{atomistic:?}")));
    }
    if report.s_classical != report.is_topology {
        return Err(Error::inconsistency(
            "s-classical ⇔ F(sps) is a topology",
            format!("s-classical = {}, topology = {}", report.s_classical, report.is_topology),
        ));
    }
    let trivial = {
        let l = sps.lattice();
        let mut t = BitSet::empty(l.size());
        t.insert(l.bottom().0);
        t.insert(l.top().0);
        t
    };
    if report.connected != (report.d_classical_properties == trivial) {
        return Err(Error::inconsistency(
            "connected ⇔ only 0 and I are d-classical",
            format!("connected = {}, d-classical = {}", report.connected, sps.format_properties(&report.d_classical_properties)),
        ));
    }
    for &(a, _) in &report.complements {
        if !is_clopen(&cs, sps.cartan(a)) {
            return Err(Error::inconsistency(
                "a d-classical ⇔ κ(a) clopen",
                format!("{} is d-classical but κ of it is not clopen", sps.property_name(a)),
            ));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitset::Universe;
    use crate::categorical::functor_g_obj;
    use crate::closure::tests::ex5_space;
    use crate::closure::validate_closure_space;
    use crate::sps::tests::ex5;

    fn pid(s: &StatePropertySystem, n: &str) -> PropertyId {
        PropertyId(s.lattice().elements().index_of(n).unwrap())
    }

    #[test]
    fn strongest_properties() {
        let s = ex5();
        let names: Vec<&str> = s.state_ids().map(|p| s.property_name(strongest_property(&s, p))).collect();
        assert_eq!(names, vec!["b", "b", "a", "c", "c"]);

        let one = functor_g_obj(&ClosureSpace::indiscrete(Universe::new(["x"]).unwrap()));
        assert_eq!(strongest_property(&one, StateId(0)), one.lattice().top());
    }

    #[test]
    fn atomistic_and_t1() {
        let s = ex5();
        assert_eq!(atomistic_conditions(&s), (false, false, false));
        let discrete = ClosureSpace::discrete(Universe::new(["x", "y", "z"]).unwrap());
        assert!(is_t1(&discrete));
        assert_eq!(atomistic_conditions(&functor_g_obj(&discrete)), (true, true, true));
        assert!(!is_t1(&ex5_space()));
    }

    #[test]
    fn ssr_examples() {
        let s = ex5();
        assert!(ssr(&s, pid(&s, "a"), pid(&s, "b")).unwrap());
        assert!(!ssr(&s, pid(&s, "a"), pid(&s, "c")).unwrap());
        for x in s.lattice().ids() {
            assert!(ssr(&s, x, s.lattice().bottom()).unwrap());
        }
        assert!(!is_s_classical(&s).unwrap());
        assert!(!is_topology(&ex5_space()));
    }

    #[test]
    fn union_completion_of_ex5_is_a_topology() {
        let cs = ex5_space();
        let mut fam: Vec<StateSet> = cs.closed().to_vec();
        loop {
            let mut grown = fam.clone();
            for a in &fam {
                for b in &fam {
                    grown.push(a.union(b));
                    grown.push(a.intersection(b));
                }
            }
            grown.sort();
            grown.dedup();
            if grown == fam {
                break;
            }
            fam = grown;
        }
        let top = validate_closure_space(cs.points().clone(), fam).unwrap();
        assert!(top.closed().contains(&cs.points().set_of(["r", "s", "t"]).unwrap()));
        assert!(is_topology(&top));
        assert!(is_s_classical(&functor_g_obj(&top)).unwrap());
        assert!(is_topology(&ClosureSpace::discrete(Universe::new(["x", "y"]).unwrap())));
    }

    #[test]
    fn complements() {
        let s = ex5();
        let c = |n: &str| d_classical_complement(&s, pid(&s, n)).unwrap().map(|x| s.property_name(x).to_string());
        assert_eq!(c("d").as_deref(), Some("c"));
        assert_eq!(c("c").as_deref(), Some("d"));
        assert_eq!(c("0").as_deref(), Some("I"));
        assert_eq!(c("I").as_deref(), Some("0"));
        assert_eq!(c("a"), None);
        assert_eq!(c("b"), None);
        assert_eq!(s.format_properties(&d_classical_properties(&s).unwrap()), "{0,c,d,I}");
    }

    #[test]
    fn clopen_and_connected() {
        let cs = ex5_space();
        let u = cs.points().clone();
        assert!(is_clopen(&cs, &u.set_of(["s", "t"]).unwrap()));
        assert!(!is_clopen(&cs, &u.set_of(["p", "q"]).unwrap()));
        assert!(is_clopen(&cs, &u.empty_set()) && is_clopen(&cs, &u.full_set()));
        assert!(!is_connected(&cs));
        let lim = Limits::default();
        assert!(is_connected_subset(&cs, &u.set_of(["p", "q"]).unwrap(), &lim).unwrap());
        assert!(!is_connected_subset(&cs, &u.set_of(["p", "q", "r"]).unwrap(), &lim).unwrap());
        assert!(is_connected_subset(&cs, &u.empty_set(), &lim).unwrap());
        assert!(is_connected_subset(&cs, &u.set_of(["s"]).unwrap(), &lim).unwrap());
        let tiny = Limits { max_properties: 3, ..Limits::default() };
        assert!(matches!(
            is_connected_subset(&cs, &u.empty_set(), &tiny),
            Err(Error::ExhaustiveCapExceeded { size: 6, cap: 3 })
        ));
        assert!(is_connected(&ClosureSpace::indiscrete(Universe::new(Vec::<String>::new()).unwrap())));
        assert!(is_connected(&ClosureSpace::indiscrete(Universe::new(["x"]).unwrap())));
    }

    #[test]
    fn weak_zero_dimensionality() {
        let cs = ex5_space();
        assert!(!is_weakly_zero_dimensional(&cs));
        let u = cs.points().clone();
        let fam = [vec![], vec!["s", "t"], vec!["p", "q", "r"], vec!["p", "q", "r", "s", "t"]]
            .iter()
            .map(|v| u.set_of(v.iter().copied()).unwrap())
            .collect();
        assert!(is_weakly_zero_dimensional(&validate_closure_space(u.clone(), fam).unwrap()));
        assert!(is_weakly_zero_dimensional(&ClosureSpace::discrete(Universe::new(["x", "y", "z"]).unwrap())));
    }

    #[test]
    fn ex5_report() {
        let r = classify(&ex5()).unwrap();
        assert!(!r.t1 && !r.is_atomistic() && !r.s_classical && !r.connected && !r.weakly_zero_dimensional);
        assert_eq!(r.complements.len(), 4);
    }
}
