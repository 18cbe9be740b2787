//! Morphisms, the functors `F: SP -> Cls` and `G: Cls -> SP`, and pointwise
//! verification of the equivalence on finite objects.
//!
//! Direction conventions: an SP-morphism `(m, n): (Σ', L', ξ') -> (Σ, L, ξ)` has
//! `m: Σ' -> Σ` and `n: L -> L'`, and is valid iff
//! `a ∈ ξ(m(p'))  ⇔  n(a) ∈ ξ'(p')` for all `a ∈ L`, `p' ∈ Σ'`.
//! A continuous map `f: (X', F') -> (X, F)` needs `f⁻¹(B) ∈ F'` for every `B ∈ F`.

use crate::bitset::{BitSet, PropertyId, StateId, StateSet, Universe};
use crate::closure::{validate_closure_space, ClosureSpace};
use crate::error::{Error, Result};
use crate::lattice::FiniteLattice;
use crate::sps::{validate_sps, StatePropertySystem};

/// Outcome of a check that either holds or fails with a witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Check<W> {
    Holds,
    Fails(W),
}

impl<W> Check<W> {
    pub fn holds(&self) -> bool {
        matches!(self, Check::Holds)
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Check::Holds => None,
            Check::Fails(w) => Some(w),
        }
    }
}

/// A pair `(m, n)` of a state map and a property map.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpMorphism {
    /// `m: Σ' -> Σ`, indexed by source state.
    pub state_map: Vec<StateId>,
    /// `n: L -> L'`, indexed by target property.
    pub property_map: Vec<PropertyId>,
}

/// A point map between closure spaces, indexed by source point.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ContinuousMap {
    pub map: Vec<StateId>,
}

/// Failing pair of an SP-morphism check: the biconditional breaks at `(a, p')`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ActualityWitness {
    /// Property of the target system.
    pub property: PropertyId,
    /// State of the source system.
    pub state: StateId,
}

impl SpMorphism {
    pub fn identity(sps: &StatePropertySystem) -> SpMorphism {
        SpMorphism {
            state_map: sps.state_ids().collect(),
            property_map: sps.lattice().ids().collect(),
        }
    }

    /// `self: S1 -> S2` followed by `next: S2 -> S3`.
    pub fn then(&self, next: &SpMorphism) -> SpMorphism {
        SpMorphism {
            state_map: self.state_map.iter().map(|p| next.state_map[p.0]).collect(),
            property_map: next.property_map.iter().map(|a| self.property_map[a.0]).collect(),
        }
    }
}

impl ContinuousMap {
    pub fn identity(cs: &ClosureSpace) -> ContinuousMap {
        ContinuousMap { map: cs.point_ids().collect() }
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &ContinuousMap) -> ContinuousMap {
        ContinuousMap { map: self.map.iter().map(|p| next.map[p.0]).collect() }
    }
}

fn check_sp_universes(source: &StatePropertySystem, target: &StatePropertySystem, mor: &SpMorphism) -> Result<()> {
    let (ns, nt) = (source.states().len(), target.states().len());
    let (ls, lt) = (source.lattice().size(), target.lattice().size());
    if mor.state_map.len() != ns || mor.state_map.iter().any(|p| p.0 >= nt) {
        return Err(Error::UniverseMismatch {
            detail: format!("state map must send {ns} source states into {nt} target states"),
        });
    }
    if mor.property_map.len() != lt || mor.property_map.iter().any(|a| a.0 >= ls) {
        return Err(Error::UniverseMismatch {
            detail: format!("property map must send {lt} target properties into {ls} source properties"),
        });
    }
    Ok(())
}

fn check_map_universes(source: &ClosureSpace, target: &ClosureSpace, map: &ContinuousMap) -> Result<()> {
    if map.map.len() != source.len() || map.map.iter().any(|p| p.0 >= target.len()) {
        return Err(Error::UniverseMismatch {
            detail: format!("point map must send {} source points into {} target points", source.len(), target.len()),
        });
    }
    Ok(())
}

/// Checks `a ∈ ξ(m(p')) ⇔ n(a) ∈ ξ'(p')` for every target property `a` and source state `p'`.
pub fn is_sp_morphism(
    source: &StatePropertySystem,
    target: &StatePropertySystem,
    mor: &SpMorphism,
) -> Result<Check<ActualityWitness>> {
    check_sp_universes(source, target, mor)?;
    for a in target.lattice().ids() {
        let na = mor.property_map[a.0];
        for p in source.state_ids() {
            if target.is_actual(mor.state_map[p.0], a) != source.is_actual(p, na) {
                return Ok(Check::Fails(ActualityWitness { property: a, state: p }));
            }
        }
    }
    Ok(Check::Holds)
}

/// Checks that every closed set of `target` pulls back to a closed set of `source`.
/// The witness is the first target closed set (canonical order) whose preimage is not closed.
pub fn is_continuous(source: &ClosureSpace, target: &ClosureSpace, map: &ContinuousMap) -> Result<Check<StateSet>> {
    check_map_universes(source, target, map)?;
    Ok(target
        .closed()
        .iter()
        .find(|b| !source.is_closed(&source.preimage(&map.map, b)))
        .map_or(Check::Holds, |b| Check::Fails(b.clone())))
}

/// `F(Σ, L, ξ) = (Σ, κ(L))`
pub fn functor_f_obj(sps: &StatePropertySystem) -> ClosureSpace {
    validate_closure_space(sps.states().clone(), sps.cartan_images().to_vec())
        .expect("Cartan images of a valid system form a closure space")
}

/// Names of the properties of `G(cs)`: each closed set written as `{x,y}`.
pub fn closed_set_names(cs: &ClosureSpace) -> Universe {
    Universe::new(cs.closed().iter().map(|f| cs.format(f))).expect("closed sets are distinct")
}

/// `G(X, F) = (X, F, ξ̄)` with `ξ̄(p) = {F ∈ F | p ∈ F}`; property `i` is `cs.closed()[i]`.
pub fn functor_g_obj(cs: &ClosureSpace) -> StatePropertySystem {
    let k = cs.closed().len();
    let up = cs
        .closed()
        .iter()
        .map(|a| BitSet::from_indices(k, (0..k).filter(|&j| a.is_subset(&cs.closed()[j]))))
        .collect();
    let lattice = FiniteLattice::from_relation(closed_set_names(cs), up).expect("closed sets under inclusion form a lattice");
    let xi = cs
        .point_ids()
        .map(|p| BitSet::from_indices(k, (0..k).filter(|&j| cs.closed()[j].contains(p.0))))
        .collect();
    validate_sps(cs.points().clone(), lattice, xi).expect("G of a closure space is a state property system")
}

/// `F(m, n) = m`. Fails with `InvalidInput` unless `(m, n)` is a valid SP-morphism.
pub fn functor_f_mor(source: &StatePropertySystem, target: &StatePropertySystem, mor: &SpMorphism) -> Result<ContinuousMap> {
    if let Check::Fails(w) = is_sp_morphism(source, target, mor)? {
        return Err(Error::InvalidInput {
            detail: format!(
                "not an SP-morphism: biconditional fails at property {} and state {}",
                target.property_name(w.property),
                source.state_name(w.state)
            ),
        });
    }
    let f = ContinuousMap { map: mor.state_map.clone() };
    let (fs, ft) = (functor_f_obj(source), functor_f_obj(target));
    if let Check::Fails(b) = is_continuous(&fs, &ft, &f)? {
        return Err(Error::inconsistency(
            "F sends SP-morphisms to continuous maps",
            format!("preimage of {} is not closed", ft.format(&b)),
        ));
    }
    Ok(f)
}

/// `G(f) = (f, f⁻¹)` where `f⁻¹` sends each closed set of `target` to its preimage.
/// Fails with `InvalidInput` unless `f` is continuous.
pub fn functor_g_mor(source: &ClosureSpace, target: &ClosureSpace, f: &ContinuousMap) -> Result<SpMorphism> {
    check_map_universes(source, target, f)?;
    let mut property_map = Vec::with_capacity(target.closed().len());
    for b in target.closed() {
        let pre = source.preimage(&f.map, b);
        match source.position(&pre) {
            Some(i) => property_map.push(PropertyId(i)),
            None => {
                return Err(Error::InvalidInput {
                    detail: format!("not continuous: preimage of {} is {}", target.format(b), source.format(&pre)),
                })
            }
        }
    }
    Ok(SpMorphism { state_map: f.map.clone(), property_map })
}

/// The unique property map `n` making `(m, n)` an SP-morphism, if one exists.
///
/// `n(a)` is forced: its Cartan image must be `m⁻¹(κ(a))`, and κ is injective.
pub fn sp_morphism_for_state_map(
    source: &StatePropertySystem,
    target: &StatePropertySystem,
    state_map: &[StateId],
) -> Result<Option<SpMorphism>> {
    let probe = SpMorphism {
        state_map: state_map.to_vec(),
        property_map: vec![PropertyId(0); target.lattice().size()],
    };
    check_sp_universes(source, target, &probe)?;
    let index = source.extent_index();
    let mut property_map = Vec::with_capacity(target.lattice().size());
    for a in target.lattice().ids() {
        let pre = BitSet::from_indices(
            source.states().len(),
            source.state_ids().filter(|p| target.is_actual(state_map[p.0], a)).map(|p| p.0),
        );
        match index.get(&pre) {
            Some(&na) => property_map.push(na),
            None => return Ok(None),
        }
    }
    Ok(Some(SpMorphism { state_map: state_map.to_vec(), property_map }))
}

/// A bijective pair whose forward and inverse pairs are both valid SP-morphisms.
pub fn is_sp_isomorphism(a: &StatePropertySystem, b: &StatePropertySystem, mor: &SpMorphism) -> Result<bool> {
    check_sp_universes(a, b, mor)?;
    let Some(inverse_states) = invert(&mor.state_map, b.states().len()) else {
        return Ok(false);
    };
    let Some(inverse_props) = invert(&mor.property_map, a.lattice().size()) else {
        return Ok(false);
    };
    let inverse = SpMorphism { state_map: inverse_states, property_map: inverse_props };
    Ok(is_sp_morphism(a, b, mor)?.holds() && is_sp_morphism(b, a, &inverse)?.holds())
}

fn invert<T: Copy + Into<usize> + From<usize>>(map: &[T], codomain: usize) -> Option<Vec<T>> {
    if map.len() != codomain {
        return None;
    }
    let mut inv: Vec<Option<T>> = vec![None; codomain];
    for (i, &t) in map.iter().enumerate() {
        let slot = &mut inv[t.into()];
        if slot.is_some() {
            return None;
        }
        *slot = Some(T::from(i));
    }
    inv.into_iter().collect()
}

/// What a successful round trip verified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundTripReport {
    pub states: usize,
    pub properties: usize,
    /// Number of `(property, state)` actuality pairs compared.
    pub pairs_checked: usize,
}

/// `FG(cs) = cs`: the closed-set lists must be identical.
pub fn verify_cls_roundtrip(cs: &ClosureSpace) -> Result<RoundTripReport> {
    let back = functor_f_obj(&functor_g_obj(cs));
    if back.points() != cs.points() {
        return Err(Error::RoundTripFailure { discrepancy: "FG changed the point universe".into() });
    }
    if let Some((i, (x, y))) = back.closed().iter().zip(cs.closed()).enumerate().find(|(_, (x, y))| x != y) {
        return Err(Error::RoundTripFailure {
            discrepancy: format!("closed set #{i}: FG gives {}, expected {}", cs.format(x), cs.format(y)),
        });
    }
    if back.closed().len() != cs.closed().len() {
        return Err(Error::RoundTripFailure {
            discrepancy: format!("FG has {} closed sets, expected {}", back.closed().len(), cs.closed().len()),
        });
    }
    Ok(RoundTripReport {
        states: cs.len(),
        properties: cs.closed().len(),
        pairs_checked: cs.len() * cs.closed().len(),
    })
}

/// `GF(sps) ≅ sps` via `(id, κ)`: κ is an order isomorphism `L -> κ(L)`,
/// `a ∈ ξ(p) ⇔ κ(a) ∈ ξ̄(p)`, and `(id, κ)` is an SP-isomorphism.
pub fn verify_sps_roundtrip(sps: &StatePropertySystem) -> Result<RoundTripReport> {
    let cs = functor_f_obj(sps);
    let gf = functor_g_obj(&cs);
    let lattice = sps.lattice();
    let fail = |d: String| Err(Error::RoundTripFailure { discrepancy: d });

    if cs.closed().len() != lattice.size() {
        return fail(format!("κ(L) has {} members for {} properties", cs.closed().len(), lattice.size()));
    }
    // n: L(GF) -> L, κ(a) ↦ a
    let mut to_sps = vec![PropertyId(0); lattice.size()];
    let mut kappa = Vec::with_capacity(lattice.size());
    for a in lattice.ids() {
        let Some(i) = cs.position(sps.cartan(a)) else {
            return fail(format!("κ({}) is not a closed set of F", sps.property_name(a)));
        };
        to_sps[i] = a;
        kappa.push(PropertyId(i));
    }
    for a in lattice.ids() {
        for b in lattice.ids() {
            if lattice.leq(a, b) != gf.lattice().leq(kappa[a.0], kappa[b.0]) {
                return fail(format!(
                    "κ is not an order isomorphism at ({}, {})",
                    sps.property_name(a),
                    sps.property_name(b)
                ));
            }
        }
    }
    for p in sps.state_ids() {
        for a in lattice.ids() {
            if sps.is_actual(p, a) != gf.is_actual(p, kappa[a.0]) {
                return fail(format!(
                    "{} ∈ ξ({}) disagrees with κ({}) ∈ ξ̄({})",
                    sps.property_name(a),
                    sps.state_name(p),
                    sps.property_name(a),
                    sps.state_name(p)
                ));
            }
        }
    }
    // (id, κ⁻¹): sps -> GF(sps) has n: L(GF) -> L
    let forward = SpMorphism { state_map: sps.state_ids().collect(), property_map: to_sps };
    if !is_sp_isomorphism(sps, &gf, &forward)? {
        return fail("(id, κ) is not an SP-isomorphism".into());
    }
    Ok(RoundTripReport {
        states: sps.states().len(),
        properties: lattice.size(),
        pairs_checked: sps.states().len() * lattice.size(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closure::tests::ex5_space;
    use crate::sps::tests::ex5;

    fn pid(s: &StatePropertySystem, n: &str) -> PropertyId {
        PropertyId(s.lattice().elements().index_of(n).unwrap())
    }

    #[test]
    fn f_of_ex5_is_listed_family() {
        let cs = functor_f_obj(&ex5());
        assert_eq!(cs, ex5_space());
        let listed: Vec<String> = cs.closed().iter().map(|f| cs.format(f)).collect();
        assert_eq!(listed, vec!["{}", "{r}", "{p,q}", "{s,t}", "{p,q,r}", "{p,q,r,s,t}"]);
    }

    #[test]
    fn g_of_ex5_space() {
        let cs = ex5_space();
        let g = functor_g_obj(&cs);
        // closed sets containing p, enumerated by hand: {p,q}, {p,q,r}, Σ
        assert_eq!(g.format_properties(g.xi(StateId(0))), "{{p,q},{p,q,r},{p,q,r,s,t}}");
        // meet is intersection, join is closure of union
        let l = g.lattice();
        let (r, st) = (PropertyId(1), PropertyId(3));
        assert_eq!(l.meet(r, st), l.bottom());
        assert_eq!(cs.closed()[l.join(r, st).0], cs.closure(&cs.closed()[1].union(&cs.closed()[3])));
    }

    #[test]
    fn g_of_indiscrete() {
        let cs = ClosureSpace::indiscrete(Universe::new(["x", "y", "z"]).unwrap());
        let g = functor_g_obj(&cs);
        for p in g.state_ids() {
            assert_eq!(g.xi(p).iter().collect::<Vec<_>>(), vec![g.lattice().top().0]);
        }
    }

    #[test]
    fn degenerate_f() {
        let cs = ClosureSpace::indiscrete(Universe::new(Vec::<String>::new()).unwrap());
        let g = functor_g_obj(&cs);
        assert_eq!(g.lattice().size(), 1);
        assert_eq!(functor_f_obj(&g), cs);
    }

    #[test]
    fn sp_morphism_checks() {
        let s = ex5();
        assert!(is_sp_morphism(&s, &s, &SpMorphism::identity(&s)).unwrap().holds());

        // n sends d to 0, everything else fixed: d ∈ ξ(p) but 0 ∉ ξ(p)
        let mut bad = SpMorphism::identity(&s);
        bad.property_map[pid(&s, "d").0] = s.lattice().bottom();
        let w = *is_sp_morphism(&s, &s, &bad).unwrap().witness().unwrap();
        assert_eq!(s.property_name(w.property), "d");
        assert!(s.is_actual(w.state, pid(&s, "d")));
        // every state where d is actual is a witness; r is one of them
        for st in ["p", "q", "r"] {
            let p = StateId(s.states().index_of(st).unwrap());
            assert!(s.is_actual(p, pid(&s, "d")) && !s.is_actual(p, s.lattice().bottom()));
        }

        let short = SpMorphism { state_map: vec![StateId(0)], property_map: vec![] };
        assert!(matches!(is_sp_morphism(&s, &s, &short), Err(Error::UniverseMismatch { .. })));
    }

    #[test]
    fn continuity_checks() {
        let cs = ex5_space();
        assert!(is_continuous(&cs, &cs, &ContinuousMap::identity(&cs)).unwrap().holds());

        let point = ClosureSpace::indiscrete(Universe::new(["*"]).unwrap());
        let constant = ContinuousMap { map: vec![StateId(0); 5] };
        assert!(is_continuous(&cs, &point, &constant).unwrap().holds());

        // swap r and s: preimage of {r} is {s}
        let swap = ContinuousMap { map: [0, 1, 3, 2, 4].map(StateId).to_vec() };
        let w = is_continuous(&cs, &cs, &swap).unwrap();
        assert_eq!(cs.format(w.witness().unwrap()), "{r}");
    }

    #[test]
    fn functors_on_identities() {
        let s = ex5();
        let cs = functor_f_obj(&s);
        assert_eq!(functor_f_mor(&s, &s, &SpMorphism::identity(&s)).unwrap(), ContinuousMap::identity(&cs));
        let g = functor_g_obj(&cs);
        assert_eq!(functor_g_mor(&cs, &cs, &ContinuousMap::identity(&cs)).unwrap(), SpMorphism::identity(&g));

        let swap = ContinuousMap { map: [0, 1, 3, 2, 4].map(StateId).to_vec() };
        assert!(matches!(functor_g_mor(&cs, &cs, &swap), Err(Error::InvalidInput { .. })));
        let mut bad = SpMorphism::identity(&s);
        bad.property_map[pid(&s, "d").0] = s.lattice().bottom();
        assert!(matches!(functor_f_mor(&s, &s, &bad), Err(Error::InvalidInput { .. })));
    }

    #[test]
    fn roundtrips() {
        let s = ex5();
        let cs = ex5_space();
        assert_eq!(verify_cls_roundtrip(&cs).unwrap().properties, 6);
        assert_eq!(verify_sps_roundtrip(&s).unwrap().pairs_checked, 30);
        let two = ClosureSpace::indiscrete(Universe::new(["x", "y"]).unwrap());
        verify_sps_roundtrip(&functor_g_obj(&two)).unwrap();
        verify_cls_roundtrip(&two).unwrap();
    }

    #[test]
    fn forced_property_map() {
        let s = ex5();
        let m: Vec<StateId> = s.state_ids().collect();
        assert_eq!(sp_morphism_for_state_map(&s, &s, &m).unwrap(), Some(SpMorphism::identity(&s)));
        let swap = [0, 1, 3, 2, 4].map(StateId);
        assert_eq!(sp_morphism_for_state_map(&s, &s, &swap).unwrap(), None);
    }

    #[test]
    fn isomorphism_requires_bijection() {
        let s = ex5();
        assert!(is_sp_isomorphism(&s, &s, &SpMorphism::identity(&s)).unwrap());
        let mut collapse = SpMorphism::identity(&s);
        collapse.state_map[1] = StateId(0);
        assert!(!is_sp_isomorphism(&s, &s, &collapse).unwrap());
    }
}
