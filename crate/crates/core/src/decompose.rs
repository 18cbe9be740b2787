//! Connection components and the decomposition of a state property system into
//! pure nonclassical components plus a totally classical part; ap-subsystems and
//! their embeddings; the d-classical property lattice and d-classical part.

use crate::bitset::{BitSet, PropertyId, PropertySet, StateId, StateSet, Universe};
use crate::categorical::{functor_f_obj, is_sp_morphism, Check, SpMorphism};
use crate::classify::{atomistic_conditions, d_classical_properties, induced_connected, is_connected};
use crate::closure::ClosureSpace;
use crate::error::{Error, Result};
use crate::lattice::FiniteLattice;
use crate::sps::{validate_sps, StatePropertySystem};
use crate::Limits;

/// Subset enumeration works on 64-bit masks.
const MASK_LIMIT: usize = 63;

fn check_cap(n: usize, limits: &Limits) -> Result<()> {
    let cap = limits.max_states.min(MASK_LIMIT);
    if n > cap {
        return Err(Error::ExhaustiveCapExceeded { size: n, cap });
    }
    Ok(())
}

/// Connectivity of induced subspaces over masks, memoized per subset.
struct Connectivity {
    closed: Vec<u64>,
    memo: Vec<u8>,
    traces: Vec<u64>,
}

impl Connectivity {
    fn new(cs: &ClosureSpace) -> Self {
        Connectivity {
            closed: cs.closed().iter().map(BitSet::to_mask).collect(),
            memo: vec![0; 1usize << cs.len()],
            traces: Vec::with_capacity(cs.closed().len()),
        }
    }

    fn connected(&mut self, a: u64) -> bool {
        match self.memo[a as usize] {
            1 => return true,
            2 => return false,
            _ => {}
        }
        self.traces.clear();
        self.traces.extend(self.closed.iter().map(|f| f & a));
        self.traces.sort_unstable();
        self.traces.dedup();
        let t = &self.traces;
        let result = t.iter().all(|&c| c == 0 || c == a || t.binary_search(&(a & !c)).is_err());
        self.memo[a as usize] = if result { 1 } else { 2 };
        result
    }

    /// Union of all connected subsets containing `x`.
    fn component(&mut self, n: usize, x: usize) -> u64 {
        let bit = 1u64 << x;
        let mut union = 0;
        for a in 0..1u64 << n {
            if a & bit != 0 && self.connected(a) {
                union |= a;
            }
        }
        union
    }
}

fn component_checked(cs: &ClosureSpace, conn: &mut Connectivity, x: StateId) -> Result<StateSet> {
    let k = conn.component(cs.len(), x.0);
    let set = BitSet::from_mask(cs.len(), k);
    if !conn.connected(k) {
        return Err(Error::inconsistency(
            "a connection component is connected",
            format!("component {} of {} is not connected", cs.format(&set), cs.points().name(x.0)),
        ));
    }
    if !cs.is_closed(&set) {
        return Err(Error::inconsistency(
            "connection components are closed",
            format!("component {} of {} is not closed", cs.format(&set), cs.points().name(x.0)),
        ));
    }
    Ok(set)
}

/// `K(x)`: the union of all connected subsets containing `x`, by exhaustive
/// enumeration of subsets. The result is checked to be connected and closed.
pub fn component_of(cs: &ClosureSpace, x: StateId, limits: &Limits) -> Result<StateSet> {
    check_cap(cs.len(), limits)?;
    component_checked(cs, &mut Connectivity::new(cs), x)
}

/// Intersection of all clopen sets containing `x`.
pub fn quasi_component(cs: &ClosureSpace, x: StateId) -> StateSet {
    cs.closed()
        .iter()
        .filter(|f| f.contains(x.0) && cs.is_closed(&f.complement()))
        .fold(cs.full(), |acc, f| acc.intersection(f))
}

/// The partition of a space into connection components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentPartition {
    /// Components ordered by their smallest point.
    pub classes: Vec<StateSet>,
    /// Index into `classes` for every point.
    pub class_of: Vec<usize>,
    /// For each class, the property whose Cartan image it is: an index into
    /// the closed-set list of the space (the property numbering of `G(cs)`),
    /// or into the lattice when produced by [`decompose`].
    pub atom_of: Vec<PropertyId>,
}

/// All connection components, with partition, closedness, connectedness and
/// maximality checked.
pub fn components(cs: &ClosureSpace, limits: &Limits) -> Result<ComponentPartition> {
    check_cap(cs.len(), limits)?;
    let mut conn = Connectivity::new(cs);
    let mut classes: Vec<StateSet> = Vec::new();
    let mut class_of = Vec::with_capacity(cs.len());
    for x in cs.point_ids() {
        let k = component_checked(cs, &mut conn, x)?;
        match classes.iter().position(|c| *c == k) {
            Some(i) => class_of.push(i),
            None => {
                if let Some(c) = classes.iter().find(|c| !c.is_disjoint(&k)) {
                    return Err(Error::inconsistency(
                        "connection components partition the space",
                        format!("{} and {} overlap", cs.format(c), cs.format(&k)),
                    ));
                }
                class_of.push(classes.len());
                classes.push(k);
            }
        }
    }
    for (i, c) in classes.iter().enumerate() {
        if !c.contains(cs.point_ids().position(|p| class_of[p.0] == i).unwrap()) {
            return Err(Error::inconsistency("x ∈ K(x)", cs.format(c)));
        }
        for y in c.complement().iter() {
            let mut grown = c.clone();
            grown.insert(y);
            if conn.connected(grown.to_mask()) {
                return Err(Error::inconsistency(
                    "connection components are maximal connected sets",
                    format!("{} stays connected after adding {}", cs.format(c), cs.points().name(y)),
                ));
            }
        }
    }
    let atom_of = classes
        .iter()
        .map(|c| cs.position(c).map(PropertyId).ok_or_else(|| Error::AtomNotFound { class: cs.format(c) }))
        .collect::<Result<_>>()?;
    Ok(ComponentPartition { classes, class_of, atom_of })
}

/// The ap-subsystem generated by a property `a`: states `κ(a)`, lattice
/// segment `[0, a]`, and `ξ'(p) = ξ(p) ∩ [0, a]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApSubsystem {
    pub generator: PropertyId,
    pub system: StatePropertySystem,
    /// Parent state of each state of the subsystem.
    pub states: Vec<StateId>,
    /// Parent property of each property of the subsystem.
    pub properties: Vec<PropertyId>,
}

impl ApSubsystem {
    /// `(m, n)` with `m` the inclusion of states and `n(c) = a ∧ c`.
    pub fn embedding(&self, parent: &StatePropertySystem) -> SpMorphism {
        let l = parent.lattice();
        let mut local = vec![None; l.size()];
        for (i, p) in self.properties.iter().enumerate() {
            local[p.0] = Some(PropertyId(i));
        }
        SpMorphism {
            state_map: self.states.clone(),
            property_map: l
                .ids()
                .map(|c| local[l.meet(self.generator, c).0].expect("a ∧ c lies in [0, a]"))
                .collect(),
        }
    }
}

pub fn ap_subsystem(sps: &StatePropertySystem, a: PropertyId) -> Result<ApSubsystem> {
    let extent = sps.cartan(a);
    let segment = sps.lattice().down_set(a);
    let (lattice, properties) = sps.lattice().subposet(segment)?;
    let mut local = vec![usize::MAX; sps.lattice().size()];
    for (i, p) in properties.iter().enumerate() {
        local[p.0] = i;
    }
    let states: Vec<StateId> = extent.iter().map(StateId).collect();
    let xi = states
        .iter()
        .map(|&p| BitSet::from_indices(properties.len(), sps.xi(p).intersection(segment).iter().map(|c| local[c])))
        .collect();
    let system = validate_sps(sps.states().restrict(extent), lattice, xi).map_err(|e| {
        Error::inconsistency("an ap-subsystem is a state property system", format!("generator {}: {e}", sps.property_name(a)))
    })?;
    Ok(ApSubsystem { generator: a, system, states, properties })
}

/// The embedding `(m, n)` of the ap-subsystem generated by `a`, checked to be an SP-morphism.
pub fn embedding_morphism(sps: &StatePropertySystem, a: PropertyId) -> Result<SpMorphism> {
    let ap = ap_subsystem(sps, a)?;
    let mor = ap.embedding(sps);
    if let Check::Fails(w) = is_sp_morphism(&ap.system, sps, &mor)? {
        return Err(Error::inconsistency(
            "the ap-subsystem embedding is an SP-morphism",
            format!(
                "generator {}: fails at property {} and state {}",
                sps.property_name(a),
                sps.property_name(w.property),
                ap.system.state_name(w.state)
            ),
        ));
    }
    Ok(mor)
}

/// Only `0` and `I` are d-classical.
pub fn is_pure_nonclassical(sps: &StatePropertySystem) -> Result<bool> {
    let l = sps.lattice();
    let d = d_classical_properties(sps)?;
    Ok(d.iter().all(|a| a == l.bottom().0 || a == l.top().0))
}

/// The only segments `[0, a]` whose ap-subsystem is pure nonclassical are
/// `{0}` and `{0, a}` with `a` an atom.
pub fn is_totally_classical(sps: &StatePropertySystem) -> Result<bool> {
    let l = sps.lattice();
    for a in l.ids().filter(|&a| a != l.bottom()) {
        if !l.is_atom(a) && is_pure_nonclassical(&ap_subsystem(sps, a)?.system)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// One pure nonclassical component with its embedding into the parent system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub ap: ApSubsystem,
    pub embedding: SpMorphism,
}

/// A join of component atoms whose Cartan image cuts through a component, which
/// makes `ξ(p) ∩ C` depend on the choice of `p` inside that component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JoinDefect {
    pub property: PropertyId,
    pub component: usize,
}

/// The totally classical system `(Ω, C, η)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalPart {
    pub system: StatePropertySystem,
    /// Parent property of each element of `C`.
    pub members: Vec<PropertyId>,
    /// All joins of sets of component atoms.
    pub atom_joins: PropertySet,
    /// Set when some join of atoms is not a union of components. Such joins
    /// are left out of `C`; otherwise `C` is exactly `atom_joins`.
    pub defect: Option<JoinDefect>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    /// Components of `F(sps)`; `atom_of` holds the generating properties `s(ω)`.
    pub partition: ComponentPartition,
    pub components: Vec<Component>,
    pub classical: ClassicalPart,
}

pub fn decompose(sps: &StatePropertySystem, limits: &Limits) -> Result<Decomposition> {
    let cs = functor_f_obj(sps);
    let mut partition = components(&cs, limits)?;
    for (class, atom) in partition.classes.iter().zip(partition.atom_of.iter_mut()) {
        *atom = sps.property_with_extent(class).ok_or_else(|| Error::AtomNotFound { class: cs.format(class) })?;
    }

    let mut comps = Vec::with_capacity(partition.classes.len());
    for (class, &atom) in partition.classes.iter().zip(&partition.atom_of) {
        let ap = ap_subsystem(sps, atom)?;
        if ap.states != class.iter().map(StateId).collect::<Vec<_>>() {
            return Err(Error::inconsistency("Σ_ω = κ(s(ω))", sps.format_states(class)));
        }
        if !is_pure_nonclassical(&ap.system)? {
            return Err(Error::inconsistency(
                "component systems are pure nonclassical",
                format!("component {}", sps.format_states(class)),
            ));
        }
        let embedding = embedding_morphism(sps, atom)?;
        comps.push(Component { ap, embedding });
    }

    let classical = classical_part(sps, &partition)?;
    Ok(Decomposition { partition, components: comps, classical })
}

fn classical_part(sps: &StatePropertySystem, partition: &ComponentPartition) -> Result<ClassicalPart> {
    let l = sps.lattice();
    let mut atom_joins = BitSet::singleton(l.size(), l.bottom().0);
    for &s in &partition.atom_of {
        let reached: Vec<usize> = atom_joins.iter().map(|x| l.join(PropertyId(x), s).0).collect();
        for x in reached {
            atom_joins.insert(x);
        }
    }

    let is_union_of_classes = |extent: &StateSet| partition.classes.iter().position(|w| !(w.is_subset(extent) || w.is_disjoint(extent)));
    let mut kept = atom_joins.clone();
    let mut defect = None;
    for c in atom_joins.iter() {
        if let Some(component) = is_union_of_classes(sps.cartan(PropertyId(c))) {
            defect.get_or_insert(JoinDefect { property: PropertyId(c), component });
            kept.remove(c);
        }
    }

    let (lattice, members) = l.subposet(&kept).map_err(|e| Error::inconsistency("C is a complete lattice", e.to_string()))?;
    let mut local = vec![usize::MAX; l.size()];
    for (i, p) in members.iter().enumerate() {
        local[p.0] = i;
    }
    let omega = Universe::new(partition.classes.iter().map(|w| sps.format_states(w))).expect("components are distinct");
    let mut eta = Vec::with_capacity(partition.classes.len());
    for w in &partition.classes {
        let mut images = w.iter().map(|p| sps.xi(StateId(p)).intersection(&kept));
        let first = images.next().expect("components are nonempty");
        if images.any(|other| other != first) {
            return Err(Error::inconsistency("η is well defined", format!("ξ(p) ∩ C varies over {}", sps.format_states(w))));
        }
        eta.push(BitSet::from_indices(members.len(), first.iter().map(|c| local[c])));
    }
    let system = validate_sps(omega, lattice, eta)
        .map_err(|e| Error::inconsistency("(Ω, C, η) is a state property system", e.to_string()))?;

    let conditions = atomistic_conditions(&system);
    if conditions != (true, true, true) {
        return Err(Error::inconsistency("(Ω, C, η) is atomistic", format!("{conditions:?}")));
    }
    if !is_totally_classical(&system)? {
        return Err(Error::inconsistency("(Ω, C, η) is totally classical", String::new()));
    }
    Ok(ClassicalPart { system, members, atom_joins, defect })
}

/// `C'`: the meet closure of the d-classical properties (the empty meet giving `I`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DClassicalLattice {
    /// Parent property of each element of `C'`.
    pub members: Vec<PropertyId>,
    /// Order and meets inherited; joins are `∨ a_i = ∧{b ∈ C' | a_i <= b}`.
    pub lattice: FiniteLattice,
    /// Parent-property pairs whose join in `C'` differs from their join in `L`.
    pub join_differs: Vec<(PropertyId, PropertyId)>,
}

pub fn d_classical_lattice(sps: &StatePropertySystem) -> Result<DClassicalLattice> {
    let l = sps.lattice();
    let mut closure = d_classical_properties(sps)?;
    closure.insert(l.top().0);
    loop {
        let members: Vec<usize> = closure.iter().collect();
        let before = closure.count();
        for (i, &a) in members.iter().enumerate() {
            for &b in &members[i + 1..] {
                closure.insert(l.meet(PropertyId(a), PropertyId(b)).0);
            }
        }
        if closure.count() == before {
            break;
        }
    }

    let (lattice, members) = l.subposet(&closure).map_err(|e| Error::inconsistency("C' is a complete lattice", e.to_string()))?;
    let mut join_differs = Vec::new();
    for (i, &a) in members.iter().enumerate() {
        for (j, &b) in members.iter().enumerate() {
            let (x, y) = (PropertyId(i), PropertyId(j));
            if members[lattice.meet(x, y).0] != l.meet(a, b) {
                return Err(Error::inconsistency("C' inherits meets", format!("{} ∧ {}", l.name(a), l.name(b))));
            }
            let formula = l.meet_all(members.iter().copied().filter(|&m| l.leq(a, m) && l.leq(b, m)));
            if members[lattice.join(x, y).0] != formula {
                return Err(Error::inconsistency(
                    "join in C' is the meet of common upper bounds",
                    format!("{} ∨ {}", l.name(a), l.name(b)),
                ));
            }
            if i < j && formula != l.join(a, b) {
                join_differs.push((a, b));
            }
        }
    }
    Ok(DClassicalLattice { members, lattice, join_differs })
}

/// `(Σ, C', ξ')` with `ξ'(q) = ξ(q) ∩ C'`.
pub fn d_classical_part(sps: &StatePropertySystem) -> Result<StatePropertySystem> {
    let c = d_classical_lattice(sps)?;
    let mut local = vec![usize::MAX; sps.lattice().size()];
    for (i, p) in c.members.iter().enumerate() {
        local[p.0] = i;
    }
    let xi = sps
        .state_ids()
        .map(|p| BitSet::from_indices(c.members.len(), sps.xi(p).iter().filter(|&a| local[a] != usize::MAX).map(|a| local[a])))
        .collect();
    validate_sps(sps.states().clone(), c.lattice, xi)
        .map_err(|e| Error::inconsistency("the d-classical part is a state property system", e.to_string()))
}

/// All connection components of `cs` are singletons (or `cs` is empty).
pub fn is_totally_disconnected(cs: &ClosureSpace, limits: &Limits) -> Result<bool> {
    Ok(components(cs, limits)?.classes.iter().all(|c| c.count() == 1))
}

/// Convenience: `is_connected` on the subspace induced by each component class.
pub fn classes_connected(cs: &ClosureSpace, partition: &ComponentPartition) -> bool {
    partition.classes.iter().all(|c| induced_connected(cs, c) && is_connected(&cs.subspace(c).0))
}
