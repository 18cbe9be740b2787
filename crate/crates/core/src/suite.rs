//! Batch verification of the correspondence and decomposition theorems on
//! closure spaces, plus an exhaustive functoriality sweep over small spaces.
//!
//! Every check recomputes the relevant quantities from the public API and
//! compares them; any disagreement is recorded as a failure with a
//! description of the first offending instance.

use std::fmt;

use crate::bitset::{BitSet, PropertyId, StateId};
use crate::categorical::{
    functor_f_mor, functor_f_obj, functor_g_mor, functor_g_obj, is_continuous, is_sp_morphism,
    sp_morphism_for_state_map, verify_cls_roundtrip, verify_sps_roundtrip, ContinuousMap, SpMorphism,
};
use crate::classify::{
    atomistic_conditions, classify, d_classical_complement, is_clopen, is_connected, is_connected_subset,
    is_s_classical, is_t1, is_topology, is_weakly_zero_dimensional, ssr, ssr_forms, strongest_property,
};
use crate::closure::ClosureSpace;
use crate::decompose::{
    ap_subsystem, d_classical_lattice, d_classical_part, decompose, is_pure_nonclassical, is_totally_classical,
    is_totally_disconnected, quasi_component,
};
use crate::parallel::Execution;
use crate::sps::StatePropertySystem;
use crate::Limits;

/// The theorem families checked on every instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Theorem {
    /// Definitional ssr, `κ(a∨b) = κ(a)∪κ(b)` and `κ(a)∪κ(b) ∈ F` agree.
    Ssr,
    /// `a` is d-classical iff `κ(a)` is clopen.
    DClassicalClopen,
    /// Complements are unique, involutive, antitone, and `κ(a^c) = κ(a)^C`.
    Complements,
    /// The three atomistic conditions agree.
    AtomisticTfae,
    /// s-classical iff `F(sps)` is a topology.
    SClassicalTopology,
    /// `FG = id` and `GF ≅ id` via κ.
    RoundTrip,
    /// Components and classical part have the promised properties.
    Decomposition,
    /// Further invariants: strongest properties, d-classical part,
    /// ap-subsystems as closed subspaces, quasi-components.
    Supplementary,
}

impl Theorem {
    pub const ALL: [Theorem; 8] = [
        Theorem::Ssr,
        Theorem::DClassicalClopen,
        Theorem::Complements,
        Theorem::AtomisticTfae,
        Theorem::SClassicalTopology,
        Theorem::RoundTrip,
        Theorem::Decomposition,
        Theorem::Supplementary,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Theorem::Ssr => "ssr three-way equivalence",
            Theorem::DClassicalClopen => "d-classical iff clopen",
            Theorem::Complements => "complement laws",
            Theorem::AtomisticTfae => "atomistic TFAE",
            Theorem::SClassicalTopology => "s-classical iff topology",
            Theorem::RoundTrip => "FG identity, GF isomorphism",
            Theorem::Decomposition => "decomposition validity",
            Theorem::Supplementary => "supplementary invariants",
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

type Outcome = std::result::Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: fmt::Display>(e: E) -> String {
    e.to_string()
}

/// Results of all checks on one closure space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceOutcome {
    pub results: Vec<(Theorem, Outcome)>,
    /// Some join of component atoms has a Cartan image that cuts a component.
    pub join_defect: bool,
    /// Points whose quasi-component strictly contains their component.
    pub strict_quasi_components: usize,
}

struct Ctx<'a> {
    cs: &'a ClosureSpace,
    sps: StatePropertySystem,
    limits: &'a Limits,
}

fn check_ssr(c: &Ctx) -> Outcome {
    let l = c.sps.lattice();
    for a in l.ids() {
        for b in l.ids() {
            let forms = ssr_forms(&c.sps, a, b);
            ensure(forms.agree(), || {
                format!("ssr forms disagree at ({}, {}): {forms:?}", c.sps.property_name(a), c.sps.property_name(b))
            })?;
            ensure(forms.definitional == ssr_forms(&c.sps, b, a).definitional, || "ssr is not symmetric".into())?;
        }
        ensure(ssr(&c.sps, a, l.bottom()).map_err(err)?, || format!("ssr({}, 0) fails", c.sps.property_name(a)))?;
    }
    Ok(())
}

fn check_dclassical_clopen(c: &Ctx) -> Outcome {
    for a in c.sps.lattice().ids() {
        let d = d_classical_complement(&c.sps, a).map_err(err)?.is_some();
        let clopen = is_clopen(c.cs, c.sps.cartan(a));
        ensure(d == clopen, || format!("{}: d-classical = {d}, clopen = {clopen}", c.sps.property_name(a)))?;
    }
    Ok(())
}

fn check_complements(c: &Ctx) -> Outcome {
    let s = &c.sps;
    let l = s.lattice();
    let mut comp = vec![None; l.size()];
    for a in l.ids() {
        comp[a.0] = d_classical_complement(s, a).map_err(err)?;
    }
    ensure(comp[l.bottom().0] == Some(l.top()) && comp[l.top().0] == Some(l.bottom()), || {
        "0 and I are not complementary d-classical properties".into()
    })?;
    for a in l.ids() {
        let Some(ac) = comp[a.0] else { continue };
        let name = || s.property_name(a).to_string();
        ensure(comp[ac.0] == Some(a), || format!("(a^c)^c ≠ a for a = {}", name()))?;
        ensure(*s.cartan(ac) == s.cartan(a).complement(), || format!("κ(a^c) ≠ κ(a)^C for a = {}", name()))?;
        ensure(l.join(a, ac) == l.top() && l.meet(a, ac) == l.bottom(), || format!("a^c is not a complement of {}", name()))?;
        let others = l
            .ids()
            .filter(|&b| l.join(a, b) == l.top() && l.meet(a, b) == l.bottom() && ssr_forms(s, a, b).definitional)
            .count();
        ensure(others == 1, || format!("{} has {others} complements", name()))?;
        for b in l.ids().filter(|&b| l.leq(a, b)) {
            if let Some(bc) = comp[b.0] {
                ensure(l.leq(bc, ac), || format!("complement is not antitone at {} <= {}", name(), s.property_name(b)))?;
            }
        }
    }
    Ok(())
}

fn check_atomistic(c: &Ctx) -> Outcome {
    let (a, b, t) = atomistic_conditions(&c.sps);
    ensure(a == b && b == t && t == is_t1(c.cs), || format!("atomistic conditions ({a}, {b}, {t})"))
}

fn check_s_classical(c: &Ctx) -> Outcome {
    let s = is_s_classical(&c.sps).map_err(err)?;
    let t = is_topology(c.cs);
    ensure(s == t, || format!("s-classical = {s}, topology = {t}"))
}

fn check_roundtrip(c: &Ctx) -> Outcome {
    verify_cls_roundtrip(c.cs).map_err(err)?;
    verify_sps_roundtrip(&c.sps).map_err(err)?;
    let f = functor_f_obj(&c.sps);
    ensure(f == *c.cs, || "F(G(cs)) ≠ cs".into())?;
    ensure(functor_f_obj(&functor_g_obj(&f)) == f, || "FGF ≠ F".into())
}

fn check_decomposition(c: &Ctx) -> Outcome {
    let s = &c.sps;
    let d = decompose(s, c.limits).map_err(err)?;
    let classes = &d.partition.classes;

    let mut cover = BitSet::empty(c.cs.len());
    for (i, w) in classes.iter().enumerate() {
        ensure(!w.is_empty(), || "empty component".into())?;
        ensure(cover.is_disjoint(w), || format!("component #{i} overlaps an earlier one"))?;
        cover.union_with(w);
        ensure(c.cs.is_closed(w), || format!("component {} is not closed", c.cs.format(w)))?;
        ensure(is_connected_subset(c.cs, w, c.limits).map_err(err)?, || {
            format!("component {} is not connected", c.cs.format(w))
        })?;
        for y in w.complement().iter() {
            let mut grown = w.clone();
            grown.insert(y);
            ensure(!is_connected_subset(c.cs, &grown, c.limits).map_err(err)?, || {
                format!("component {} is not maximal", c.cs.format(w))
            })?;
        }
        ensure(*s.cartan(d.partition.atom_of[i]) == *w, || "κ(s(ω)) ≠ ω".into())?;
    }
    ensure(cover.is_full(), || "components do not cover the space".into())?;

    for (comp, &atom) in d.components.iter().zip(&d.partition.atom_of) {
        let sys = &comp.ap.system;
        ensure(is_pure_nonclassical(sys).map_err(err)?, || "component is not pure nonclassical".into())?;
        ensure(is_connected(&functor_f_obj(sys)), || "component space is not connected".into())?;
        ensure(is_sp_morphism(sys, s, &comp.embedding).map_err(err)?.holds(), || "embedding is not an SP-morphism".into())?;
        let segment = s.lattice().down_set(atom);
        for p in sys.state_ids() {
            let lifted = BitSet::from_indices(s.lattice().size(), sys.xi(p).iter().map(|x| comp.ap.properties[x].0));
            ensure(lifted == s.xi(comp.ap.states[p.0]).intersection(segment), || "ξ_ω(p) ≠ ξ(p) ∩ L_ω".into())?;
        }
    }

    let cp = &d.classical.system;
    ensure(atomistic_conditions(cp) == (true, true, true), || "classical part is not atomistic".into())?;
    ensure(is_totally_classical(cp).map_err(err)?, || "classical part is not totally classical".into())?;
    ensure(is_totally_disconnected(&functor_f_obj(cp), c.limits).map_err(err)?, || {
        "classical part's space is not totally disconnected".into()
    })?;
    let n = cp.states().len();
    ensure((0..n).all(|i| (i + 1..n).all(|j| cp.xi(StateId(i)) != cp.xi(StateId(j)))), || "η is not injective".into())?;
    ensure(d.classical.defect.is_some() || d.classical.members.len() == d.classical.atom_joins.count(), || {
        "C differs from the atom joins without a recorded defect".into()
    })
}

fn check_supplementary(c: &Ctx, strict_quasi: &mut usize) -> Outcome {
    let s = &c.sps;
    let report = classify(s).map_err(err)?;
    let parts = crate::decompose::components(c.cs, c.limits).map_err(err)?;
    ensure(report.connected == (parts.classes.len() <= 1), || "connected ⇔ at most one component fails".into())?;
    ensure(report.connected == report.is_pure_nonclassical(), || "connected ⇔ pure nonclassical fails".into())?;

    for p in s.state_ids() {
        let sp = strongest_property(s, p);
        ensure(*s.cartan(sp) == c.cs.closure(&BitSet::singleton(c.cs.len(), p.0)), || {
            format!("κ(s_ξ({})) ≠ cl({{{}}})", s.state_name(p), s.state_name(p))
        })?;
    }

    let cl = d_classical_lattice(s).map_err(err)?;
    let l = s.lattice();
    for &a in &cl.members {
        for &b in &cl.members {
            ensure(cl.members.contains(&l.meet(a, b)), || "C' is not meet closed".into())?;
        }
    }
    let part = d_classical_part(s).map_err(err)?;
    ensure(is_weakly_zero_dimensional(&functor_f_obj(&part)), || "d-classical part is not weakly zero-dimensional".into())?;

    for a in l.ids() {
        let ap = ap_subsystem(s, a).map_err(err)?;
        let (sub, inclusion) = c.cs.subspace(s.cartan(a));
        ensure(functor_f_obj(&ap.system) == sub, || format!("F(ap({})) is not the subspace on κ of it", s.property_name(a)))?;
        ensure(ap.system == functor_g_obj(&sub), || format!("ap({}) ≠ G(subspace)", s.property_name(a)))?;
        let emb = ap.embedding(s);
        let f = functor_f_mor(&ap.system, s, &emb).map_err(err)?;
        ensure(f.map == inclusion, || "F of the embedding is not the inclusion".into())?;
        ensure(is_continuous(&sub, c.cs, &f).map_err(err)?.holds(), || "inclusion is not continuous".into())?;
    }

    for x in c.cs.point_ids() {
        let k = &parts.classes[parts.class_of[x.0]];
        let q = quasi_component(c.cs, x);
        ensure(k.is_subset(&q), || format!("component of {} is not inside its quasi-component", c.cs.points().name(x.0)))?;
        if *k != q {
            *strict_quasi += 1;
        }
    }
    Ok(())
}

/// Runs every check on one closure space (through `G`).
pub fn check_space(cs: &ClosureSpace, limits: &Limits) -> InstanceOutcome {
    let ctx = Ctx { cs, sps: functor_g_obj(cs), limits };
    let mut strict = 0;
    let results = vec![
        (Theorem::Ssr, check_ssr(&ctx)),
        (Theorem::DClassicalClopen, check_dclassical_clopen(&ctx)),
        (Theorem::Complements, check_complements(&ctx)),
        (Theorem::AtomisticTfae, check_atomistic(&ctx)),
        (Theorem::SClassicalTopology, check_s_classical(&ctx)),
        (Theorem::RoundTrip, check_roundtrip(&ctx)),
        (Theorem::Decomposition, check_decomposition(&ctx)),
        (Theorem::Supplementary, check_supplementary(&ctx, &mut strict)),
    ];
    let join_defect = decompose(&ctx.sps, limits).map(|d| d.classical.defect.is_some()).unwrap_or(false);
    InstanceOutcome { results, join_defect, strict_quasi_components: strict }
}

/// Pass/fail counts for one theorem family.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Tally {
    pub passed: usize,
    pub failed: usize,
    /// `(instance index, message)` of the first failure.
    pub first_failure: Option<(usize, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub instances: usize,
    pub tallies: Vec<(Theorem, Tally)>,
    /// Instances where some join of component atoms cuts through a component.
    pub join_defects: usize,
    /// Points (over all instances) whose quasi-component is strictly larger than their component.
    pub strict_quasi_components: usize,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.tallies.iter().all(|(_, t)| t.failed == 0)
    }

    pub fn tally(&self, theorem: Theorem) -> &Tally {
        &self.tallies.iter().find(|(t, _)| *t == theorem).expect("every theorem is tallied").1
    }

    pub fn failures(&self) -> usize {
        self.tallies.iter().map(|(_, t)| t.failed).sum()
    }
}

/// Checks every space and aggregates the outcomes in input order.
pub fn run_suite(spaces: &[ClosureSpace], limits: &Limits, exec: Execution) -> SuiteReport {
    let outcomes = exec.map(spaces, |cs| check_space(cs, limits));
    let mut tallies: Vec<(Theorem, Tally)> = Theorem::ALL.iter().map(|&t| (t, Tally::default())).collect();
    let mut join_defects = 0;
    let mut strict = 0;
    for (i, o) in outcomes.into_iter().enumerate() {
        join_defects += o.join_defect as usize;
        strict += o.strict_quasi_components;
        for (theorem, result) in o.results {
            let tally = &mut tallies.iter_mut().find(|(t, _)| *t == theorem).expect("tallied").1;
            match result {
                Ok(()) => tally.passed += 1,
                Err(msg) => {
                    tally.failed += 1;
                    tally.first_failure.get_or_insert((i, msg));
                }
            }
        }
    }
    SuiteReport { instances: spaces.len(), tallies, join_defects, strict_quasi_components: strict }
}

/// Totals of the exhaustive morphism sweep.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MorphismSweep {
    pub spaces: usize,
    /// Point maps examined, over all ordered pairs of spaces.
    pub maps: usize,
    pub continuous: usize,
    /// Composable pairs of continuous maps checked for functoriality.
    pub composable_pairs: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

impl MorphismSweep {
    fn fail(&mut self, msg: String) {
        self.failures += 1;
        self.first_failure.get_or_insert(msg);
    }

    fn absorb(&mut self, other: MorphismSweep) {
        self.maps += other.maps;
        self.continuous += other.continuous;
        self.composable_pairs += other.composable_pairs;
        self.failures += other.failures;
        if self.first_failure.is_none() {
            self.first_failure = other.first_failure;
        }
    }
}

fn map_count(from: usize, to: usize) -> usize {
    to.pow(from as u32)
}

/// The point map with index `code`, read in base `to` (least significant digit first).
fn decode(code: usize, from: usize, to: usize) -> Vec<StateId> {
    let mut c = code;
    (0..from)
        .map(|_| {
            let d = c % to;
            c /= to;
            StateId(d)
        })
        .collect()
}

fn encode(map: &[StateId], to: usize) -> usize {
    map.iter().rev().fold(0, |acc, p| acc * to + p.0)
}

/// For every ordered pair of spaces and every point map between them:
/// continuity agrees with the existence of an SP-morphism over the map,
/// `G(f)` is a valid SP-morphism with `F(G(f)) = f`, non-continuous maps are
/// rejected by `G`, identities go to identities, and for every composable pair
/// `G(g∘f) = G(g)∘G(f)` and `F` of the composite is `g∘f`.
pub fn morphism_sweep(spaces: &[ClosureSpace], exec: Execution) -> MorphismSweep {
    let systems: Vec<StatePropertySystem> = spaces.iter().map(functor_g_obj).collect();
    let k = spaces.len();

    // table[s][t][code] = G(f) when f is continuous
    let tables: Vec<(Vec<Vec<Option<SpMorphism>>>, MorphismSweep)> = exec.map(&(0..k).collect::<Vec<_>>(), |&s| {
        let mut sweep = MorphismSweep::default();
        let (src, gs) = (&spaces[s], &systems[s]);
        let row = (0..k)
            .map(|t| {
                let (dst, gt) = (&spaces[t], &systems[t]);
                (0..map_count(src.len(), dst.len()))
                    .map(|code| {
                        sweep.maps += 1;
                        let f = ContinuousMap { map: decode(code, src.len(), dst.len()) };
                        let tag = || format!("spaces #{s} -> #{t}, map {:?}", f.map);
                        let continuous = match is_continuous(src, dst, &f) {
                            Ok(c) => c.holds(),
                            Err(e) => {
                                sweep.fail(format!("{}: {e}", tag()));
                                return None;
                            }
                        };
                        let forced = sp_morphism_for_state_map(gs, gt, &f.map).ok().flatten();
                        let g = functor_g_mor(src, dst, &f);
                        if !continuous {
                            if g.is_ok() || forced.is_some() {
                                sweep.fail(format!("{}: not continuous but has an SP-morphism", tag()));
                            }
                            return None;
                        }
                        sweep.continuous += 1;
                        let Ok(g) = g else {
                            sweep.fail(format!("{}: G rejects a continuous map", tag()));
                            return None;
                        };
                        if !matches!(is_sp_morphism(gs, gt, &g), Ok(c) if c.holds()) {
                            sweep.fail(format!("{}: G(f) is not an SP-morphism", tag()));
                        }
                        if forced.as_ref() != Some(&g) {
                            sweep.fail(format!("{}: G(f) is not the unique SP-morphism over f", tag()));
                        }
                        match functor_f_mor(gs, gt, &g) {
                            Ok(back) if back == f => {}
                            _ => sweep.fail(format!("{}: F(G(f)) ≠ f", tag())),
                        }
                        if s == t && f == ContinuousMap::identity(src) && g != SpMorphism::identity(gs) {
                            sweep.fail(format!("{}: G(id) is not the identity", tag()));
                        }
                        Some(g)
                    })
                    .collect()
            })
            .collect();
        (row, sweep)
    });

    let mut total = MorphismSweep { spaces: k, ..MorphismSweep::default() };
    let mut rows = Vec::with_capacity(k);
    for (row, sweep) in tables {
        total.absorb(sweep);
        rows.push(row);
    }

    let compositions = exec.map(&(0..k).collect::<Vec<_>>(), |&s| {
        let mut sweep = MorphismSweep::default();
        for t in 0..k {
            for u in 0..k {
                let (ns, nt, nu) = (spaces[s].len(), spaces[t].len(), spaces[u].len());
                for (cf, f) in rows[s][t].iter().enumerate() {
                    let Some(f) = f else { continue };
                    for (cg, g) in rows[t][u].iter().enumerate() {
                        let Some(g) = g else { continue };
                        sweep.composable_pairs += 1;
                        let h: Vec<StateId> = f.state_map.iter().map(|p| g.state_map[p.0]).collect();
                        let Some(gh) = &rows[s][u][encode(&h, nu)] else {
                            sweep.fail(format!("spaces #{s} -> #{t} -> #{u}, maps {cf}, {cg}: composite not continuous"));
                            continue;
                        };
                        // G(g∘f) = G(f) followed by G(g): n_{g∘f} = n_f ∘ n_g
                        let props_ok = gh
                            .property_map
                            .iter()
                            .zip(&g.property_map)
                            .all(|(x, y): (&PropertyId, &PropertyId)| *x == f.property_map[y.0]);
                        if !props_ok || gh.state_map != h {
                            sweep.fail(format!("spaces #{s} -> #{t} -> #{u}, maps {cf}, {cg}: G(g∘f) ≠ G(g)∘G(f)"));
                        }
                        debug_assert!(ns == f.state_map.len() && nt == g.state_map.len());
                    }
                }
            }
        }
        sweep
    });
    for sweep in compositions {
        total.absorb(sweep);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closure::tests::ex5_space;
    use crate::generate::{all_closure_spaces_up_to, random_batch, SpaceParams};

    #[test]
    fn ex5_passes_everything() {
        let o = check_space(&ex5_space(), &Limits::default());
        for (t, r) in &o.results {
            assert_eq!(r, &Ok(()), "{t}");
        }
        assert!(!o.join_defect);
        // p, q, r: quasi-component {p,q,r}
        assert_eq!(o.strict_quasi_components, 3);
    }

    #[test]
    fn small_exhaustive_suite() {
        let spaces = all_closure_spaces_up_to(3);
        let r = run_suite(&spaces, &Limits::default(), Execution::Sequential);
        assert_eq!(r.instances, 51);
        assert!(r.all_passed(), "{:?}", r.tallies);
        assert_eq!(r, run_suite(&spaces, &Limits::default(), Execution::Parallel));
    }

    #[test]
    fn random_suite_smoke() {
        let spaces = random_batch(3, 40, SpaceParams::default());
        let r = run_suite(&spaces, &Limits::default(), Execution::Parallel);
        assert!(r.all_passed(), "{:?}", r.tallies);
    }

    #[test]
    fn morphism_sweep_on_two_point_spaces() {
        let spaces = all_closure_spaces_up_to(2);
        let sweep = morphism_sweep(&spaces, Execution::Sequential);
        assert_eq!(sweep.failures, 0, "{:?}", sweep.first_failure);
        // maps between spaces of sizes (a, b) number b^a; 6 spaces with sizes 0,1,2,2,2,2
        let sizes = [0usize, 1, 2, 2, 2, 2];
        let expected: usize = sizes.iter().flat_map(|&a| sizes.iter().map(move |&b| b.pow(a as u32))).sum();
        assert_eq!(sweep.maps, expected);
        assert!(sweep.composable_pairs > 0);
        assert_eq!(sweep, morphism_sweep(&spaces, Execution::Parallel));
    }

    #[test]
    fn map_codes_round_trip() {
        for code in 0..27 {
            assert_eq!(encode(&decode(code, 3, 3), 3), code);
        }
        assert_eq!(decode(0, 0, 0), Vec::<StateId>::new());
        assert_eq!(map_count(0, 0), 1);
        assert_eq!(map_count(2, 0), 0);
    }
}
