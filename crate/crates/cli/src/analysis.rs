//! The `analyze` report.

use std::fmt::Write as _;

use serde::Serialize;

use spcls_core::classify::{classify, is_weakly_zero_dimensional};
use spcls_core::decompose::{components, d_classical_lattice, d_classical_part, is_totally_classical, quasi_component};
use spcls_core::{functor_f_obj, Limits, PropertyId, StatePropertySystem};

use crate::error::CliResult;
use crate::format::Instance;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Analysis {
    pub kind: &'static str,
    pub states: Vec<String>,
    pub properties: Vec<String>,
    /// Closed sets of the associated closure space, canonical order.
    pub cartan_images: Vec<String>,
    pub t1: bool,
    pub atomistic: bool,
    pub atomistic_conditions: [bool; 3],
    pub s_classical: bool,
    pub topology: bool,
    pub connected: bool,
    pub pure_nonclassical: bool,
    pub totally_classical: bool,
    pub d_classical: Vec<String>,
    /// `(a, a^c)` pairs.
    pub complements: Vec<(String, String)>,
    pub components: Vec<String>,
    pub component_atoms: Vec<String>,
    /// Distinct quasi-components, ordered by smallest point.
    pub quasi_components: Vec<String>,
    pub weakly_zero_dimensional: bool,
    pub d_classical_lattice: Vec<String>,
    /// Pairs of `C'` whose join there differs from their join in `L`.
    pub d_classical_join_differs: Vec<(String, String)>,
    pub d_classical_part_weakly_zero_dimensional: bool,
    pub empty_state_space: bool,
}

pub fn analyze(inst: &Instance, limits: &Limits) -> CliResult<Analysis> {
    let s: StatePropertySystem = inst.to_sps();
    let cs = functor_f_obj(&s);
    let report = classify(&s)?;
    let parts = components(&cs, limits)?;
    let name = |a: PropertyId| s.property_name(a).to_string();

    let mut quasi: Vec<_> = cs.point_ids().map(|x| quasi_component(&cs, x)).collect();
    quasi.sort_by_key(|q| q.first());
    quasi.dedup();

    let c_prime = d_classical_lattice(&s)?;
    let part = d_classical_part(&s)?;
    Ok(Analysis {
        kind: inst.kind(),
        states: s.states().names().to_vec(),
        properties: s.lattice().elements().names().to_vec(),
        cartan_images: cs.closed().iter().map(|f| cs.format(f)).collect(),
        t1: report.t1,
        atomistic: report.is_atomistic(),
        atomistic_conditions: [report.atomistic.0, report.atomistic.1, report.atomistic.2],
        s_classical: report.s_classical,
        topology: report.is_topology,
        connected: report.connected,
        pure_nonclassical: report.is_pure_nonclassical(),
        totally_classical: is_totally_classical(&s)?,
        d_classical: report.d_classical_properties.iter().map(|a| name(PropertyId(a))).collect(),
        complements: report.complements.iter().map(|&(a, c)| (name(a), name(c))).collect(),
        components: parts.classes.iter().map(|c| cs.format(c)).collect(),
        component_atoms: parts
            .classes
            .iter()
            .map(|c| s.property_with_extent(c).map(name).unwrap_or_default())
            .collect(),
        quasi_components: quasi.iter().map(|q| cs.format(q)).collect(),
        weakly_zero_dimensional: report.weakly_zero_dimensional,
        d_classical_lattice: c_prime.members.iter().map(|&a| name(a)).collect(),
        d_classical_join_differs: c_prime.join_differs.iter().map(|&(a, b)| (name(a), name(b))).collect(),
        d_classical_part_weakly_zero_dimensional: is_weakly_zero_dimensional(&functor_f_obj(&part)),
        empty_state_space: s.states().is_empty(),
    })
}

fn list(items: &[String]) -> String {
    if items.is_empty() {
        "(none)".to_string()
    } else {
        items.join(", ")
    }
}

fn pairs(items: &[(String, String)], sep: &str) -> String {
    if items.is_empty() {
        return "(none)".to_string();
    }
    items.iter().map(|(a, b)| format!("{a}{sep}{b}")).collect::<Vec<_>>().join(", ")
}

impl Analysis {
    pub fn to_text(&self) -> String {
        let mut o = String::new();
        let [c1, c2, c3] = self.atomistic_conditions;
        let _ = writeln!(o, "kind: {}", self.kind);
        let _ = writeln!(o, "states: {}", list(&self.states));
        let _ = writeln!(o, "properties: {}", list(&self.properties));
        let _ = writeln!(o, "cartan images: {}", list(&self.cartan_images));
        let _ = writeln!(o, "T1: {}", self.t1);
        let _ = writeln!(o, "atomistic: {} (conditions {c1}, {c2}, {c3})", self.atomistic);
        let _ = writeln!(o, "s-classical: {}", self.s_classical);
        let _ = writeln!(o, "topology: {}", self.topology);
        let _ = writeln!(o, "connected: {}", self.connected);
        let _ = writeln!(o, "pure nonclassical: {}", self.pure_nonclassical);
        let _ = writeln!(o, "totally classical: {}", self.totally_classical);
        let _ = writeln!(o, "d-classical: {}", list(&self.d_classical));
        let _ = writeln!(o, "complements: {}", pairs(&self.complements, "^c = "));
        let _ = writeln!(o, "components: {}", list(&self.components));
        let _ = writeln!(o, "component atoms: {}", list(&self.component_atoms));
        let _ = writeln!(o, "quasi-components: {}", list(&self.quasi_components));
        let _ = writeln!(o, "weakly zero-dimensional: {}", self.weakly_zero_dimensional);
        let _ = writeln!(o, "d-classical lattice C': {}", list(&self.d_classical_lattice));
        let _ = writeln!(o, "C' joins differing from L: {}", pairs(&self.d_classical_join_differs, " v "));
        let _ = writeln!(o, "d-classical part weakly zero-dimensional: {}", self.d_classical_part_weakly_zero_dimensional);
        if self.empty_state_space {
            let _ = writeln!(o, "note: the state space is empty");
        }
        o
    }
}
