//! State property systems and the Cartan map.

use std::collections::HashMap;

use crate::bitset::{BitSet, PropertyId, PropertySet, StateId, StateSet, Universe};
use crate::error::{Axiom2Witness, Axiom3Direction, Error, Result};
use crate::lattice::FiniteLattice;

/// A validated triple of states, a property lattice, and the actuality map `ξ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StatePropertySystem {
    states: Universe,
    lattice: FiniteLattice,
    xi: Vec<PropertySet>,
    kappa: Vec<StateSet>,
}

/// Checks the three axioms and returns the system.
///
/// `xi[p]` is the set of properties actual in state `p`. Axiom (2) is checked as
/// "the top element is actual and the actual set is a fixpoint of pairwise meets",
/// which for a finite lattice is closure under all meets including the empty one.
pub fn validate_sps(states: Universe, lattice: FiniteLattice, xi: Vec<PropertySet>) -> Result<StatePropertySystem> {
    if xi.len() != states.len() {
        return Err(Error::WidthMismatch { expected: states.len(), found: xi.len() });
    }
    let n = lattice.size();
    if let Some(bad) = xi.iter().find(|s| s.width() != n) {
        return Err(Error::WidthMismatch { expected: n, found: bad.width() });
    }
    let (bottom, top) = (lattice.bottom(), lattice.top());

    for (p, actual) in xi.iter().enumerate() {
        let state = || states.name(p).to_string();
        if actual.contains(bottom.0) {
            return Err(Error::Axiom1Violation { state: state() });
        }
        if !actual.contains(top.0) {
            return Err(Error::Axiom2Violation { state: state(), witness: Axiom2Witness::MissingTop });
        }
        for a in actual {
            for b in actual.iter().filter(|&b| b > a) {
                let m = lattice.meet(PropertyId(a), PropertyId(b));
                if !actual.contains(m.0) {
                    return Err(Error::Axiom2Violation {
                        state: state(),
                        witness: Axiom2Witness::Meet {
                            a: lattice.name(PropertyId(a)).to_string(),
                            b: lattice.name(PropertyId(b)).to_string(),
                            meet: lattice.name(m).to_string(),
                        },
                    });
                }
            }
        }
    }

    let kappa = cartan_images(states.len(), n, &xi);
    for a in lattice.ids() {
        for b in lattice.ids() {
            let ordered = lattice.leq(a, b);
            let included = kappa[a.0].is_subset(&kappa[b.0]);
            if ordered != included {
                return Err(Error::Axiom3Violation {
                    a: lattice.name(a).to_string(),
                    b: lattice.name(b).to_string(),
                    direction: if ordered {
                        Axiom3Direction::OrderWithoutInclusion
                    } else {
                        Axiom3Direction::InclusionWithoutOrder
                    },
                });
            }
        }
    }
    Ok(StatePropertySystem { states, lattice, xi, kappa })
}

fn cartan_images(n_states: usize, n_props: usize, xi: &[PropertySet]) -> Vec<StateSet> {
    let mut kappa = vec![BitSet::empty(n_states); n_props];
    for (p, actual) in xi.iter().enumerate() {
        for a in actual {
            kappa[a].insert(p);
        }
    }
    kappa
}

/// `κ(a) = {p ∈ Σ | a ∈ ξ(p)}`
pub fn cartan_map(sps: &StatePropertySystem, a: PropertyId) -> StateSet {
    sps.cartan(a).clone()
}

impl StatePropertySystem {
    pub fn states(&self) -> &Universe {
        &self.states
    }

    pub fn lattice(&self) -> &FiniteLattice {
        &self.lattice
    }

    pub fn state_ids(&self) -> impl Iterator<Item = StateId> {
        (0..self.states.len()).map(StateId)
    }

    pub fn state_name(&self, p: StateId) -> &str {
        self.states.name(p.0)
    }

    pub fn property_name(&self, a: PropertyId) -> &str {
        self.lattice.name(a)
    }

    /// `ξ(p)`
    pub fn xi(&self, p: StateId) -> &PropertySet {
        &self.xi[p.0]
    }

    pub fn xi_all(&self) -> &[PropertySet] {
        &self.xi
    }

    #[inline]
    pub fn is_actual(&self, p: StateId, a: PropertyId) -> bool {
        self.xi[p.0].contains(a.0)
    }

    /// `κ(a)`
    pub fn cartan(&self, a: PropertyId) -> &StateSet {
        &self.kappa[a.0]
    }

    /// All Cartan images, indexed by property.
    pub fn cartan_images(&self) -> &[StateSet] {
        &self.kappa
    }

    /// The unique property with `κ(a) = extent`, if any (κ is injective).
    pub fn property_with_extent(&self, extent: &StateSet) -> Option<PropertyId> {
        self.kappa.iter().position(|k| k == extent).map(PropertyId)
    }

    /// Inverse of κ on its image.
    pub fn extent_index(&self) -> HashMap<&StateSet, PropertyId> {
        self.kappa.iter().enumerate().map(|(i, k)| (k, PropertyId(i))).collect()
    }

    /// Formats a set of properties as `{a,b}`.
    pub fn format_properties(&self, set: &PropertySet) -> String {
        self.lattice.elements().format_set(set)
    }

    pub fn format_states(&self, set: &StateSet) -> String {
        self.states.format_set(set)
    }
}
