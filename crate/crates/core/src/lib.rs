//! Finite state property systems and closure spaces.
//!
//! A state property system `(Σ, L, ξ)` pairs a set of states with a complete
//! lattice of properties and assigns to each state the properties actual in it.
//! The functor `F` sends it to the closure space of its Cartan images, `G` goes
//! back by taking closed sets as properties. On top of the two representations
//! this crate provides superselection rules, d-classical properties,
//! connectedness, and the decomposition of a system into pure nonclassical
//! components glued by a totally classical part.
//!
//! Everything is finite and exhaustive. Algorithms that enumerate subsets are
//! bounded by [`Limits`].

pub mod bitset;
pub mod categorical;
pub mod classify;
pub mod closure;
pub mod decompose;
pub mod error;
pub mod generate;
pub mod lattice;
pub mod parallel;
pub mod sps;
pub mod suite;

pub use bitset::{BitSet, PropertyId, PropertySet, StateId, StateSet, Universe};
pub use categorical::{
    functor_f_mor, functor_f_obj, functor_g_mor, functor_g_obj, is_continuous, is_sp_isomorphism, is_sp_morphism,
    verify_cls_roundtrip, verify_sps_roundtrip, Check, ContinuousMap, SpMorphism,
};
pub use classify::{classify, ClassificationReport};
pub use closure::{closure_of, validate_closure_space, ClosureSpace};
pub use decompose::{components, decompose, ComponentPartition, Decomposition};
pub use error::{Error, Result};
pub use lattice::{validate_lattice, FiniteLattice};
pub use parallel::Execution;
pub use sps::{cartan_map, validate_sps, StatePropertySystem};

/// Size caps for exhaustive algorithms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest state (point) universe whose subsets are enumerated.
    pub max_states: usize,
    /// Largest property lattice (closed-set family) for property-indexed enumerations.
    pub max_properties: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_states: 16, max_properties: 64 }
    }
}
