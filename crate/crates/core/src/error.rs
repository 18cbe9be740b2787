use std::fmt;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Which half of the order/inclusion biconditional fails.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axiom3Direction {
    /// `a <= b` holds but `κ(a) ⊄ κ(b)`.
    OrderWithoutInclusion,
    /// `κ(a) ⊆ κ(b)` holds but `a <= b` does not.
    InclusionWithoutOrder,
}

impl fmt::Display for Axiom3Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axiom3Direction::OrderWithoutInclusion => f.write_str("a <= b but κ(a) is not contained in κ(b)"),
            Axiom3Direction::InclusionWithoutOrder => f.write_str("κ(a) is contained in κ(b) but not a <= b"),
        }
    }
}

/// Why the actual properties of a state are not meet-closed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Axiom2Witness {
    /// The empty meet (the top element) is not actual.
    MissingTop,
    /// `a` and `b` are actual but `meet` is not.
    Meet { a: String, b: String, meet: String },
}

impl fmt::Display for Axiom2Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axiom2Witness::MissingTop => f.write_str("the top element (empty meet) is not actual"),
            Axiom2Witness::Meet { a, b, meet } => write!(f, "{a} and {b} are actual but {a}∧{b} = {meet} is not"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("duplicate name `{name}`")]
    DuplicateName { name: String },
    #[error("unknown name `{name}`")]
    UnknownName { name: String },
    #[error("width mismatch: expected {expected}, found {found}")]
    WidthMismatch { expected: usize, found: usize },

    #[error("order relation has a cycle through {a} and {b}")]
    CycleDetected { a: String, b: String },
    #[error("order has no bottom element")]
    NoBottom,
    #[error("order has no top element")]
    NoTop,
    #[error("{a} and {b} have no greatest lower bound")]
    NoMeet { a: String, b: String },
    #[error("{a} and {b} have no least upper bound")]
    NoJoin { a: String, b: String },

    #[error("axiom (1) violated: the bottom property is actual in state {state}")]
    Axiom1Violation { state: String },
    #[error("axiom (2) violated in state {state}: {witness}")]
    Axiom2Violation { state: String, witness: Axiom2Witness },
    #[error("axiom (3) violated for a = {a}, b = {b}: {direction}")]
    Axiom3Violation { a: String, b: String, direction: Axiom3Direction },

    #[error("closed-set family does not contain the empty set")]
    MissingEmpty,
    #[error("closed-set family does not contain the whole space")]
    MissingFull,
    #[error("closed-set family is not intersection closed: {a} ∩ {b} is missing")]
    NotIntersectionClosed { a: String, b: String },

    #[error("universe mismatch: {detail}")]
    UniverseMismatch { detail: String },
    #[error("invalid input: {detail}")]
    InvalidInput { detail: String },
    #[error("exhaustive computation over {size} elements exceeds the cap of {cap}")]
    ExhaustiveCapExceeded { size: usize, cap: usize },
    #[error("round trip failed: {discrepancy}")]
    RoundTripFailure { discrepancy: String },

    #[error("property {property} has several complements: {complements:?}")]
    MultipleComplements { property: String, complements: Vec<String> },
    #[error("component {class} is not the Cartan image of any property")]
    AtomNotFound { class: String },
    #[error("internal inconsistency ({theorem}): {detail}")]
    InternalInconsistency { theorem: &'static str, detail: String },
}

impl Error {
    pub(crate) fn inconsistency(theorem: &'static str, detail: impl Into<String>) -> Self {
        Error::InternalInconsistency { theorem, detail: detail.into() }
    }

    /// True for errors that can only arise from a bug: a theorem that must
    /// hold for all valid inputs was observed to fail.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::MultipleComplements { .. }
                | Error::AtomNotFound { .. }
                | Error::InternalInconsistency { .. }
                | Error::RoundTripFailure { .. }
        )
    }

    /// True for errors reporting that a well-formed input is not a lattice,
    /// state property system or closure space.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::CycleDetected { .. }
                | Error::NoBottom
                | Error::NoTop
                | Error::NoMeet { .. }
                | Error::NoJoin { .. }
                | Error::Axiom1Violation { .. }
                | Error::Axiom2Violation { .. }
                | Error::Axiom3Violation { .. }
                | Error::MissingEmpty
                | Error::MissingFull
                | Error::NotIntersectionClosed { .. }
        )
    }
}
