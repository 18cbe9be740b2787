//! The JSON instance format and its conversion to and from core structures.

use std::path::Path;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use spcls_core::{
    validate_closure_space, validate_lattice, validate_sps, ClosureSpace, PropertyId, StatePropertySystem, Universe,
};

use crate::error::{CliError, CliResult};

/// An instance file: a state property system or a closure space, told apart by `kind`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum InstanceFile {
    Sps {
        states: Vec<String>,
        properties: Vec<String>,
        /// Entries `"x<y"`; any generating relation, usually the Hasse edges.
        order: Vec<String>,
        xi: IndexMap<String, Vec<String>>,
    },
    Cls {
        points: Vec<String>,
        closed: Vec<Vec<String>>,
    },
}

/// A validated instance. Built once per command, so the variant size gap is harmless.
#[allow(clippy::large_enum_variant)]
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Instance {
    Sps(StatePropertySystem),
    Cls(ClosureSpace),
}

impl Instance {
    /// The state property system itself, or `G` of the closure space.
    pub fn to_sps(&self) -> StatePropertySystem {
        match self {
            Instance::Sps(s) => s.clone(),
            Instance::Cls(cs) => spcls_core::functor_g_obj(cs),
        }
    }

    /// The closure space itself, or `F` of the system.
    pub fn to_cls(&self) -> ClosureSpace {
        match self {
            Instance::Sps(s) => spcls_core::functor_f_obj(s),
            Instance::Cls(cs) => cs.clone(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Instance::Sps(_) => "sps",
            Instance::Cls(_) => "cls",
        }
    }
}

fn universe(names: &[String], what: &str) -> CliResult<Universe> {
    Universe::new(names.iter().cloned()).map_err(|e| CliError::Input(format!("{what}: {e}")))
}

fn lookup(u: &Universe, name: &str, what: &str) -> CliResult<usize> {
    u.index_of(name).ok_or_else(|| CliError::Input(format!("{what} `{name}` is not declared")))
}

/// Splits `"x<y"` at the unique `<` that leaves declared names on both sides.
fn order_pair(entry: &str, props: &Universe) -> CliResult<(PropertyId, PropertyId)> {
    let splits: Vec<(usize, usize)> = entry
        .match_indices('<')
        .filter_map(|(i, _)| {
            let (x, y) = (entry[..i].trim(), entry[i + 1..].trim());
            Some((props.index_of(x)?, props.index_of(y)?))
        })
        .collect();
    match splits.as_slice() {
        [(x, y)] => Ok((PropertyId(*x), PropertyId(*y))),
        [] => Err(CliError::Input(format!("order entry `{entry}` is not of the form x<y with declared properties"))),
        _ => Err(CliError::Input(format!("order entry `{entry}` is ambiguous"))),
    }
}

impl InstanceFile {
    pub fn parse(text: &str) -> CliResult<InstanceFile> {
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("malformed instance file: {e}")))
    }

    pub fn load(path: &Path) -> CliResult<InstanceFile> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        InstanceFile::parse(&text)
    }

    /// Resolves names and runs the core validators. Undeclared or duplicate
    /// names are input errors; failed axioms are check errors.
    pub fn build(&self) -> CliResult<Instance> {
        match self {
            InstanceFile::Sps { states, properties, order, xi } => {
                let su = universe(states, "states")?;
                let pu = universe(properties, "properties")?;
                let pairs = order.iter().map(|e| order_pair(e, &pu)).collect::<CliResult<Vec<_>>>()?;
                let lattice = validate_lattice(pu.clone(), &pairs)?;
                for key in xi.keys() {
                    lookup(&su, key, "xi state")?;
                }
                let mut sets = Vec::with_capacity(su.len());
                for name in su.names() {
                    let actual = xi.get(name).ok_or_else(|| CliError::Input(format!("xi has no entry for state `{name}`")))?;
                    let mut set = pu.empty_set();
                    for a in actual {
                        set.insert(lookup(&pu, a, "property")?);
                    }
                    sets.push(set);
                }
                Ok(Instance::Sps(validate_sps(su, lattice, sets)?))
            }
            InstanceFile::Cls { points, closed } => {
                let u = universe(points, "points")?;
                let mut family = Vec::with_capacity(closed.len());
                for members in closed {
                    let mut set = u.empty_set();
                    for m in members {
                        set.insert(lookup(&u, m, "point")?);
                    }
                    family.push(set);
                }
                Ok(Instance::Cls(validate_closure_space(u, family)?))
            }
        }
    }

    /// Canonical file for a system: order given by Hasse edges, actual
    /// properties in lattice order.
    pub fn from_sps(s: &StatePropertySystem) -> InstanceFile {
        let l = s.lattice();
        InstanceFile::Sps {
            states: s.states().names().to_vec(),
            properties: l.elements().names().to_vec(),
            order: l.covers().iter().map(|&(a, b)| format!("{}<{}", l.name(a), l.name(b))).collect(),
            xi: s
                .state_ids()
                .map(|p| (s.state_name(p).to_string(), s.xi(p).iter().map(|a| l.name(PropertyId(a)).to_string()).collect()))
                .collect(),
        }
    }

    /// Canonical file for a closure space: closed sets in canonical order.
    pub fn from_cls(cs: &ClosureSpace) -> InstanceFile {
        InstanceFile::Cls {
            points: cs.points().names().to_vec(),
            closed: cs.closed().iter().map(|f| f.iter().map(|i| cs.points().name(i).to_string()).collect()).collect(),
        }
    }

    pub fn from_instance(i: &Instance) -> InstanceFile {
        match i {
            Instance::Sps(s) => InstanceFile::from_sps(s),
            Instance::Cls(cs) => InstanceFile::from_cls(cs),
        }
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        to_json(self)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

pub fn load_instance(path: &Path) -> CliResult<Instance> {
    InstanceFile::load(path)?.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    const EX5: &str = include_str!("../tests/fixtures/ex5.json");

    #[test]
    fn ex5_round_trips() {
        let file = InstanceFile::parse(EX5).unwrap();
        let inst = file.build().unwrap();
        let again = InstanceFile::from_instance(&inst);
        assert_eq!(again.build().unwrap(), inst);
        assert_eq!(InstanceFile::parse(&again.to_json()).unwrap(), again);
    }

    #[test]
    fn error_classes() {
        assert!(matches!(InstanceFile::parse("{"), Err(CliError::Input(_))));
        assert!(matches!(InstanceFile::parse(r#"{"kind":"graph"}"#), Err(CliError::Input(_))));
        let bad_name = EX5.replace("\"d<I\"", "\"d<J\"");
        assert!(matches!(InstanceFile::parse(&bad_name).unwrap().build(), Err(CliError::Input(_))));
        let axiom1 = EX5.replace("\"p\": [\"b\"", "\"p\": [\"0\", \"b\"");
        let err = InstanceFile::parse(&axiom1).unwrap().build().unwrap_err();
        assert!(matches!(&err, CliError::Check(m) if m.contains("axiom (1)")), "{err:?}");
        let cls = r#"{"kind":"cls","points":["p","q","r"],"closed":[[],["p","q"],["q","r"],["p","q","r"]]}"#;
        let err = InstanceFile::parse(cls).unwrap().build().unwrap_err();
        assert_eq!(err, CliError::Check("closed-set family is not intersection closed: {p,q} ∩ {q,r} is missing".into()));
    }

    #[test]
    fn order_entries_with_angle_brackets_in_names() {
        let u = Universe::new(["a<b", "c", "a"]).unwrap();
        assert_eq!(order_pair("a<b<c", &u).unwrap(), (PropertyId(0), PropertyId(1)));
        assert_eq!(order_pair(" a < c ", &u).unwrap(), (PropertyId(2), PropertyId(1)));
        assert!(order_pair("x<y", &u).is_err());
    }
}
