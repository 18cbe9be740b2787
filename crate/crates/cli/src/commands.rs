//! Command implementations. Each returns the text to print on success.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use spcls_core::categorical::{is_continuous, is_sp_morphism, ContinuousMap, SpMorphism};
use spcls_core::decompose::{d_classical_lattice, d_classical_part, decompose as decompose_sps};
use spcls_core::generate::{all_closure_spaces_up_to, random_batch, SpaceParams};
use spcls_core::suite::{morphism_sweep, run_suite, SuiteReport};
use spcls_core::{functor_f_mor, Check, ClosureSpace, Execution, Limits, PropertyId, StateId, StatePropertySystem};

use crate::analysis::analyze;
use crate::error::{CliError, CliResult};
use crate::format::{load_instance, to_json, Instance, InstanceFile};

pub fn validate(path: &Path) -> CliResult<String> {
    Ok(match load_instance(path)? {
        Instance::Sps(s) => format!(
            "valid sps: {} states, {} properties\n",
            s.states().len(),
            s.lattice().size()
        ),
        Instance::Cls(cs) => format!("valid cls: {} points, {} closed sets\n", cs.len(), cs.closed().len()),
    })
}

pub fn analyze_file(path: &Path, json: bool, limits: &Limits) -> CliResult<String> {
    let a = analyze(&load_instance(path)?, limits)?;
    Ok(if json { to_json(&a) } else { a.to_text() })
}

/// Which representation `convert` produces.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    Cls,
    Sps,
}

/// Applies `F` (to cls) or `G` (to sps); a file already of the target kind is
/// re-emitted in canonical form.
pub fn convert(path: &Path, to: Target) -> CliResult<String> {
    let inst = load_instance(path)?;
    Ok(match to {
        Target::Cls => InstanceFile::from_cls(&inst.to_cls()).to_json(),
        Target::Sps => InstanceFile::from_sps(&inst.to_sps()).to_json(),
    })
}

/// Name maps for `check-morphism`. For systems, `m` sends source states to
/// target states and `n` sends target properties to source properties. For
/// closure spaces the point map is given as `f` (or `m`).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<IndexMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<IndexMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<IndexMap<String, String>>,
}

fn resolve_map(
    map: &IndexMap<String, String>,
    from: &[String],
    to: &[String],
    what: &str,
) -> CliResult<Vec<usize>> {
    let index: IndexMap<&str, usize> = to.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
    let domain: HashSet<&str> = from.iter().map(String::as_str).collect();
    if let Some(k) = map.keys().find(|k| !domain.contains(k.as_str())) {
        return Err(CliError::Input(format!("{what}: `{k}` is not in its domain")));
    }
    from.iter()
        .map(|x| {
            let y = map.get(x).ok_or_else(|| CliError::Input(format!("{what}: no image for `{x}`")))?;
            index.get(y.as_str()).copied().ok_or_else(|| CliError::Input(format!("{what}: `{y}` is not in its codomain")))
        })
        .collect()
}

pub fn check_morphism(src: &Path, dst: &Path, map: &Path) -> CliResult<String> {
    let text = std::fs::read_to_string(map).map_err(|e| CliError::Input(format!("{}: {e}", map.display())))?;
    let mf: MorphismFile = serde_json::from_str(&text).map_err(|e| CliError::Input(format!("malformed map file: {e}")))?;
    match (load_instance(src)?, load_instance(dst)?) {
        (Instance::Sps(a), Instance::Sps(b)) => {
            let (Some(m), Some(n)) = (&mf.m, &mf.n) else {
                return Err(CliError::Input("an SP-morphism needs both `m` and `n`".into()));
            };
            let mor = SpMorphism {
                state_map: resolve_map(m, a.states().names(), b.states().names(), "m")?.into_iter().map(StateId).collect(),
                property_map: resolve_map(n, b.lattice().elements().names(), a.lattice().elements().names(), "n")?
                    .into_iter()
                    .map(PropertyId)
                    .collect(),
            };
            match is_sp_morphism(&a, &b, &mor)? {
                Check::Holds => {
                    functor_f_mor(&a, &b, &mor)?;
                    Ok("valid SP-morphism; its state map is continuous\n".into())
                }
                Check::Fails(w) => Err(CliError::Check(format!(
                    "not an SP-morphism: {} ∈ ξ(m({})) and n({}) = {} ∈ ξ'({}) disagree",
                    b.property_name(w.property),
                    a.state_name(w.state),
                    b.property_name(w.property),
                    a.property_name(mor.property_map[w.property.0]),
                    a.state_name(w.state)
                ))),
            }
        }
        (Instance::Cls(a), Instance::Cls(b)) => {
            let Some(f) = mf.f.as_ref().or(mf.m.as_ref()) else {
                return Err(CliError::Input("a continuous map needs `f`".into()));
            };
            let map = ContinuousMap {
                map: resolve_map(f, a.points().names(), b.points().names(), "f")?.into_iter().map(StateId).collect(),
            };
            match is_continuous(&a, &b, &map)? {
                Check::Holds => Ok("valid continuous map\n".into()),
                Check::Fails(set) => Err(CliError::Check(format!(
                    "not continuous: the preimage of closed set {} is not closed",
                    b.format(&set)
                ))),
            }
        }
        _ => Err(CliError::Input("source and target must be of the same kind".into())),
    }
}

fn dot_id(name: &str) -> String {
    format!("\"{}\"", name.replace('\\', "\\\\").replace('"', "\\\""))
}

fn dot_graph(title: &str, nodes: &[String], edges: &[(usize, usize)]) -> String {
    let mut o = String::new();
    let _ = writeln!(o, "digraph {title} {{");
    let _ = writeln!(o, "  rankdir=BT;");
    for n in nodes {
        let _ = writeln!(o, "  {};", dot_id(n));
    }
    for &(a, b) in edges {
        let _ = writeln!(o, "  {} -> {};", dot_id(&nodes[a]), dot_id(&nodes[b]));
    }
    o.push_str("}\n");
    o
}

/// Two DOT digraphs: the Hasse diagram of the property lattice and the
/// cover relation of the closed sets under inclusion.
pub fn render(path: &Path) -> CliResult<String> {
    let inst = load_instance(path)?;
    let s = inst.to_sps();
    let cs = inst.to_cls();
    let l = s.lattice();
    let lattice = dot_graph(
        "lattice",
        l.elements().names(),
        &l.covers().iter().map(|&(a, b)| (a.0, b.0)).collect::<Vec<_>>(),
    );
    let g = spcls_core::functor_g_obj(&cs);
    let names: Vec<String> = cs.closed().iter().map(|f| cs.format(f)).collect();
    let closed = dot_graph(
        "closed_sets",
        &names,
        &g.lattice().covers().iter().map(|&(a, b)| (a.0, b.0)).collect::<Vec<_>>(),
    );
    Ok(format!("{lattice}\n{closed}"))
}

#[derive(Serialize)]
struct EmbeddingSummary {
    m: IndexMap<String, String>,
    n: IndexMap<String, String>,
}

#[derive(Serialize)]
struct ComponentSummary {
    states: String,
    atom: String,
    file: String,
    embedding_file: String,
    embedding: EmbeddingSummary,
}

#[derive(Serialize)]
struct DefectSummary {
    property: String,
    extent: String,
    component: String,
}

#[derive(Serialize)]
struct ClassicalSummary {
    file: String,
    members: Vec<String>,
    atom_joins: Vec<String>,
    atom_join_defect: Option<DefectSummary>,
}

#[derive(Serialize)]
struct DClassicalSummary {
    file: String,
    members: Vec<String>,
    join_differs: Vec<(String, String)>,
}

#[derive(Serialize)]
struct Summary {
    omega: Vec<String>,
    components: Vec<ComponentSummary>,
    classical: ClassicalSummary,
    dclassical: DClassicalSummary,
}

fn file_stem(name: &str) -> String {
    let stem: String = name
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '_' || c == '-' { c } else { '_' })
        .collect();
    let stem = stem.trim_matches('_');
    if stem.is_empty() { "atom".to_string() } else { stem.to_string() }
}

fn embedding_names(s: &StatePropertySystem, sub: &StatePropertySystem, mor: &SpMorphism) -> EmbeddingSummary {
    EmbeddingSummary {
        m: sub
            .state_ids()
            .map(|p| (sub.state_name(p).to_string(), s.state_name(mor.state_map[p.0]).to_string()))
            .collect(),
        n: s
            .lattice()
            .ids()
            .map(|c| (s.property_name(c).to_string(), sub.property_name(mor.property_map[c.0]).to_string()))
            .collect(),
    }
}

/// Every output of `decompose`, as `(file name, contents)`.
pub fn decompose_outputs(inst: &Instance, limits: &Limits) -> CliResult<Vec<(String, String)>> {
    let s = inst.to_sps();
    let d = decompose_sps(&s, limits)?;
    let mut files: Vec<(String, String)> = Vec::new();
    let mut used = HashSet::new();
    let mut comps = Vec::new();
    for (i, (c, &atom)) in d.components.iter().zip(&d.partition.atom_of).enumerate() {
        let mut stem = file_stem(s.property_name(atom));
        if !used.insert(stem.clone()) {
            stem = format!("{stem}_{i}");
            used.insert(stem.clone());
        }
        let file = format!("component_{stem}.json");
        let embedding_file = format!("embedding_{stem}.json");
        let emb = embedding_names(&s, &c.ap.system, &c.embedding);
        let map = MorphismFile { m: Some(emb.m.clone()), n: Some(emb.n.clone()), f: None };
        files.push((file.clone(), InstanceFile::from_sps(&c.ap.system).to_json()));
        files.push((embedding_file.clone(), to_json(&map)));
        comps.push(ComponentSummary {
            states: s.format_states(&d.partition.classes[i]),
            atom: s.property_name(atom).to_string(),
            file,
            embedding_file,
            embedding: emb,
        });
    }

    let cp = &d.classical;
    files.push(("classical.json".into(), InstanceFile::from_sps(&cp.system).to_json()));
    let c_prime = d_classical_lattice(&s)?;
    let part = d_classical_part(&s)?;
    files.push(("dclassical.json".into(), InstanceFile::from_sps(&part).to_json()));

    let name = |a: PropertyId| s.property_name(a).to_string();
    let summary = Summary {
        omega: d.partition.classes.iter().map(|w| s.format_states(w)).collect(),
        components: comps,
        classical: ClassicalSummary {
            file: "classical.json".into(),
            members: cp.members.iter().map(|&a| name(a)).collect(),
            atom_joins: cp.atom_joins.iter().map(|a| name(PropertyId(a))).collect(),
            atom_join_defect: cp.defect.as_ref().map(|def| DefectSummary {
                property: name(def.property),
                extent: s.format_states(s.cartan(def.property)),
                component: s.format_states(&d.partition.classes[def.component]),
            }),
        },
        dclassical: DClassicalSummary {
            file: "dclassical.json".into(),
            members: c_prime.members.iter().map(|&a| name(a)).collect(),
            join_differs: c_prime.join_differs.iter().map(|&(a, b)| (name(a), name(b))).collect(),
        },
    };
    files.push(("summary.json".into(), to_json(&summary)));

    // every instance file must load again
    for (fname, text) in &files {
        if fname.starts_with("component_") || fname == "classical.json" || fname == "dclassical.json" {
            InstanceFile::parse(text)
                .and_then(|f| f.build())
                .map_err(|e| CliError::Internal(format!("{fname} does not re-validate: {e}")))?;
        }
    }
    Ok(files)
}

/// Writes all decomposition outputs into `out`. On a write failure the files
/// written so far (and `out`, if this call created it) are removed.
pub fn decompose(path: &Path, out: &Path, limits: &Limits) -> CliResult<String> {
    let files = decompose_outputs(&load_instance(path)?, limits)?;
    let created = !out.exists();
    std::fs::create_dir_all(out).map_err(|e| CliError::Input(format!("{}: {e}", out.display())))?;
    let mut written: Vec<PathBuf> = Vec::new();
    for (name, text) in &files {
        let target = out.join(name);
        if let Err(e) = std::fs::write(&target, text) {
            for w in &written {
                let _ = std::fs::remove_file(w);
            }
            if created {
                let _ = std::fs::remove_dir(out);
            }
            return Err(CliError::Input(format!("{}: {e}", target.display())));
        }
        written.push(target);
    }
    let mut report = String::new();
    for (name, _) in &files {
        let _ = writeln!(report, "wrote {}", out.join(name).display());
    }
    Ok(report)
}

fn suite_lines(title: &str, r: &SuiteReport, o: &mut String) {
    let _ = writeln!(o, "{title}: {} instances", r.instances);
    for (t, tally) in &r.tallies {
        let _ = write!(o, "  {t}: {} passed, {} failed", tally.passed, tally.failed);
        if let Some((i, msg)) = &tally.first_failure {
            let _ = write!(o, " (first: instance {i}: {msg})");
        }
        o.push('\n');
    }
    let _ = writeln!(o, "  atom joins cutting a component: {} instances", r.join_defects);
    let _ = writeln!(o, "  points with a strictly larger quasi-component: {}", r.strict_quasi_components);
}

/// Random suite, exhaustive sweep over spaces on at most 3 points, and the
/// morphism sweep. Failures are internal inconsistencies.
pub fn selftest(seed: u64, count: usize, exec: Execution, limits: &Limits) -> CliResult<String> {
    let mut o = String::new();
    let random = run_suite(&random_batch(seed, count, SpaceParams::default()), limits, exec);
    suite_lines(&format!("random suite (seed {seed})"), &random, &mut o);
    let small: Vec<ClosureSpace> = all_closure_spaces_up_to(3);
    let exhaustive = run_suite(&small, limits, exec);
    suite_lines("all spaces on at most 3 points", &exhaustive, &mut o);
    let sweep = morphism_sweep(&small, exec);
    let _ = writeln!(
        o,
        "morphism sweep: {} maps, {} continuous, {} composable pairs, {} failures",
        sweep.maps, sweep.continuous, sweep.composable_pairs, sweep.failures
    );
    if let Some(f) = &sweep.first_failure {
        let _ = writeln!(o, "  first failure: {f}");
    }
    if random.all_passed() && exhaustive.all_passed() && sweep.failures == 0 {
        Ok(o)
    } else {
        Err(CliError::Internal(o))
    }
}
