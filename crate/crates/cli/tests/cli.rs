use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn spcls(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spcls")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn validate_exit_codes() {
    let ex5 = fixture("ex5.json");
    let ok = spcls(&["validate", s(&ex5)]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(stdout(&ok), "valid sps: 5 states, 6 properties\n");

    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(&ex5).unwrap();
    let axiom1 = dir.path().join("axiom1.json");
    std::fs::write(&axiom1, text.replace("\"p\": [\"b\"", "\"p\": [\"0\", \"b\"")).unwrap();
    let bad = spcls(&["validate", s(&axiom1)]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(stdout(&bad).starts_with("invalid: axiom (1)"), "{}", stdout(&bad));

    let malformed = dir.path().join("malformed.json");
    std::fs::write(&malformed, "{\"kind\": \"sps\"").unwrap();
    assert_eq!(spcls(&["validate", s(&malformed)]).status.code(), Some(1));
    assert_eq!(spcls(&["validate", "/nonexistent/file.json"]).status.code(), Some(1));

    let undeclared = dir.path().join("undeclared.json");
    std::fs::write(&undeclared, text.replace("\"d<I\"", "\"d<J\"")).unwrap();
    assert_eq!(spcls(&["validate", s(&undeclared)]).status.code(), Some(1));

    let not_closed = dir.path().join("cls.json");
    std::fs::write(&not_closed, r#"{"kind":"cls","points":["p","q","r"],"closed":[[],["p","q"],["q","r"],["p","q","r"]]}"#)
        .unwrap();
    assert_eq!(spcls(&["validate", s(&not_closed)]).status.code(), Some(2));
}

#[test]
fn usage_errors() {
    assert_eq!(spcls(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(spcls(&["--help"]).status.code(), Some(0));
    assert_eq!(spcls(&["--version"]).status.code(), Some(0));
}

#[test]
fn analyze_matches_golden() {
    let out = spcls(&["analyze", s(&fixture("ex5.json"))]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), std::fs::read_to_string(fixture("ex5_analyze.txt")).unwrap());

    let j = spcls(&["analyze", "--json", s(&fixture("ex5.json"))]);
    let v: serde_json::Value = serde_json::from_slice(&j.stdout).unwrap();
    assert_eq!(v["d_classical"], serde_json::json!(["0", "c", "d", "I"]));
    assert_eq!(v["components"], serde_json::json!(["{p,q}", "{r}", "{s,t}"]));
    assert_eq!(v["connected"], false);
}

#[test]
fn cap_exceeded_is_a_check_failure() {
    let out = spcls(&["--cap", "2", "analyze", s(&fixture("ex5.json"))]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error: "));
}

#[test]
fn decompose_outputs_revalidate() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ex5");
    assert_eq!(spcls(&["decompose", s(&fixture("ex5.json")), "--out", s(&out)]).status.code(), Some(0));
    let mut names: Vec<String> =
        std::fs::read_dir(&out).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    names.sort();
    assert_eq!(
        names,
        [
            "classical.json",
            "component_a.json",
            "component_b.json",
            "component_c.json",
            "dclassical.json",
            "embedding_a.json",
            "embedding_b.json",
            "embedding_c.json",
            "summary.json"
        ]
    );
    for n in names.iter().filter(|n| n.starts_with("component_") || n.ends_with("classical.json")) {
        assert_eq!(spcls(&["validate", s(&out.join(n))]).status.code(), Some(0), "{n}");
    }
    let classical = spcls(&["analyze", s(&out.join("classical.json"))]);
    let text = stdout(&classical);
    assert!(text.contains("atomistic: true"), "{text}");
    assert!(text.contains("totally classical: true"), "{text}");

    for atom in ["a", "b", "c"] {
        let check = spcls(&[
            "check-morphism",
            s(&out.join(format!("component_{atom}.json"))),
            s(&fixture("ex5.json")),
            s(&out.join(format!("embedding_{atom}.json"))),
        ]);
        assert_eq!(check.status.code(), Some(0), "{}", String::from_utf8_lossy(&check.stderr));
    }
}

#[test]
fn decompose_reports_cutting_atom_join() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(spcls(&["decompose", s(&fixture("cut4.json")), "--out", s(dir.path())]).status.code(), Some(0));
    let summary = json(&dir.path().join("summary.json"));
    assert_eq!(summary["omega"], serde_json::json!(["{x0}", "{x1,x3}", "{x2}"]));
    let defect = &summary["classical"]["atom_join_defect"];
    assert_eq!(defect["extent"], "{x0,x2,x3}");
    assert_eq!(defect["component"], "{x1,x3}");
    assert!(!summary["classical"]["members"].as_array().unwrap().contains(&defect["property"]));
    assert!(dir.path().join("component_x1_x3.json").exists());
    let text = stdout(&spcls(&["analyze", s(&dir.path().join("classical.json"))]));
    assert!(text.contains("atomistic: true") && text.contains("totally classical: true"), "{text}");
}

#[test]
fn failed_decompose_leaves_nothing_behind() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "").unwrap();
    let out = spcls(&["decompose", s(&fixture("ex5.json")), "--out", s(&blocker.join("sub"))]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!blocker.join("sub").exists());
}

#[test]
fn convert_round_trip_is_canonical() {
    let dir = tempfile::tempdir().unwrap();
    let cls = dir.path().join("ex5_cls.json");
    let back = dir.path().join("ex5_sps.json");
    let again = dir.path().join("ex5_cls2.json");
    assert_eq!(spcls(&["convert", s(&fixture("ex5.json")), "--to", "cls", "--output", s(&cls)]).status.code(), Some(0));
    assert_eq!(spcls(&["convert", s(&cls), "--to", "sps", "--output", s(&back)]).status.code(), Some(0));
    assert_eq!(spcls(&["convert", s(&back), "--to", "cls", "--output", s(&again)]).status.code(), Some(0));
    assert_eq!(std::fs::read(&cls).unwrap(), std::fs::read(&again).unwrap());
    assert_eq!(
        json(&cls)["closed"],
        serde_json::json!([[], ["r"], ["p", "q"], ["s", "t"], ["p", "q", "r"], ["p", "q", "r", "s", "t"]])
    );
    // G produces the closed sets themselves as property names
    assert_eq!(json(&back)["properties"][0], "{}");
    let same = spcls(&["convert", s(&cls), "--to", "cls"]);
    assert_eq!(same.stdout, std::fs::read(&cls).unwrap());
}

#[test]
fn render_emits_both_diagrams() {
    let out = spcls(&["render", s(&fixture("ex5.json"))]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text, std::fs::read_to_string(fixture("ex5_render.dot")).unwrap());
    for edge in ["\"0\" -> \"a\"", "\"0\" -> \"b\"", "\"0\" -> \"c\"", "\"a\" -> \"d\"", "\"b\" -> \"d\"", "\"d\" -> \"I\"", "\"c\" -> \"I\""] {
        assert!(text.contains(edge), "{edge}");
    }
    assert_eq!(text.matches(" -> ").count(), 14);
    assert!(text.contains("digraph closed_sets"));
}

#[test]
fn check_morphism_failures() {
    let dir = tempfile::tempdir().unwrap();
    let ex5 = fixture("ex5.json");
    let write = |name: &str, body: &str| {
        let p = dir.path().join(name);
        std::fs::write(&p, body).unwrap();
        p
    };
    let identity = write(
        "id.json",
        r#"{"m":{"p":"p","q":"q","r":"r","s":"s","t":"t"},"n":{"0":"0","a":"a","b":"b","c":"c","d":"d","I":"I"}}"#,
    );
    assert_eq!(spcls(&["check-morphism", s(&ex5), s(&ex5), s(&identity)]).status.code(), Some(0));
    let swapped = write(
        "swap.json",
        r#"{"m":{"p":"r","q":"q","r":"r","s":"s","t":"t"},"n":{"0":"0","a":"a","b":"b","c":"c","d":"d","I":"I"}}"#,
    );
    assert_eq!(spcls(&["check-morphism", s(&ex5), s(&ex5), s(&swapped)]).status.code(), Some(2));
    let unknown = write("unknown.json", r#"{"m":{"p":"zz"},"n":{}}"#);
    assert_eq!(spcls(&["check-morphism", s(&ex5), s(&ex5), s(&unknown)]).status.code(), Some(1));

    let cls = write("ex5_cls.json", &stdout(&spcls(&["convert", s(&ex5), "--to", "cls"])));
    assert_eq!(spcls(&["check-morphism", s(&ex5), s(&cls), s(&identity)]).status.code(), Some(1));
    let f_id = write("f.json", r#"{"f":{"p":"p","q":"q","r":"r","s":"s","t":"t"}}"#);
    assert_eq!(spcls(&["check-morphism", s(&cls), s(&cls), s(&f_id)]).status.code(), Some(0));
    let f_bad = write("fbad.json", r#"{"f":{"p":"r","q":"q","r":"r","s":"s","t":"t"}}"#);
    assert_eq!(spcls(&["check-morphism", s(&cls), s(&cls), s(&f_bad)]).status.code(), Some(2));
}

#[test]
fn selftest_small_run() {
    let out = spcls(&["--seed", "7", "selftest", "--count", "20", "--sequential"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("random suite (seed 7): 20 instances"));
}
