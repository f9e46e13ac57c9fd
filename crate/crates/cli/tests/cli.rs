use std::path::Path;
use std::process::{Command, Output};

fn tessdom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tessdom")).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn help_and_version_succeed() {
    assert_eq!(code(&tessdom(&["--help"])), 0);
    assert_eq!(code(&tessdom(&["--version"])), 0);
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(code(&tessdom(&[])), 1);
    assert_eq!(code(&tessdom(&["solve", "--kind", "9.9.9", "--m", "2", "--n", "2"])), 1);
    assert_eq!(code(&tessdom(&["solve", "--kind", "6.6.6", "--m", "0", "--n", "2"])), 1);
    assert_eq!(code(&tessdom(&["solve"])), 1);
}

#[test]
fn tess_list_names_all_kinds() {
    let out = tessdom(&["tess", "list"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    for k in ["3.3.3.3.3.3", "4.4.4.4", "6.6.6", "3.12.12", "4.6.12", "3.3.3.3.6"] {
        assert!(text.contains(k), "{k}");
    }
    assert_eq!(code(&tessdom(&["tess", "show", "--kind", "3.4.6.4"])), 0);
}

#[test]
fn build_solve_check_render() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("g.json");
    let sel = dir.path().join("s.json");
    let svg = dir.path().join("s.svg");
    let out = tessdom(&["graph", "build", "--kind", "3.3.3.3.3.3", "--m", "4", "--n", "4", "--out", p(&graph)]);
    assert_eq!(code(&out), 0);
    let out = tessdom(&["solve", "--graph", p(&graph), "--deterministic", "--out", p(&sel)]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("cardinality: 18"), "{text}");
    assert!(text.contains("density: 9/16"));
    assert!(text.contains("status: optimal"));
    assert_eq!(code(&tessdom(&["check", "--graph", p(&graph), "--selection", p(&sel)])), 0);
    let out = tessdom(&["render", "--graph", p(&graph), "--selection", p(&sel), "--out", p(&svg)]);
    assert_eq!(code(&out), 0);
    let drawing = std::fs::read_to_string(&svg).unwrap();
    assert_eq!(drawing.matches("tile selected").count(), 18);
}

#[test]
fn infeasible_selection_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let sel = dir.path().join("s.json");
    let bad = r#"{"format":"tessdom-selection","version":1,
        "header":{"kind":"6.6.6","m":2,"n":2,"quotient":"torus","vertex_count":4},
        "selected":[0,1,2,3],"cardinality":4,"density":"1/1"}"#;
    std::fs::write(&sel, bad).unwrap();
    let out = tessdom(&["check", "--kind", "6.6.6", "--m", "2", "--n", "2", "--selection", p(&sel)]);
    assert_eq!(code(&out), 2, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn out_of_range_id_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let sel = dir.path().join("s.json");
    let bad = r#"{"format":"tessdom-selection","version":1,
        "header":{"kind":"6.6.6","m":2,"n":2,"quotient":"torus","vertex_count":4},
        "selected":[7],"cardinality":1,"density":"1/4"}"#;
    std::fs::write(&sel, bad).unwrap();
    let out = tessdom(&["check", "--kind", "6.6.6", "--m", "2", "--n", "2", "--selection", p(&sel)]);
    assert_eq!(code(&out), 1);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("selected[0]") && err.contains("out of range"), "{err}");
}

#[test]
fn bounds() {
    let out = tessdom(&["bound", "aggregate", "--kind", "3.4.6.4"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("19/30"));
    let out = tessdom(&["bound", "lp", "--kind", "6.6.6", "--m", "3", "--n", "3"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("2/3"));
    let out = tessdom(&["bound", "pinned", "--kind", "3.3.3.3.3.3", "--m", "2", "--n", "2", "--zero", "0"]);
    assert_eq!(code(&out), 0);
    let out = tessdom(&["bound", "pinned", "--kind", "6.6.6", "--m", "2", "--n", "2", "--zero-rows", "0,1"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn table_matches_and_writes_json() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("t.json");
    let out = tessdom(&["table", "--id", "t36_torus", "--max-n", "4", "--json", p(&json)]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(std::fs::read_to_string(&json).unwrap().contains("tessdom-table"));
}

#[test]
fn differing_table_exits_2() {
    let out = tessdom(&["table", "--id", "t3344_torus", "--max-n", "2"]);
    assert_eq!(code(&out), 2, "{}", stdout(&out));
}

#[test]
fn strict_budget_exits_3() {
    let out = tessdom(&[
        "solve", "--kind", "3.4.6.4", "--m", "4", "--n", "4", "--method", "bnb", "--time-limit", "0.05", "--strict",
    ]);
    assert_eq!(code(&out), 3, "{}", stdout(&out));
}
