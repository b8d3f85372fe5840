//! The `quantal` binary: output and exit codes.

mod common;

use std::process::{Command, Output};

fn quantal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quantal"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn fixture(name: &str) -> String {
    common::fixture(name).display().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn counterexample_is_classification_negative() {
    let o = quantal(&["check", &fixture("qA")]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("✗ (R)"));
    assert!(text.contains("✓ (U)"));
    assert!(text.contains("υ({a}) = {a}"));
    assert!(!text.contains("‼"));
}

#[test]
fn etale_fixture_round_trips_cleanly() {
    let o = quantal(&["check", "--roundtrip", &fixture("pair2_discrete")]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("✓ G(O(G)) ≅ G"));
}

#[test]
fn every_fixture_meets_its_expectations() {
    let dir = common::fixture("");
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let o = quantal(&["check", "--roundtrip", path.to_str().unwrap()]);
        let code = o.status.code();
        assert!(code == Some(0) || code == Some(1), "{}: exit {code:?}\n{}", path.display(), stdout(&o));
        assert!(!stdout(&o).contains("‼"), "{}", path.display());
    }
}

#[test]
fn input_errors_exit_with_three() {
    let dir = std::env::temp_dir().join(format!("quantal-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let empty = dir.join("empty.toml");
    std::fs::write(&empty, "").unwrap();
    let bad = dir.join("bad.toml");
    std::fs::write(&bad, "kind = \"quantale\"\nmult = [[\"x\", \"y\", \"z\"]]\n[frame]\nelements = [\"0\"]\n").unwrap();
    for path in [empty.to_str().unwrap(), bad.to_str().unwrap(), "/nonexistent/file"] {
        let o = quantal(&["check", path]);
        assert_eq!(o.status.code(), Some(3), "{path}");
        assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"), "{path}");
    }
    let o = quantal(&["search", "powerset:2", "B∧∧O"]);
    assert_eq!(o.status.code(), Some(3));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn search_lists_witnesses() {
    let o = quantal(&["search", "powerset:2", "B&O&U&!R"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("involutive quantal frames up to isomorphism: 20"));
    assert!(text.contains("witnesses: 1"));
    let o = quantal(&["--json", "search", "powerset:2", "unital ∧ open ∧ ¬inverse"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["witnesses"].as_array().unwrap().len(), 0);
}

#[test]
fn convert_output_loads_back() {
    let dir = std::env::temp_dir().join(format!("quantal-convert-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("q.toml");
    let o = quantal(&["convert", &fixture("i2"), "--to", "quantale", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("16 elements"));
    let o = quantal(&["check", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("✓ inverse"));
    let o = quantal(&["convert", &fixture("qA"), "--to", "groupoid"]);
    assert_eq!(o.status.code(), Some(1));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn reports_are_reproducible() {
    let args = ["--json", "check", "--roundtrip", &fixture("sierpinski_pair")];
    let a = quantal(&args);
    let b = quantal(&args);
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["kind"], "groupoid");
}

#[test]
fn bisections_and_cover_commands_run() {
    let o = quantal(&["bisections", &fixture("sierpinski_pair")]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("weakly multiplicative"));
    let o = quantal(&["cover", &fixture("z2_group")]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("✓ cover functor iso"));
}
