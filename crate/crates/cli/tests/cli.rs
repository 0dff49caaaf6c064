use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn zeckauto(store: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zeckauto"))
        .arg("--store")
        .arg(store)
        .args(args)
        .current_dir(root())
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn array_tsv_matches_published_tables() {
    let dir = TempDir::new().unwrap();
    for name in ["wythoff", "stolarsky", "dual", "efc"] {
        let o = zeckauto(dir.path(), &["array", name, "--rows", "10", "--cols", "10", "--tsv"]);
        assert!(o.status.success());
        let expected = std::fs::read_to_string(root().join(format!("data/tables/{name}.tsv"))).unwrap();
        assert_eq!(stdout(&o), expected, "{name}");
    }
    let o = zeckauto(dir.path(), &["array", "stolarsky", "--rows", "8", "--cols", "10"]);
    assert!(stdout(&o).lines().nth(9).unwrap().trim_end().ends_with("1508"));
}

#[test]
fn arrays_script_runs_after_guessing_columns() {
    let dir = TempDir::new().unwrap();
    for (file, name) in
        [("wythoff", "w1"), ("stolarsky", "s1"), ("dual", "d1"), ("efc", "efc1"), ("esc", "esc1"), ("k100", "k100")]
    {
        let samples = format!("data/samples/{file}.txt");
        let o = zeckauto(dir.path(), &["guess", "--samples", &samples, "--name", name]);
        assert!(o.status.success(), "{name}");
    }
    let o = zeckauto(dir.path(), &["run", "scripts/arrays.walnut"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    for line in ["lem4: TRUE", "fab: TRUE", "stol_conjecture: TRUE", "checkeq: TRUE", "col3: TRUE"] {
        assert!(out.lines().any(|l| l == line), "missing `{line}`");
    }
    assert!(!out.contains("FALSE"));
    assert!(dir.path().join("w3.aut").exists());

    // the store is reloaded on the next run; identical definitions are fine
    let o = zeckauto(dir.path(), &["run", "scripts/arrays.walnut"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn guessing_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let a = zeckauto(dir.path(), &["guess", "--samples", "data/samples/wythoff.txt"]);
    let b = zeckauto(dir.path(), &["guess", "--samples", "data/samples/wythoff.txt"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).starts_with("tracks 2\n"));
}

#[test]
fn prove_stores_columns() {
    let dir = TempDir::new().unwrap();
    let o = zeckauto(dir.path(), &["prove", "dual"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("dual PASS fully-verified"));
    assert!(out.contains("dual.theorem.checkb PASS TRUE"));
    assert!(out.contains("dual.oracle PASS"));
    let dot = zeckauto(dir.path(), &["export-dot", "d2"]);
    assert!(stdout(&dot).starts_with("digraph \"d2\""));
    let base = zeckauto(dir.path(), &["export-dot", "phin"]);
    assert!(base.status.success());
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let script = |name: &str, body: &str| {
        let p = dir.path().join(name);
        std::fs::write(&p, body).unwrap();
        p.to_string_lossy().into_owned()
    };
    let false_eval = script("f.txt", "eval no \"?msd_fib An n>=1 => n>=2\":\neval yes \"An n>=0\":\n");
    let o = zeckauto(dir.path(), &["run", &false_eval]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "no: FALSE\nyes: TRUE\n");

    let bad = script("b.txt", "def x \"?msd_fib n=\":");
    let o = zeckauto(dir.path(), &["run", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("1:19: expected a term"));

    let o = zeckauto(dir.path(), &["run", &script("c.txt", "def odd \"Ek n=2*k+1\":\ndef odd \"n=n\":\n")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("`odd` is already defined"));

    assert_eq!(zeckauto(dir.path(), &["array", "nope"]).status.code(), Some(2));
    assert_eq!(zeckauto(dir.path(), &["frobnicate"]).status.code(), Some(2));
    assert_eq!(zeckauto(dir.path(), &["export-dot", "missing"]).status.code(), Some(2));
}

#[test]
fn limit_caps_certification() {
    let dir = TempDir::new().unwrap();
    let o = zeckauto(dir.path(), &["--limit", "500", "prove", "wythoff"]);
    assert_eq!(o.status.code(), Some(0));
}
