use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use paraunitary::idempotents::{verify_set, IdempotentSet};
use paraunitary::Ring;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_paraunitary"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// A scratch file unique to this test process.
fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("paraunitary-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    fs::write(&path, contents).unwrap();
    path
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn verify_exit_codes() {
    let good = scratch("good.json", r#"{"rows":[["1+z","1-z"],["1-z","1+z"]],"scale":"1/2"}"#);
    let o = run(&["verify", path_str(&good), "--mode", "paraunitary"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "paraunitary: ok");

    let tampered = scratch("tampered.json", r#"{"rows":[["1+z","1-z"],["1-z","1+2*z"]],"scale":"1/2"}"#);
    let o = run(&["verify", path_str(&tampered), "--mode", "paraunitary"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("FAILED"));
    assert!(text.contains("residual (1,1) = (1/4)*z^-1 + (3/4) + (1/4)*z"), "{text}");

    let bad = scratch("bad.json", r#"{"rows":[["1+"]]}"#);
    let o = run(&["verify", path_str(&bad), "--mode", "paraunitary"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));

    let o = run(&["verify", "/nonexistent/matrix.json", "--mode", "paraunitary"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn cyclic_two_idempotents() {
    let o = run(&["idem", "group", "--family", "cyclic", "--order", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let expected = "e0 =\n[(1/2), (1/2)]\n[(1/2), (1/2)]\ne1 =\n[(1/2), -(1/2)]\n[-(1/2), (1/2)]\nidempotent set: ok\n";
    assert_eq!(stdout(&o), expected);
}

#[test]
fn symmetric_group_labels() {
    let o = run(&["idem", "group", "--family", "s3"]);
    assert_eq!(o.status.code(), Some(0));
    let labels: Vec<String> = stdout(&o)
        .lines()
        .filter_map(|l| l.strip_suffix(" =").map(str::to_string))
        .collect();
    assert_eq!(labels, ["e1", "e2", "e3"]);
}

#[test]
fn basis_with_groups() {
    let basis = scratch("basis.json", r#"{"rows":[["1","0","0"],["0","1","0"],["0","0","1"]]}"#);
    let o = run(&["idem", "basis", "--vectors", path_str(&basis), "--groups", "1/2,3"]);
    assert_eq!(o.status.code(), Some(0));
    let expected = "E1 =\n[1, 0, 0]\n[0, 0, 0]\n[0, 0, 0]\nE2 =\n[0, 0, 0]\n[0, 1, 0]\n[0, 0, 1]\nidempotent set: ok\n";
    assert_eq!(stdout(&o), expected);
}

#[test]
fn catalog_entries_pass() {
    for id in ["s3-idempotents", "f5-set", "pseudo"] {
        let o = run(&["catalog", "run", "--id", id]);
        assert_eq!(o.status.code(), Some(0), "{id}: {}", stdout(&o));
        assert!(stdout(&o).contains(&format!("PASS {id}")));
    }
    let o = run(&["catalog", "run", "--id", "no-such-entry"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn catalog_list_and_determinism() {
    let o = run(&["catalog", "list"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().count() >= 20);

    let a = run(&["catalog", "run", "--format", "json"]);
    let b = run(&["catalog", "run", "--format", "json"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));

    let d = run(&["catalog", "diff"]);
    assert_eq!(d.status.code(), Some(0));
}

#[test]
fn empty_pipeline_builds() {
    let p = scratch("empty.json", r#"{"ring":{"kind":"rational"},"steps":[]}"#);
    assert_eq!(run(&["build", path_str(&p)]).status.code(), Some(0));
}

#[test]
fn bundled_pipeline_builds() {
    let entry: serde_json::Value = serde_json::from_str(include_str!("../../core/catalog/pseudo.json")).unwrap();
    let p = scratch("pseudo.json", &entry["pipeline"].to_string());
    let o = run(&["build", path_str(&p)]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn random_set_round_trips_through_out() {
    let dir = std::env::temp_dir().join(format!("paraunitary-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let out = dir.join("f5.json");
    let o = run(&["idem", "random", "--n", "3", "--ring", "prime", "--prime", "5", "--seed", "11", "--out", path_str(&out)]);
    assert_eq!(o.status.code(), Some(0));

    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    let set = IdempotentSet::from_json(&v).unwrap();
    assert_eq!(set.ring(), &Ring::prime_field(5).unwrap());
    assert!(verify_set(&set).unwrap().passed);
    assert_eq!(IdempotentSet::from_json(&set.to_json()).unwrap(), set);

    let o = run(&["verify", path_str(&out), "--mode", "idemset"]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["rank", path_str(&out)]);
    assert_eq!(o.status.code(), Some(0));

    let again = dir.join("f5-again.json");
    run(&["idem", "random", "--n", "3", "--ring", "prime", "--prime", "5", "--seed", "11", "--out", path_str(&again)]);
    assert_eq!(fs::read(&out).unwrap(), fs::read(&again).unwrap());
}

#[test]
fn determinant_of_c2_sum() {
    let m = scratch("det.json", r#"{"rows":[["1+z","1-z"],["1-z","1+z"]],"scale":"1/2"}"#);
    let o = run(&["det", path_str(&m)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "z");
}

#[test]
fn catalog_entry_file_builds_and_checks_expectations() {
    let text = include_str!("../../core/catalog/c2-paraunitary.json");
    let p = scratch("entry.json", text);
    assert_eq!(run(&["build", path_str(&p)]).status.code(), Some(0));

    let tampered = scratch("entry-bad.json", &text.replace("\"poly\": \"z\"", "\"poly\": \"z^2\""));
    let o = run(&["build", path_str(&tampered)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("mismatch: "));
}

#[test]
fn hadamard_specialisation() {
    let m = scratch("had.json", r#"{"rows":[["1+z","1-z"],["1-z","1+z"]],"scale":"1/2"}"#);
    let o = run(&["--ring", "cyclotomic", "--conductor", "8", "specialize", path_str(&m), "--all", "E(4)"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("butson: 8"));
    let o = run(&["specialize", path_str(&m), "--all=-1"]);
    assert_eq!(o.status.code(), Some(1));
}
