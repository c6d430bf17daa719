use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn eccentric(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eccentric")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn gen(dir: &Path, kind: &str, size: usize, seed: u64) -> String {
    let prefix = dir.join(kind.replace(':', "_"));
    let size = size.to_string();
    let seed = seed.to_string();
    let out = eccentric(&["gen", "--kind", kind, "--size", &size, "--seed", &seed, "--output", path_str(&prefix)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    prefix.to_str().unwrap().to_string()
}

fn ecc_json(args: &[&str]) -> Value {
    let out = eccentric(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_str(&stdout(&out)).unwrap()
}

#[test]
fn path_of_five() {
    let dir = tempfile::tempdir().unwrap();
    let gr = dir.path().join("p5.gr");
    fs::write(&gr, "c P5\np tw 5 4\n1 2\n2 3\n3 4\n4 5\n").unwrap();
    let out = eccentric(&["ecc", "--graph", path_str(&gr), "--algo", "naive", "--omit-timings"]);
    assert_eq!(
        stdout(&out),
        "{\"diameter\":4,\"ecc\":[4,3,2,3,4],\"algo\":\"naive\",\"stats\":{\"regions\":0,\"boundary_sum\":0,\"profile_counts\":[]}}\n"
    );
}

#[test]
fn grid_division_equals_naive() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = gen(dir.path(), "grid", 10, 0);
    let gr = format!("{prefix}.gr");
    let fast = ecc_json(&["ecc", "--graph", &gr, "--algo", "division", "--r", "16"]);
    let slow = ecc_json(&["ecc", "--graph", &gr, "--algo", "naive"]);
    assert_eq!(fast["ecc"], slow["ecc"]);
    assert_eq!(fast["diameter"], 18);
    assert!(fast["stats"]["regions"].as_u64().unwrap() > 1);
}

#[test]
fn chain_with_decomposition() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = gen(dir.path(), "cliquesum_chain", 8, 3);
    let (gr, td) = (format!("{prefix}.gr"), format!("{prefix}.td"));
    let fast = ecc_json(&["ecc", "--graph", &gr, "--td", &td, "--threshold", "0"]);
    let slow = ecc_json(&["ecc", "--graph", &gr, "--algo", "naive"]);
    assert_eq!(fast["algo"], "cliquesum");
    assert_eq!(fast["ecc"], slow["ecc"]);
    let out = eccentric(&["verify", "--graph", &gr, "--td", &td]);
    assert!(stdout(&out).starts_with("MATCH"));
}

#[test]
fn auto_dispatch_with_apices() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = gen(dir.path(), "grid_plus_apices:2", 12, 1);
    let json = ecc_json(&["ecc", "--graph", &format!("{prefix}.gr"), "--apices", &format!("{prefix}.apices")]);
    assert_eq!(json["algo"], "apex");
    let out = eccentric(&["verify", "--graph", &format!("{prefix}.gr"), "--apices", &format!("{prefix}.apices")]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("MATCH algo=apex"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.gr");
    fs::write(&bad, "p tw 3 2\n1 2\n2 q\n").unwrap();
    assert_eq!(eccentric(&["ecc", "--graph", path_str(&bad)]).status.code(), Some(2));

    let split = dir.path().join("split.gr");
    fs::write(&split, "p tw 4 2\n1 2\n3 4\n").unwrap();
    assert_eq!(eccentric(&["ecc", "--graph", path_str(&split)]).status.code(), Some(4));

    let p4 = dir.path().join("p4.gr");
    fs::write(&p4, "p tw 4 3\n1 2\n2 3\n3 4\n").unwrap();
    let div = dir.path().join("broken.div");
    fs::write(&div, "c regions miss vertex 3\n1 2\n4\n").unwrap();
    let out = eccentric(&["verify", "--graph", path_str(&p4), "--division", path_str(&div)]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("validation failed"));

    assert_eq!(eccentric(&["ecc", "--graph", path_str(&p4), "--algo", "cliquesum"]).status.code(), Some(4));

    let missing = dir.path().join("nope.gr");
    assert_eq!(eccentric(&["ecc", "--graph", path_str(&missing)]).status.code(), Some(2));
}

#[test]
fn verify_refuses_large_graphs() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = gen(dir.path(), "path", 3001, 0);
    let out = eccentric(&["verify", "--graph", &format!("{prefix}.gr")]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));
}

#[test]
fn thread_count_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = gen(dir.path(), "random_planar_mesh", 20, 3);
    let gr = format!("{prefix}.gr");
    let one = eccentric(&["ecc", "--graph", &gr, "--threads", "1", "--omit-timings"]);
    let four = eccentric(&["ecc", "--graph", &gr, "--threads", "4", "--omit-timings"]);
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn validate_reports() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = gen(dir.path(), "star_glue", 10, 2);
    let out = eccentric(&["validate", "--graph", &format!("{prefix}.gr"), "--td", &format!("{prefix}.td"), "--k", "4"]);
    assert!(out.status.success());
    let json: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["td"]["torso_genus"], "UNCHECKED");
    let out = eccentric(&["validate", "--graph", &format!("{prefix}.gr"), "--td", &format!("{prefix}.td"), "--k", "1"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn gadget_profiles() {
    let out = eccentric(&["profiles", "--gadget", "3", "--ell", "8"]);
    let json: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["profiles"], 25);
    let out = eccentric(&["profiles", "--gadget", "2", "--ell", "4"]);
    let json: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["profiles"], 5);
}

#[test]
fn bench_csv() {
    let out = eccentric(&["bench", "--kind", "grid", "--sizes", "8,16,60", "--algo", "division,naive"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,algo,wall_ms,regions,boundary_sum"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    let ns: Vec<usize> = rows.iter().map(|r| r[0].parse().unwrap()).collect();
    assert!(ns.windows(2).all(|w| w[0] <= w[1]));
    // naive stops at the oracle cap
    assert!(rows.iter().all(|r| r[1] != "naive" || r[0].parse::<usize>().unwrap() <= 3000));
    assert_eq!(rows.len(), 5);
}
