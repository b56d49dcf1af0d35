use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qshuffle")).args(args).output().expect("run the binary")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn apply_examples() {
    for (gen, to, want) in [
        ("F1", "x", "[2]_q * xy"),
        ("F0", "1", "x"),
        ("F0", "xyy", "xyxy + [3]_q * xyyx"),
        ("K0", "1", "q * 1"),
    ] {
        let o = run(&["apply", "--gen", gen, "--to", to]);
        assert!(o.status.success());
        let got = stdout(&o);
        let got: Vec<&str> = got.lines().collect();
        let parsed: qshuffle::freeword::FreeElement = got[0].parse().unwrap();
        assert_eq!(parsed, want.parse().unwrap(), "{gen} {to}");
    }
    assert_eq!(stdout(&run(&["apply", "--gen", "F1", "--to", "x"])), "[2]_q * xy\n");
}

#[test]
fn json_schema() {
    let o = run(&["verify", "series", "--max", "6", "--format", "json"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["command"], "verify");
    assert_eq!(v["params"]["suite"], "series");
    let results = v["results"].as_array().unwrap();
    assert!(!results.is_empty());
    for r in results {
        assert!(r["name"].is_string() && r["details"].is_string());
        assert!(["pass", "skip"].contains(&r["status"].as_str().unwrap()));
    }
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["dims", "--max", "13"]).status.code(), Some(2));
    assert_eq!(run(&["apply", "--gen", "E7", "--to", "x"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "presentation", "--row", "4"]).status.code(), Some(2));
}

#[test]
fn deterministic_text() {
    let a = run(&["verify", "appendix-d", "--max", "5"]);
    let b = run(&["verify", "appendix-d", "--max", "5"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn matrix_and_basis() {
    let o = run(&["matrix", "--gen", "K0", "--from", "4,3+3,4", "--to", "4,3+3,4", "--format", "json"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let diag: Vec<&str> = (0..5).map(|i| v["data"]["entries"][i][i].as_str().unwrap()).collect();
    assert_eq!(diag, ["q^-1", "q^-1", "q^-1", "q^3", "q^3"]);
    let o = run(&["basis", "--r", "1", "--s", "1", "--space", "bold-U"]);
    assert_eq!(stdout(&o), "1: xy\n");
    let o = run(&["dims", "--space", "bold-U", "--max", "4", "--method", "generation"]);
    assert!(stdout(&o).starts_with("1 0 0 0 0\n1 1 1 0 .\n"));
}

fn scratch_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qshuffle-cli-{name}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn corrupted_fixtures_fail() {
    let fixtures = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures");
    let c = std::fs::read_to_string(fixtures.join("basic_bases.txt")).unwrap();
    let d = std::fs::read_to_string(fixtures.join("generator_matrices.txt")).unwrap();

    let dir = scratch_dir("matrix");
    std::fs::write(dir.join("basic_bases.txt"), &c).unwrap();
    // F0 on 1 is x, not 2x.
    std::fs::write(dir.join("generator_matrices.txt"), d.replacen("F0 : 0,0 -> 1,0\n1\n", "F0 : 0,0 -> 1,0\n2\n", 1)).unwrap();
    let o = run(&["verify", "appendix-d", "--max", "3", "--fixtures", dir.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    assert!(stdout(&o).contains("[fail] F0: 0,0 -> 1,0"));

    let dir = scratch_dir("basis");
    std::fs::write(dir.join("basic_bases.txt"), c.replacen("1 1 | xy", "1 1 | yx", 1)).unwrap();
    std::fs::write(dir.join("generator_matrices.txt"), &d).unwrap();
    let o = run(&["verify", "appendix-c", "--max", "3", "--fixtures", dir.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));

    let o = run(&["verify", "appendix-c", "--fixtures", "/nonexistent/qshuffle"]);
    assert_eq!(o.status.code(), Some(2));
}
