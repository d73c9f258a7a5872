//! Black-box tests of the command-line interface: published example outputs,
//! exit codes, JSON round trips, and thread-count independence.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_skewrank"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().expect("exit code")
}

fn tmp_path(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("skewrank-test-{}-{name}", std::process::id()))
}

#[test]
fn info_reports_published_group_data() {
    let v = json(&["--group", "sym", "--n", "4", "info", "--format", "json"]);
    assert_eq!(v["order"], 24);
    assert_eq!(v["degrees"], serde_json::json!([1, 2, 3, 4]));
    assert!(v["regularNumbers"].as_array().unwrap().contains(&serde_json::json!(4)));

    let v = json(&[
        "--group", "imprimitive", "--d", "2", "--e", "2", "--n", "3", "info", "--format", "json",
    ]);
    assert_eq!(v["order"], 192);
    assert_eq!(v["degrees"], serde_json::json!([4, 6, 8]));
    assert!(!v["regularNumbers"].as_array().unwrap().contains(&serde_json::json!(8)));

    let v = json(&["--group", "dihedral", "--m", "5", "info", "--format", "json"]);
    assert_eq!(v["order"], 10);
    assert_eq!(v["degrees"], serde_json::json!([2, 5]));
}

#[test]
fn decompose_matches_published_term_counts() {
    let v = json(&["--group", "sym", "--n", "4", "decompose", "--format", "json"]);
    assert_eq!(v["terms"].as_array().unwrap().len(), 6);
    assert_eq!(v["verification"]["exact"], true);
    assert_eq!(v["certified"], true);

    let v = json(&["--group", "demihyper", "--n", "3", "decompose", "--format", "json"]);
    assert_eq!(v["terms"].as_array().unwrap().len(), 6);

    let v = json(&[
        "--group", "cyclicprod", "--a", "2,2,2", "decompose", "--format", "json",
    ]);
    assert_eq!(v["terms"].as_array().unwrap().len(), 9);
    assert_eq!(v["D"], 6);
    assert_eq!(v["regularNumber"], 3);
}

#[test]
fn apolar_reports_published_values() {
    let v = json(&["--group", "sym", "--n", "3", "apolar", "--format", "json"]);
    assert_eq!(v["hilbert"], serde_json::json!([1, 2, 2, 1]));
    assert_eq!(v["dimAf"], 6);
    assert_eq!(v["generatorDegrees"], serde_json::json!([1, 2, 3]));
    assert_eq!(v["rsLowerBound"], 2);
    assert_eq!(v["steinberg"], true);

    let v = json(&["--form", "x^5 - y^5", "apolar", "--sylvester", "--format", "json"]);
    assert_eq!(v["sylvesterRank"], 2);

    let v = json(&["--group", "hyper", "--n", "2", "apolar", "--format", "json"]);
    assert_eq!(v["dimAf"], 8);
    assert_eq!(v["rsLowerBound"], 2);
    assert_eq!(v["upperBound"], 2);
    assert_eq!(v["certified"], true);
}

#[test]
fn verify_round_trips_decomposition_files() {
    let path = tmp_path("b2.json");
    let out = run(&["--group", "hyper", "--n", "2", "decompose", "--format", "json"]);
    assert!(out.status.success());
    std::fs::write(&path, &out.stdout).unwrap();

    let ok = run(&[
        "--group",
        "hyper",
        "--n",
        "2",
        "verify",
        path.to_str().unwrap(),
    ]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).starts_with("exact"));

    // against an unrelated form the same file must fail with the
    // verification exit code
    let bad = run(&["--form", "x^4 + y^4", "verify", path.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(5));
    std::fs::remove_file(&path).ok();
}

#[test]
fn emitted_decomposition_json_reparses_identically() {
    let out = run(&["--group", "sym", "--n", "3", "decompose", "--format", "json"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let dto: skewrank::io::DecompositionDto = serde_json::from_str(&text).unwrap();
    assert_eq!(skewrank::io::to_json_string(&dto).unwrap(), text);
}

#[test]
fn custom_group_config_loads() {
    let path = tmp_path("custom.json");
    let config = r#"{
        "nvars": 2,
        "fieldOrder": 2,
        "generators": [
            [
                {"order": 1, "terms": []},
                {"order": 1, "terms": [[0, 1]]},
                {"order": 1, "terms": [[0, 1]]},
                {"order": 1, "terms": []}
            ],
            [
                {"order": 1, "terms": [[0, -1]]},
                {"order": 1, "terms": []},
                {"order": 1, "terms": []},
                {"order": 1, "terms": [[0, 1]]}
            ]
        ]
    }"#;
    std::fs::write(&path, config).unwrap();
    let v = json(&["--config", path.to_str().unwrap(), "info", "--format", "json"]);
    assert_eq!(v["order"], 8);
    assert_eq!(v["degrees"], serde_json::json!([2, 4]));
    std::fs::remove_file(&path).ok();
}

#[test]
fn exit_codes_are_stable() {
    // invalid spec
    assert_eq!(code(&["--group", "sym", "info"]), 2);
    assert_eq!(code(&["--group", "custom", "info"]), 2);
    assert_eq!(code(&["info"]), 2);
    // element cap
    assert_eq!(code(&["--group", "sym", "--n", "4", "--cap", "10", "info"]), 3);
    // non-regular eigenvalue order
    assert_eq!(
        code(&["--group", "hyper", "--n", "2", "decompose", "--regular-number", "3"]),
        4
    );
    // size budget
    assert_eq!(code(&["--group", "sym", "--n", "6", "apolar"]), 6);
}

#[test]
fn cap_env_var_is_honored() {
    let out = bin()
        .args(["--group", "sym", "--n", "4", "info"])
        .env("SKEWRANK_CAP", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    // an explicit flag wins over the environment
    let out = bin()
        .args(["--group", "sym", "--n", "4", "--cap", "100", "info"])
        .env("SKEWRANK_CAP", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn selftest_filter_and_exit() {
    let v = json(&["selftest", "--only", "sylvester", "--format", "json"]);
    let items = v["items"].as_array().unwrap();
    assert_eq!(items.len(), 1);
    assert_eq!(items[0]["name"], "sylvester");
    assert_eq!(items[0]["pass"], true);
    assert_eq!(v["failed"], 0);
}

#[test]
fn decompose_json_is_thread_count_independent() {
    let args = ["--group", "hyper", "--n", "3", "decompose", "--format", "json"];
    let one = bin().args(args).args(["--threads", "1"]).output().unwrap();
    let eight = bin().args(args).args(["--threads", "8"]).output().unwrap();
    assert!(one.status.success() && eight.status.success());
    assert_eq!(one.stdout, eight.stdout);
}
