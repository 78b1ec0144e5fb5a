use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn law(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_law"))
        .current_dir(dir)
        .env_remove("LAW_CONFIG")
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON document")
}

fn gallery(dir: &Path, name: &str) {
    let out = law(dir, &["gallery", name, "--out", "."]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn leibniz_on_ba_star() {
    let dir = tempfile::tempdir().unwrap();
    gallery(dir.path(), "ba-star");
    let out = law(dir.path(), &["leibniz", "-m", "ba-star-F.json"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["result"]["partition"], serde_json::json!([[0, 2], [1, 3]]));
    assert_eq!(r["result"]["reduced"], false);
    assert!(r["inputs"]["ba-star-F.json"].is_string());
    assert!(r.get("wall_time_ms").is_none());
    let g = report(&law(dir.path(), &["leibniz", "-m", "ba-star-G.json"]));
    assert_eq!(g["result"]["reduced"], true);
}

#[test]
fn truth_minimal_pair_logic() {
    let dir = tempfile::tempdir().unwrap();
    gallery(dir.path(), "two-valued-pair");
    let out = law(dir.path(), &["check", "truth_minimal", "-l", "two-valued-pair.json", "-i", "b2.json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["result"]["verdict"]["status"], "Holds");
    assert_eq!(String::from_utf8_lossy(&out.stderr).trim(), "Holds");
}

#[test]
fn protoalgebraic_assertional_is_unknown() {
    let dir = tempfile::tempdir().unwrap();
    gallery(dir.path(), "basic-assertional");
    let out = law(
        dir.path(),
        &["check", "protoalgebraic", "-l", "assertional.json", "--depth", "3", "-i", "pointed/"],
    );
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert_eq!(r["result"]["verdict"]["status"], "UnknownWithinBounds");
    assert_eq!(r["result"]["verdict"]["bounds"]["depth"], 3);
    assert!(r["result"]["witness"].is_null());
}

#[test]
fn fails_reports_recheck() {
    let dir = tempfile::tempdir().unwrap();
    gallery(dir.path(), "two-valued-pair");
    let out = law(
        dir.path(),
        &["--recheck", "check", "param_truth_equational", "-l", "two-valued-pair.json", "-i", "b2.json"],
    );
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert_eq!(r["result"]["verdict"]["witness"]["kind"], "filter_family");
    assert_eq!(r["result"]["recheck"], "passed");
}

#[test]
fn filters_suszko_and_oracle() {
    let dir = tempfile::tempdir().unwrap();
    gallery(dir.path(), "two-valued-pair");
    let r = report(&law(dir.path(), &["filters", "-l", "two-valued-pair.json", "-a", "b2.json"]));
    assert_eq!(r["result"]["filter_notion"], "exact");
    assert!(r["result"]["filters"].as_array().unwrap().contains(&serde_json::json!([0])));

    let out = law(dir.path(), &["suszko", "-l", "two-valued-pair.json", "-a", "b2.json", "--filter", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["result"]["partition"], serde_json::json!([[0], [1]]));

    let r = report(&law(dir.path(), &["oracle", "congruences", "-a", "b2.json"]));
    assert_eq!(r["result"]["count"], 2);
}

#[test]
fn reduce_and_product() {
    let dir = tempfile::tempdir().unwrap();
    gallery(dir.path(), "ba-star");
    let r = report(&law(dir.path(), &["reduce", "-m", "ba-star-F.json"]));
    assert_eq!(r["result"]["reduced_matrix"]["filter"], serde_json::json!([1]));
    let out = law(dir.path(), &["product", "-m", "ba-star-F.json", "-m", "ba-star-G.json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["result"]["matrix"]["algebra"]["size"], 16);
    let out = law(dir.path(), &["product", "-m", "ba-star-F.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn errors_exit_two_with_a_report() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.json"), "{ not json").unwrap();
    for args in [
        vec!["leibniz", "-m", "bad.json"],
        vec!["leibniz", "-m", "missing.json"],
        vec!["frobnicate"],
        vec!["gallery", "no-such-entry", "--out", "x"],
    ] {
        let out = law(dir.path(), &args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert_eq!(report(&out)["status"], "error");
    }
    gallery(dir.path(), "two-valued-pair");
    let out = law(dir.path(), &["check", "no_such_class", "-l", "two-valued-pair.json", "-i", "b2.json"]);
    assert_eq!(out.status.code(), Some(2));
    let out = law(dir.path(), &["suszko", "-l", "two-valued-pair.json", "-a", "b2.json", "--filter", "7"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_file_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    gallery(dir.path(), "ba-star");
    std::fs::write(dir.path().join("caps.json"), r#"{"product_max": 8}"#).unwrap();
    let out = law(dir.path(), &["--config", "caps.json", "product", "-m", "ba-star-F.json", "-m", "ba-star-G.json"]);
    assert_eq!(out.status.code(), Some(2));
    let out = law(
        dir.path(),
        &["--config", "caps.json", "--product-max", "16", "product", "-m", "ba-star-F.json", "-m", "ba-star-G.json"],
    );
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["caps"]["product_max"], 16);
    std::fs::write(dir.path().join("typo.json"), r#"{"product_mx": 8}"#).unwrap();
    let out = law(dir.path(), &["--config", "typo.json", "leibniz", "-m", "ba-star-F.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn timing_is_opt_in() {
    let dir = tempfile::tempdir().unwrap();
    gallery(dir.path(), "ba-star");
    let r = report(&law(dir.path(), &["--timing", "leibniz", "-m", "ba-star-F.json"]));
    assert!(r["wall_time_ms"].is_number());
}
