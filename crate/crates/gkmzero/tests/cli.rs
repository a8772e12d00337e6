//! End-to-end tests of the command-line binary: exit codes, report
//! determinism, and the fixture catalog.

use std::io::Write;
use std::process::{Command, Output};

fn gkmzero(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gkmzero"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

#[test]
fn passing_fixture_exits_zero() {
    let out = gkmzero(&["series", "--fixture", "discriminant"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("[PASS]"), "table shows passing checks:\n{text}");
    assert!(!text.contains("[FAIL]"), "no failures expected:\n{text}");
}

#[test]
fn wrong_fixture_kind_exits_two() {
    // a moment-graph fixture handed to the section validator is a usage error
    let out = gkmzero(&["kostant", "--fixture", "p1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_fixture_exits_two() {
    let out = gkmzero(&["series", "--fixture", "no-such-fixture"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_subcommand_exits_two() {
    let out = gkmzero(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn failing_check_exits_one() {
    // a series fixture whose declared expansion is deliberately wrong
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad-series.json");
    let mut f = std::fs::File::create(&path).unwrap();
    write!(
        f,
        r#"{{
            "name": "bad-series",
            "kind": "series",
            "entries": [
                {{
                    "name": "wrong",
                    "numerator": "1",
                    "denominator": "1 - t",
                    "expected": [1, 1, 2]
                }}
            ],
            "expand_to": 2
        }}"#
    )
    .unwrap();
    drop(f);
    let out = gkmzero(&["series", "--fixture", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout_of(&out).contains("[FAIL]"));
}

#[test]
fn json_reports_are_deterministic() {
    let first = gkmzero(&["series", "--fixture", "discriminant", "--json"]);
    let second = gkmzero(&["series", "--fixture", "discriminant", "--json"]);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout, "JSON reports must be byte-identical");

    let catalog_a = gkmzero(&["fixtures", "--json"]);
    let catalog_b = gkmzero(&["fixtures", "--json"]);
    assert_eq!(catalog_a.stdout, catalog_b.stdout);
}

#[test]
fn catalog_lists_bundled_fixtures() {
    let out = gkmzero(&["fixtures", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let entries: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    let list = entries.as_array().expect("catalog is a JSON array");
    assert!(list.len() >= 8, "expected at least eight bundled fixtures, got {}", list.len());
    for entry in list {
        assert!(entry.get("name").is_some_and(|n| n.is_string()));
        assert!(entry.get("kind").is_some_and(|k| k.is_string()));
    }
}

#[test]
fn catalog_kind_filter() {
    let out = gkmzero(&["fixtures", "--kind", "gkm-graph", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let entries: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    let list = entries.as_array().unwrap();
    assert!(list.len() >= 3, "expected at least three moment-graph fixtures");
    assert!(list.iter().all(|e| e["kind"] == "gkm-graph"));

    // unknown kinds give an empty catalog, not an error
    let out = gkmzero(&["fixtures", "--kind", "nonsense", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let entries: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(entries.as_array().map(Vec::len), Some(0));
}

#[test]
fn long_running_fixture_skips_without_flag() {
    let out = gkmzero(&["zeroscheme", "--fixture", "gr24-torus"]);
    assert_eq!(out.status.code(), Some(0), "skipped checks must not fail the run");
    let text = stdout_of(&out);
    assert!(text.contains("[SKIP]"), "checks are reported as skipped:\n{text}");
    assert!(!text.contains("[PASS]"), "nothing should have run:\n{text}");
}

#[test]
fn check_filter_limits_the_run() {
    let out = gkmzero(&[
        "series",
        "--fixture",
        "discriminant",
        "--check",
        "expansion:zero-scheme-sections",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    let checks = report["checks"].as_array().unwrap();
    let status_of = |name: &str| {
        checks
            .iter()
            .find(|c| c["name"] == name)
            .map(|c| c["status"].as_str().unwrap().to_owned())
    };
    assert_eq!(status_of("expansion:zero-scheme-sections").as_deref(), Some("pass"));
    assert_eq!(status_of("expansion:equivariant-cohomology").as_deref(), Some("skipped"));
}

#[test]
fn all_subcommand_summarizes_the_catalog() {
    // run the whole catalog on the cheap side: a single fast fixture
    let out = gkmzero(&["all", "--fixture", "nilpotent-line"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("1 fixtures, 0 failed"), "summary line expected:\n{text}");
}
