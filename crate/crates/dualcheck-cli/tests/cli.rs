//! The `dualcheck` binary: exit codes, report schema and reproducibility.

use std::path::PathBuf;
use std::process::Command;

use dualcheck::geom::demo::FIXTURE_IDS;
use jsonschema::JSONSchema;
use serde_json::Value;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn fixture(name: &str) -> String {
    root().join("fixtures").join(name).display().to_string()
}

/// Exit code and stdout.
fn run(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_dualcheck"))
        .args(args)
        .env("DUALCHECK_WORKERS", "2")
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
    )
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let (code, out) = run(&all);
    (
        code,
        serde_json::from_str(&out).unwrap_or_else(|e| panic!("{args:?}: {e}\n{out}")),
    )
}

fn schema() -> JSONSchema {
    let text = std::fs::read_to_string(root().join("schema/report.schema.json")).unwrap();
    JSONSchema::compile(&serde_json::from_str(&text).unwrap()).unwrap()
}

fn assert_valid(schema: &JSONSchema, report: &Value) {
    if let Err(errors) = schema.validate(report) {
        let msgs: Vec<String> = errors
            .map(|e| format!("{} at {}", e, e.instance_path))
            .collect();
        panic!("schema violations: {msgs:#?}");
    }
}

#[test]
fn pendulum_is_controllable_with_a_fourth_order_parametrization() {
    let (code, r) = json(&["test", &fixture("double_pendulum.sys")]);
    assert_eq!(code, 0);
    assert_eq!(r["verdict"], "torsion_free");
    assert_eq!(r["values"]["parametrization_order"], 4);
}

#[test]
fn equal_lengths_give_the_torsion_element() {
    let (code, r) = json(&["test", &fixture("double_pendulum.sys"), "--subst", "l1=l2"]);
    assert_eq!(code, 0);
    assert_eq!(r["verdict"], "has_torsion");
    let gens = r["values"]["torsion_generators"].as_array().unwrap();
    assert_eq!(gens.len(), 1);
    assert_eq!(gens[0]["generator"], "theta1 - theta2");
    assert_eq!(gens[0]["autonomous"], "d[1,1] + (g/l2)");
    assert_eq!(r["input"]["name"], "double_pendulum");
}

#[test]
fn three_dimensional_einstein_is_self_adjoint() {
    let (code, r) = json(&["selfadjoint", "--demo", "einstein3"]);
    assert_eq!(code, 0);
    assert_eq!(r["verdict"], "true");
    let (_, r) = json(&[
        "selfadjoint",
        "--demo",
        "einstein3",
        "--row-scale",
        "1,1,1,1,1,1",
    ]);
    assert_eq!(r["verdict"], "false");
}

#[test]
fn exit_codes() {
    // An autonomous element is a definite answer.
    assert_eq!(run(&["test", &fixture("example_1_7.sys")]).0, 0);
    assert_eq!(run(&["param", &fixture("example_1_7.sys")]).0, 0);
    // Bound reached.
    assert_eq!(
        run(&["test", &fixture("example_1_7.sys"), "--max-order", "1"]).0,
        2
    );
    // Errors.
    assert_eq!(run(&["test", "no/such/file.sys"]).0, 1);
    assert_eq!(run(&["frobnicate", &fixture("div.sys")]).0, 1);
    assert_eq!(run(&["demo", "nope"]).0, 1);
    assert_eq!(
        run(&["test", &fixture("example_1_2.sys"), "--subst", "a=1/(a-a)"]).0,
        1
    );
    assert_eq!(
        run(&["test", &fixture("example_1_2.sys"), "--subst", "b=1"]).0,
        1
    );
    let bad = std::env::temp_dir().join("dualcheck_bad.sys");
    std::fs::write(&bad, "system s() { indep x; dep y; eq e: d[1](z); }").unwrap();
    assert_eq!(run(&["adjoint", bad.to_str().unwrap()]).0, 1);
}

#[test]
fn parameter_dichotomy() {
    for (a, verdict) in [
        ("0", "has_torsion"),
        ("1", "has_torsion"),
        ("2", "torsion_free"),
        ("-1", "torsion_free"),
    ] {
        let (code, r) = json(&[
            "test",
            &fixture("example_1_2.sys"),
            "--subst",
            &format!("a={a}"),
        ]);
        assert_eq!(
            (code, r["verdict"].as_str().unwrap()),
            (0, verdict),
            "a = {a}"
        );
    }
}

#[test]
fn every_command_reports_against_the_schema() {
    let schema = schema();
    let cases: Vec<Vec<String>> = vec![
        vec!["adjoint".into(), fixture("coefficients.sys")],
        vec!["cc".into(), "--demo".into(), "example_1_6".into()],
        vec!["rank".into(), fixture("example_1_7.sys")],
        vec![
            "test".into(),
            fixture("kalman.sys"),
            "--seed".into(),
            "11".into(),
        ],
        vec!["test2".into(), fixture("div.sys")],
        vec![
            "param".into(),
            fixture("double_pendulum.sys"),
            "--seed".into(),
            "5".into(),
        ],
        vec!["selfadjoint".into(), "--demo".into(), "einstein3".into()],
        vec!["dims".into(), fixture("macaulay.sys")],
        vec![
            "pp".into(),
            "--demo".into(),
            "example_1_6".into(),
            "--project".into(),
            "5".into(),
        ],
        vec!["spencerize".into(), fixture("schwarzian.sys")],
        vec!["demo".into(), "macaulay".into()],
        vec![
            "test".into(),
            fixture("example_1_7.sys"),
            "--max-order".into(),
            "1".into(),
            "--timing".into(),
        ],
    ];
    for args in cases {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let (_, r) = json(&args);
        assert_valid(&schema, &r);
    }
}

#[test]
fn demo_values() {
    let (code, r) = json(&["spencerize", "--demo", "macaulay"]);
    assert_eq!(code, 0);
    assert_eq!(r["values"]["solution_dimension"], 8);
    assert_eq!(
        r["values"]["spencer_fibers"],
        serde_json::json!([8, 24, 24, 8])
    );
    assert_eq!(r["values"]["euler_characteristic"], 0);
    let (_, r) = json(&["pp", "--demo", "example_1_6", "--project", "5"]);
    assert_eq!(
        r["values"]["chain"],
        serde_json::json!([6, 4, 3, 2, 1, 0, 0])
    );
    let (_, r) = json(&["cc", "--demo", "example_1_6"]);
    assert_eq!(
        r["steps"][1]["operator"],
        serde_json::json!(["-d[2,2](e2) + d[1,2](e1) - e1"])
    );
    let (_, r) = json(&["demo", "schwarzian"]);
    assert_eq!(r["verdict"], "pass");
}

#[test]
fn reports_are_byte_identical() {
    for args in [
        vec!["test", "--demo", "example_1_7", "--format", "json"],
        vec!["test2", "--demo", "div", "--format", "json"],
        vec![
            "test",
            "--demo",
            "double_pendulum",
            "--seed",
            "9",
            "--format",
            "json",
        ],
        vec!["spencerize", "--demo", "schwarzian"],
    ] {
        assert_eq!(run(&args), run(&args), "{args:?}");
    }
}

#[test]
fn seeded_cross_check() {
    let (_, a) = json(&["test", &fixture("double_pendulum.sys"), "--seed", "42"]);
    assert_eq!(a["values"]["cross_check_composition"], true);
    assert!(a["values"]["cross_check_point"].is_string());
    let (_, b) = json(&["test", &fixture("double_pendulum.sys"), "--seed", "42"]);
    assert_eq!(a, b);
}

#[test]
fn demo_all_in_fixture_order() {
    let schema = schema();
    let (code, r) = json(&["demo", "--all"]);
    assert_valid(&schema, &r);
    let failing: Vec<&Value> = r["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["pass"] != true)
        .collect();
    assert!(failing.is_empty(), "{failing:#?}");
    assert_eq!(code, 0);
    let mut seen: Vec<String> = Vec::new();
    for c in r["checks"].as_array().unwrap() {
        let id = c["fixture"].as_str().unwrap().to_string();
        if seen.last() != Some(&id) {
            seen.push(id);
        }
    }
    let expected: Vec<String> = FIXTURE_IDS.iter().map(|s| s.to_string()).collect();
    assert_eq!(seen, expected);
    let serial = Command::new(env!("CARGO_BIN_EXE_dualcheck"))
        .args(["demo", "--all", "--format", "json"])
        .env("DUALCHECK_WORKERS", "1")
        .output()
        .unwrap();
    assert_eq!(serde_json::from_slice::<Value>(&serial.stdout).unwrap(), r);
}

#[test]
fn every_fixture_exits_by_contract() {
    for id in FIXTURE_IDS {
        let (code, r) = json(&["test", "--demo", id]);
        let expected = match r["verdict"].as_str().unwrap() {
            "torsion_free" | "has_torsion" => 0,
            _ => 2,
        };
        assert_eq!(code, expected, "{id}");
    }
}
