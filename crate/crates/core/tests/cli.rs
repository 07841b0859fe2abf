//! Drives the `cdg-factor` binary end to end.

use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::{json, Value};
use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_cdg-factor"))
        .args(args)
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json_of(r: &Run) -> Value {
    serde_json::from_str(&r.stdout).unwrap_or_else(|e| panic!("{e}: {}", r.stdout))
}

/// Every `{degree, invariants}` entry of the named check. Factorization
/// reports keep their per-degree tables under `degrees`.
fn entries<'a>(doc: &'a Value, check: &str) -> &'a Vec<Value> {
    let report = &doc["report"];
    let list = report
        .get("checks")
        .or_else(|| report.get("degrees"))
        .unwrap();
    list.as_array()
        .unwrap()
        .iter()
        .find(|c| c["check"] == check)
        .unwrap_or_else(|| panic!("no check {check}"))["entries"]
        .as_array()
        .unwrap()
}

fn term(coeff: &str, mono: &[(&str, u32)]) -> Value {
    json!({"coeff": coeff, "monomial": mono.iter().map(|(v, e)| json!([v, e])).collect::<Vec<_>>()})
}

/// `B = C_even(-2)` with members `x1..x6`, written out by hand.
fn divided_power_ring() -> Value {
    let mut vars = Vec::new();
    let mut d = serde_json::Map::new();
    for i in 1..=6 {
        vars.push(json!({"name": format!("x{i}"), "degree": -2 * i}));
        let image = if i == 1 {
            vec![term("1", &[("y", 1)])]
        } else {
            vec![term("1", &[(&format!("x{}", i - 1), 1), ("y", 1)])]
        };
        d.insert(format!("x{i}"), json!(image));
    }
    vars.push(json!({"name": "y", "degree": -1}));
    json!({
        "coefficients": "Z",
        "variables": vars,
        "differential": d,
        "rewrite": {"name": "x", "members": ["x1", "x2", "x3", "x4", "x5", "x6"], "companion": "y"}
    })
}

fn scenario(pd: Value) -> String {
    json!({
        "A": {"coefficients": "Z"},
        "B": divided_power_ring(),
        "f": {"images": {}},
        "pd": pd,
        "window": -12
    })
    .to_string()
}

#[test]
fn demos_exit_codes() {
    assert_eq!(run(&["demo", "lemma100", "-3", "--window", "-8"]).code, 0);
    assert_eq!(run(&["demo", "lemma101", "-2", "--window", "-12"]).code, 0);
    assert_eq!(run(&["demo", "counterexample"]).code, 0);
    assert_eq!(
        run(&["demo", "factorization", "-2", "--window", "-12"]).code,
        0
    );
    let bad = run(&["demo", "lemma100", "-2"]);
    assert_eq!(bad.code, 2);
    assert!(bad.stderr.starts_with("error:"), "{}", bad.stderr);
    assert_eq!(run(&["demo", "lemma101", "-3"]).code, 2);
}

#[test]
fn output_is_deterministic() {
    let a = run(&["demo", "factorization", "-2", "--window", "-10"]);
    let b = run(&["demo", "factorization", "-2", "--window", "-10"]);
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
    let t1 = run(&["demo", "lemma101", "-4", "--format", "text"]);
    let t2 = run(&["demo", "lemma101", "-4", "--format", "text"]);
    assert_eq!(t1.stdout, t2.stdout);
}

#[test]
fn counterexample_reports_witness() {
    let r = run(&["demo", "counterexample", "--format", "text"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("x^2"), "{}", r.stdout);
}

#[test]
fn trivial_factorization() {
    let dir = TempDir::new().unwrap();
    let body = json!({
        "A": {"coefficients": "Z"},
        "B": {"coefficients": "Z"},
        "f": {"images": {}},
        "pd": {"kind": "dp-canonical"}
    });
    let p = write(&dir, "trivial.json", &body.to_string());
    let r = run(&["factorize", s(&p), "--window", "-6"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let doc = json_of(&r);
    assert_eq!(doc["report"]["passed"], true);
    assert_eq!(doc["rings"]["B_tilde"]["variables"], json!([]));
}

#[test]
fn acceptance_scenario_file() {
    let dir = TempDir::new().unwrap();
    let p = write(
        &dir,
        "scenario.json",
        &scenario(json!({"kind": "dp-canonical"})),
    );
    let out = dir.path().join("result.json");
    let r = run(&["factorize", s(&p), "--out", s(&out)]);
    assert_eq!(r.code, 0, "{}\n{}", r.stdout, r.stderr);
    let doc = json_of(&r);
    assert_eq!(doc["report"]["passed"], true);
    let saved: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(saved, doc);
    let surj = entries(&doc, "f̃ surjective");
    let degrees: Vec<i64> = surj.iter().map(|e| e["degree"].as_i64().unwrap()).collect();
    assert_eq!(degrees, (-11..=0).collect::<Vec<_>>());
    assert!(surj.iter().all(|e| e["verdict"] == "pass"));

    // The factorization bundle feeds straight back into verify-hom.
    let v = run(&[
        "verify-hom",
        s(&out),
        "--name",
        "f_tilde",
        "--window",
        "-12",
    ]);
    assert_eq!(v.code, 0, "{}\n{}", v.stdout, v.stderr);
}

#[test]
fn pd1_violating_table_exits_one() {
    let dir = TempDir::new().unwrap();
    let mut table = serde_json::Map::new();
    for k in 2..=6 {
        let c = if k == 2 { "2" } else { "1" };
        table.insert(k.to_string(), json!([term(c, &[(&format!("x{k}"), 1)])]));
    }
    let pd = json!({"kind": "table", "table": {"x1": table}});
    let p = write(&dir, "bad_pd.json", &scenario(pd));
    let r = run(&["factorize", s(&p)]);
    assert_eq!(r.code, 1, "{}\n{}", r.stdout, r.stderr);
    assert!(r.stderr.contains("r(1,1)"), "{}", r.stderr);
}

#[test]
fn truncated_table_exits_two() {
    let dir = TempDir::new().unwrap();
    let pd = json!({"kind": "table", "table": {"x1": {}}});
    let p = write(&dir, "short_pd.json", &scenario(pd));
    assert_eq!(run(&["factorize", s(&p)]).code, 2);
}

#[test]
fn malformed_input_exits_two() {
    let dir = TempDir::new().unwrap();
    let p = write(
        &dir,
        "broken.json",
        "{\n  \"A\": {\"coefficients\": \"Z\"},\n  \"B\": [\n",
    );
    let r = run(&["factorize", s(&p)]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("line"), "{}", r.stderr);
    let missing = run(&["cohomology", s(&dir.path().join("absent.json"))]);
    assert_eq!(missing.code, 2);
}

#[test]
fn cohomology_and_verify_hom_on_demo_bundle() {
    let dir = TempDir::new().unwrap();
    let bundle = dir.path().join("lemma100.json");
    assert_eq!(
        run(&[
            "demo",
            "lemma100",
            "-3",
            "--window",
            "-8",
            "--out",
            s(&bundle)
        ])
        .code,
        0
    );

    let r = run(&["cohomology", s(&bundle), "--name", "C", "--window", "-8"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let doc = json_of(&r);
    for e in entries(&doc, "cohomology") {
        let deg = e["degree"].as_i64().unwrap();
        let rank = if deg == -1 { "rank=0" } else { "rank=1" };
        let h = if deg == 0 { "H=Z" } else { "H=0" };
        assert_eq!(e["invariants"], json!([rank, h]), "degree {deg}");
    }

    let v = run(&["verify-hom", s(&bundle), "--name", "p", "--window", "-8"]);
    assert_eq!(v.code, 0, "{}", v.stderr);
    assert_eq!(json_of(&v)["report"]["passed"], true);
}

#[test]
fn verify_ring_flags_planted_defect() {
    let dir = TempDir::new().unwrap();
    let ring = json!({
        "coefficients": "Z",
        "variables": [{"name": "x", "degree": -5}, {"name": "y", "degree": -4}, {"name": "z", "degree": -3}],
        "differential": {"x": [term("1", &[("y", 1)])], "y": [term("1", &[("z", 1)])]}
    });
    let p = write(&dir, "bad.json", &ring.to_string());
    let r = run(&["verify-ring", s(&p), "--format", "text"]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.contains("FAIL"), "{}", r.stdout);
}

#[test]
fn verify_hom_flags_non_dg_map() {
    let dir = TempDir::new().unwrap();
    let c = json!({
        "coefficients": "Z",
        "variables": [{"name": "x", "degree": -3}, {"name": "y", "degree": -2}],
        "differential": {"x": [term("1", &[("y", 1)])]}
    });
    let hom = json!({"source": c, "target": c, "images": {"x": [], "y": [term("1", &[("y", 1)])]}});
    let p = write(&dir, "hom.json", &hom.to_string());
    assert_eq!(run(&["verify-hom", s(&p)]).code, 1);
}

#[test]
fn pd_check_char0_over_q() {
    let dir = TempDir::new().unwrap();
    let doc = json!({
        "ring": {
            "coefficients": "Q",
            "variables": [{"name": "a", "degree": -2}, {"name": "u", "degree": -1}],
            "differential": {"a": [term("1", &[("u", 1)])]}
        },
        "pd": {"kind": "char0"},
        "elements": [[term("1", &[("a", 1)])], [term("1/3", &[("a", 2)])]]
    });
    let p = write(&dir, "pd.json", &doc.to_string());
    let r = run(&["pd-check", s(&p), "--k-max", "4", "--l-max", "4"]);
    assert_eq!(r.code, 0, "{}\n{}", r.stdout, r.stderr);
    assert_eq!(json_of(&r)["report"]["passed"], true);
}

#[test]
fn bad_window_flag_exits_two() {
    assert_eq!(run(&["demo", "lemma100", "--window", "-1"]).code, 2);
    assert_eq!(run(&["demo", "lemma100", "-1", "--cap", "0"]).code, 2);
}
