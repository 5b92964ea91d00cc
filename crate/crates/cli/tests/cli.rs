use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn resonance(args: &[&str], store: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_resonance"));
    cmd.args(args).env_remove("STORE_PATH");
    if let Some(path) = store {
        cmd.env("STORE_PATH", path);
    }
    cmd.output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn ok(args: &[&str]) -> Value {
    let out = resonance(args, None);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    json_of(&out)
}

#[test]
fn documented_examples() {
    assert_eq!(ok(&["chi", "--S", "0,1", "--n", "3"]), json!({"coeffs": ["1", "-7", "15", "-9"]}));
    assert_eq!(
        ok(&["chambers", "--S", "0,1", "--n", "2", "--method", "both"]),
        json!({"count": 6, "agree": true})
    );
    assert_eq!(
        ok(&["fsgen", "--S", "0,1", "--i", "1", "--E", "4"]),
        json!({"bound": 2, "minimal": 2, "status": "generated"})
    );
    assert_eq!(
        ok(&["fit", "--S", "0,1", "--i", "1"]),
        json!({"J": 2, "c": {"1": ["-1"], "2": ["1"]}, "n0": 1, "heldOutVerified": true})
    );
}

#[test]
fn negative_coefficients_parse_as_values() {
    let both = ok(&["chi", "--S", "-1,0,1", "--n", "3", "--method", "both"]);
    let nbc = ok(&["chi", "--S", "-1,0,1", "--n", "3"]);
    assert_eq!(both, nbc);
    assert_eq!(ok(&["betti", "--S", "-1,1", "--n", "3", "--i", "1"]), json!({"i": 1, "betti": "4"}));
}

#[test]
fn graded_commands() {
    let d = ok(&["decompose", "--S", "0,1", "--n", "3", "--i", "1", "--parity", "cordovil"]);
    assert_eq!(d, json!({"multiplicities": {"2+1": 2, "3": 3}}));
    let c = ok(&["character", "--S", "0,1", "--n", "3", "--i", "1"]);
    assert_eq!(c["character"]["1+1+1"], json!("7"));
    let r = ok(&["rowbound", "--S", "-1,1", "--n", "4", "--i", "2"]);
    assert_eq!(r["holds"], json!(true));
    let p = ok(&["padded", "--S", "0,1", "--i", "1", "--partition", "1", "--n-min", "2", "--n-max", "5"]);
    assert_eq!(p["fit"], json!(["-1", "1"]));
    let t = ok(&["tensorlemma", "--m1", "2", "--m2", "2", "--E", "3"]);
    assert_eq!((t["verified"].clone(), t["maxImage"].clone()), (json!(true), json!(3)));
    let s = ok(&["fqseries", "--q", "2", "--i", "1", "--n", "4"]);
    assert_eq!(s["series"], json!(["0", "1", "3", "7", "15"]));
}

#[test]
fn csv_output() {
    let out = resonance(&["chi", "--S", "0,1", "--n", "2", "--format", "csv"], None);
    assert_eq!(String::from_utf8_lossy(&out.stdout), "key,value\ncoeffs,1;-3;2\n");
}

#[test]
fn exit_codes() {
    assert_eq!(resonance(&["chi", "--n", "3"], None).status.code(), Some(2));
    assert_eq!(resonance(&["chi", "--S", "x", "--n", "3"], None).status.code(), Some(2));
    assert_eq!(resonance(&["frobnicate"], None).status.code(), Some(2));
    let out = resonance(&["chi", "--S", "0", "--n", "3"], None);
    assert_eq!(out.status.code(), Some(1));
    assert!(json_of(&out)["error"].as_str().unwrap().contains("no hyperplanes"));
}

#[test]
fn store_is_idempotent_and_cross_checked() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("invariants.ndjson");
    let args = ["chi", "--S", "0,1", "--n", "3", "--method", "both"];
    for _ in 0..2 {
        assert_eq!(resonance(&args, Some(&path)).status.code(), Some(0));
    }
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0]["value"], lines[1]["value"]);
    assert_eq!(lines[0]["provenance"], json!("nbc"));
    assert_eq!(lines[1]["provenance"], json!("finite-field"));

    let chambers = ["chambers", "--S", "0,1", "--n", "3", "--method", "both"];
    assert_eq!(resonance(&chambers, Some(&path)).status.code(), Some(0));

    // a corrupted record for the same key surfaces both values
    let mut bad = lines[0].clone();
    bad["value"] = json!({"coeffs": ["1", "-7", "15", "-8"]});
    bad["provenance"] = json!("oracle");
    std::fs::write(&path, format!("{text}{bad}\n")).unwrap();
    let out = resonance(&args, Some(&path));
    assert_eq!(out.status.code(), Some(1));
    let err = json_of(&out)["error"].as_str().unwrap().to_string();
    assert!(err.contains("\"-9\"") && err.contains("\"-8\""), "{err}");
}

#[test]
fn verify_all_small_run_reports_every_criterion() {
    let out = resonance(&["verify-all", "--max-n", "1"], None);
    let reports = json_of(&out);
    let reports = reports.as_array().unwrap();
    assert_eq!(reports.len(), 10);
    let failed: Vec<u64> = reports
        .iter()
        .filter(|r| r["passed"] == json!(false))
        .map(|r| r["id"].as_u64().unwrap())
        .collect();
    // the threshold generating function has equal numerator and denominator degree
    assert_eq!(failed, vec![8]);
    assert_eq!(out.status.code(), Some(1));
    let table = String::from_utf8_lossy(&out.stderr);
    assert_eq!(table.lines().filter(|l| l.starts_with("criterion")).count(), 10);
}
