use std::process::{Command, Output};

use serde_json::Value;
use stci_core::mpoly::SparsePoly;

fn stci(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stci"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn text(args: &[&str]) -> (String, i32) {
    let out = stci(args);
    (
        String::from_utf8(out.stdout).unwrap(),
        out.status.code().unwrap(),
    )
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut v = vec!["--json"];
    v.extend_from_slice(args);
    let out = stci(&v);
    let parsed = serde_json::from_slice(&out.stdout).expect("valid JSON");
    (parsed, out.status.code().unwrap())
}

#[test]
fn delta_examples() {
    let (out, code) = text(&["delta", "--gens", "3,4,6", "--m", "25"]);
    assert_eq!(code, 0);
    assert!(out.contains("delta(25) = 5"));
    assert!(out.contains("representation (1,1,3)"));

    let (out, code) = text(&["delta", "--gens", "2,3", "--m", "7"]);
    assert_eq!(code, 0);
    assert!(out.contains("delta(7) = 3"));
    assert!(out.contains("representation (2,1)"));

    let out = stci(&["delta", "--gens", "3,4,6", "--m", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not in the numerical semigroup"));

    let (v, code) = json(&["delta", "--gens", "3,4,6", "--m", "1"]);
    assert_eq!(code, 2);
    assert_eq!(v["exit_code"], 2);

    let (out, _) = text(&["delta", "--gens", "3,4,6", "--m", "12", "--all"]);
    // 6+6 has weight 2; 4+4+4 and 3+3+3+3 are heavier.
    assert!(out.contains("minimal representations (1): (0,0,2)"));
}

#[test]
fn glue_examples() {
    let (out, code) = text(&["glue", "--curve", "2,3,4,8"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().next(), Some("GLUES at i0=2, witness d=(1,1,0)"));

    let (out, code) = text(&["glue", "--curve", "2,4,7,8"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().next(), Some("NO GLUING (all splits fail)"));

    let out = stci(&["glue", "--curve", "1,2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("need at least 3 exponents"));
}

#[test]
fn extend_fstar() {
    let (out, code) = text(&["extend", "--base", "3,4,6", "--ell", "1", "--m", "25", "--shape", "xn"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains(
        "F* = x3^25 - 6*x0^2*x1*x2^2*x3^19*x4 + 15*x0^6*x2*x3^16*x4^2 - 20*x0^9*x1*x3^12*x4^3 \
         + 15*x0^12*x2^2*x3^7*x4^4 - 6*x0^15*x1*x2*x3^3*x4^5 + x0^19*x4^6"
    ));
    assert!(out.contains("EVIDENCE"));
}

#[test]
fn extend_condition_fails() {
    let (v, code) = json(&["extend", "--base", "3,4,6", "--ell", "1", "--m", "19", "--shape", "xn"]);
    assert_eq!(code, 3);
    let fstar = v["verdicts"]
        .as_array()
        .unwrap()
        .iter()
        .find(|x| x["subject"] == "F*")
        .unwrap();
    assert_eq!(fstar["verdict"], "ConditionFails");
}

#[test]
fn extend_bad() {
    let (v, code) = json(&["extend", "--base", "1,2,4", "--ell", "3", "--m", "4"]);
    assert_eq!(code, 0);
    assert_eq!(v["details"]["kind"], "bad");
    let f = v["equations"]
        .as_array()
        .unwrap()
        .iter()
        .find(|e| e["name"] == "F")
        .unwrap();
    let f = SparsePoly::parse(f["poly"].as_str().unwrap(), 5).unwrap();
    assert_eq!(f, SparsePoly::parse("x4^3 - x0^2*x3", 5).unwrap());
}

#[test]
fn extend_errors() {
    let (_, code) = text(&["extend", "--base", "3,4,6", "--ell", "5", "--m", "25"]);
    assert_eq!(code, 2);
    let (_, code) = text(&["extend", "--base", "3,4,6", "--ell", "1", "--m", "25", "--q", "4"]);
    assert_eq!(code, 2);
    // A rule set of the wrong shape was asked for explicitly.
    let (_, code) = text(&["extend", "--base", "2,3", "--ell", "1", "--m", "11", "--shape", "none"]);
    assert_eq!(code, 3);
    let out = stci(&["extend", "--base", "3,4,6"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn json_equations_round_trip() {
    let (v, _) = json(&["extend", "--base", "3,4,6", "--ell", "1", "--m", "31", "--shape", "xn", "--no-zero-set"]);
    let eqs = v["equations"].as_array().unwrap();
    assert_eq!(eqs.len(), 5);
    for e in eqs {
        let s = e["poly"].as_str().unwrap();
        let p = SparsePoly::parse(s, 5).unwrap();
        assert_eq!(p.to_string(), s);
        assert_eq!(e["vanishes"], true);
    }
    assert_eq!(v["oracle"]["eq1"], true);
    assert!(v["timing_ms"].is_u64());
    assert!(v["job"]["base"].is_array());
}

#[test]
fn text_and_json_agree() {
    let args = ["extend", "--base", "1,2,4", "--ell", "1", "--m", "12", "--q", "5,7"];
    let (t, c1) = text(&args);
    let (v, c2) = json(&args);
    assert_eq!(c1, c2);
    for verdict in v["verdicts"].as_array().unwrap() {
        let line = format!(
            "  {}: {}",
            verdict["subject"].as_str().unwrap(),
            verdict["verdict"].as_str().unwrap()
        );
        assert!(t.contains(&line), "{line} missing from text output");
    }
    for z in v["oracle"]["zero_set"].as_array().unwrap() {
        assert_eq!(z["label"], "EVIDENCE");
        assert!(z["extras"].as_array().unwrap().is_empty());
        assert!(z["missing"].as_array().unwrap().is_empty());
    }
}

#[test]
fn verify_toric() {
    let contains = "x1^2 - x0*x3; x2^3 - x0*x3^2; x3^6 - x0^2*x1*x2^2*x4; \
                    x2*x3^4 - x0^3*x1*x4; x1*x3^5 - x0^3*x2^2*x4; x1*x2*x3^3 - x0^4*x4";
    let (out, code) = text(&["verify", "--curve", "3,4,6,25", "--toric-bound", "7", "--contains", contains]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(out.matches("[PASS] toric contains").count(), 6);
}

#[test]
fn verify_failures_exit_4() {
    let (out, code) = text(&["verify", "--curve", "3,4,6", "--equations", "x1^2 - x0*x3; x3"]);
    assert_eq!(code, 4);
    assert!(out.contains("DOES NOT VANISH"));
    let (_, code) = text(&["verify", "--curve", "3,4,6,25", "--toric-bound", "3", "--contains", "x1*x2*x3^3 - x0^4*x4"]);
    assert_eq!(code, 4);
}

#[test]
fn verify_modes() {
    let (out, code) = text(&["verify", "--base", "1,2,4", "--ell", "1", "--m", "8", "--q", "5,7"]);
    assert_eq!(code, 0, "{out}");
    let out = stci(&["verify", "--curve", "1,2", "--base", "1,2"]);
    assert_eq!(out.status.code(), Some(2));
    let (_, code) = text(&["verify", "--curve", "1,2", "--toric-bound", "13"]);
    assert_eq!(code, 2);
}

#[test]
fn sweeps() {
    let (v, code) = json(&["sweep", "--family", "ex45", "--s", "3..10"]);
    assert_eq!(code, 0);
    let inst = v["details"]["instances"].as_array().unwrap();
    assert_eq!(inst.len(), 8);
    assert!(inst.iter().all(|i| i["ok"] == true && i["gluing"] == "no gluing"));

    let (v, code) = json(&["sweep", "--family", "ex56", "--ell", "1..3", "--s", "2..5"]);
    assert_eq!(code, 0);
    let inst = v["details"]["instances"].as_array().unwrap();
    // gcd(l, 4s) = 1 and s > l leave l = 1 (s = 2..5) and l = 3 (s = 4, 5).
    assert_eq!(inst.len(), 6);

    let (_, code) = text(&["sweep", "--family", "rational-normal", "--n", "2..4", "--ell", "1", "--s", "2..3", "--q", "5"]);
    assert_eq!(code, 0);
}

#[test]
fn sweep_collects_instance_errors() {
    // s = 2 fails the largeness gate; the batch still reports s = 3.
    let (v, code) = json(&["sweep", "--family", "ex45", "--s", "2..3"]);
    assert_eq!(code, 4);
    let inst = v["details"]["instances"].as_array().unwrap();
    assert_eq!(inst.len(), 2);
    assert_eq!(inst[0]["ok"], false);
    assert_eq!(inst[1]["ok"], true);
}
